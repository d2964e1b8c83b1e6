//! The Kubota-Leopoldt p-adic L-function L_p(phi omega_p, s) as a jet in s,
//! the associated Iwasawa power series zeta_phi(X), and the simple-zero
//! certificate at the trivial zero.
//!
//! L_p is characterised by interpolation at s = 1-k (k = 1 mod p-1); it is
//! computed here by the classical convergent series
//!
//!   L_p(s) = 1/(F (s-1)) * sum_{a=1, p∤a}^{F} theta(a) <a>^(1-s)
//!                          * sum_{j>=0} C(1-s, j) B_j (F/a)^j
//!
//! with theta = phi * omega_p, F = Np, <a> = a/omega_p(a) and B_j the
//! ordinary Bernoulli numbers. All s-dependence is carried generically in a
//! [`PadicAlgebra`], so the same code evaluates at scalar points (the
//! interpolation oracle) and on jets (derivatives at the trivial zero). The
//! j-th term has valuation at least j - 1 - ord_p(j!), so the sum is
//! truncated once that bound clears the working precision, with the tail
//! recorded as an explicit error term.

use num_bigint::BigInt;

use crate::bernoulli::bernoulli_numbers;
use crate::chars::CharEmbedding;
use crate::error::{Error, Result};
use crate::padic::Padic;
use crate::series::{exp_nilpotent, log_one_plus_x, PadicAlgebra, TruncatedSeries};
use crate::PadicSeries;

/// First j with j - 1 - ord_p(j!) >= target (the bound is nondecreasing
/// from there on).
fn j_cutoff(p: u64, target: i64) -> u64 {
    let mut j = 1u64;
    loop {
        let mut ord_fact = 0i64;
        let mut q = p;
        while q <= j {
            ord_fact += (j / q) as i64;
            match q.checked_mul(p) {
                Some(next) => q = next,
                None => break,
            }
        }
        if j as i64 - 1 - ord_fact >= target {
            return j;
        }
        j += 1;
    }
}

fn check_odd_embedded(emb: &CharEmbedding) -> Result<()> {
    if !emb.character().is_odd() {
        return Err(Error::Precondition(
            "the Kubota-Leopoldt setup here needs an odd character".into(),
        ));
    }
    Ok(())
}

/// Evaluate L_p(phi omega_p, -) at `s`, which may be a scalar in Z_p or a
/// jet around s = 0.
pub fn lp_general<C: PadicAlgebra>(emb: &CharEmbedding, s: &C) -> Result<C> {
    check_odd_embedded(emb)?;
    let p = emb.prime();
    let prec = emb.precision();
    let n = emb.character().modulus();
    let f = n * p;
    let target = prec as i64;

    let jmax = j_cutoff(p, target);
    let bern = bernoulli_numbers(jmax);
    let bern_p: Vec<Padic> = bern
        .iter()
        .map(|b| Padic::from_ratio(b.numer(), b.denom(), p, prec).expect("nonzero denominator"))
        .collect();

    let one = s.one_like();
    let mut acc = s.zero_like();
    for a in 1..=f {
        if a % p == 0 {
            continue;
        }
        let chi_a = emb.eval(a as i64);
        if chi_a.is_zero_at_precision() {
            continue;
        }
        let a_p = Padic::from_i64(a as i64, p, prec);
        let omega_a = a_p.teichmuller()?;
        let theta_a = chi_a * omega_a.clone();
        let principal = a_p.div(&omega_a)?;

        // <a>^(1-s) = <a> * exp(-s log <a>)
        let log_a = a_p.iwasawa_log()?;
        let z = -(s.clone() * s.embed_padic(&log_a));
        let pow = exp_nilpotent(&z, target)? * s.embed_padic(&principal);

        // inner sum over j with the binomial recurrence
        // C(1-s, j+1) = C(1-s, j) * (1 - j - s) / (j + 1)
        let f_over_a = Padic::from_ratio_i64(f as i64, a as i64, p, prec)?;
        let mut binom = s.one_like();
        let mut fa_pow = Padic::one(p, prec);
        let mut inner = s.zero_like();
        for j in 0..=jmax {
            if j > 0 {
                binom = binom * (s.from_i64_like(1 - (j as i64 - 1)) - s.clone());
                binom = binom.div_i64(j as i64);
                fa_pow = fa_pow * f_over_a.clone();
            }
            let scalar = bern_p[j as usize].clone() * fa_pow.clone();
            inner = inner + binom.clone() * s.embed_padic(&scalar);
        }
        inner = inner.widen_error(target);

        acc = acc + s.embed_padic(&theta_a) * pow * inner;
    }

    let s_minus_one_inv = (s.clone() - one).invert_elem()?;
    Ok((acc * s_minus_one_inv).div_i64(f as i64))
}

/// The jet of s -> L_p(phi omega_p, s) at s = 0, to the given order.
/// Coefficient 0 is L_p(phi omega_p, 0) and coefficient 1 is its derivative.
#[derive(Clone, Debug)]
pub struct LpJet {
    pub jet: PadicSeries,
}

impl LpJet {
    pub fn value(&self) -> &Padic {
        self.jet.coeff(0)
    }

    pub fn derivative(&self) -> &Padic {
        self.jet.coeff(1)
    }
}

pub fn lp_jet(emb: &CharEmbedding, jet_order: usize) -> Result<LpJet> {
    if jet_order < 2 {
        return Err(Error::Precondition("jet order must be at least 2".into()));
    }
    let s = TruncatedSeries::variable(&Padic::one(emb.prime(), emb.precision()), jet_order);
    Ok(LpJet {
        jet: lp_general(emb, &s)?,
    })
}

/// The analytic value L_p(phi omega_p, 1-k) by the full convergent sum.
pub fn lp_value_at_one_minus_k(emb: &CharEmbedding, k: u64) -> Result<Padic> {
    let s = Padic::from_bigint(
        &(BigInt::from(1) - BigInt::from(k)),
        emb.prime(),
        emb.precision(),
    );
    lp_general(emb, &s)
}

/// The Iwasawa power series zeta_phi(X) mod X^Mx: the measure form of L_p,
/// pinned by zeta_phi((1+p)^(k-1) - 1) = L_p(phi omega_p, 1-k).
#[derive(Clone, Debug)]
pub struct ZetaSeries {
    pub series: PadicSeries,
}

impl ZetaSeries {
    /// zeta_phi(0), the trivial-zero value.
    pub fn at_zero(&self) -> &Padic {
        self.series.coeff(0)
    }

    /// zeta_phi'(0).
    pub fn derivative_at_zero(&self) -> &Padic {
        self.series.coeff(1)
    }
}

/// Compute zeta_phi mod X^Mx by composing the L_p jet with the inverse
/// weight coordinate s(X) = -log(1+X)/log_p(1+p); under that substitution
/// X = (1+p)^(k-1) - 1 corresponds to s = 1-k.
pub fn zeta_series(emb: &CharEmbedding, mx: usize) -> Result<ZetaSeries> {
    if mx < 2 {
        return Err(Error::Precondition("need Mx >= 2".into()));
    }
    let p = emb.prime();
    let prec = emb.precision();
    // jet coefficients at index >= Mx cannot influence X-coefficients < Mx,
    // so the jet is computed at order exactly Mx
    let jet = lp_jet(emb, mx)?;
    let log1p = Padic::from_i64(1 + p as i64, p, prec).iwasawa_log()?;
    let scale = -log1p.invert()?;
    let s_of_x = log_one_plus_x(&Padic::one(p, prec), mx).scale(&scale);
    Ok(ZetaSeries {
        series: jet.jet.compose(&s_of_x)?,
    })
}

/// Certificate that zeta_phi has a simple zero at X = 0.
#[derive(Clone, Debug)]
pub struct SimpleZeroReport {
    /// Certified order of vanishing (always 1 on success).
    pub ord_x: u32,
    /// zeta_phi'(0), certified nonzero.
    pub leading_coeff: Padic,
    /// Absolute precision to which zeta_phi(0) vanishes.
    pub zero_to: i64,
}

/// Check the simple zero of zeta_phi at X = 0: the constant term must vanish
/// to precision and the linear term must be certifiably nonzero. An
/// indistinguishable-from-zero derivative is reported as an insufficient
/// precision error, never as a claimed zero.
pub fn ferrero_greenberg_check(emb: &CharEmbedding, mx: usize) -> Result<SimpleZeroReport> {
    if !emb.is_irregular() {
        return Err(Error::Precondition(format!(
            "chi({}) != 1: no trivial zero to probe",
            emb.prime()
        )));
    }
    let zeta = zeta_series(emb, mx.max(2))?;
    let c0 = zeta.at_zero();
    if c0.is_certainly_nonzero() {
        return Err(Error::Internal(format!(
            "trivial zero violated: zeta(0) = {}",
            c0
        )));
    }
    let c1 = zeta.derivative_at_zero();
    if !c1.is_certainly_nonzero() {
        return Err(Error::InsufficientPrecision(
            "zeta'(0) indistinguishable from 0; increase precision".into(),
        ));
    }
    Ok(SimpleZeroReport {
        ord_x: 1,
        leading_coeff: c1.clone(),
        zero_to: c0.abs_precision().unwrap_or(i64::MAX),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::{l_value_nonpositive_rat, DirichletCharacter};
    use num_bigint::BigInt;

    fn emb(d: i64, p: u64, prec: u32) -> CharEmbedding {
        let chi = DirichletCharacter::kronecker(d).unwrap();
        CharEmbedding::new(&chi, p, prec, 1).unwrap()
    }

    /// Exact interpolation target (1 - p^(k-1)) L(chi, 1-k), embedded.
    fn interpolation_target(d: i64, p: u64, k: u64, prec: u32) -> Padic {
        let chi = DirichletCharacter::kronecker(d).unwrap();
        let l = l_value_nonpositive_rat(&chi, k).unwrap();
        let euler = crate::Rat::from(BigInt::from(1) - BigInt::from(p).pow(k as u32 - 1));
        let t = euler * l;
        Padic::from_ratio(t.numer(), t.denom(), p, prec).unwrap()
    }

    #[test]
    fn trivial_zero_at_s_zero() {
        for (d, p) in [(-4i64, 5u64), (-3, 7)] {
            let e = emb(d, p, 25);
            let jet = lp_jet(&e, 3).unwrap();
            let v = jet.value();
            assert!(v.is_zero_at_precision(), "L_p(0) = {} for d={} p={}", v, d, p);
            assert!(v.abs_precision().unwrap() >= 20);
        }
    }

    #[test]
    fn interpolation_against_exact_bernoulli() {
        for (d, p) in [(-4i64, 5u64), (-3, 7)] {
            let prec = 22u32;
            let e = emb(d, p, prec);
            for m in 1..=3u64 {
                let k = 1 + m * (p - 1);
                let got = lp_value_at_one_minus_k(&e, k).unwrap();
                let want = interpolation_target(d, p, k, prec);
                let agree = got.agreement(&want);
                assert!(
                    agree.at_least(prec as i64 - 5),
                    "d={} p={} k={}: got {}, want {}, agreement {:?}",
                    d,
                    p,
                    k,
                    got,
                    want,
                    agree
                );
            }
        }
    }

    #[test]
    fn interpolation_at_k_equals_p() {
        // k = p is an admissible node since (p-1) | (p-1); the target is
        // (1 - p^(p-1)) * (-B_(p,chi)/p)
        let p = 5u64;
        let e = emb(-4, p, 20);
        let got = lp_value_at_one_minus_k(&e, p).unwrap();
        let want = interpolation_target(-4, p, p, 20);
        assert!(got.agreement(&want).at_least(15));
    }

    #[test]
    fn jet_orders_agree_on_shared_coefficients() {
        let e = emb(-4, 5, 18);
        let j3 = lp_jet(&e, 3).unwrap().jet;
        let j5 = lp_jet(&e, 5).unwrap().jet;
        for k in 0..3 {
            let a = j3.coeff(k);
            let b = j5.coeff(k);
            let shared = a
                .abs_precision()
                .unwrap_or(i64::MAX)
                .min(b.abs_precision().unwrap_or(i64::MAX));
            assert!(a.agrees_mod(b, shared), "coefficient {}", k);
        }
    }

    #[test]
    fn zeta_vanishes_at_origin_and_satisfies_interpolation() {
        let p = 5u64;
        let prec = 20u32;
        let e = emb(-4, p, prec);
        let mx = 8usize;
        let z = zeta_series(&e, mx).unwrap();
        assert!(z.at_zero().is_zero_at_precision());

        // node k = p: zeta((1+p)^(p-1) - 1) = L_p(1-p), to the series
        // truncation bound (the argument has valuation 1, so the tail is
        // O(p^Mx))
        let node = BigInt::from(1 + p).pow(p as u32 - 1) - BigInt::from(1);
        let x = Padic::from_bigint(&node, p, prec);
        let lhs = z.series.evaluate(&x);
        let rhs = lp_value_at_one_minus_k(&e, p).unwrap();
        let agree = lhs.agreement(&rhs);
        assert!(
            agree.at_least(mx as i64 - 1),
            "zeta node mismatch: {} vs {} ({:?})",
            lhs,
            rhs,
            agree
        );
    }

    #[test]
    fn zeta_derivative_matches_lp_derivative() {
        // zeta'(0) = -L_p'(0) / log_p(1+p)
        let p = 7u64;
        let prec = 20u32;
        let e = emb(-3, p, prec);
        let z = zeta_series(&e, 4).unwrap();
        let jet = lp_jet(&e, 3).unwrap();
        let log1p = Padic::from_i64(8, p, prec).iwasawa_log().unwrap();
        let want = -(jet.derivative().clone()).div(&log1p).unwrap();
        assert!(z.derivative_at_zero().agreement(&want).at_least(15));
    }

    #[test]
    fn zeta_truncations_agree() {
        let e = emb(-3, 7, 16);
        let z4 = zeta_series(&e, 4).unwrap().series;
        let z6 = zeta_series(&e, 6).unwrap().series;
        for k in 0..4 {
            let a = z4.coeff(k);
            let b = z6.coeff(k);
            let shared = a
                .abs_precision()
                .unwrap_or(i64::MAX)
                .min(b.abs_precision().unwrap_or(i64::MAX));
            assert!(a.agrees_mod(b, shared), "coefficient {}", k);
        }
    }

    #[test]
    fn ferrero_greenberg_simple_zero() {
        for (d, p) in [(-4i64, 5u64), (-3, 7)] {
            let e = emb(d, p, 22);
            let report = ferrero_greenberg_check(&e, 4).unwrap();
            assert_eq!(report.ord_x, 1);
            assert!(report.leading_coeff.is_certainly_nonzero());
            assert!(report.zero_to >= 17);
        }
    }

    #[test]
    fn ferrero_greenberg_needs_irregularity() {
        // chi_{-4}(7) = -1: the point is regular, no trivial zero to probe
        let e = emb(-4, 7, 16);
        assert!(matches!(
            ferrero_greenberg_check(&e, 4),
            Err(Error::Precondition(_))
        ));
    }
}
