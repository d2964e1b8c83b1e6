//! q-expansions: classical Eisenstein series, p-stabilization, Hecke
//! operators, the universal cyclotomic character, the two Lambda-adic
//! Eisenstein families and the cuspidal family through the irregular point,
//! and the trace linear relation tying their first-order terms together.
//!
//! Coefficients are stored densely up to n_max; Hecke operators shrink the
//! valid range instead of padding with zeros, and reading past n_max is an
//! error rather than a silent 0.

use crate::chars::CharEmbedding;
use crate::error::{Error, Result};
use crate::linv::GuardedLInvariants;
use crate::padic::{IwasawaLogTable, Padic};
use crate::ring::Coeff;
use crate::series::{binomial_power, TruncatedSeries};
use crate::{PadicSeries, Rat};

/// A modular-form coefficient vector a_0, a_1, ..., a_(n_max) over a
/// coefficient ring.
#[derive(Clone, Debug)]
pub struct QExpansion<C: Coeff> {
    label: String,
    weight: u32,
    a0: C,
    a: Vec<C>,
    eigenform: bool,
}

impl<C: Coeff> QExpansion<C> {
    pub fn new(label: impl Into<String>, weight: u32, a0: C, a: Vec<C>, eigenform: bool) -> Self {
        assert!(!a.is_empty());
        QExpansion {
            label: label.into(),
            weight,
            a0,
            a,
            eigenform,
        }
    }

    pub fn label(&self) -> &str {
        &self.label
    }

    pub fn weight(&self) -> u32 {
        self.weight
    }

    pub fn n_max(&self) -> usize {
        self.a.len()
    }

    pub fn is_eigenform(&self) -> bool {
        self.eigenform
    }

    pub fn a0(&self) -> &C {
        &self.a0
    }

    /// a_n for 0 <= n <= n_max; indices beyond the table are an error.
    pub fn coeff(&self, n: usize) -> Result<&C> {
        if n == 0 {
            return Ok(&self.a0);
        }
        self.a.get(n - 1).ok_or_else(|| {
            Error::Precondition(format!(
                "coefficient a_{} requested but the table ends at n_max = {} ({})",
                n,
                self.a.len(),
                self.label
            ))
        })
    }

    pub fn scale(&self, c: &C) -> Self {
        QExpansion {
            label: format!("({})*{}", c, self.label),
            weight: self.weight,
            a0: self.a0.clone() * c.clone(),
            a: self.a.iter().map(|x| x.clone() * c.clone()).collect(),
            eigenform: false,
        }
    }

    /// Coefficientwise difference on the common range.
    pub fn sub(&self, other: &Self) -> Self {
        let n = self.a.len().min(other.a.len());
        QExpansion {
            label: format!("{} - {}", self.label, other.label),
            weight: self.weight,
            a0: self.a0.clone() - other.a0.clone(),
            a: (0..n)
                .map(|i| self.a[i].clone() - other.a[i].clone())
                .collect(),
            eigenform: false,
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.a.len().min(other.a.len());
        QExpansion {
            label: format!("{} + {}", self.label, other.label),
            weight: self.weight,
            a0: self.a0.clone() + other.a0.clone(),
            a: (0..n)
                .map(|i| self.a[i].clone() + other.a[i].clone())
                .collect(),
            eigenform: false,
        }
    }
}

/// The two Eisenstein shapes at the irregular point.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EisKind {
    /// (1, phi): a_n = sum_(d|n) phi(d) d^(k-1), constant term L(phi,1-k)/2.
    OneChi,
    /// (phi, 1): a_n = sum_(d|n) phi(n/d) d^(k-1), constant term 0 at oo.
    ChiOne,
}

fn eisenstein_table<C: Coeff>(
    kind: EisKind,
    k: u32,
    n_max: usize,
    chi_of: &dyn Fn(u64) -> C,
    like: &C,
) -> Vec<C> {
    let mut a = Vec::with_capacity(n_max);
    for n in 1..=n_max as u64 {
        let mut acc = like.zero_like();
        for d in 1..=n {
            if n % d != 0 {
                continue;
            }
            let (chi_arg, power_base) = match kind {
                EisKind::OneChi => (d, d),
                EisKind::ChiOne => (n / d, d),
            };
            let mut term = chi_of(chi_arg);
            let mut pw = like.one_like();
            for _ in 1..k {
                pw = pw * like.from_i64_like(power_base as i64);
            }
            term = term * pw;
            acc = acc + term;
        }
        a.push(acc);
    }
    a
}

/// Classical weight-k Eisenstein q-expansion with p-adically embedded
/// character values.
pub fn eisenstein_padic(
    emb: &CharEmbedding,
    k: u32,
    kind: EisKind,
    n_max: usize,
) -> Result<QExpansion<Padic>> {
    if !emb.character().is_odd() {
        return Err(Error::Precondition("an odd character is required".into()));
    }
    let like = Padic::one(emb.prime(), emb.precision());
    let a = eisenstein_table(kind, k, n_max, &|m| emb.eval(m as i64), &like);
    let a0 = match kind {
        EisKind::OneChi => {
            let l = crate::chars::l_value_nonpositive_padic(emb, k as u64)?;
            l.div_int(2)
        }
        EisKind::ChiOne => like.zero_like(),
    };
    Ok(QExpansion::new(
        format!("E{}({})", k, kind_tag(kind)),
        k,
        a0,
        a,
        true,
    ))
}

/// Exact rational Eisenstein q-expansion (quadratic characters).
pub fn eisenstein_rational(
    chi: &crate::chars::DirichletCharacter,
    k: u32,
    kind: EisKind,
    n_max: usize,
) -> Result<QExpansion<Rat>> {
    use num_traits::{FromPrimitive, Zero};
    if !chi.is_quadratic() {
        return Err(Error::Precondition(
            "the exact rational route needs a quadratic character".into(),
        ));
    }
    let like: Rat = num_traits::One::one();
    let chi_cl = chi.clone();
    let a = eisenstein_table(
        kind,
        k,
        n_max,
        &move |m| Rat::from_i64(chi_cl.eval_quadratic(m as i64).unwrap()).unwrap(),
        &like,
    );
    let a0 = match kind {
        EisKind::OneChi => crate::chars::l_value_nonpositive_rat(chi, k as u64)?.div_i64(2),
        EisKind::ChiOne => Rat::zero(),
    };
    Ok(QExpansion::new(
        format!("E{}({})", k, kind_tag(kind)),
        k,
        a0,
        a,
        true,
    ))
}

fn kind_tag(kind: EisKind) -> &'static str {
    match kind {
        EisKind::OneChi => "1,phi",
        EisKind::ChiOne => "phi,1",
    }
}

/// p-stabilization g(z) - alpha g(pz): coefficients a_n - alpha a_(n/p),
/// constant term a_0 (1 - alpha).
pub fn p_stabilize<C: Coeff>(g: &QExpansion<C>, p: u64, alpha: &C) -> Result<QExpansion<C>> {
    let n_max = g.n_max();
    let mut a = Vec::with_capacity(n_max);
    for n in 1..=n_max {
        let mut c = g.coeff(n)?.clone();
        if n % p as usize == 0 {
            c = c - alpha.clone() * g.coeff(n / p as usize)?.clone();
        }
        a.push(c);
    }
    let a0 = g.a0().clone() * (alpha.one_like() - alpha.clone());
    Ok(QExpansion::new(
        format!("{}^(p-stab)", g.label()),
        g.weight(),
        a0,
        a,
        g.is_eigenform(),
    ))
}

/// T_ell for ell coprime to the level: (T_ell g)_n = a_(n ell) + chi(ell)
/// a_(n/ell), with the weight-appropriate determinant value chi(ell)
/// supplied by the caller; the constant term picks up 1 + chi(ell). The
/// valid range shrinks to n_max / ell.
pub fn hecke_t<C: Coeff>(g: &QExpansion<C>, ell: u64, chi_ell: &C) -> Result<QExpansion<C>> {
    let out_max = g.n_max() / ell as usize;
    if out_max == 0 {
        return Err(Error::Precondition(format!(
            "n_max = {} too small to apply T_{}",
            g.n_max(),
            ell
        )));
    }
    let mut a = Vec::with_capacity(out_max);
    for n in 1..=out_max {
        let mut c = g.coeff(n * ell as usize)?.clone();
        if n % ell as usize == 0 {
            c = c + chi_ell.clone() * g.coeff(n / ell as usize)?.clone();
        }
        a.push(c);
    }
    let a0 = g.a0().clone() * (chi_ell.one_like() + chi_ell.clone());
    Ok(QExpansion::new(
        format!("T_{} {}", ell, g.label()),
        g.weight(),
        a0,
        a,
        false,
    ))
}

/// U_q for q dividing the level (or q = p): (U_q g)_n = a_(nq); the constant
/// term is fixed for the families used here.
pub fn hecke_u<C: Coeff>(g: &QExpansion<C>, q: u64) -> Result<QExpansion<C>> {
    let out_max = g.n_max() / q as usize;
    if out_max == 0 {
        return Err(Error::Precondition(format!(
            "n_max = {} too small to apply U_{}",
            g.n_max(),
            q
        )));
    }
    let mut a = Vec::with_capacity(out_max);
    for n in 1..=out_max {
        a.push(g.coeff(n * q as usize)?.clone());
    }
    Ok(QExpansion::new(
        format!("U_{} {}", q, g.label()),
        g.weight(),
        g.a0().clone(),
        a,
        false,
    ))
}

/// The universal cyclotomic character at n (p not dividing n):
/// (1+X)^(log_p(n)/log_p(1+p)) mod X^mx; multiplicative in n with constant
/// term 1.
pub fn chi_cyc_value(
    emb: &CharEmbedding,
    n: u64,
    mx: usize,
    log_table: Option<&IwasawaLogTable>,
) -> Result<PadicSeries> {
    let p = emb.prime();
    let prec = emb.precision();
    if n % p == 0 {
        return Err(Error::Precondition(format!(
            "chi_cyc({}) is undefined: p = {} divides the argument",
            n, p
        )));
    }
    let log_n = match log_table {
        Some(t) => t.log(n as usize).clone(),
        None => Padic::from_i64(n as i64, p, prec).iwasawa_log()?,
    };
    let log_1p = Padic::from_i64(1 + p as i64, p, prec).iwasawa_log()?;
    let alpha = log_n.div(&log_1p)?;
    Ok(binomial_power(&alpha, mx))
}

/// Fill a multiplicative coefficient table from prime data. `det_at(l)`
/// returns Some(chi(l)) for good primes (three-term recursion
/// a_(l^r) = a_l a_(l^(r-1)) - chi(l) a_(l^(r-2))) and None at bad primes
/// (a_(l^r) = a_l^r).
fn multiplicative_table<C: Coeff>(
    n_max: usize,
    like: &C,
    at_prime: &mut dyn FnMut(u64) -> Result<C>,
    det_at: &mut dyn FnMut(u64) -> Result<Option<C>>,
) -> Result<Vec<C>> {
    let mut spf = vec![0usize; n_max + 1];
    for i in 2..=n_max {
        if spf[i] == 0 {
            let mut j = i;
            while j <= n_max {
                if spf[j] == 0 {
                    spf[j] = i;
                }
                j += i;
            }
        }
    }
    let mut table = vec![like.zero_like(); n_max + 1];
    if n_max >= 1 {
        table[1] = like.one_like();
    }
    for n in 2..=n_max {
        let l = spf[n];
        // prime-power part l^r of n
        let mut m = n;
        let mut lr = 1usize;
        while m % l == 0 {
            m /= l;
            lr *= l;
        }
        if m > 1 {
            table[n] = table[lr].clone() * table[m].clone();
            continue;
        }
        // n = l^r
        if n == l {
            table[n] = at_prime(l as u64)?;
            continue;
        }
        match det_at(l as u64)? {
            Some(det) => {
                let prev = table[n / l].clone();
                let prev2 = table[n / (l * l)].clone();
                table[n] = table[l].clone() * prev - det * prev2;
            }
            None => {
                table[n] = table[l].clone() * table[n / l].clone();
            }
        }
    }
    Ok(table)
}

/// One of the two Lambda-adic Eisenstein families through the irregular
/// point, as a q-expansion over truncated series in X.
pub fn lambda_eisenstein(
    emb: &CharEmbedding,
    kind: EisKind,
    n_max: usize,
    mx: usize,
) -> Result<QExpansion<PadicSeries>> {
    let p = emb.prime();
    let prec = emb.precision();
    let n_mod = emb.character().modulus();
    let like = TruncatedSeries::one(&Padic::one(p, prec), mx);
    let logs = IwasawaLogTable::new(p, prec, n_max.max(2))?;

    let mut at_prime = |l: u64| -> Result<PadicSeries> {
        if l == p {
            return Ok(like.one_like());
        }
        let cyc = chi_cyc_value(emb, l, mx, Some(&logs))?;
        if n_mod % l == 0 {
            return Ok(match kind {
                EisKind::OneChi => like.one_like(),
                EisKind::ChiOne => cyc,
            });
        }
        let chi_l = TruncatedSeries::constant(emb.eval(l as i64), mx);
        Ok(match kind {
            EisKind::OneChi => like.one_like() + chi_l * cyc,
            EisKind::ChiOne => chi_l + cyc,
        })
    };
    let mut det_at = |l: u64| -> Result<Option<PadicSeries>> {
        if l == p || n_mod % l == 0 {
            return Ok(None);
        }
        let cyc = chi_cyc_value(emb, l, mx, Some(&logs))?;
        Ok(Some(TruncatedSeries::constant(emb.eval(l as i64), mx) * cyc))
    };
    let table = multiplicative_table(n_max, &like, &mut at_prime, &mut det_at)?;

    let a0 = match kind {
        EisKind::OneChi => {
            let zeta = crate::lfunc::zeta_series(emb, mx)?;
            zeta.series.div_i64(2)
        }
        EisKind::ChiOne => like.zero_like(),
    };
    Ok(QExpansion::new(
        format!("E_family({})", kind_tag(kind)),
        0,
        a0,
        table[1..].to_vec(),
        true,
    ))
}

/// The unique p-stabilization f of the weight-one Eisenstein series at an
/// irregular point: a_n(f) = sum_(d|n, p∤d) phi(d), a_0 = 0.
pub fn irregular_stabilization(
    emb: &CharEmbedding,
    n_max: usize,
) -> Result<QExpansion<Padic>> {
    if !emb.is_irregular() {
        return Err(Error::Precondition(format!(
            "chi({}) != 1: the two stabilizations differ at a regular point",
            emb.prime()
        )));
    }
    let e1 = eisenstein_padic(emb, 1, EisKind::OneChi, n_max)?;
    let one = Padic::one(emb.prime(), emb.precision());
    let mut f = p_stabilize(&e1, emb.prime(), &one)?;
    f.label = "f".into();
    Ok(f)
}

/// The cuspidal family through f, mod X^2, reconstructed from its proven
/// first-order coefficients:
///
///   a_l(F) = a_l(f) + X (phi(l) L' + L) log_p(l) / ((L + L') log_p(1+p)),
///            l != p (phi(l) = 0 when l | N),
///   a_p(F) = 1 - X L L' / ((L + L') log_p(1+p)),
///
/// completed multiplicatively with determinant phi * chi_cyc.
pub fn cuspidal_family(
    emb: &CharEmbedding,
    guards: &GuardedLInvariants,
    n_max: usize,
) -> Result<QExpansion<PadicSeries>> {
    let p = emb.prime();
    let prec = emb.precision();
    let n_mod = emb.character().modulus();
    let mx = 2usize;
    let like = TruncatedSeries::one(&Padic::one(p, prec), mx);
    let logs = IwasawaLogTable::new(p, prec, n_max.max(2))?;
    let log_1p = Padic::from_i64(1 + p as i64, p, prec).iwasawa_log()?;
    let denom = (guards.sum.clone() * log_1p.clone()).invert()?;

    let mut at_prime = |l: u64| -> Result<PadicSeries> {
        if l == p {
            let d = -(guards.l_phi.clone() * guards.l_phi_inv.clone() * denom.clone());
            return Ok(TruncatedSeries::new(vec![Padic::one(p, prec), d]));
        }
        let chi_l = emb.eval(l as i64);
        let const_term = Padic::one(p, prec) + chi_l.clone();
        let d = (chi_l * guards.l_phi_inv.clone() + guards.l_phi.clone())
            * logs.log(l as usize).clone()
            * denom.clone();
        Ok(TruncatedSeries::new(vec![const_term, d]))
    };
    let mut det_at = |l: u64| -> Result<Option<PadicSeries>> {
        if l == p || n_mod % l == 0 {
            return Ok(None);
        }
        let cyc = chi_cyc_value(emb, l, mx, Some(&logs))?;
        Ok(Some(TruncatedSeries::constant(emb.eval(l as i64), mx) * cyc))
    };
    let table = multiplicative_table(n_max, &like, &mut at_prime, &mut det_at)?;
    Ok(QExpansion::new(
        "F_cusp",
        0,
        like.zero_like(),
        table[1..].to_vec(),
        true,
    ))
}

/// Per-prime outcome of the trace linear relation check.
#[derive(Clone, Debug)]
pub struct RelationReport {
    pub checks: crate::report::CheckSet,
}

/// Verify, for every prime l <= l_max with l coprime to Np:
/// (L' + L) a_l'(F)(0) = L' a_l'(E_(1,phi))(0) + L a_l'(E_(phi,1))(0), plus
/// agreement of all three constant coefficients with a_l(f); in the
/// quadratic case additionally 2 a_l(F) = a_l(E_(1,phi)) + a_l(E_(phi,1))
/// mod X^2.
pub fn verify_linear_relation(
    emb: &CharEmbedding,
    guards: &GuardedLInvariants,
    fam_one_chi: &QExpansion<PadicSeries>,
    fam_chi_one: &QExpansion<PadicSeries>,
    cusp: &QExpansion<PadicSeries>,
    l_max: u64,
    threshold: i64,
) -> Result<RelationReport> {
    let p = emb.prime();
    let n_mod = emb.character().modulus();
    let quadratic = emb.character().is_quadratic();
    let mut set = crate::report::CheckSet::new("trace linear relation mod X^2");
    for l in primes_up_to(l_max) {
        if l == p || n_mod % l == 0 {
            continue;
        }
        let ax = cusp.coeff(l as usize)?;
        let bx = fam_one_chi.coeff(l as usize)?;
        let cx = fam_chi_one.coeff(l as usize)?;
        let lhs = guards.sum.clone() * ax.coeff(1).clone();
        let rhs = guards.l_phi_inv.clone() * bx.coeff(1).clone()
            + guards.l_phi.clone() * cx.coeff(1).clone();
        set.push(crate::report::IdentityCheck::from_agreement(
            format!("derivative relation at l = {}", l),
            lhs.agreement(&rhs),
            threshold,
        ));
        set.push(crate::report::IdentityCheck::from_agreement(
            format!("weight-one agreement F/E(1,phi) at l = {}", l),
            ax.coeff(0).agreement(bx.coeff(0)),
            threshold,
        ));
        set.push(crate::report::IdentityCheck::from_agreement(
            format!("weight-one agreement F/E(phi,1) at l = {}", l),
            ax.coeff(0).agreement(cx.coeff(0)),
            threshold,
        ));
        if quadratic {
            let twice = ax.clone().scale(&ax.coeff(0).from_i64_like(2));
            let sum = bx.clone() + cx.clone();
            set.push(crate::report::IdentityCheck::from_agreement(
                format!("2 a_l(F) = a_l(E(1,phi)) + a_l(E(phi,1)) at l = {}", l),
                twice.agreement(&sum),
                threshold,
            ));
        }
    }
    Ok(RelationReport { checks: set })
}

pub(crate) fn primes_up_to(n: u64) -> Vec<u64> {
    let n = n as usize;
    if n < 2 {
        return Vec::new();
    }
    let mut sieve = vec![true; n + 1];
    sieve[0] = false;
    sieve[1] = false;
    for i in 2..=n {
        if sieve[i] {
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    (2..=n).filter(|&i| sieve[i]).map(|i| i as u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::chars::DirichletCharacter;
    use crate::linv::{l_invariant_quadratic, nonvanishing_guard};
    use num_bigint::BigInt;
    use num_traits::Zero;

    fn emb(d: i64, p: u64, prec: u32) -> CharEmbedding {
        let chi = DirichletCharacter::kronecker(d).unwrap();
        CharEmbedding::new(&chi, p, prec, 1).unwrap()
    }

    fn rat(n: i64, d: i64) -> Rat {
        Rat::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn weight_one_eisenstein_leading_coefficients() {
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        let e = eisenstein_rational(&chi, 1, EisKind::OneChi, 20).unwrap();
        // a_0 = L(phi,0)/2 = 1/4, a_1 = 1
        assert_eq!(e.a0(), &rat(1, 4));
        assert_eq!(e.coeff(1).unwrap(), &rat(1, 1));
        // a_6 = chi(1) + chi(2) + chi(3) + chi(6) = 1 + 0 - 1 + 0 = 0
        assert!(e.coeff(6).unwrap().is_zero());
        // divisor-sum oracle across the table
        for n in 1..=20usize {
            let direct: Rat = (1..=n)
                .filter(|d| n % d == 0)
                .map(|d| rat(chi.eval_quadratic(d as i64).unwrap(), 1))
                .sum();
            assert_eq!(e.coeff(n).unwrap(), &direct, "n = {}", n);
        }
        // out-of-range access is an error, not zero
        assert!(e.coeff(21).is_err());
    }

    #[test]
    fn higher_weight_table_and_chi_one_kind() {
        let chi = DirichletCharacter::kronecker(-3).unwrap();
        let e = eisenstein_rational(&chi, 3, EisKind::ChiOne, 12).unwrap();
        assert!(e.a0().is_zero());
        // a_n = sum_(d|n) chi(n/d) d^2; n = 6: chi(6)1 + chi(3)4 + chi(2)9 + chi(1)36
        let expect = rat(0 + 0 - 9 + 36, 1);
        assert_eq!(e.coeff(6).unwrap(), &expect);
    }

    #[test]
    fn stabilization_drops_p_divisors() {
        let p = 5u64;
        let e = emb(-4, p, 16);
        let f = irregular_stabilization(&e, 60).unwrap();
        assert!(f.a0().is_zero_at_precision());
        let chi = DirichletCharacter::kronecker(-4).unwrap();
        for n in 1..=60usize {
            let direct: i64 = (1..=n)
                .filter(|d| n % d == 0 && d % p as usize != 0)
                .map(|d| chi.eval_quadratic(d as i64).unwrap())
                .sum();
            let want = Padic::from_i64(direct, p, 16);
            assert!(f.coeff(n).unwrap().agrees_mod(&want, 16), "n = {}", n);
        }
    }

    #[test]
    fn stabilized_form_has_u_p_eigenvalue_one() {
        let p = 5u64;
        let e = emb(-4, p, 14);
        let f = irregular_stabilization(&e, 100).unwrap();
        let uf = hecke_u(&f, p).unwrap();
        for n in 1..=uf.n_max() {
            let got = uf.coeff(n).unwrap();
            let want = f.coeff(n).unwrap();
            assert!(got.agrees_mod(want, 14), "n = {}", n);
        }
    }

    #[test]
    fn both_alpha_choices_coincide_at_irregular_point() {
        let p = 5u64;
        let e = emb(-4, p, 14);
        let e1 = eisenstein_padic(&e, 1, EisKind::OneChi, 40).unwrap();
        let one = Padic::one(p, 14);
        let s1 = p_stabilize(&e1, p, &one).unwrap();
        let s2 = p_stabilize(&e1, p, &e.eval(p as i64)).unwrap();
        for n in 0..=40usize {
            assert!(s1.coeff(n).unwrap().agrees_mod(s2.coeff(n).unwrap(), 14));
        }
    }

    #[test]
    fn hecke_eigenform_property_of_f() {
        let p = 5u64;
        let e = emb(-4, p, 14);
        let f = irregular_stabilization(&e, 120).unwrap();
        for ell in [3u64, 7, 11, 13] {
            let tf = hecke_t(&f, ell, &e.eval(ell as i64)).unwrap();
            let lam = f.coeff(ell as usize).unwrap();
            for n in 0..=tf.n_max() {
                let got = tf.coeff(n).unwrap();
                let want = f.coeff(n).unwrap().clone() * lam.clone();
                assert!(got.agrees_mod(&want, 14), "ell = {}, n = {}", ell, n);
            }
        }
    }

    #[test]
    fn hecke_operators_commute() {
        let p = 5u64;
        let e = emb(-4, p, 14);
        let g = eisenstein_padic(&e, 1, EisKind::OneChi, 90).unwrap();
        let t2 = |h: &QExpansion<Padic>| hecke_t(h, 3, &e.eval(3)).unwrap();
        let t3 = |h: &QExpansion<Padic>| hecke_t(h, 7, &e.eval(7)).unwrap();
        let a = t3(&t2(&g));
        let b = t2(&t3(&g));
        assert_eq!(a.n_max(), b.n_max());
        for n in 0..=a.n_max() {
            assert!(a.coeff(n).unwrap().agrees_mod(b.coeff(n).unwrap(), 14));
        }
    }

    #[test]
    fn chi_cyc_is_multiplicative_and_specializes() {
        let p = 5u64;
        let prec = 18u32;
        let e = emb(-4, p, prec);
        let a = chi_cyc_value(&e, 6, 5, None).unwrap();
        let b = chi_cyc_value(&e, 7, 5, None).unwrap();
        let ab = chi_cyc_value(&e, 42, 5, None).unwrap();
        assert!(ab.agrees_mod(&(a.clone() * b), 12));

        // orientation anchor: at X = (1+p)^(k-1) - 1 the value is <l>^(k-1)
        let k = 1 + (p - 1);
        let x = Padic::from_bigint(
            &(BigInt::from(1 + p).pow(k as u32 - 1) - BigInt::from(1)),
            p,
            prec,
        );
        let mx = 8usize;
        let cyc7 = chi_cyc_value(&e, 7, mx, None).unwrap();
        let got = cyc7.evaluate(&x);
        let want = Padic::from_i64(7, p, prec)
            .principal_unit()
            .unwrap()
            .pow_u64(k - 1);
        assert!(got.agreement(&want).at_least(mx as i64 - 1));
    }

    #[test]
    fn lambda_family_prime_coefficients_mod_x2() {
        let p = 5u64;
        let prec = 18u32;
        let e = emb(-4, p, prec);
        let fam = lambda_eisenstein(&e, EisKind::OneChi, 30, 2).unwrap();
        let log_1p = Padic::from_i64(6, p, prec).iwasawa_log().unwrap();
        for ell in [3u64, 7, 11, 13] {
            let al = fam.coeff(ell as usize).unwrap();
            let chi_l = e.eval(ell as i64);
            let want0 = Padic::one(p, prec) + chi_l.clone();
            assert!(al.coeff(0).agrees_mod(&want0, 15));
            let logl = Padic::from_i64(ell as i64, p, prec).iwasawa_log().unwrap();
            let want1 = chi_l * logl.div(&log_1p).unwrap();
            assert!(al.coeff(1).agrees_mod(&want1, 14), "ell = {}", ell);
        }
        // a_p = 1 exactly: the X-coefficient is an exact zero
        let ap = fam.coeff(p as usize).unwrap();
        assert!(ap.coeff(0).agrees_mod(&Padic::one(p, prec), 18));
        assert!(ap.coeff(1).is_exact_zero());
    }

    #[test]
    fn lambda_family_constant_terms() {
        let p = 7u64;
        let e = emb(-3, p, 18);
        let one_chi = lambda_eisenstein(&e, EisKind::OneChi, 10, 3).unwrap();
        let zeta = crate::lfunc::zeta_series(&e, 3).unwrap();
        assert!(one_chi
            .a0()
            .agrees_mod(&zeta.series.div_i64(2), 12));
        // trivial zero: the constant coefficient of a_0 vanishes
        assert!(one_chi.a0().coeff(0).is_zero_at_precision());
        let chi_one = lambda_eisenstein(&e, EisKind::ChiOne, 10, 3).unwrap();
        assert!(chi_one.a0().is_zero_elem());
    }

    #[test]
    fn lambda_families_specialize_to_f_at_weight_one() {
        let p = 5u64;
        let e = emb(-4, p, 16);
        let f = irregular_stabilization(&e, 40).unwrap();
        for kind in [EisKind::OneChi, EisKind::ChiOne] {
            let fam = lambda_eisenstein(&e, kind, 40, 2).unwrap();
            for n in 1..=40usize {
                let x0 = fam.coeff(n).unwrap().coeff(0);
                assert!(
                    x0.agrees_mod(f.coeff(n).unwrap(), 14),
                    "kind {:?}, n = {}",
                    kind,
                    n
                );
            }
        }
    }

    #[test]
    fn lambda_families_are_hecke_eigenforms() {
        let p = 5u64;
        let e = emb(-4, p, 14);
        let logs = IwasawaLogTable::new(p, 14, 60).unwrap();
        for kind in [EisKind::OneChi, EisKind::ChiOne] {
            let fam = lambda_eisenstein(&e, kind, 60, 2).unwrap();
            for ell in [3u64, 7, 11] {
                let det = TruncatedSeries::constant(e.eval(ell as i64), 2)
                    * chi_cyc_value(&e, ell, 2, Some(&logs)).unwrap();
                let tf = hecke_t(&fam, ell, &det).unwrap();
                let lam = fam.coeff(ell as usize).unwrap();
                for n in 1..=tf.n_max() {
                    let got = tf.coeff(n).unwrap();
                    let want = fam.coeff(n).unwrap().clone() * lam.clone();
                    assert!(got.agrees_mod(&want, 12), "kind {:?} ell {} n {}", kind, ell, n);
                }
            }
            // U_p acts by 1
            let up = hecke_u(&fam, p).unwrap();
            for n in 1..=up.n_max() {
                assert!(up
                    .coeff(n)
                    .unwrap()
                    .agrees_mod(fam.coeff(n).unwrap(), 12));
            }
        }
    }

    #[test]
    fn coefficient_tables_are_multiplicative() {
        use rand::{Rng, SeedableRng};
        let p = 5u64;
        let e = emb(-4, p, 14);
        let fam = lambda_eisenstein(&e, EisKind::OneChi, 200, 2).unwrap();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut tested = 0;
        while tested < 40 {
            let m: usize = rng.gen_range(2..14);
            let n: usize = rng.gen_range(2..14);
            if num_integer::gcd(m, n) != 1 || m * n > 200 {
                continue;
            }
            let lhs = fam.coeff(m * n).unwrap();
            let rhs = fam.coeff(m).unwrap().clone() * fam.coeff(n).unwrap().clone();
            assert!(lhs.agrees_mod(&rhs, 12), "(m, n) = ({}, {})", m, n);
            tested += 1;
        }
    }

    #[test]
    fn cuspidal_family_first_order_structure() {
        let p = 5u64;
        let prec = 20u32;
        let e = emb(-4, p, prec);
        let l = l_invariant_quadratic(-4, p, prec).unwrap();
        let guards = nonvanishing_guard(&l, &l).unwrap();
        let cusp = cuspidal_family(&e, &guards, 60).unwrap();

        // specialization at X = 0 is f
        let f = irregular_stabilization(&e, 60).unwrap();
        for n in 1..=60usize {
            assert!(cusp
                .coeff(n)
                .unwrap()
                .coeff(0)
                .agrees_mod(f.coeff(n).unwrap(), 16));
        }

        // quadratic case: d/dX a_p(F)|_0 = -L / (2 log_p(1+p))
        let log_1p = Padic::from_i64(6, p, prec).iwasawa_log().unwrap();
        let want = -(l.clone().div(&(log_1p.clone() * Padic::from_i64(2, p, prec))).unwrap());
        assert!(cusp.coeff(p as usize).unwrap().coeff(1).agrees_mod(&want, 15));

        // a_1 = 1, a_0 = 0
        assert!(cusp.a0().is_zero_elem());
        assert!(cusp
            .coeff(1)
            .unwrap()
            .coeff(0)
            .agrees_mod(&Padic::one(p, prec), 18));
    }

    #[test]
    fn linear_relation_holds_for_quadratic_point() {
        let p = 5u64;
        let prec = 22u32;
        let e = emb(-4, p, prec);
        let l = l_invariant_quadratic(-4, p, prec).unwrap();
        let guards = nonvanishing_guard(&l, &l).unwrap();
        let f1 = lambda_eisenstein(&e, EisKind::OneChi, 60, 2).unwrap();
        let f2 = lambda_eisenstein(&e, EisKind::ChiOne, 60, 2).unwrap();
        let cusp = cuspidal_family(&e, &guards, 60).unwrap();
        let rep = verify_linear_relation(&e, &guards, &f1, &f2, &cusp, 50, 14).unwrap();
        assert!(rep.checks.all_pass(), "{:?}", rep.checks);
    }

    #[test]
    fn linear_relation_with_supplied_sextic_unit_data() {
        // the conductor-21 sextic at p = 13, with synthetic p-unit
        // polynomials (pipeline exercise; honest sextic units would come
        // from the degree-12 splitting field)
        use crate::linv::{l_invariant_from_unit, PUnitData};
        let chi = DirichletCharacter::tabulated(21, &[(8, 3), (10, 2)], 6).unwrap();
        let p = 13u64;
        let prec = 18u32;
        let e = CharEmbedding::new(&chi, p, prec, 1).unwrap();
        assert!(e.is_irregular());
        let unit_phi = PUnitData {
            label: "phi".into(),
            coeffs: vec![BigInt::from(26), BigInt::from(-5), BigInt::from(1)],
            valuation: 1,
            sigma: None,
        };
        let unit_inv = PUnitData {
            label: "phi_inv".into(),
            coeffs: vec![BigInt::from(39), BigInt::from(-7), BigInt::from(1)],
            valuation: 1,
            sigma: None,
        };
        let l_phi = l_invariant_from_unit(&e, &unit_phi).unwrap();
        let l_inv = l_invariant_from_unit(&e.inverse(), &unit_inv).unwrap();
        let guards = nonvanishing_guard(&l_phi, &l_inv).unwrap();
        let f1 = lambda_eisenstein(&e, EisKind::OneChi, 40, 2).unwrap();
        let f2 = lambda_eisenstein(&e, EisKind::ChiOne, 40, 2).unwrap();
        let cusp = cuspidal_family(&e, &guards, 40).unwrap();
        let rep = verify_linear_relation(&e, &guards, &f1, &f2, &cusp, 37, 12).unwrap();
        assert!(rep.checks.all_pass());
    }
}
