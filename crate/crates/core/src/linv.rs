//! L-invariants from explicit p-units.
//!
//! For an odd character psi whose fixed field H is cyclic of degree 2r over
//! Q, with p split in H, the psi^(-1)-eigenspace of the p-units of H is a
//! line spanned by u_psi = sum_i sigma^i(x_0) tensor psi(sigma)^(-i), where
//! x_0 has valuation e at the distinguished place v_0 and 0 elsewhere. The
//! invariant is, up to orientation, the twisted logarithm sum
//!
//!   L(psi) = (1/e) sum_i psi(sigma)^(-i) log_p(iota(sigma^i x_0)),
//!
//! where iota(x_0) is the valuation-e root of the minimal polynomial of x_0.
//! The overall sign is a convention tied to the choice of distinguished
//! place; it is pinned here so that the derivative formula
//! L_p'(phi omega_p, 0) = -L(phi) L(phi, 0) holds, and the test suite
//! cross-validates that against the analytic pipeline. For quadratic psi the
//! sum collapses to 2 log_p(r)/e (the conjugate root has valuation 0 and
//! logarithm -log_p(r) since the norm is a power of p), and everything is
//! automatic via imaginary quadratic fields. For other psi the caller
//! supplies the p-unit data; resolving the Galois labeling of the remaining
//! roots needs the action of sigma, so higher-degree data must carry it
//! explicitly.

use num_bigint::{BigInt, BigUint};
use num_traits::{Signed, Zero};

use crate::chars::CharEmbedding;
use crate::error::{Error, Result};
use crate::padic::Padic;

/// Class number of the imaginary quadratic order of fundamental discriminant
/// d < 0, by counting reduced primitive binary quadratic forms
/// ax^2 + bxy + cy^2: |b| <= a <= c, with b >= 0 when |b| = a or a = c.
pub fn class_number(d: i64) -> Result<u64> {
    if d >= 0 || !crate::chars::is_fundamental_discriminant(d) {
        return Err(Error::Precondition(format!(
            "{} is not a negative fundamental discriminant",
            d
        )));
    }
    let abs_d = d.unsigned_abs() as i64;
    let mut count = 0u64;
    let mut a = 1i64;
    while 3 * a * a <= abs_d {
        for b in -a + 1..=a {
            let num = b * b - d;
            if num % (4 * a) != 0 {
                continue;
            }
            let c = num / (4 * a);
            if c < a {
                continue;
            }
            if b < 0 && (b.abs() == a || a == c) {
                continue;
            }
            if gcd3(a, b, c) != 1 {
                continue;
            }
            count += 1;
        }
        a += 1;
    }
    Ok(count)
}

fn gcd3(a: i64, b: i64, c: i64) -> i64 {
    fn gcd(a: i64, b: i64) -> i64 {
        if b == 0 {
            a.abs()
        } else {
            gcd(b, a % b)
        }
    }
    gcd(gcd(a, b), c)
}

/// A generator of the e-th power of a split prime above p in the order of
/// discriminant d: pi = (x + y sqrt(d))/2 with x^2 + |d| y^2 = 4 p^e,
/// of minimal polynomial T^2 - x T + p^e with root valuations {0, e}.
#[derive(Clone, Debug)]
pub struct QuadraticOrderData {
    pub discriminant: i64,
    pub class_number: u64,
    pub exponent: u64,
    pub x: BigInt,
    pub y: BigInt,
}

impl QuadraticOrderData {
    /// Coefficients [c_0, c_1, c_2] of T^2 - x T + p^e.
    pub fn minimal_polynomial(&self, p: u64) -> Vec<BigInt> {
        vec![
            BigInt::from(p).pow(self.exponent as u32),
            -self.x.clone(),
            BigInt::from(1),
        ]
    }
}

/// Solve x^2 + |d| y^2 = 4 p^e with y >= 1 minimal (then x >= 0) and p not
/// dividing x, so that the two p-adic roots of T^2 - xT + p^e have
/// valuations exactly 0 and e.
pub fn split_generator_with_exponent(d: i64, p: u64, e: u64) -> Result<QuadraticOrderData> {
    if crate::chars::kronecker_symbol(d, p as i64) != 1 {
        return Err(Error::Precondition(format!(
            "p = {} is not split in discriminant {}",
            p, d
        )));
    }
    let h = class_number(d)?;
    if e % h != 0 {
        return Err(Error::Precondition(format!(
            "exponent {} is not a multiple of the class number {}",
            e, h
        )));
    }
    let abs_d = BigInt::from(d.unsigned_abs());
    let target = BigInt::from(4) * BigInt::from(p).pow(e as u32);
    let mut y = BigInt::from(1);
    loop {
        let rest = &target - &abs_d * &y * &y;
        if rest.is_negative() {
            break;
        }
        let x = rest.sqrt();
        if &x * &x == rest && (&x % BigInt::from(p)) != BigInt::zero() {
            return Ok(QuadraticOrderData {
                discriminant: d,
                class_number: h,
                exponent: e,
                x,
                y,
            });
        }
        y += 1;
    }
    Err(Error::Internal(format!(
        "no norm-equation solution for d = {}, p = {}, e = {} (should be impossible)",
        d, p, e
    )))
}

/// As [`split_generator_with_exponent`] with e = h, the class number.
pub fn split_prime_power_generator(d: i64, p: u64) -> Result<QuadraticOrderData> {
    let h = class_number(d)?;
    split_generator_with_exponent(d, p, h)
}

/// User-supplied p-unit data: the minimal polynomial of the exponent witness
/// x_0 (integer coefficients, constant to leading) and its valuation e at
/// the distinguished root. For degree > 2 the Galois action must be given.
#[derive(Clone, Debug)]
pub struct PUnitData {
    pub label: String,
    pub coeffs: Vec<BigInt>,
    pub valuation: u64,
    pub sigma: Option<SigmaAction>,
}

/// The action of a chosen generator sigma of the Galois group: sigma(x_0) as
/// a polynomial in x_0 with rational coefficients, plus the class of sigma
/// in (Z/N)^* under the Artin map (so characters can be evaluated on it).
#[derive(Clone, Debug)]
pub struct SigmaAction {
    pub poly: Vec<crate::Rat>,
    pub artin_class: u64,
}

fn eval_poly_padic(coeffs: &[Padic], x: &Padic) -> Padic {
    let mut acc = coeffs[coeffs.len() - 1].clone();
    for c in coeffs.iter().rev().skip(1) {
        acc = acc * x.clone() + c.clone();
    }
    acc
}

/// All roots in Q_p of the given integer polynomial with valuation exactly
/// `e`, found from the Newton-polygon substitution T = p^e S followed by
/// Hensel lifting of the simple roots of the reduction.
pub fn padic_roots_of_valuation(
    coeffs: &[BigInt],
    e: u64,
    p: u64,
    prec: u32,
) -> Result<Vec<Padic>> {
    if coeffs.len() < 2 || coeffs.last().unwrap().is_zero() {
        return Err(Error::InvalidInput("need a polynomial of degree >= 1".into()));
    }
    // g(S) = f(p^e S) / p^mu, normalized to have a unit coefficient
    let pe = BigInt::from(p);
    let scaled: Vec<BigInt> = coeffs
        .iter()
        .enumerate()
        .map(|(i, c)| c * pe.pow((e * i as u64) as u32))
        .collect();
    let mu = scaled
        .iter()
        .filter(|c| !c.is_zero())
        .map(|c| {
            let mut v = 0u32;
            let mut m = c.magnitude().clone();
            let pb = BigUint::from(p);
            while (&m % &pb).is_zero() {
                m /= &pb;
                v += 1;
            }
            v
        })
        .min()
        .unwrap();
    let g: Vec<BigInt> = scaled.iter().map(|c| c / pe.pow(mu)).collect();

    // simple roots of g mod p away from 0
    let g_mod: Vec<i64> = g
        .iter()
        .map(|c| {
            let r = c % BigInt::from(p);
            let r: BigInt = if r.is_negative() { r + BigInt::from(p) } else { r };
            i64::try_from(r).unwrap()
        })
        .collect();
    let eval_mod = |s: i64, cs: &[i64]| -> i64 {
        let mut acc = 0i64;
        for c in cs.iter().rev() {
            acc = (acc * s + c).rem_euclid(p as i64);
        }
        acc
    };
    let deriv_mod: Vec<i64> = g_mod
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| ((i as i64) * c).rem_euclid(p as i64))
        .collect();

    let g_p: Vec<Padic> = g.iter().map(|c| Padic::from_bigint(c, p, prec)).collect();
    let dg_p: Vec<Padic> = g_p
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c.clone() * Padic::from_i64(i as i64, p, prec))
        .collect();

    let mut roots = Vec::new();
    for s0 in 1..p as i64 {
        if eval_mod(s0, &g_mod) != 0 {
            continue;
        }
        if eval_mod(s0, &deriv_mod) == 0 {
            return Err(Error::Precondition(format!(
                "multiple root mod p at the stated valuation (S = {}); cannot Hensel-lift",
                s0
            )));
        }
        let mut s = Padic::from_i64(s0, p, prec);
        for _ in 0..64 {
            let val = eval_poly_padic(&g_p, &s);
            if val.is_zero_at_precision() {
                break;
            }
            let der = eval_poly_padic(&dg_p, &s);
            s = s - val.div(&der)?;
        }
        let residual = eval_poly_padic(&g_p, &s);
        if !residual.is_zero_at_precision() {
            return Err(Error::Internal("Newton iteration failed to converge".into()));
        }
        roots.push(Padic::from_i64(p as i64, p, prec).pow_u64(e) * s);
    }
    Ok(roots)
}

fn unique_valuation_root(coeffs: &[BigInt], e: u64, p: u64, prec: u32) -> Result<Padic> {
    let roots = padic_roots_of_valuation(coeffs, e, p, prec)?;
    match roots.len() {
        0 => Err(Error::Precondition(format!(
            "polynomial has no Z_p-root of valuation {}",
            e
        ))),
        1 => Ok(roots.into_iter().next().unwrap()),
        n => Err(Error::Precondition(format!(
            "embedding ambiguity: {} roots of valuation {}; disambiguation required",
            n, e
        ))),
    }
}

/// L-invariant of a quadratic character, fully automatic: with r the unique
/// valuation-h root of T^2 - xT + p^h, the conjugate root p^h/r has
/// logarithm -log_p(r), so L = 2 log_p(r)/h.
pub fn l_invariant_quadratic(d: i64, p: u64, prec: u32) -> Result<Padic> {
    let data = split_prime_power_generator(d, p)?;
    let poly = data.minimal_polynomial(p);
    let r = unique_valuation_root(&poly, data.exponent, p, prec)?;
    let log_r = r.iwasawa_log()?;
    Ok((log_r.clone() + log_r).div_int(data.exponent as i64))
}

/// L-invariant from supplied p-unit data. Degree 2 needs no labeling (the
/// conjugate root is determined); higher degree requires the sigma action.
pub fn l_invariant_from_unit(emb: &CharEmbedding, unit: &PUnitData) -> Result<Padic> {
    let p = emb.prime();
    let prec = emb.precision();
    let e = unit.valuation;
    if e == 0 {
        return Err(Error::Precondition("unit data needs valuation e >= 1".into()));
    }
    let deg = unit.coeffs.len().saturating_sub(1);
    let r0 = unique_valuation_root(&unit.coeffs, e, p, prec)?;
    let log_r0 = r0.iwasawa_log()?;

    if deg == 2 {
        // the other root carries weight psi(sigma)^(-1) = -1; no labeling needed
        let r1 = unique_valuation_root(&unit.coeffs, 0, p, prec)?;
        let log_r1 = r1.iwasawa_log()?;
        return Ok((log_r0 - log_r1).div_int(e as i64));
    }

    let sigma = unit.sigma.as_ref().ok_or_else(|| {
        Error::Precondition(
            "unit polynomials of degree > 2 need the sigma action to label conjugates".into(),
        )
    })?;
    // r_i = sigma^i(x_0) under the embedding, by iterating the polynomial
    let sigma_p: Vec<Padic> = sigma
        .poly
        .iter()
        .map(|c| Padic::from_ratio(c.numer(), c.denom(), p, prec))
        .collect::<Result<_>>()?;
    let f_p: Vec<Padic> = unit
        .coeffs
        .iter()
        .map(|c| Padic::from_bigint(c, p, prec))
        .collect();
    let w = emb.inverse().eval(sigma.artin_class as i64); // psi(sigma)^(-1)
    if w.is_zero_at_precision() {
        return Err(Error::InvalidInput(
            "sigma's Artin class is not coprime to the conductor".into(),
        ));
    }
    let mut acc = log_r0;
    let mut r = r0;
    let mut wpow = w.clone();
    for _ in 1..deg {
        r = eval_poly_padic(&sigma_p, &r);
        let check = eval_poly_padic(&f_p, &r);
        if !check.is_zero_at_precision() {
            return Err(Error::InvalidInput(
                "sigma action does not permute the roots of the unit polynomial".into(),
            ));
        }
        acc = acc + wpow.clone() * r.iwasawa_log()?;
        wpow = wpow * w.clone();
    }
    Ok(acc.div_int(e as i64))
}

/// Dispatch: automatic for quadratic characters, unit data otherwise.
pub fn l_invariant(emb: &CharEmbedding, unit: Option<&PUnitData>) -> Result<Padic> {
    if !emb.character().is_odd() {
        return Err(Error::Precondition("the L-invariant is defined for odd characters".into()));
    }
    if !emb.is_irregular() {
        return Err(Error::Precondition(format!(
            "chi({}) != 1: this point is regular; the trivial-zero setting requires chi(p) = 1",
            emb.prime()
        )));
    }
    match unit {
        Some(u) => l_invariant_from_unit(emb, u),
        None => {
            let d = emb.character().discriminant().ok_or_else(|| {
                Error::Precondition(
                    "automatic L-invariants exist only for quadratic characters; supply p-unit data"
                        .into(),
                )
            })?;
            l_invariant_quadratic(d, emb.prime(), emb.precision())
        }
    }
}

/// The nonvanishing guard gating every downstream division: L(phi),
/// L(phi^(-1)) and their sum must all be certified nonzero at precision.
#[derive(Clone, Debug)]
pub struct GuardedLInvariants {
    pub l_phi: Padic,
    pub l_phi_inv: Padic,
    pub sum: Padic,
}

pub fn nonvanishing_guard(l_phi: &Padic, l_phi_inv: &Padic) -> Result<GuardedLInvariants> {
    let sum = l_phi.clone() + l_phi_inv.clone();
    for (name, v) in [
        ("L(phi)", l_phi),
        ("L(phi^-1)", l_phi_inv),
        ("L(phi)+L(phi^-1)", &sum),
    ] {
        if !v.is_certainly_nonzero() {
            return Err(Error::InsufficientPrecision(format!(
                "{} indistinguishable from 0 at working precision; increase precision",
                name
            )));
        }
    }
    Ok(GuardedLInvariants {
        l_phi: l_phi.clone(),
        l_phi_inv: l_phi_inv.clone(),
        sum,
    })
}

/// Both L-invariants for the working character: equal for quadratic phi;
/// otherwise resolved from unit data labeled "phi" and "phi_inv".
pub fn l_invariant_pair(
    emb: &CharEmbedding,
    units: &[PUnitData],
) -> Result<(Padic, Padic)> {
    if emb.character().is_quadratic() {
        let l = l_invariant(emb, None)?;
        return Ok((l.clone(), l));
    }
    let find = |label: &str| -> Result<&PUnitData> {
        units.iter().find(|u| u.label == label).ok_or_else(|| {
            Error::Precondition(format!("missing p-unit data labeled \"{}\"", label))
        })
    };
    let l_phi = l_invariant_from_unit(emb, find("phi")?)?;
    let l_inv = l_invariant_from_unit(&emb.inverse(), find("phi_inv")?)?;
    Ok((l_phi, l_inv))
}
