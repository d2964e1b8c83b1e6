//! Truncated power series ("jets"): polynomials of bounded degree with all
//! arithmetic performed modulo X^Mx.
//!
//! These model both the Iwasawa algebra variable X (series rings Lambda/X^Mx)
//! and the analytic variable s used to differentiate p-adic L-functions; the
//! coefficient ring is anything implementing [`Coeff`], including nested
//! series.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::padic::{Agreement, Padic};
use crate::ring::Coeff;

/// A power series truncated at degree `len - 1`; the length is the
/// truncation order Mx and is preserved by all ring operations.
#[derive(Clone, Debug)]
pub struct TruncatedSeries<C: Coeff> {
    coeffs: Vec<C>,
}

impl<C: Coeff> TruncatedSeries<C> {
    pub fn new(coeffs: Vec<C>) -> Self {
        assert!(!coeffs.is_empty(), "truncation order must be positive");
        TruncatedSeries { coeffs }
    }

    /// The constant series c + 0*X + ... of truncation `mx`.
    pub fn constant(c: C, mx: usize) -> Self {
        let z = c.zero_like();
        let mut coeffs = vec![z; mx];
        coeffs[0] = c;
        TruncatedSeries::new(coeffs)
    }

    /// The series X (zero when mx = 1).
    pub fn variable(like: &C, mx: usize) -> Self {
        let mut coeffs = vec![like.zero_like(); mx];
        if mx > 1 {
            coeffs[1] = like.one_like();
        }
        TruncatedSeries::new(coeffs)
    }

    pub fn zero(like: &C, mx: usize) -> Self {
        TruncatedSeries::new(vec![like.zero_like(); mx])
    }

    pub fn one(like: &C, mx: usize) -> Self {
        TruncatedSeries::constant(like.one_like(), mx)
    }

    /// Truncation order Mx.
    pub fn truncation(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeff(&self, k: usize) -> &C {
        &self.coeffs[k]
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn map<F: FnMut(&C) -> C>(&self, mut f: F) -> Self {
        TruncatedSeries::new(self.coeffs.iter().map(|c| f(c)).collect())
    }

    pub fn scale(&self, c: &C) -> Self {
        self.map(|x| x.clone() * c.clone())
    }

    pub fn is_zero_series(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero_elem())
    }

    fn assert_same_truncation(&self, other: &Self) {
        assert_eq!(
            self.coeffs.len(),
            other.coeffs.len(),
            "mixed truncation orders: {} vs {}",
            self.coeffs.len(),
            other.coeffs.len()
        );
    }

    /// Restrict to a smaller truncation order.
    pub fn truncate_to(&self, mx: usize) -> Self {
        assert!(mx >= 1 && mx <= self.coeffs.len());
        TruncatedSeries::new(self.coeffs[..mx].to_vec())
    }

    /// Divide by X^k, discarding the low coefficients (which the caller
    /// should have checked to vanish); the truncation order shrinks by k.
    pub fn shift_down(&self, k: usize) -> Self {
        assert!(k < self.coeffs.len());
        TruncatedSeries::new(self.coeffs[k..].to_vec())
    }

    /// Termwise derivative, a series of truncation order Mx - 1.
    pub fn derivative(&self) -> Self {
        if self.coeffs.len() == 1 {
            return TruncatedSeries::new(vec![self.coeffs[0].zero_like()]);
        }
        let d = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(k, c)| c.clone() * c.from_i64_like(k as i64))
            .collect();
        TruncatedSeries::new(d)
    }

    /// Substitute `inner` for the variable; `inner` must have zero constant
    /// term, so the composition is again a polynomial mod X^Mx.
    pub fn compose(&self, inner: &Self) -> Result<Self> {
        self.assert_same_truncation(inner);
        if !inner.coeffs[0].is_zero_elem() {
            return Err(Error::Precondition(
                "series composition needs an inner series with zero constant term".into(),
            ));
        }
        // Horner from the top coefficient down.
        let mx = self.coeffs.len();
        let mut acc = TruncatedSeries::constant(self.coeffs[mx - 1].clone(), mx);
        for k in (0..mx - 1).rev() {
            acc = acc * inner.clone();
            acc.coeffs[0] = acc.coeffs[0].clone() + self.coeffs[k].clone();
        }
        Ok(acc)
    }

    /// Evaluate at a point of the coefficient ring by Horner's rule.
    pub fn evaluate(&self, x: &C) -> C {
        let mut acc = self.coeffs[self.coeffs.len() - 1].clone();
        for k in (0..self.coeffs.len() - 1).rev() {
            acc = acc * x.clone() + self.coeffs[k].clone();
        }
        acc
    }
}

impl<C: Coeff> Add for TruncatedSeries<C> {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        self.assert_same_truncation(&rhs);
        TruncatedSeries::new(
            self.coeffs
                .into_iter()
                .zip(rhs.coeffs)
                .map(|(a, b)| a + b)
                .collect(),
        )
    }
}

impl<C: Coeff> Sub for TruncatedSeries<C> {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl<C: Coeff> Neg for TruncatedSeries<C> {
    type Output = Self;

    fn neg(self) -> Self {
        TruncatedSeries::new(self.coeffs.into_iter().map(|c| -c).collect())
    }
}

impl<C: Coeff> Mul for TruncatedSeries<C> {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        self.assert_same_truncation(&rhs);
        let mx = self.coeffs.len();
        let mut out = Vec::with_capacity(mx);
        for k in 0..mx {
            let mut acc = self.coeffs[0].zero_like();
            for i in 0..=k {
                acc = acc + self.coeffs[i].clone() * rhs.coeffs[k - i].clone();
            }
            out.push(acc);
        }
        TruncatedSeries::new(out)
    }
}

impl<C: Coeff> fmt::Display for TruncatedSeries<C> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero_elem() && self.coeffs.len() > 1 {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            match k {
                0 => write!(f, "({})", c)?,
                1 => write!(f, "({})*X", c)?,
                _ => write!(f, "({})*X^{}", c, k)?,
            }
            first = false;
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(X^{})", self.coeffs.len())
    }
}

impl<C: Coeff> Coeff for TruncatedSeries<C> {
    fn zero_like(&self) -> Self {
        TruncatedSeries::zero(&self.coeffs[0], self.coeffs.len())
    }

    fn one_like(&self) -> Self {
        TruncatedSeries::one(&self.coeffs[0], self.coeffs.len())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        TruncatedSeries::constant(self.coeffs[0].from_i64_like(n), self.coeffs.len())
    }

    fn div_i64(&self, n: i64) -> Self {
        self.map(|c| c.div_i64(n))
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero_series()
    }
}

/// Rings in which capped-precision p-adic numbers embed: Q_p itself and
/// truncated series over it. The extra methods are what the p-adic L-function
/// evaluator needs to run generically over scalars and jets.
pub trait PadicAlgebra: Coeff {
    fn prime(&self) -> u64;
    /// Embed a scalar, taking ring context (truncation order) from `self`.
    fn embed_padic(&self, x: &Padic) -> Self;
    /// Lower bound for the valuations of all coefficients; `i64::MAX` for an
    /// exact zero.
    fn min_valuation(&self) -> i64;
    /// Account an error of size O(p^abs) on every coefficient.
    fn widen_error(&self, abs: i64) -> Self;
    /// Multiplicative inverse, when certified invertible at precision.
    fn invert_elem(&self) -> Result<Self>;
}

impl PadicAlgebra for Padic {
    fn prime(&self) -> u64 {
        Padic::prime(self)
    }

    fn embed_padic(&self, x: &Padic) -> Self {
        assert_eq!(self.prime(), x.prime(), "mixed primes in embedding");
        x.clone()
    }

    fn min_valuation(&self) -> i64 {
        match (self.valuation(), self.abs_precision()) {
            (Some(v), _) => v,
            (None, Some(a)) => a,
            (None, None) => i64::MAX,
        }
    }

    fn widen_error(&self, abs: i64) -> Self {
        self.clone() + Padic::zero_to(self.prime(), abs, self.digits())
    }

    fn invert_elem(&self) -> Result<Self> {
        self.invert()
    }
}

impl PadicAlgebra for TruncatedSeries<Padic> {
    fn prime(&self) -> u64 {
        self.coeffs[0].prime()
    }

    fn embed_padic(&self, x: &Padic) -> Self {
        TruncatedSeries::constant(x.clone(), self.coeffs.len())
    }

    fn min_valuation(&self) -> i64 {
        self.coeffs
            .iter()
            .map(PadicAlgebra::min_valuation)
            .min()
            .expect("nonempty series")
    }

    fn widen_error(&self, abs: i64) -> Self {
        self.map(|c| c.widen_error(abs))
    }

    fn invert_elem(&self) -> Result<Self> {
        let f0_inv = self.coeffs[0].invert().map_err(|_| {
            Error::InsufficientPrecision(
                "series inversion: constant term indistinguishable from zero".into(),
            )
        })?;
        let mx = self.coeffs.len();
        let mut g: Vec<Padic> = Vec::with_capacity(mx);
        g.push(f0_inv.clone());
        for k in 1..mx {
            let mut acc = self.coeffs[0].zero_like();
            for i in 1..=k {
                acc = acc + self.coeffs[i].clone() * g[k - i].clone();
            }
            g.push(-(f0_inv.clone() * acc));
        }
        Ok(TruncatedSeries::new(g))
    }
}

impl TruncatedSeries<Padic> {
    /// Componentwise comparison; reports the weakest agreement over all
    /// coefficients.
    pub fn agreement(&self, other: &Self) -> Agreement {
        self.assert_same_truncation(other);
        let mut worst = Agreement::Exact;
        for (a, b) in self.coeffs.iter().zip(other.coeffs.iter()) {
            let ag = a.agreement(b);
            worst = match (worst, ag) {
                (Agreement::Exact, x) => x,
                (x, Agreement::Exact) => x,
                (Agreement::NonzeroAt(u), Agreement::NonzeroAt(v)) => {
                    Agreement::NonzeroAt(u.min(v))
                }
                (Agreement::NonzeroAt(u), Agreement::ZeroTo(v))
                | (Agreement::ZeroTo(v), Agreement::NonzeroAt(u)) => {
                    if u <= v {
                        Agreement::NonzeroAt(u)
                    } else {
                        Agreement::ZeroTo(v)
                    }
                }
                (Agreement::ZeroTo(u), Agreement::ZeroTo(v)) => Agreement::ZeroTo(u.min(v)),
            };
        }
        worst
    }

    pub fn agrees_mod(&self, other: &Self, t: i64) -> bool {
        self.agreement(other).at_least(t)
    }
}

/// exp(z) = sum z^m / m! for z with all coefficient valuations >= 1; the tail
/// below O(p^target_abs) is accounted as an explicit error term.
pub fn exp_nilpotent<C: PadicAlgebra>(z: &C, target_abs: i64) -> Result<C> {
    let v = z.min_valuation();
    if v < 1 {
        return Err(Error::Precondition(format!(
            "exp requires valuation >= 1, got {}",
            v
        )));
    }
    let p = z.prime();
    let mut sum = z.one_like();
    let mut term = z.one_like();
    let mut m = 1i64;
    loop {
        term = term * z.clone();
        term = term.div_i64(m);
        if term.is_zero_elem() {
            sum = sum + term;
            break;
        }
        sum = sum + term.clone();
        m += 1;
        // ord_p(m!) <= m/(p-1) + log_p(m); the term bound m*v - ord_p(m!)
        // is eventually increasing, so stop once it clears the target.
        let ord_fact = (m / (p as i64 - 1)) + ((m as f64).ln() / (p as f64).ln()).ceil() as i64;
        if m * v - ord_fact >= target_abs {
            sum = sum.widen_error(target_abs);
            break;
        }
        if m > 10_000 {
            return Err(Error::Internal("exp series failed to terminate".into()));
        }
    }
    Ok(sum)
}

/// u^e for a principal unit u (u = 1 mod p) and exponent e in the algebra C:
/// u^e = exp(e * log u).
pub fn principal_pow<C: PadicAlgebra>(u: &Padic, e: &C, target_abs: i64) -> Result<C> {
    let l = u.iwasawa_log()?;
    exp_nilpotent(&(e.clone() * e.embed_padic(&l)), target_abs)
}

/// The binomial series (1+X)^alpha = sum_k C(alpha, k) X^k mod X^mx, with
/// C(alpha, k) = alpha (alpha-1) ... (alpha-k+1) / k!.
pub fn binomial_power(alpha: &Padic, mx: usize) -> TruncatedSeries<Padic> {
    let mut coeffs = Vec::with_capacity(mx);
    coeffs.push(alpha.one_like());
    let mut c = alpha.one_like();
    for k in 1..mx {
        c = c * (alpha.clone() - alpha.from_i64_like(k as i64 - 1));
        c = c.div_i64(k as i64);
        coeffs.push(c.clone());
    }
    TruncatedSeries::new(coeffs)
}

/// log(1+X) = X - X^2/2 + X^3/3 - ... mod X^mx over any coefficient ring.
pub fn log_one_plus_x<C: Coeff>(like: &C, mx: usize) -> TruncatedSeries<C> {
    let mut coeffs = vec![like.zero_like()];
    for k in 1..mx {
        let c = like.one_like().div_i64(k as i64);
        coeffs.push(if k % 2 == 1 { c } else { -c });
    }
    TruncatedSeries::new(coeffs)
}

/// exp(X) = sum X^k / k! mod X^mx over any coefficient ring.
pub fn exp_x<C: Coeff>(like: &C, mx: usize) -> TruncatedSeries<C> {
    let mut coeffs = vec![like.one_like()];
    let mut fact = 1i64;
    for k in 1..mx {
        fact = fact.checked_mul(k as i64).expect("factorial overflow");
        coeffs.push(like.one_like().div_i64(fact));
    }
    TruncatedSeries::new(coeffs)
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;
    use num_rational::BigRational;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    fn rat_series(vals: &[(i64, i64)]) -> TruncatedSeries<BigRational> {
        TruncatedSeries::new(vals.iter().map(|&(n, d)| rat(n, d)).collect())
    }

    #[test]
    fn derivative_of_one_plus_x() {
        let s = rat_series(&[(1, 1), (1, 1), (0, 1)]);
        let d = s.derivative();
        assert_eq!(d.truncation(), 2);
        assert_eq!(d.coeff(0), &rat(1, 1));
        assert!(d.coeff(1).is_zero_elem());
    }

    #[test]
    fn compose_substitutes_x_squared() {
        // (1 + X + X^2) o (X^2) = 1 + X^2 mod X^3
        let outer = rat_series(&[(1, 1), (1, 1), (1, 1)]);
        let inner = rat_series(&[(0, 1), (0, 1), (1, 1)]);
        let c = outer.compose(&inner).unwrap();
        assert_eq!(c.coeff(0), &rat(1, 1));
        assert!(c.coeff(1).is_zero_elem());
        assert_eq!(c.coeff(2), &rat(1, 1));
    }

    #[test]
    fn compose_rejects_nonzero_constant_term() {
        let outer = rat_series(&[(1, 1), (1, 1)]);
        let inner = rat_series(&[(1, 1), (1, 1)]);
        assert!(outer.compose(&inner).is_err());
    }

    #[test]
    fn exp_compose_log_is_one_plus_x() {
        // exact rational check of the inverse pair up to X^8
        let mx = 8;
        let one = rat(1, 1);
        let e = exp_x(&one, mx);
        let l = log_one_plus_x(&one, mx);
        let c = e.compose(&l).unwrap();
        assert_eq!(c.coeff(0), &rat(1, 1));
        assert_eq!(c.coeff(1), &rat(1, 1));
        for k in 2..mx {
            assert!(c.coeff(k).is_zero_elem(), "coefficient {} should vanish", k);
        }
    }

    #[test]
    fn binomial_power_integer_exponent() {
        let p = 5;
        let two = Padic::from_i64(2, p, 12);
        let s = binomial_power(&two, 3);
        assert!(s.coeff(0).agrees_mod(&Padic::one(p, 12), 12));
        assert!(s.coeff(1).agrees_mod(&two, 12));
        assert!(s.coeff(2).agrees_mod(&Padic::one(p, 12), 12));
    }

    #[test]
    fn binomial_power_of_zero_is_one() {
        let p = 7;
        let zero = Padic::zero_exact(p, 10);
        let s = binomial_power(&zero, 4);
        assert!(s.coeff(0).agrees_mod(&Padic::one(p, 10), 10));
        for k in 1..4 {
            assert!(s.coeff(k).is_zero_at_precision());
        }
    }

    #[test]
    fn binomial_power_inverse_pair() {
        // (1+X)^a * (1+X)^(-a) = 1 + O(X^4), with a a genuine log ratio
        let p = 5u64;
        let prec = 16u32;
        let num = Padic::from_i64(2, p, prec).iwasawa_log().unwrap();
        let den = Padic::from_i64(6, p, prec).iwasawa_log().unwrap();
        let alpha = num.div(&den).unwrap();
        let s1 = binomial_power(&alpha, 4);
        let s2 = binomial_power(&(-alpha), 4);
        let prod = s1 * s2;
        let one = TruncatedSeries::one(&Padic::one(p, prec), 4);
        assert!(prod.agrees_mod(&one, 10));
    }

    #[test]
    fn binomial_power_is_a_homomorphism() {
        let p = 7u64;
        let prec = 14u32;
        for (a, b) in [(3i64, 4i64), (-2, 9), (10, -10), (1, 1)] {
            let pa = Padic::from_i64(a, p, prec);
            let pb = Padic::from_i64(b, p, prec);
            let lhs = binomial_power(&(pa.clone() + pb.clone()), 5);
            let rhs = binomial_power(&pa, 5) * binomial_power(&pb, 5);
            assert!(lhs.agrees_mod(&rhs, 10), "failed for ({}, {})", a, b);
        }
    }

    #[test]
    fn series_inversion_round_trip() {
        let p = 5u64;
        let prec = 14u32;
        let f = TruncatedSeries::new(vec![
            Padic::from_i64(2, p, prec),
            Padic::from_i64(3, p, prec),
            Padic::from_i64(-1, p, prec),
            Padic::from_i64(7, p, prec),
        ]);
        let g = f.invert_elem().unwrap();
        let one = TruncatedSeries::one(&Padic::one(p, prec), 4);
        assert!((f * g).agrees_mod(&one, 12));
    }

    #[test]
    fn exp_nilpotent_matches_series_on_jets() {
        // exp(X * c) for c of valuation 1: coefficients c^m / m!
        let p = 5u64;
        let prec = 14u32;
        let c = Padic::from_i64(10, p, prec);
        let x = TruncatedSeries::variable(&Padic::one(p, prec), 4);
        let z = x.scale(&c);
        let e = exp_nilpotent(&z, prec as i64).unwrap();
        assert!(e.coeff(0).agrees_mod(&Padic::one(p, prec), 10));
        assert!(e.coeff(1).agrees_mod(&c, 10));
        let c2half = (c.clone() * c.clone()).div_int(2);
        assert!(e.coeff(2).agrees_mod(&c2half, 10));
    }

    #[test]
    fn exp_nilpotent_scalar_agrees_with_log_inverse() {
        // exp(log u) = u for a principal unit u
        let p = 7u64;
        let prec = 15u32;
        let u = Padic::from_i64(1 + 7 * 3, p, prec);
        let l = u.iwasawa_log().unwrap();
        let back = exp_nilpotent(&l, prec as i64).unwrap();
        assert!(back.agrees_mod(&u, 14));
    }

    #[test]
    fn nested_series_coefficients_work() {
        // series in s whose coefficients are series in X
        let p = 5u64;
        let inner_like = Padic::one(p, 10);
        let x = TruncatedSeries::variable(&inner_like, 3);
        let s = TruncatedSeries::variable(&x, 3);
        let sq = s.clone() * s;
        assert!(sq.coeff(0).is_zero_elem());
        assert!(sq.coeff(1).is_zero_elem());
        assert!(sq.coeff(2).coeff(0).agrees_mod(&Padic::one(p, 10), 10));
    }
}
