//! Capped-precision elements of Q_p.
//!
//! A nonzero element is stored as `p^val * unit` with `unit` coprime to `p`
//! and known modulo `p^digits`; `digits` is the number of significant base-p
//! digits (relative precision), so the absolute precision is `val + digits`.
//! A number whose known digits all vanish is stored as a zero flag carrying
//! the absolute precision `abs` to which it is known to vanish; `abs = None`
//! marks an exact zero (the image of the rational 0), which is a different
//! state from "indistinguishable from 0 modulo p^abs".
//!
//! Precision propagates pessimistically:
//!   * addition keeps the minimum of the absolute precisions,
//!   * multiplication keeps the minimum of the relative precisions,
//!   * division by an element of valuation v keeps relative precision and
//!     shifts the valuation by -v.
//!
//! Equality is never bitwise: use [`Padic::agreement`] or
//! [`Padic::agrees_mod`] with an explicit threshold.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

#[derive(Clone, Debug)]
enum Repr {
    /// Indistinguishable from zero modulo p^abs; `None` means exactly zero.
    Zero { abs: Option<i64>, ctx: u32 },
    /// p^val * unit with p ∤ unit and unit < p^digits.
    Unit { val: i64, unit: BigUint, digits: u32 },
}

/// A capped-precision p-adic number.
#[derive(Clone, Debug)]
pub struct Padic {
    p: u64,
    repr: Repr,
}

/// Outcome of comparing two p-adic numbers.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Agreement {
    /// Difference is exactly zero.
    Exact,
    /// Difference vanishes modulo p^t as far as precision can tell.
    ZeroTo(i64),
    /// Difference is certified nonzero, of the given valuation.
    NonzeroAt(i64),
}

impl Agreement {
    /// Number of agreeing digits, `None` meaning "all of them".
    pub fn digits(&self) -> Option<i64> {
        match *self {
            Agreement::Exact => None,
            Agreement::ZeroTo(t) | Agreement::NonzeroAt(t) => Some(t),
        }
    }

    pub fn at_least(&self, t: i64) -> bool {
        match self.digits() {
            None => true,
            Some(d) => d >= t,
        }
    }
}

pub(crate) fn p_pow(p: u64, k: u32) -> BigUint {
    BigUint::from(p).pow(k)
}

fn strip_p(n: &mut BigUint, p: u64) -> i64 {
    let pb = BigUint::from(p);
    let mut v = 0i64;
    while !n.is_zero() {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            break;
        }
        *n = q;
        v += 1;
    }
    v
}

fn strip_p_int(n: &BigInt, p: u64) -> (i64, BigUint) {
    let mut m = n.magnitude().clone();
    let v = strip_p(&mut m, p);
    (v, m)
}

/// Modular inverse of `a` modulo `m` (gcd(a, m) = 1), by extended gcd.
fn mod_inverse(a: &BigUint, m: &BigUint) -> BigUint {
    let a = BigInt::from(a.clone());
    let m = BigInt::from(m.clone());
    let e = a.extended_gcd(&m);
    debug_assert!(e.gcd.is_one());
    let mut x = e.x % &m;
    if x.is_negative() {
        x += &m;
    }
    x.magnitude().clone()
}

impl Padic {
    fn new_unit(p: u64, val: i64, unit: BigUint, digits: u32) -> Self {
        debug_assert!(digits > 0);
        debug_assert!(!unit.is_zero());
        Padic {
            p,
            repr: Repr::Unit { val, unit, digits },
        }
    }

    /// Zero known to vanish modulo p^abs.
    pub fn zero_to(p: u64, abs: i64, ctx: u32) -> Self {
        Padic {
            p,
            repr: Repr::Zero { abs: Some(abs), ctx },
        }
    }

    /// The exact zero of Q_p.
    pub fn zero_exact(p: u64, ctx: u32) -> Self {
        Padic {
            p,
            repr: Repr::Zero { abs: None, ctx },
        }
    }

    pub fn one(p: u64, prec: u32) -> Self {
        Padic::new_unit(p, 0, BigUint::one(), prec)
    }

    /// Canonical image of an integer with `prec` significant digits.
    pub fn from_bigint(n: &BigInt, p: u64, prec: u32) -> Self {
        if n.is_zero() {
            return Padic::zero_exact(p, prec);
        }
        let (val, mut mag) = strip_p_int(n, p);
        let modulus = p_pow(p, prec);
        mag %= &modulus;
        if n.is_negative() && !mag.is_zero() {
            mag = &modulus - mag;
        }
        Padic::new_unit(p, val, mag, prec)
    }

    pub fn from_i64(n: i64, p: u64, prec: u32) -> Self {
        Padic::from_bigint(&BigInt::from(n), p, prec)
    }

    /// Canonical image of a/b in Q_p with `prec` significant digits.
    pub fn from_ratio(a: &BigInt, b: &BigInt, p: u64, prec: u32) -> Result<Self> {
        if b.is_zero() {
            return Err(Error::InvalidInput("division by zero denominator".into()));
        }
        if a.is_zero() {
            return Ok(Padic::zero_exact(p, prec));
        }
        let (va, ua) = strip_p_int(a, p);
        let (vb, ub) = strip_p_int(b, p);
        let modulus = p_pow(p, prec);
        let mut unit = (ua % &modulus) * mod_inverse(&(ub % &modulus), &modulus) % &modulus;
        if (a.is_negative()) != (b.is_negative()) {
            unit = &modulus - unit;
        }
        Ok(Padic::new_unit(p, va - vb, unit, prec))
    }

    /// Convenience wrapper for small numerator/denominator.
    pub fn from_ratio_i64(a: i64, b: i64, p: u64, prec: u32) -> Result<Self> {
        Padic::from_ratio(&BigInt::from(a), &BigInt::from(b), p, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation, `None` for a (possible) zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { .. } => None,
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// Significant digits of the unit part; context precision for zeros.
    pub fn digits(&self) -> u32 {
        match &self.repr {
            Repr::Zero { ctx, .. } => *ctx,
            Repr::Unit { digits, .. } => *digits,
        }
    }

    /// Absolute precision: the exponent below which all digits are known.
    /// `None` means the value is exact (only the exact zero qualifies).
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::Zero { abs, .. } => *abs,
            Repr::Unit { val, digits, .. } => Some(val + *digits as i64),
        }
    }

    /// True when the stored digits all vanish (zero flag, exact or capped).
    pub fn is_zero_at_precision(&self) -> bool {
        matches!(self.repr, Repr::Zero { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::Zero { abs: None, .. })
    }

    /// True when the number is provably nonzero at its stored precision.
    pub fn is_certainly_nonzero(&self) -> bool {
        matches!(self.repr, Repr::Unit { .. })
    }

    /// The unit part as an integer < p^digits (`None` for zeros).
    pub fn unit_part(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            Repr::Zero { .. } => None,
        }
    }

    /// Base-p digits of the unit part, little-endian, length `digits()`.
    pub fn unit_digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Zero { .. } => Vec::new(),
            Repr::Unit { unit, digits, .. } => {
                let mut out = Vec::with_capacity(*digits as usize);
                let pb = BigUint::from(self.p);
                let mut u = unit.clone();
                for _ in 0..*digits {
                    let (q, r) = u.div_rem(&pb);
                    out.push(r.to_u64().unwrap());
                    u = q;
                }
                out
            }
        }
    }

    fn assert_same_prime(&self, other: &Padic) {
        assert_eq!(
            self.p, other.p,
            "mixed primes in p-adic arithmetic: {} vs {}",
            self.p, other.p
        );
    }

    /// Truncate to absolute precision at most `abs`.
    pub fn cap_abs(&self, abs: i64) -> Padic {
        match &self.repr {
            Repr::Zero { abs: a, ctx } => {
                let a2 = match a {
                    None => abs,
                    Some(a) => (*a).min(abs),
                };
                Padic::zero_to(self.p, a2, *ctx)
            }
            Repr::Unit { val, unit, digits } => {
                if *val >= abs {
                    return Padic::zero_to(self.p, abs, *digits);
                }
                let d = ((abs - val) as u32).min(*digits);
                let u = unit % p_pow(self.p, d);
                Padic::normalized_from_digits(self.p, *val, u, d, *digits)
            }
        }
    }

    /// Build from `p^val * u` where `u` is known modulo `p^window` but may be
    /// divisible by p; re-normalizes, demoting to a zero flag when all known
    /// digits vanish.
    fn normalized_from_digits(p: u64, val: i64, mut u: BigUint, window: u32, ctx: u32) -> Padic {
        if u.is_zero() {
            return Padic::zero_to(p, val + window as i64, ctx);
        }
        let shift = strip_p(&mut u, p);
        if shift >= window as i64 {
            return Padic::zero_to(p, val + window as i64, ctx);
        }
        let digits = window - shift as u32;
        Padic::new_unit(p, val + shift, u % p_pow(p, digits), digits)
    }

    /// Multiplicative inverse; errors on a (possible) zero.
    pub fn invert(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::InsufficientPrecision(
                "inversion of a number indistinguishable from zero".into(),
            )),
            Repr::Unit { val, unit, digits } => {
                let m = p_pow(self.p, *digits);
                Ok(Padic::new_unit(self.p, -val, mod_inverse(unit, &m), *digits))
            }
        }
    }

    pub fn div(&self, other: &Padic) -> Result<Padic> {
        Ok(self.clone() * other.invert()?)
    }

    /// Exact division by a nonzero integer (valuation shifts, digits kept).
    pub fn div_int(&self, n: i64) -> Padic {
        assert!(n != 0, "division by the integer 0");
        let inv = Padic::from_i64(n, self.p, self.digits())
            .invert()
            .expect("nonzero integer is invertible");
        self.clone() * inv
    }

    pub fn pow_u64(&self, e: u64) -> Padic {
        let mut acc = Padic::one(self.p, self.digits());
        let mut base = self.clone();
        let mut e = e;
        if e == 0 {
            return acc;
        }
        loop {
            if e & 1 == 1 {
                acc = acc * base.clone();
            }
            e >>= 1;
            if e == 0 {
                break;
            }
            base = base.clone() * base;
        }
        acc
    }

    /// Compare modulo powers of p.
    pub fn agreement(&self, other: &Padic) -> Agreement {
        self.assert_same_prime(other);
        let d = self.clone() - other.clone();
        match d.repr {
            Repr::Zero { abs: None, .. } => Agreement::Exact,
            Repr::Zero { abs: Some(t), .. } => Agreement::ZeroTo(t),
            Repr::Unit { val, .. } => Agreement::NonzeroAt(val),
        }
    }

    /// "Agree modulo p^t": the difference has no nonzero digit below p^t.
    pub fn agrees_mod(&self, other: &Padic, t: i64) -> bool {
        self.agreement(other).at_least(t)
    }

    /// The Teichmuller lift: the unique (p-1)-st root of unity congruent to
    /// this valuation-0 unit modulo p, computed by iterating x -> x^p.
    pub fn teichmuller(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Unit { val: 0, unit, digits } => {
                let m = p_pow(self.p, *digits);
                let pb = BigUint::from(self.p);
                let mut t = unit.clone();
                // x -> x^p gains one digit of agreement with the root per step.
                for _ in 0..*digits {
                    let next = t.modpow(&pb, &m);
                    if next == t {
                        break;
                    }
                    t = next;
                }
                Ok(Padic::new_unit(self.p, 0, t, *digits))
            }
            Repr::Unit { .. } => Err(Error::Precondition(
                "Teichmuller lift requires valuation 0".into(),
            )),
            Repr::Zero { .. } => Err(Error::Precondition(
                "Teichmuller lift of a (possible) zero".into(),
            )),
        }
    }

    /// The principal-unit part <x> = u / teichmuller(u) of x = p^v u.
    pub fn principal_unit(&self) -> Result<Padic> {
        match &self.repr {
            Repr::Zero { .. } => Err(Error::Precondition(
                "principal unit of a (possible) zero".into(),
            )),
            Repr::Unit { unit, digits, .. } => {
                let u = Padic::new_unit(self.p, 0, unit.clone(), *digits);
                let w = u.teichmuller()?;
                u.div(&w)
            }
        }
    }

    /// The Iwasawa branch of the p-adic logarithm: log_p(p^v u) = log<u>,
    /// so log_p(p) = 0 and roots of unity map to 0.
    pub fn iwasawa_log(&self) -> Result<Padic> {
        let one = Padic::one(self.p, self.digits());
        let z = self.principal_unit()? - one;
        match &z.repr {
            Repr::Zero { abs, ctx } => {
                // <u> = 1 to the working precision.
                Ok(Padic {
                    p: self.p,
                    repr: Repr::Zero { abs: *abs, ctx: *ctx },
                })
            }
            Repr::Unit { val, digits, .. } => {
                let vz = *val;
                debug_assert!(vz >= 1);
                let target = vz + *digits as i64; // absolute precision of z
                // log(1+z) = sum (-1)^(k+1) z^k / k; the k-th term has
                // valuation >= k*vz - log_p(k), an increasing bound, so stop
                // once it clears the target.
                let mut sum = Padic::zero_exact(self.p, self.digits());
                let mut zpow = z.clone();
                let mut k = 1i64;
                loop {
                    let term = zpow.div_int(k);
                    sum = sum + if k % 2 == 1 { term } else { -term };
                    k += 1;
                    let log_k = (k as f64).ln() / (self.p as f64).ln();
                    if k * vz - log_k.floor() as i64 >= target {
                        break;
                    }
                    zpow = zpow * z.clone();
                }
                Ok(sum.cap_abs(target))
            }
        }
    }

    /// Render as a truncated sum of powers of p.
    pub fn digit_string(&self, max_terms: usize) -> String {
        match &self.repr {
            Repr::Zero { abs: None, .. } => "0".to_string(),
            Repr::Zero { abs: Some(t), .. } => format!("O({}^{})", self.p, t),
            Repr::Unit { val, digits, .. } => {
                let ds = self.unit_digits();
                let mut parts = Vec::new();
                for (i, d) in ds.iter().enumerate() {
                    if *d == 0 {
                        continue;
                    }
                    let e = val + i as i64;
                    parts.push(match e {
                        0 => format!("{}", d),
                        1 => format!("{}*{}", d, self.p),
                        _ => format!("{}*{}^{}", d, self.p, e),
                    });
                    if parts.len() >= max_terms {
                        parts.push("...".to_string());
                        break;
                    }
                }
                if parts.is_empty() {
                    parts.push("0".to_string());
                }
                format!("{} + O({}^{})", parts.join(" + "), self.p, val + *digits as i64)
            }
        }
    }
}

impl fmt::Display for Padic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.digit_string(6))
    }
}

/// Wire format: {"p", "valuation" (null for a zero flag), "unit_digits"
/// (base-p, little-endian), "precision" (significant digits; for zeros the
/// absolute precision of vanishing, null when exactly zero)}.
impl serde::Serialize for Padic {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = s.serialize_struct("Padic", 4)?;
        st.serialize_field("p", &self.p)?;
        st.serialize_field("valuation", &self.valuation())?;
        st.serialize_field("unit_digits", &self.unit_digits())?;
        let precision: Option<i64> = match &self.repr {
            Repr::Unit { digits, .. } => Some(*digits as i64),
            Repr::Zero { abs, .. } => *abs,
        };
        st.serialize_field("precision", &precision)?;
        st.end()
    }
}

impl Add for Padic {
    type Output = Padic;

    fn add(self, rhs: Padic) -> Padic {
        self.assert_same_prime(&rhs);
        let p = self.p;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { abs: None, .. }, _) => rhs,
            (_, Repr::Zero { abs: None, .. }) => self,
            (Repr::Zero { abs: Some(a), ctx }, Repr::Zero { abs: Some(b), ctx: c2 }) => {
                Padic::zero_to(p, (*a).min(*b), (*ctx).min(*c2))
            }
            (Repr::Zero { abs: Some(a), .. }, Repr::Unit { .. }) => rhs.cap_abs(*a),
            (Repr::Unit { .. }, Repr::Zero { abs: Some(b), .. }) => self.cap_abs(*b),
            (
                Repr::Unit { val: v1, unit: u1, digits: d1 },
                Repr::Unit { val: v2, unit: u2, digits: d2 },
            ) => {
                let t = (v1 + *d1 as i64).min(v2 + *d2 as i64);
                let v = (*v1).min(*v2);
                let window = (t - v) as u32;
                let m = p_pow(p, window);
                let a = (u1 * p_pow(p, (v1 - v) as u32)) % &m;
                let b = (u2 * p_pow(p, (v2 - v) as u32)) % &m;
                let s = (a + b) % &m;
                Padic::normalized_from_digits(p, v, s, window, (*d1).min(*d2))
            }
        }
    }
}

impl Neg for Padic {
    type Output = Padic;

    fn neg(self) -> Padic {
        match &self.repr {
            Repr::Zero { .. } => self,
            Repr::Unit { val, unit, digits } => {
                let m = p_pow(self.p, *digits);
                Padic::new_unit(self.p, *val, &m - unit, *digits)
            }
        }
    }
}

impl Sub for Padic {
    type Output = Padic;

    fn sub(self, rhs: Padic) -> Padic {
        self + (-rhs)
    }
}

impl Mul for Padic {
    type Output = Padic;

    fn mul(self, rhs: Padic) -> Padic {
        self.assert_same_prime(&rhs);
        let p = self.p;
        match (&self.repr, &rhs.repr) {
            (Repr::Zero { abs: None, ctx }, other) | (other, Repr::Zero { abs: None, ctx }) => {
                let c = (*ctx).min(match other {
                    Repr::Zero { ctx, .. } => *ctx,
                    Repr::Unit { digits, .. } => *digits,
                });
                Padic::zero_exact(p, c)
            }
            (Repr::Zero { abs: Some(a), ctx }, Repr::Zero { abs: Some(b), ctx: c2 }) => {
                Padic::zero_to(p, a + b, (*ctx).min(*c2))
            }
            (Repr::Zero { abs: Some(a), ctx }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs: Some(a), ctx }) => {
                Padic::zero_to(p, a + val, *ctx)
            }
            (
                Repr::Unit { val: v1, unit: u1, digits: d1 },
                Repr::Unit { val: v2, unit: u2, digits: d2 },
            ) => {
                let d = (*d1).min(*d2);
                let m = p_pow(p, d);
                Padic::new_unit(p, v1 + v2, (u1 * u2) % &m, d)
            }
        }
    }
}

/// Table of Iwasawa logarithms log_p(1), ..., log_p(n_max), filled
/// multiplicatively from the primes (log_p of the p-part is 0).
pub struct IwasawaLogTable {
    logs: Vec<Padic>,
}

impl IwasawaLogTable {
    pub fn new(p: u64, prec: u32, n_max: usize) -> Result<Self> {
        // smallest-prime-factor sieve
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
        let mut logs = Vec::with_capacity(n_max + 1);
        logs.push(Padic::zero_exact(p, prec)); // unused slot for n = 0
        if n_max >= 1 {
            logs.push(Padic::zero_exact(p, prec));
        }
        for n in 2..=n_max {
            let l = spf[n];
            let v = if l == n {
                if n as u64 == p {
                    Padic::zero_exact(p, prec)
                } else {
                    Padic::from_i64(n as i64, p, prec).iwasawa_log()?
                }
            } else {
                logs[l].clone() + logs[n / l].clone()
            };
            logs.push(v);
        }
        Ok(IwasawaLogTable { logs })
    }

    pub fn log(&self, n: usize) -> &Padic {
        &self.logs[n]
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn big(n: i64) -> BigInt {
        BigInt::from(n)
    }

    #[test]
    fn log_table_matches_direct_logs() {
        let t = IwasawaLogTable::new(5, 14, 30).unwrap();
        for n in [6usize, 7, 12, 25, 30] {
            let direct = Padic::from_i64(n as i64, 5, 14).iwasawa_log().unwrap();
            let tabled = t.log(n);
            if direct.is_zero_at_precision() {
                assert!(tabled.is_zero_at_precision(), "n = {}", n);
            } else {
                assert!(tabled.agrees_mod(&direct, 12), "n = {}", n);
            }
        }
    }

    #[test]
    fn from_rational_zero_sets_zero_flag() {
        let x = Padic::from_ratio(&big(0), &big(1), 7, 10).unwrap();
        assert!(x.is_zero_at_precision());
        assert!(x.is_exact_zero());
    }

    #[test]
    fn from_rational_identity_case() {
        let x = Padic::from_ratio(&big(7), &big(7), 5, 10).unwrap();
        assert_eq!(x.valuation(), Some(0));
        assert_eq!(x.unit_part().unwrap(), &BigUint::one());
    }

    #[test]
    fn from_rational_matches_extended_gcd_inverse() {
        // 1/3 in Q_7 at 4 digits: unit must be the inverse of 3 mod 7^4.
        let x = Padic::from_ratio(&big(1), &big(3), 7, 4).unwrap();
        assert_eq!(x.valuation(), Some(0));
        // oracle: brute-force search of the inverse
        let m = 7u64.pow(4);
        let inv = (1..m).find(|i| (i * 3) % m == 1).unwrap();
        assert_eq!(x.unit_part().unwrap(), &BigUint::from(inv));
    }

    #[test]
    fn from_rational_denominator_zero_errors() {
        assert!(Padic::from_ratio(&big(1), &big(0), 7, 4).is_err());
    }

    #[test]
    fn addition_tracks_absolute_precision() {
        let p = 5;
        let x = Padic::from_i64(1, p, 10); // abs prec 10
        let y = Padic::from_i64(25, p, 4); // val 2, abs prec 6
        let s = x + y;
        assert_eq!(s.valuation(), Some(0));
        assert_eq!(s.abs_precision(), Some(6));
    }

    #[test]
    fn cancellation_demotes_to_zero_flag() {
        let p = 5;
        let x = Padic::from_i64(17, p, 8);
        let d = x.clone() - x;
        assert!(d.is_zero_at_precision());
        assert!(!d.is_exact_zero());
        assert_eq!(d.abs_precision(), Some(8));
    }

    #[test]
    fn multiplication_keeps_relative_precision() {
        let p = 5;
        let x = Padic::from_i64(10, p, 8); // val 1
        let y = Padic::from_i64(15, p, 3); // val 1
        let z = x * y;
        assert_eq!(z.valuation(), Some(2));
        assert_eq!(z.digits(), 3);
    }

    #[test]
    fn division_shifts_valuation() {
        let p = 5;
        let x = Padic::from_i64(7, p, 10);
        let y = Padic::from_i64(50, p, 10); // val 2
        let q = x.div(&y).unwrap();
        assert_eq!(q.valuation(), Some(-2));
        assert_eq!(q.digits(), 10);
        let back = q * y;
        assert!(back.agrees_mod(&Padic::from_i64(7, p, 10), 9));
    }

    #[test]
    fn teichmuller_fixed_points() {
        let p = 7;
        let one = Padic::from_i64(1, p, 12);
        assert!(one.teichmuller().unwrap().agrees_mod(&one, 12));
        let minus_one = Padic::from_i64(-1, p, 12);
        assert!(minus_one.teichmuller().unwrap().agrees_mod(&minus_one, 12));
    }

    #[test]
    fn teichmuller_of_two_matches_iterated_power_oracle() {
        // omega_5(2) = lim 2^(5^k) mod 5^M
        let p = 5u64;
        let m = 12u32;
        let x = Padic::from_i64(2, p, m);
        let t = x.teichmuller().unwrap();
        let modulus = p_pow(p, m);
        let mut oracle = BigUint::from(2u32);
        for _ in 0..m {
            oracle = oracle.modpow(&BigUint::from(p), &modulus);
        }
        assert_eq!(t.unit_part().unwrap(), &oracle);
    }

    #[test]
    fn teichmuller_power_is_one() {
        let p = 13u64;
        for a in 2..13 {
            let t = Padic::from_i64(a, p, 20).teichmuller().unwrap();
            let tp = t.pow_u64(p - 1);
            assert!(tp.agrees_mod(&Padic::one(p, 20), 20), "a = {}", a);
        }
    }

    #[test]
    fn teichmuller_congruent_mod_p() {
        let p = 11u64;
        for a in 1..11 {
            let t = Padic::from_i64(a, p, 15).teichmuller().unwrap();
            assert!(t.agrees_mod(&Padic::from_i64(a, p, 15), 1));
        }
    }

    #[test]
    fn teichmuller_requires_valuation_zero() {
        let p = 5;
        assert!(Padic::from_i64(10, p, 8).teichmuller().is_err());
    }

    #[test]
    fn iwasawa_log_of_one_and_p_vanish() {
        let p = 5;
        let l1 = Padic::from_i64(1, p, 20).iwasawa_log().unwrap();
        assert!(l1.is_zero_at_precision());
        let lp = Padic::from_i64(5, p, 20).iwasawa_log().unwrap();
        assert!(lp.is_zero_at_precision());
        assert!(lp.abs_precision().unwrap() >= 20);
    }

    #[test]
    fn iwasawa_log_of_root_of_unity_vanishes() {
        let p = 7;
        let t = Padic::from_i64(3, p, 18).teichmuller().unwrap();
        let l = t.iwasawa_log().unwrap();
        assert!(l.is_zero_at_precision());
    }

    #[test]
    fn iwasawa_log_matches_partial_sum_oracle() {
        // log_5(6) = 5 - 5^2/2 + 5^3/3 - ...; compare against partial sums
        // accumulated in exact rational arithmetic, embedded at the end.
        let p = 5u64;
        let prec = 14u32;
        let l = Padic::from_i64(6, p, prec).iwasawa_log().unwrap();
        use num_rational::BigRational;
        let mut acc = BigRational::from(big(0));
        let mut zk = BigRational::from(big(1));
        let z = BigRational::from(big(5));
        for k in 1..40i64 {
            zk *= &z;
            let term = &zk / BigRational::from(big(k));
            if k % 2 == 1 {
                acc += term;
            } else {
                acc -= term;
            }
        }
        let oracle = Padic::from_ratio(acc.numer(), acc.denom(), p, prec).unwrap();
        assert!(l.agrees_mod(&oracle, 13), "log = {}, oracle = {}", l, oracle);
    }

    #[test]
    fn iwasawa_log_is_multiplicative() {
        let p = 7u64;
        let prec = 16u32;
        for (a, b) in [(2i64, 3i64), (10, 21), (6, 35), (4, 9)] {
            let la = Padic::from_i64(a, p, prec).iwasawa_log().unwrap();
            let lb = Padic::from_i64(b, p, prec).iwasawa_log().unwrap();
            let lab = Padic::from_i64(a * b, p, prec).iwasawa_log().unwrap();
            assert!(
                (la + lb).agrees_mod(&lab, 14),
                "failed for ({}, {})",
                a,
                b
            );
        }
    }

    #[test]
    fn precision_metatest_log_and_teichmuller() {
        // Re-running at higher precision must agree on the shared digits.
        let p = 5u64;
        let lo = Padic::from_i64(6, p, 12).iwasawa_log().unwrap();
        let hi = Padic::from_i64(6, p, 22).iwasawa_log().unwrap();
        let shared = lo.abs_precision().unwrap().min(hi.abs_precision().unwrap());
        assert!(shared >= 12);
        assert!(lo.agrees_mod(&hi, shared));

        let tlo = Padic::from_i64(3, p, 12).teichmuller().unwrap();
        let thi = Padic::from_i64(3, p, 22).teichmuller().unwrap();
        assert!(tlo.agrees_mod(&thi, 12));
    }

    #[test]
    fn agreement_reports_valuation_of_difference() {
        let p = 5;
        let x = Padic::from_i64(1, p, 10);
        let y = Padic::from_i64(1 + 125, p, 10);
        match x.agreement(&y) {
            Agreement::NonzeroAt(3) => {}
            other => panic!("expected NonzeroAt(3), got {:?}", other),
        }
        assert!(x.agrees_mod(&y, 3));
        assert!(!x.agrees_mod(&y, 4));
    }
}
