//! The coefficient-ring abstraction shared by series and q-expansions.
//!
//! Containers in this crate (truncated power series, q-expansion tables) are
//! generic over their scalars. Exact rationals implement [`Coeff`] through
//! their `num-traits` instances; [`Padic`] cannot use the contextless
//! `Zero::zero()` / `One::one()` constructors because every p-adic number
//! carries a prime and a precision, so the trait derives fresh constants from
//! an existing element instead.

use std::fmt::{Debug, Display};
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{FromPrimitive, One, Zero};

use crate::padic::Padic;

/// A commutative-ring element usable as a series or q-expansion coefficient.
pub trait Coeff:
    Clone + Debug + Display + Add<Output = Self> + Sub<Output = Self> + Mul<Output = Self> + Neg<Output = Self>
{
    /// Additive identity in the same ring context as `self`.
    fn zero_like(&self) -> Self;
    /// Multiplicative identity in the same ring context as `self`.
    fn one_like(&self) -> Self;
    /// Canonical image of an integer in the same ring context as `self`.
    fn from_i64_like(&self, n: i64) -> Self;
    /// Division by a nonzero integer (exact in all rings used here).
    fn div_i64(&self, n: i64) -> Self;
    /// Whether the element is (indistinguishable from) zero.
    fn is_zero_elem(&self) -> bool;
}

impl Coeff for BigRational {
    fn zero_like(&self) -> Self {
        BigRational::zero()
    }

    fn one_like(&self) -> Self {
        BigRational::one()
    }

    fn from_i64_like(&self, n: i64) -> Self {
        BigRational::from_i64(n).unwrap()
    }

    fn div_i64(&self, n: i64) -> Self {
        assert!(n != 0, "division by the integer 0");
        self / BigRational::from(BigInt::from(n))
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero()
    }
}

impl Coeff for Padic {
    fn zero_like(&self) -> Self {
        Padic::zero_exact(self.prime(), self.digits())
    }

    fn one_like(&self) -> Self {
        Padic::one(self.prime(), self.digits())
    }

    fn from_i64_like(&self, n: i64) -> Self {
        Padic::from_i64(n, self.prime(), self.digits())
    }

    fn div_i64(&self, n: i64) -> Self {
        self.div_int(n)
    }

    fn is_zero_elem(&self) -> bool {
        self.is_zero_at_precision()
    }
}
