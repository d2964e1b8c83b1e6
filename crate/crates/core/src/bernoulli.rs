//! Ordinary Bernoulli numbers and Bernoulli polynomials in exact rational
//! arithmetic (convention B_1 = -1/2, i.e. the generating function
//! t/(e^t - 1)). Exactness here isolates p-adic precision loss to the
//! genuinely p-adic steps downstream.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Binomial coefficient C(n, k) as an exact integer.
pub fn binomial(n: u64, k: u64) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..k {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

/// B_0, ..., B_n by the defining recurrence sum_{j<=m} C(m+1, j) B_j = 0.
pub fn bernoulli_numbers(n: u64) -> Vec<BigRational> {
    let mut b: Vec<BigRational> = Vec::with_capacity(n as usize + 1);
    b.push(BigRational::one());
    for m in 1..=n {
        let mut acc = BigRational::zero();
        for j in 0..m {
            acc += BigRational::from(binomial(m + 1, j)) * &b[j as usize];
        }
        b.push(-acc / BigRational::from(BigInt::from(m + 1)));
    }
    b
}

/// Bernoulli polynomial value B_k(x) = sum_j C(k, j) B_j x^(k-j).
pub fn bernoulli_polynomial(k: u64, x: &BigRational, numbers: &[BigRational]) -> BigRational {
    assert!(numbers.len() as u64 > k, "Bernoulli table too short");
    let mut acc = BigRational::zero();
    let mut xpow = BigRational::one();
    // iterate j from k down to 0 so the power of x grows from x^0
    for j in (0..=k).rev() {
        acc += BigRational::from(binomial(k, j)) * &numbers[j as usize] * &xpow;
        xpow *= x;
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn rat(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn small_bernoulli_numbers() {
        let b = bernoulli_numbers(12);
        assert_eq!(b[0], rat(1, 1));
        assert_eq!(b[1], rat(-1, 2));
        assert_eq!(b[2], rat(1, 6));
        assert_eq!(b[3], rat(0, 1));
        assert_eq!(b[4], rat(-1, 30));
        assert_eq!(b[12], rat(-691, 2730));
    }

    #[test]
    fn bernoulli_polynomial_values() {
        let b = bernoulli_numbers(4);
        // B_1(x) = x - 1/2
        assert_eq!(bernoulli_polynomial(1, &rat(1, 4), &b), rat(-1, 4));
        assert_eq!(bernoulli_polynomial(1, &rat(3, 4), &b), rat(1, 4));
        // B_2(x) = x^2 - x + 1/6
        assert_eq!(bernoulli_polynomial(2, &rat(1, 2), &b), rat(-1, 12));
        // difference identity B_k(x+1) - B_k(x) = k x^(k-1)
        let x = rat(3, 7);
        let lhs = bernoulli_polynomial(3, &(x.clone() + rat(1, 1)), &b)
            - bernoulli_polynomial(3, &x, &b);
        assert_eq!(lhs, rat(3, 1) * x.clone() * x);
    }
}
