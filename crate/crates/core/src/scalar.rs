//! Exact scalars and the binomial coefficients used throughout the mode calculus.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

/// Exact rational scalar.
pub type Q = BigRational;

pub fn q_int(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn q_frac(num: i64, den: i64) -> Q {
    Q::new(BigInt::from(num), BigInt::from(den))
}

/// Generalised binomial coefficient `C(n, k)` for any integer `n` and `k >= 0`.
pub fn binom(n: i64, k: u32) -> BigInt {
    let mut num = BigInt::one();
    let mut den = BigInt::one();
    for i in 0..i64::from(k) {
        num *= BigInt::from(n - i);
        den *= BigInt::from(i + 1);
    }
    num / den
}

pub fn binom_q(n: i64, k: u32) -> Q {
    Q::from_integer(binom(n, k))
}

/// `(-1)^k` as a rational.
pub fn sign(k: i64) -> Q {
    if k.rem_euclid(2) == 0 {
        Q::one()
    } else {
        -Q::one()
    }
}

pub fn is_zero(q: &Q) -> bool {
    q.is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn binomials_with_negative_top() {
        assert_eq!(binom(-1, 3), BigInt::from(-1));
        assert_eq!(binom(-2, 2), BigInt::from(3));
        assert_eq!(binom(5, 2), BigInt::from(10));
        assert_eq!(binom(2, 3), BigInt::from(0));
        assert_eq!(binom(7, 0), BigInt::from(1));
    }
}
