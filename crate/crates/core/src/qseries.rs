//! Truncated power series in `q` with exact integer coefficients, partition
//! counts, and the closed-form critical-level characters.

use std::fmt;
use std::ops::{Add, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

/// A power series `Σ_{j ≤ order} c_j q^j`, truncated at `order` (inclusive).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QSeries {
    coeffs: Vec<BigInt>,
}

impl QSeries {
    pub fn zero(order: usize) -> Self {
        QSeries { coeffs: vec![BigInt::zero(); order + 1] }
    }

    pub fn one(order: usize) -> Self {
        let mut s = Self::zero(order);
        s.coeffs[0] = BigInt::one();
        s
    }

    /// Builds a series from explicit coefficients; `order = coeffs.len() - 1`.
    pub fn from_coeffs<I, T>(coeffs: I) -> Self
    where
        I: IntoIterator<Item = T>,
        T: Into<BigInt>,
    {
        let coeffs: Vec<BigInt> = coeffs.into_iter().map(Into::into).collect();
        assert!(!coeffs.is_empty(), "a series needs at least the q^0 coefficient");
        QSeries { coeffs }
    }

    /// `1 / (1 - q^step)` truncated at `order`.
    pub fn geometric(step: usize, order: usize) -> Self {
        assert!(step > 0);
        let mut s = Self::zero(order);
        for j in (0..=order).step_by(step) {
            s.coeffs[j] = BigInt::one();
        }
        s
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    /// Coefficient of `q^j`; zero beyond the truncation order.
    pub fn coeff(&self, j: usize) -> BigInt {
        self.coeffs.get(j).cloned().unwrap_or_default()
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn set_coeff(&mut self, j: usize, value: BigInt) {
        self.coeffs[j] = value;
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Zero::is_zero)
    }

    pub fn truncate(&self, order: usize) -> Self {
        let mut s = Self::zero(order);
        for (j, c) in self.coeffs.iter().enumerate().take(order + 1) {
            s.coeffs[j] = c.clone();
        }
        s
    }

    fn check_order(&self, other: &Self) -> Result<()> {
        if self.order() != other.order() {
            return Err(Error::OrderMismatch { left: self.order(), right: other.order() });
        }
        Ok(())
    }

    pub fn try_add(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a + b).collect();
        Ok(QSeries { coeffs })
    }

    pub fn try_sub(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let coeffs = self.coeffs.iter().zip(&other.coeffs).map(|(a, b)| a - b).collect();
        Ok(QSeries { coeffs })
    }

    /// Truncated product. Fails when the orders differ.
    pub fn series_mul(&self, other: &Self) -> Result<Self> {
        self.check_order(other)?;
        let order = self.order();
        let mut out = Self::zero(order);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                out.coeffs[i + j] += a * b;
            }
        }
        Ok(out)
    }

    /// Inverse of a series whose constant term is `±1`.
    pub fn invert_unit(&self) -> Result<Self> {
        let c0 = &self.coeffs[0];
        if !(c0.is_one() || (-c0).is_one()) {
            return Err(Error::Domain("series constant term is not a unit".into()));
        }
        let order = self.order();
        let mut inv = Self::zero(order);
        inv.coeffs[0] = c0.clone();
        for k in 1..=order {
            let mut acc = BigInt::zero();
            for j in 1..=k {
                acc += &self.coeffs[j] * &inv.coeffs[k - j];
            }
            // c0 = ±1, so dividing by c0 is multiplying by c0
            inv.coeffs[k] = -(acc * c0);
        }
        Ok(inv)
    }

    pub fn scale(&self, factor: &BigInt) -> Self {
        QSeries { coeffs: self.coeffs.iter().map(|c| c * factor).collect() }
    }

    /// Multiplication by `q^shift`, keeping the truncation order.
    pub fn shift(&self, shift: usize) -> Self {
        let order = self.order();
        let mut out = Self::zero(order);
        for j in shift..=order {
            out.coeffs[j] = self.coeffs[j - shift].clone();
        }
        out
    }
}

impl Add for &QSeries {
    type Output = QSeries;
    fn add(self, rhs: &QSeries) -> QSeries {
        self.try_add(rhs).expect("series order mismatch")
    }
}

impl Sub for &QSeries {
    type Output = QSeries;
    fn sub(self, rhs: &QSeries) -> QSeries {
        self.try_sub(rhs).expect("series order mismatch")
    }
}

impl Neg for &QSeries {
    type Output = QSeries;
    fn neg(self) -> QSeries {
        QSeries { coeffs: self.coeffs.iter().map(|c| -c).collect() }
    }
}

impl fmt::Display for QSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let (neg, abs) = (c.is_negative(), c.abs());
            if first {
                if neg {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {} ", if neg { '-' } else { '+' })?;
            }
            first = false;
            match j {
                0 => write!(f, "{abs}")?,
                _ if abs.is_one() => {}
                _ => write!(f, "{abs}")?,
            }
            match j {
                0 => {}
                1 => write!(f, "q")?,
                _ => write!(f, "q^{j}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(q^{})", self.order() + 1)
    }
}

impl Serialize for QSeries {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let as_text: Vec<String> = self.coeffs.iter().map(ToString::to_string).collect();
        as_text.serialize(serializer)
    }
}

/// `∏_{j≥1} (1 - q^j)^{-2}` truncated at `order`.
pub fn eta_inverse_squared(order: usize) -> QSeries {
    let mut acc = QSeries::one(order);
    for j in 1..=order {
        let g = QSeries::geometric(j, order);
        acc = acc.series_mul(&g).and_then(|s| s.series_mul(&g)).expect("shared order");
    }
    acc
}

/// Number of 2-colored partitions of `j`.
///
/// Uses the divisor-sum recurrence `j·p(j) = Σ_{k=1}^{j} 2σ(k) p(j-k)`, which
/// does not go through the product expansion.
pub fn count_2colored(j: i64) -> Result<BigInt> {
    if j < 0 {
        return Err(Error::Domain(format!("partition count of negative integer {j}")));
    }
    let j = j as usize;
    let sigma = |k: usize| -> BigInt { (1..=k).filter(|d| k.is_multiple_of(*d)).map(BigInt::from).sum() };
    let mut p = vec![BigInt::one()];
    for m in 1..=j {
        let mut acc = BigInt::zero();
        for k in 1..=m {
            acc += sigma(k) * 2 * &p[m - k];
        }
        p.push(acc / BigInt::from(m));
    }
    Ok(p[j].clone())
}

fn check_nonneg(n: i64, what: &str) -> Result<usize> {
    if n < 0 {
        return Err(Error::Domain(format!(
            "{what} requires n >= 0, got {n}; use the reflected weight -n-2"
        )));
    }
    Ok(n as usize)
}

/// Character of the irreducible critical-level module `L_n`, `n ≥ 0`:
/// `(n+1)/(1-q^{n+1}) · ∏(1-q^j)^{-2}`.
pub fn char_l(n: i64, order: usize) -> Result<QSeries> {
    let n = check_nonneg(n, "char_L")?;
    let geo = QSeries::geometric(n + 1, order);
    let base = geo.series_mul(&eta_inverse_squared(order))?;
    Ok(base.scale(&BigInt::from(n + 1)))
}

/// Character of `H^1(P^1, O(n)^ch)` for `n ≥ 0`: `q^{n+1} ch L_n`.
pub fn char_h1(n: i64, order: usize) -> Result<QSeries> {
    let shift = check_nonneg(n, "char_H1")? + 1;
    Ok(char_l(n, order)?.shift(shift))
}

/// Sum of a list of per-degree integers into a series of the given order.
pub fn from_degree_counts<'a>(order: usize, counts: impl IntoIterator<Item = (usize, &'a BigInt)>) -> QSeries {
    let mut s = QSeries::zero(order);
    for (deg, c) in counts {
        if deg <= order {
            s.coeffs[deg] += c;
        }
    }
    s
}

/// Small helper used in reports: the coefficients as machine integers when they fit.
pub fn to_i64_vec(s: &QSeries) -> Option<Vec<i64>> {
    s.coeffs.iter().map(ToPrimitive::to_i64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Brute-force count of 2-colored partitions: multisets of (part, color).
    fn brute_2colored(j: usize) -> u64 {
        // parts are labelled 0..2j meaning (size = idx/2 + 1, color = idx%2)
        fn go(rem: usize, max_label: usize) -> u64 {
            if rem == 0 {
                return 1;
            }
            let mut total = 0;
            for label in 0..=max_label {
                let size = label / 2 + 1;
                if size <= rem {
                    total += go(rem - size, label);
                }
            }
            total
        }
        if j == 0 {
            1
        } else {
            go(j, 2 * j - 1)
        }
    }

    #[test]
    fn difference_of_squares() {
        let a = QSeries::from_coeffs([1, 1, 0]);
        let b = QSeries::from_coeffs([1, -1, 0]);
        assert_eq!(a.series_mul(&b).unwrap(), QSeries::from_coeffs([1, 0, -1]));
    }

    #[test]
    fn multiplicative_identity() {
        let s = QSeries::from_coeffs([3, -1, 4, 1]);
        assert_eq!(QSeries::one(3).series_mul(&s).unwrap(), s);
    }

    #[test]
    fn geometric_times_one_minus_q() {
        let g = QSeries::geometric(1, 6);
        let one_minus_q = QSeries::from_coeffs([1, -1, 0, 0, 0, 0, 0]);
        assert_eq!(g.series_mul(&one_minus_q).unwrap(), QSeries::one(6));
    }

    #[test]
    fn order_mismatch_is_an_error() {
        let err = QSeries::one(2).series_mul(&QSeries::one(3)).unwrap_err();
        assert_eq!(err, Error::OrderMismatch { left: 2, right: 3 });
    }

    #[test]
    fn invert_unit_round_trip() {
        let s = QSeries::from_coeffs([1, -2, 3, 0, 5]);
        let inv = s.invert_unit().unwrap();
        assert_eq!(s.series_mul(&inv).unwrap(), QSeries::one(4));
        assert!(QSeries::from_coeffs([2, 1]).invert_unit().is_err());
    }

    #[test]
    fn eta_small_orders() {
        assert_eq!(eta_inverse_squared(0), QSeries::one(0));
        assert_eq!(eta_inverse_squared(2), QSeries::from_coeffs([1, 2, 5]));
        // frozen from brute_2colored
        assert_eq!(eta_inverse_squared(4), QSeries::from_coeffs([1, 2, 5, 10, 20]));
    }

    #[test]
    fn brute_force_oracle_values() {
        let frozen: Vec<u64> = (0..=8).map(brute_2colored).collect();
        assert_eq!(frozen, vec![1, 2, 5, 10, 20, 36, 65, 110, 185]);
    }

    #[test]
    fn count_2colored_matches_enumeration() {
        for j in 0..=12 {
            assert_eq!(count_2colored(j as i64).unwrap(), BigInt::from(brute_2colored(j)), "j = {j}");
        }
        assert!(count_2colored(-1).is_err());
    }

    #[test]
    fn eta_coefficients_are_partition_counts() {
        for order in 0..=10 {
            let eta = eta_inverse_squared(order);
            for j in 0..=order {
                assert_eq!(eta.coeff(j), count_2colored(j as i64).unwrap());
            }
        }
    }

    #[test]
    fn char_l_examples() {
        for n in 0..6 {
            assert_eq!(char_l(n, 3).unwrap().coeff(0), BigInt::from(n + 1));
        }
        // geometric(1) * (1 + 2q + 5q^2) = 1 + 3q + 8q^2
        assert_eq!(char_l(0, 2).unwrap(), QSeries::from_coeffs([1, 3, 8]));
        assert_eq!(char_l(2, 0).unwrap(), QSeries::from_coeffs([3]));
        assert!(char_l(-1, 2).is_err());
    }

    #[test]
    fn char_h1_examples() {
        assert_eq!(char_h1(0, 1).unwrap(), QSeries::from_coeffs([0, 1]));
        for n in 0..4 {
            for m in 0..=n as usize {
                assert!(char_h1(n, m).unwrap().is_zero());
            }
        }
        assert_eq!(char_h1(1, 3).unwrap().coeff(2), BigInt::from(2));
    }

    #[test]
    fn euler_identity_closed_forms() {
        for n in 0..6 {
            for order in 0..8 {
                let diff = &char_l(n, order).unwrap() - &char_h1(n, order).unwrap();
                assert_eq!(diff, eta_inverse_squared(order).scale(&BigInt::from(n + 1)));
            }
        }
    }

    #[test]
    fn display_is_readable() {
        let s = QSeries::from_coeffs([1, -3, 0, 1]);
        assert_eq!(s.to_string(), "1 - 3q + q^3 + O(q^4)");
    }
}
