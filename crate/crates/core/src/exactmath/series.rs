//! Power-series prefixes with exact rational coefficients.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::poly::IntPoly;

/// Coefficients of `z^0 .. z^order` of a power series.
///
/// Arithmetic between two series is exact up to the smaller of the two
/// orders.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TruncatedSeries {
    coeffs: Vec<BigRational>,
}

impl TruncatedSeries {
    /// Pads or truncates `coeffs` to length `order + 1`.
    pub fn new(mut coeffs: Vec<BigRational>, order: usize) -> Self {
        coeffs.resize(order + 1, BigRational::zero());
        TruncatedSeries { coeffs }
    }

    pub fn zero(order: usize) -> Self {
        Self::new(Vec::new(), order)
    }

    pub fn from_poly(p: &IntPoly, order: usize) -> Self {
        let coeffs = p
            .coeffs()
            .iter()
            .take(order + 1)
            .map(|c| BigRational::from_integer(c.clone()))
            .collect();
        Self::new(coeffs, order)
    }

    pub fn from_integers(values: &[i64], order: usize) -> Self {
        Self::new(
            values
                .iter()
                .map(|&v| BigRational::from_integer(BigInt::from(v)))
                .collect(),
            order,
        )
    }

    pub fn order(&self) -> usize {
        self.coeffs.len() - 1
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> &BigRational {
        &self.coeffs[k]
    }

    pub fn truncate(&self, order: usize) -> Self {
        assert!(order <= self.order());
        Self::new(self.coeffs[..=order].to_vec(), order)
    }

    pub fn add(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| &self.coeffs[k] + &other.coeffs[k])
            .collect();
        Self::new(coeffs, order)
    }

    pub fn sub(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let coeffs = (0..=order)
            .map(|k| &self.coeffs[k] - &other.coeffs[k])
            .collect();
        Self::new(coeffs, order)
    }

    pub fn mul(&self, other: &Self) -> Self {
        let order = self.order().min(other.order());
        let mut coeffs = vec![BigRational::zero(); order + 1];
        for (i, a) in self.coeffs.iter().enumerate().take(order + 1) {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate().take(order + 1 - i) {
                if !b.is_zero() {
                    coeffs[i + j] += a * b;
                }
            }
        }
        Self::new(coeffs, order)
    }

    pub fn scale(&self, c: &BigRational) -> Self {
        Self::new(self.coeffs.iter().map(|x| x * c).collect(), self.order())
    }

    /// Multiply by `z^k`, keeping the order.
    pub fn shift(&self, k: usize) -> Self {
        let order = self.order();
        let mut coeffs = vec![BigRational::zero(); k.min(order + 1)];
        coeffs.extend(
            self.coeffs
                .iter()
                .take((order + 1).saturating_sub(k))
                .cloned(),
        );
        Self::new(coeffs, order)
    }

    /// True iff every coefficient is an integer `>= 0`.
    pub fn is_nonnegative_integral(&self) -> bool {
        self.coeffs
            .iter()
            .all(|c| c.is_integer() && !c.is_negative())
    }

    /// Integer coefficients, or `None` if some coefficient is fractional.
    pub fn to_integers(&self) -> Option<Vec<BigInt>> {
        self.coeffs
            .iter()
            .map(|c| c.is_integer().then(|| c.to_integer()))
            .collect()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs[0].is_one() && self.coeffs[1..].iter().all(Zero::is_zero)
    }
}

impl fmt::Display for TruncatedSeries {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            match k {
                0 => write!(f, "{c}")?,
                1 => write!(f, "{c}z")?,
                _ => write!(f, "{c}z^{k}")?,
            }
        }
        if first {
            write!(f, "0")?;
        }
        write!(f, " + O(z^{})", self.order() + 1)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn product_order_is_the_minimum() {
        let a = TruncatedSeries::from_integers(&[1, 1, 1, 1, 1], 4);
        let b = TruncatedSeries::from_integers(&[1, -1], 2);
        let c = a.mul(&b);
        assert_eq!(c.order(), 2);
        assert_eq!(c, TruncatedSeries::from_integers(&[1, 0, 0], 2));
    }

    #[test]
    fn shift_keeps_order() {
        let a = TruncatedSeries::from_integers(&[1, 2, 3], 2);
        assert_eq!(a.shift(1), TruncatedSeries::from_integers(&[0, 1, 2], 2));
        assert_eq!(a.shift(5), TruncatedSeries::zero(2));
    }
}
