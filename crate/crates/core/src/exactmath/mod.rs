//! Exact arithmetic: integer polynomials, rational functions, truncated power
//! series with rational coefficients and cyclotomic fields.

mod cyclo;
mod poly;
mod ratfun;
mod series;

pub use cyclo::{cyclo_average, cyclo_sum, cyclo_sum_series, CycloElem, CyclotomicField};
pub use poly::{cyclotomic_poly, euler_phi, IntPoly};
pub use ratfun::{rat_equal, series_expand, RationalFunction};
pub use series::TruncatedSeries;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("denominator is the zero polynomial")]
    ZeroDenominator,
    #[error("denominator has a zero constant term; no power series expansion")]
    NonExpandable,
    #[error("expansion has nonvanishing negative powers of z")]
    LaurentTail,
    #[error("cyclotomic sum is not rational")]
    NotRational,
}

/// Binomial coefficient with `binom(a, b) = 0` outside `0 <= b <= a`.
pub fn binomial(a: i64, b: i64) -> num_bigint::BigInt {
    use num_traits::{One, Zero};
    if b < 0 || a < 0 || b > a {
        return num_bigint::BigInt::zero();
    }
    let b = b.min(a - b);
    let mut r = num_bigint::BigInt::one();
    for i in 0..b {
        r = r * (a - i) / (i + 1);
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    #[test]
    fn binomial_convention() {
        assert_eq!(binomial(5, 2), BigInt::from(10));
        assert_eq!(binomial(5, 0), BigInt::from(1));
        assert_eq!(binomial(5, 6), BigInt::from(0));
        assert_eq!(binomial(5, -1), BigInt::from(0));
        assert_eq!(binomial(0, 0), BigInt::from(1));
        assert_eq!(
            binomial(60, 30),
            "118264581564861424".parse::<BigInt>().unwrap()
        );
    }
}
