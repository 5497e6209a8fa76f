//! Rational functions `z^zpow * num(z) / den(z)` over the integers.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use super::poly::IntPoly;
use super::series::TruncatedSeries;
use super::ArithError;

/// `z^zpow * num / den` with `den != 0`.
///
/// Values are not reduced on construction. Equality is decided by
/// cross-multiplication, so unreduced and reduced forms compare equal;
/// [`RationalFunction::normalized`] produces the canonical lowest-terms form
/// used for storage and serialization.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(try_from = "RawRational")]
pub struct RationalFunction {
    num: IntPoly,
    den: IntPoly,
    zpow: i64,
}

#[derive(Deserialize)]
struct RawRational {
    num: IntPoly,
    den: IntPoly,
    zpow: i64,
}

impl TryFrom<RawRational> for RationalFunction {
    type Error = ArithError;
    fn try_from(raw: RawRational) -> Result<Self, ArithError> {
        RationalFunction::new(raw.num, raw.den, raw.zpow)
    }
}

impl RationalFunction {
    pub fn new(num: IntPoly, den: IntPoly, zpow: i64) -> Result<Self, ArithError> {
        if den.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(RationalFunction { num, den, zpow })
    }

    pub fn from_poly(p: IntPoly) -> Self {
        RationalFunction {
            num: p,
            den: IntPoly::one(),
            zpow: 0,
        }
    }

    pub fn zero() -> Self {
        Self::from_poly(IntPoly::zero())
    }

    pub fn one() -> Self {
        Self::from_poly(IntPoly::one())
    }

    /// `c * z^k` for any integer `k`.
    pub fn monomial(c: BigInt, k: i64) -> Self {
        RationalFunction {
            num: IntPoly::constant(c),
            den: IntPoly::one(),
            zpow: k,
        }
    }

    pub fn num(&self) -> &IntPoly {
        &self.num
    }

    pub fn den(&self) -> &IntPoly {
        &self.den
    }

    pub fn zpow(&self) -> i64 {
        self.zpow
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    /// Numerators brought to a common `z`-power: returns `(a, b)` with
    /// `self == a / den_self` and `other == b / den_other` up to one shared
    /// factor `z^min(zpow)`.
    fn aligned_numerators(&self, other: &Self) -> (IntPoly, IntPoly) {
        let base = self.zpow.min(other.zpow);
        (
            self.num.shift((self.zpow - base) as usize),
            other.num.shift((other.zpow - base) as usize),
        )
    }

    pub fn add(&self, other: &Self) -> Self {
        let (a, b) = self.aligned_numerators(other);
        let base = self.zpow.min(other.zpow);
        if self.den == other.den {
            return RationalFunction {
                num: &a + &b,
                den: self.den.clone(),
                zpow: base,
            };
        }
        RationalFunction {
            num: &(&a * &other.den) + &(&b * &self.den),
            den: &self.den * &other.den,
            zpow: base,
        }
    }

    pub fn neg(&self) -> Self {
        RationalFunction {
            num: -&self.num,
            den: self.den.clone(),
            zpow: self.zpow,
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        RationalFunction {
            num: &self.num * &other.num,
            den: &self.den * &other.den,
            zpow: self.zpow + other.zpow,
        }
    }

    pub fn mul_poly(&self, p: &IntPoly) -> Self {
        RationalFunction {
            num: &self.num * p,
            den: self.den.clone(),
            zpow: self.zpow,
        }
    }

    pub fn div_poly(&self, p: &IntPoly) -> Result<Self, ArithError> {
        if p.is_zero() {
            return Err(ArithError::ZeroDenominator);
        }
        Ok(RationalFunction {
            num: self.num.clone(),
            den: &self.den * p,
            zpow: self.zpow,
        })
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        RationalFunction {
            num: self.num.scale(c),
            den: self.den.clone(),
            zpow: self.zpow,
        }
    }

    /// Multiply by `z^k`.
    pub fn shift(&self, k: i64) -> Self {
        RationalFunction {
            num: self.num.clone(),
            den: self.den.clone(),
            zpow: self.zpow + k,
        }
    }

    /// Lowest terms: powers of `z` moved into `zpow`, common factor removed,
    /// positive leading coefficient in the denominator. The zero function
    /// normalizes to `0 / 1` with `zpow = 0`.
    pub fn normalized(&self) -> Self {
        if self.num.is_zero() {
            return Self::zero();
        }
        let vn = self.num.valuation().unwrap();
        let vd = self.den.valuation().unwrap();
        let mut num = self.num.unshift(vn);
        let mut den = self.den.unshift(vd);
        let g = num.gcd(&den);
        if !g.is_one() {
            num = num.div_exact(&g).expect("gcd divides numerator");
            den = den.div_exact(&g).expect("gcd divides denominator");
        }
        if den.leading_coeff().unwrap().is_negative() {
            num = -num;
            den = -den;
        }
        RationalFunction {
            num,
            den,
            zpow: self.zpow + vn as i64 - vd as i64,
        }
    }

    /// Maclaurin coefficients `0..=order`.
    ///
    /// The denominator must have a nonzero constant term, and any negative
    /// powers of `z` coming from `zpow` must cancel against the numerator.
    pub fn series(&self, order: usize) -> Result<TruncatedSeries, ArithError> {
        series_expand(self, order)
    }
}

/// Cross-multiplication equality test; never reduces or divides.
pub fn rat_equal(f: &RationalFunction, g: &RationalFunction) -> bool {
    let (a, b) = f.aligned_numerators(g);
    &a * &g.den == &b * &f.den
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        rat_equal(self, other)
    }
}

impl Eq for RationalFunction {}

/// Exact power-series expansion of a rational function up to `z^order`.
pub fn series_expand(f: &RationalFunction, order: usize) -> Result<TruncatedSeries, ArithError> {
    let c0 = f.den.coeff(0);
    if c0.is_zero() {
        return Err(ArithError::NonExpandable);
    }
    // Number of coefficients of num/den to compute before applying z^zpow.
    let skip = if f.zpow < 0 { (-f.zpow) as usize } else { 0 };
    let lift = if f.zpow > 0 { f.zpow as usize } else { 0 };
    let needed = (order + skip + 1).saturating_sub(lift);

    let c0 = BigRational::from_integer(c0);
    let den: Vec<BigRational> = f
        .den
        .coeffs()
        .iter()
        .map(|c| BigRational::from_integer(c.clone()))
        .collect();
    let mut out: Vec<BigRational> = Vec::with_capacity(needed);
    for k in 0..needed {
        let mut acc = BigRational::from_integer(f.num.coeff(k));
        for i in 1..den.len().min(k + 1) {
            if !den[i].is_zero() {
                acc -= &den[i] * &out[k - i];
            }
        }
        out.push(acc / &c0);
    }

    if out.iter().take(skip).any(|c| !c.is_zero()) {
        return Err(ArithError::LaurentTail);
    }
    let mut coeffs = vec![BigRational::zero(); lift];
    coeffs.extend(out.into_iter().skip(skip));
    Ok(TruncatedSeries::new(coeffs, order))
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.zpow {
            0 => {}
            1 => write!(f, "z * ")?,
            k => write!(f, "z^{k} * ")?,
        }
        write!(f, "({}) / ({})", self.num, self.den)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    fn rf(num: &[i64], den: &[i64]) -> RationalFunction {
        RationalFunction::new(p(num), p(den), 0).unwrap()
    }

    #[test]
    fn cancellation_is_equality() {
        assert!(rat_equal(&rf(&[1, 0, -1], &[1, -1]), &rf(&[1, 1], &[1])));
    }

    #[test]
    fn distinct_denominators_differ() {
        assert!(!rat_equal(
            &rf(&[0, 1], &[1, -1]),
            &rf(&[0, 1], &[1, 0, -1])
        ));
    }

    #[test]
    fn zpow_alignment() {
        let a = RationalFunction::new(p(&[0, 0, 1]), p(&[1, -1]), -2).unwrap();
        let b = rf(&[1], &[1, -1]);
        assert_eq!(a, b);
        assert_eq!(
            a.shift(1),
            RationalFunction::new(p(&[1]), p(&[1, -1]), 1).unwrap()
        );
    }

    #[test]
    fn zero_denominator_rejected() {
        assert!(RationalFunction::new(p(&[1]), IntPoly::zero(), 0).is_err());
    }

    #[test]
    fn geometric_series() {
        let s = rf(&[1], &[1, -1]).series(3).unwrap();
        assert_eq!(s, TruncatedSeries::from_integers(&[1, 1, 1, 1], 3));
    }

    #[test]
    fn squares_series() {
        // (1+z)/(1-z)^3: coefficients (k+1)^2, checked by re-multiplying.
        let den = p(&[1, -1]).pow(3);
        let f = RationalFunction::new(p(&[1, 1]), den.clone(), 0).unwrap();
        let s = f.series(6).unwrap();
        let expected: Vec<i64> = (0..=6).map(|k| (k + 1) * (k + 1)).collect();
        assert_eq!(s, TruncatedSeries::from_integers(&expected, 6));
        let back = s.mul(&TruncatedSeries::from_poly(&den, 6));
        assert_eq!(back, TruncatedSeries::from_poly(&p(&[1, 1]), 6));
    }

    #[test]
    fn zero_constant_term_is_not_expandable() {
        let f = rf(&[1], &[0, 1]);
        assert_eq!(f.series(3), Err(ArithError::NonExpandable));
    }

    #[test]
    fn negative_power_must_cancel() {
        let bad = RationalFunction::new(p(&[1, 1]), p(&[1]), -1).unwrap();
        assert_eq!(bad.series(2), Err(ArithError::LaurentTail));
        let good = RationalFunction::new(p(&[0, 3, 5]), p(&[1]), -1).unwrap();
        assert_eq!(
            good.series(2).unwrap(),
            TruncatedSeries::from_integers(&[3, 5], 2)
        );
    }

    #[test]
    fn positive_zpow_lifts() {
        let f = RationalFunction::new(p(&[1]), p(&[1, -1]), 2).unwrap();
        assert_eq!(
            f.series(4).unwrap(),
            TruncatedSeries::from_integers(&[0, 0, 1, 1, 1], 4)
        );
    }

    #[test]
    fn normalization() {
        let f = RationalFunction::new(p(&[0, 2, -2]), p(&[0, 0, -4, 4]), 0).unwrap();
        let g = f.normalized();
        assert_eq!(g.num(), &p(&[-1]));
        assert_eq!(g.den(), &p(&[2]));
        assert_eq!(g.zpow(), -1);
        assert_eq!(f, g);
        assert_eq!(g.normalized().num(), g.num());
    }

    #[test]
    fn json_form() {
        let f = RationalFunction::new(p(&[0, 1]), p(&[1, -1]), -3).unwrap();
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"num":["0","1"],"den":["1","-1"],"zpow":-3}"#);
        let back: RationalFunction = serde_json::from_str(&s).unwrap();
        assert_eq!(back.num(), f.num());
        assert_eq!(back.den(), f.den());
        assert_eq!(back.zpow(), -3);
        assert!(
            serde_json::from_str::<RationalFunction>(r#"{"num":["1"],"den":[],"zpow":0}"#).is_err()
        );
    }
}
