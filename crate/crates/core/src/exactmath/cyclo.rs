//! Arithmetic in the cyclotomic field `Q(zeta_q)`.
//!
//! Elements are stored by their canonical representative modulo the q-th
//! cyclotomic polynomial, a polynomial in `zeta` of degree `< phi(q)`. An
//! element is rational exactly when every coordinate past the constant one
//! vanishes.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use super::poly::{cyclotomic_poly, euler_phi, IntPoly};
use super::series::TruncatedSeries;
use super::ArithError;

/// An element of `Q(zeta_q)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycloElem {
    q: u64,
    coords: Vec<BigRational>,
}

impl CycloElem {
    pub fn conductor(&self) -> u64 {
        self.q
    }

    pub fn coords(&self) -> &[BigRational] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(Zero::is_zero)
    }

    pub fn is_rational(&self) -> bool {
        self.coords[1..].iter().all(Zero::is_zero)
    }

    pub fn to_rational(&self) -> Option<BigRational> {
        self.is_rational().then(|| self.coords[0].clone())
    }
}

/// Context for `Q(zeta_q)`: the modulus and the reduced powers of `zeta`.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    q: u64,
    phi: usize,
    modulus: IntPoly,
    /// `powers[e]` = coordinates of `zeta^e` for `0 <= e < q`.
    powers: Vec<Vec<BigInt>>,
}

impl CyclotomicField {
    pub fn new(q: u64) -> Self {
        assert!(q >= 1, "conductor must be positive");
        let modulus = cyclotomic_poly(q);
        let phi = euler_phi(q) as usize;
        debug_assert_eq!(modulus.degree(), Some(phi));
        let mut powers = Vec::with_capacity(q as usize);
        let mut current = vec![BigInt::zero(); phi];
        current[0] = BigInt::one();
        for _ in 0..q {
            powers.push(current.clone());
            // multiply by zeta and reduce the overflow with the monic modulus
            let top = current.pop().unwrap();
            current.insert(0, BigInt::zero());
            if !top.is_zero() {
                for (c, m) in current.iter_mut().zip(modulus.coeffs()) {
                    *c -= &top * m;
                }
            }
        }
        CyclotomicField {
            q,
            phi,
            modulus,
            powers,
        }
    }

    pub fn conductor(&self) -> u64 {
        self.q
    }

    pub fn degree(&self) -> usize {
        self.phi
    }

    pub fn modulus(&self) -> &IntPoly {
        &self.modulus
    }

    pub fn zero(&self) -> CycloElem {
        CycloElem {
            q: self.q,
            coords: vec![BigRational::zero(); self.phi],
        }
    }

    pub fn from_rational(&self, r: BigRational) -> CycloElem {
        let mut e = self.zero();
        e.coords[0] = r;
        e
    }

    pub fn one(&self) -> CycloElem {
        self.from_rational(BigRational::one())
    }

    /// `zeta_q^e` for any integer exponent.
    pub fn root_power(&self, e: i64) -> CycloElem {
        let idx = e.rem_euclid(self.q as i64) as usize;
        CycloElem {
            q: self.q,
            coords: self.powers[idx]
                .iter()
                .map(|c| BigRational::from_integer(c.clone()))
                .collect(),
        }
    }

    /// Image of the group-ring element `sum_e counts[e] * zeta^e`.
    pub fn from_exponent_counts<T>(&self, counts: &[T]) -> CycloElem
    where
        T: Copy + Into<BigInt>,
    {
        assert_eq!(counts.len(), self.q as usize);
        let mut acc = vec![BigInt::zero(); self.phi];
        for (e, &c) in counts.iter().enumerate() {
            let c: BigInt = c.into();
            if c.is_zero() {
                continue;
            }
            for (a, p) in acc.iter_mut().zip(&self.powers[e]) {
                if !p.is_zero() {
                    *a += &c * p;
                }
            }
        }
        CycloElem {
            q: self.q,
            coords: acc.into_iter().map(BigRational::from_integer).collect(),
        }
    }

    fn check(&self, a: &CycloElem) {
        assert_eq!(
            a.q, self.q,
            "element belongs to a different cyclotomic field"
        );
    }

    pub fn add(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.check(a);
        self.check(b);
        CycloElem {
            q: self.q,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x + y).collect(),
        }
    }

    pub fn sub(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.check(a);
        self.check(b);
        CycloElem {
            q: self.q,
            coords: a.coords.iter().zip(&b.coords).map(|(x, y)| x - y).collect(),
        }
    }

    pub fn scale(&self, a: &CycloElem, c: &BigRational) -> CycloElem {
        self.check(a);
        CycloElem {
            q: self.q,
            coords: a.coords.iter().map(|x| x * c).collect(),
        }
    }

    pub fn mul(&self, a: &CycloElem, b: &CycloElem) -> CycloElem {
        self.check(a);
        self.check(b);
        let mut prod = vec![BigRational::zero(); 2 * self.phi - 1];
        for (i, x) in a.coords.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.coords.iter().enumerate() {
                if !y.is_zero() {
                    prod[i + j] += x * y;
                }
            }
        }
        let mut out = prod[..self.phi].to_vec();
        for (e, c) in prod.iter().enumerate().skip(self.phi) {
            if c.is_zero() {
                continue;
            }
            let reduced = &self.powers[e % self.q as usize];
            for (o, p) in out.iter_mut().zip(reduced) {
                if !p.is_zero() {
                    *o += c * BigRational::from_integer(p.clone());
                }
            }
        }
        CycloElem {
            q: self.q,
            coords: out,
        }
    }
}

/// `sum_{h=0}^{q-1} term(h)` in `Q(zeta_q)`, demanded to be rational.
///
/// A non-rational result means the caller's term was not invariant under the
/// Galois action, which for the sums used here indicates a bug.
pub fn cyclo_sum<F>(field: &CyclotomicField, term: F) -> Result<BigRational, ArithError>
where
    F: Fn(u64) -> CycloElem,
{
    let mut acc = field.zero();
    for h in 0..field.conductor() {
        acc = field.add(&acc, &term(h));
    }
    acc.to_rational().ok_or(ArithError::NotRational)
}

/// `(1/q) * sum_{h=0}^{q-1} term(h)`.
pub fn cyclo_average<F>(field: &CyclotomicField, term: F) -> Result<BigRational, ArithError>
where
    F: Fn(u64) -> CycloElem,
{
    let q = BigRational::from_integer(BigInt::from(field.conductor()));
    Ok(cyclo_sum(field, term)? / q)
}

/// Coefficientwise [`cyclo_sum`] for series whose coefficients lie in
/// `Q(zeta_q)`; `term(h)` yields the coefficients of `z^0 .. z^order`.
pub fn cyclo_sum_series<F>(
    field: &CyclotomicField,
    order: usize,
    term: F,
) -> Result<TruncatedSeries, ArithError>
where
    F: Fn(u64) -> Vec<CycloElem>,
{
    let mut acc = vec![field.zero(); order + 1];
    for h in 0..field.conductor() {
        let t = term(h);
        assert!(t.len() > order, "term series shorter than requested order");
        for (a, x) in acc.iter_mut().zip(&t) {
            *a = field.add(a, x);
        }
    }
    let coeffs = acc
        .iter()
        .map(|c| c.to_rational().ok_or(ArithError::NotRational))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(TruncatedSeries::new(coeffs, order))
}
