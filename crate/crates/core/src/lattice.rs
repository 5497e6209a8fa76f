//! One-norm statistics of the congruence lattice
//! `{a in Z^n : a_1 s_1 + ... + a_n s_n = 0 mod q}`.
//!
//! The finite fingerprint of the lattice is the [`PhiProfile`]: for each
//! number `l` of zero coordinates, the polynomial counting lattice vectors
//! with every `|a_i| < q` by one-norm. The full one-norm generating
//! functions are rational and are rebuilt from it in [`theta_profile`].

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Pow, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize};
use thiserror::Error;

use crate::exactmath::{binomial, IntPoly, RationalFunction};
use crate::lens::LensParams;

/// Upper bound on candidate vectors for [`brute_counts`].
pub const BRUTE_FORCE_LIMIT: u128 = 100_000_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LatticeError {
    #[error("direct enumeration over {candidates} vectors exceeds the limit of {limit}")]
    TooLarge { candidates: u128, limit: u128 },
}

/// `{a in Z^n : sum a_j s_j = 0 mod q}` for the parameters of a lens.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CongruenceLattice {
    q: u64,
    s: Vec<u64>,
}

impl CongruenceLattice {
    pub fn new(lens: &LensParams) -> Self {
        CongruenceLattice {
            q: lens.q(),
            s: lens.s().to_vec(),
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Membership test; panics if `a` has the wrong length.
    pub fn contains(&self, a: &[i64]) -> bool {
        assert_eq!(a.len(), self.s.len(), "vector length must be n");
        let q = self.q as i128;
        let sum: i128 = a
            .iter()
            .zip(&self.s)
            .map(|(&x, &s)| x as i128 * s as i128)
            .sum();
        sum.mod_floor(&q) == 0
    }
}

/// Reduced one-norm counts of a congruence lattice, `phi[l]` for
/// `l = 0..=n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct PhiProfile {
    schema: u32,
    q: u64,
    n: usize,
    phi: Vec<IntPoly>,
}

impl PhiProfile {
    pub const SCHEMA: u32 = 1;

    pub fn new(q: u64, n: usize, phi: Vec<IntPoly>) -> Self {
        assert_eq!(phi.len(), n + 1, "need one polynomial per zero count");
        PhiProfile {
            schema: Self::SCHEMA,
            q,
            n,
            phi,
        }
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn phi(&self, zeros: usize) -> &IntPoly {
        &self.phi[zeros]
    }

    pub fn all(&self) -> &[IntPoly] {
        &self.phi
    }

    /// Number of lattice points in the box `|a_i| < q`.
    pub fn box_count(&self) -> BigInt {
        self.phi.iter().map(IntPoly::eval_at_one).sum()
    }
}

impl<'de> Deserialize<'de> for PhiProfile {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Raw {
            schema: u32,
            q: u64,
            n: usize,
            phi: Vec<IntPoly>,
        }
        let raw = Raw::deserialize(deserializer)?;
        if raw.schema != PhiProfile::SCHEMA {
            return Err(D::Error::custom(format!(
                "unsupported schema {}",
                raw.schema
            )));
        }
        if raw.phi.len() != raw.n + 1 {
            return Err(D::Error::custom("phi must have n + 1 entries"));
        }
        Ok(PhiProfile::new(raw.q, raw.n, raw.phi))
    }
}

trait Counter: Copy + Zero + One + std::ops::AddAssign + Into<BigInt> {}
impl Counter for u64 {}
impl Counter for u128 {}

/// Counts by dynamic programming over the coordinates, with state
/// (partial residue mod q, one-norm so far, zeros so far). Returns
/// `counts[zeros][norm]` for residue zero.
fn reduced_counts<T: Counter>(q: u64, s: &[u64]) -> Vec<Vec<T>> {
    let n = s.len();
    let qu = q as usize;
    let top = qu - 1; // largest |a_i|
    let width = n * top + 1;
    let idx = |z: usize, r: usize, m: usize| (z * qu + r) * width + m;
    let mut cur = vec![T::zero(); (n + 1) * qu * width];
    cur[idx(0, 0, 0)] = T::one();

    for (j, &sj) in s.iter().enumerate().take(n - 1) {
        let mut next = vec![T::zero(); cur.len()];
        let used = j * top + 1;
        for z in 0..=j {
            for r in 0..qu {
                let base = idx(z, r, 0);
                let src = &cur[base..base + used];
                if src.iter().all(|c| c.is_zero()) {
                    continue;
                }
                for a in -(top as i64)..=(top as i64) {
                    let r2 = (r as i64 + a * sj as i64).rem_euclid(q as i64) as usize;
                    let z2 = z + usize::from(a == 0);
                    let off = idx(z2, r2, a.unsigned_abs() as usize);
                    for (d, &c) in next[off..off + used].iter_mut().zip(src) {
                        *d += c;
                    }
                }
            }
        }
        cur = next;
    }

    // Last coordinate: only transitions landing on residue zero matter.
    let last = s[n - 1];
    let used = (n - 1) * top + 1;
    let mut out = vec![vec![T::zero(); width]; n + 1];
    for a in -(top as i64)..=(top as i64) {
        let r = (-a * last as i64).rem_euclid(q as i64) as usize;
        let shift = a.unsigned_abs() as usize;
        for z in 0..n {
            let base = idx(z, r, 0);
            let z2 = z + usize::from(a == 0);
            for (d, &c) in out[z2][shift..shift + used]
                .iter_mut()
                .zip(&cur[base..base + used])
            {
                *d += c;
            }
        }
    }
    out
}

fn to_profile<T: Counter>(q: u64, n: usize, counts: Vec<Vec<T>>) -> PhiProfile {
    let phi = counts
        .into_iter()
        .map(|row| IntPoly::new(row.into_iter().map(Into::into).collect()))
        .collect();
    PhiProfile::new(q, n, phi)
}

/// Reduced count polynomials for `L`, by dynamic programming in
/// `O(n^2 q^3)` machine-word operations.
///
/// # Panics
/// If `(2q - 1)^n` exceeds `u128`, far beyond any tractable input.
pub fn phi_profile(lens: &LensParams) -> PhiProfile {
    let q = lens.q();
    let n = lens.n();
    let cells = (2 * q as u128 - 1).checked_pow(n as u32);
    match cells {
        Some(c) if c <= u64::MAX as u128 => to_profile(q, n, reduced_counts::<u64>(q, lens.s())),
        Some(_) => to_profile(q, n, reduced_counts::<u128>(q, lens.s())),
        None => panic!("box (2q-1)^n overflows u128 for q = {q}, n = {n}"),
    }
}

/// The one-norm generating functions of a congruence lattice.
///
/// `theta[l]` keeps the structured denominator `(1 - z^q)^(n - l)`; call
/// [`RationalFunction::normalized`] for lowest terms.
#[derive(Clone, Debug)]
pub struct ThetaProfile {
    q: u64,
    n: usize,
    theta: Vec<RationalFunction>,
    total: RationalFunction,
}

impl ThetaProfile {
    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn theta(&self, zeros: usize) -> &RationalFunction {
        &self.theta[zeros]
    }

    pub fn total(&self) -> &RationalFunction {
        &self.total
    }
}

/// Numerator of `theta^(l)` over `(1 - z^q)^(n - l)`:
/// `sum_s 2^s binom(l + s, s) z^(s q) phi^(l + s)`.
fn theta_numerator(profile: &PhiProfile, zeros: usize) -> IntPoly {
    let q = profile.q as usize;
    let mut acc = IntPoly::zero();
    for extra in 0..=profile.n - zeros {
        let phi = &profile.phi[zeros + extra];
        if phi.is_zero() {
            continue;
        }
        let c = Pow::pow(BigInt::from(2), extra as u32)
            * binomial((zeros + extra) as i64, extra as i64);
        acc += &phi.scale(&c).shift(extra * q);
    }
    acc
}

pub fn theta_profile(profile: &PhiProfile) -> ThetaProfile {
    let q = profile.q as usize;
    let n = profile.n;
    let base = IntPoly::one_minus_z_pow(q);
    let theta = (0..=n)
        .map(|l| {
            RationalFunction::new(theta_numerator(profile, l), base.pow((n - l) as u32), 0)
                .expect("(1 - z^q)^k is nonzero")
        })
        .collect();

    let mut total_num = IntPoly::zero();
    for t in 0..=n {
        let mut inner = IntPoly::zero();
        for l in t..=n {
            inner += &profile.phi[l].scale(&binomial(l as i64, t as i64));
        }
        total_num += &inner.shift(t * q);
    }
    let total = RationalFunction::new(total_num, base.pow(n as u32), 0).expect("nonzero");
    ThetaProfile {
        q: profile.q,
        n,
        theta,
        total,
    }
}

/// `theta^(l) * (1 - z^q)^n` for each `l`: polynomials sharing the common
/// denominator, so linear relations among the `theta^(l)` become polynomial
/// identities.
pub fn cleared_theta(profile: &PhiProfile) -> Vec<IntPoly> {
    let base = IntPoly::one_minus_z_pow(profile.q as usize);
    let mut power = IntPoly::one();
    let mut out = Vec::with_capacity(profile.n + 1);
    for l in 0..=profile.n {
        out.push(&theta_numerator(profile, l) * &power);
        power = &power * &base;
    }
    out
}

/// Exact counts `N(k, l)` for `k <= kmax` by direct enumeration: the
/// independent check on [`phi_profile`] and [`theta_profile`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CountTable {
    /// `counts[k][l]`
    pub counts: Vec<Vec<u64>>,
}

impl CountTable {
    pub fn total(&self, k: usize) -> u64 {
        self.counts[k].iter().sum()
    }

    pub fn get(&self, k: usize, zeros: usize) -> u64 {
        self.counts[k][zeros]
    }
}

pub fn brute_counts(lens: &LensParams, kmax: usize) -> Result<CountTable, LatticeError> {
    let n = lens.n();
    let candidates = (2 * kmax as u128 + 1)
        .checked_pow(n as u32)
        .unwrap_or(u128::MAX);
    if candidates > BRUTE_FORCE_LIMIT {
        return Err(LatticeError::TooLarge {
            candidates,
            limit: BRUTE_FORCE_LIMIT,
        });
    }
    let q = lens.q() as i64;
    let s: Vec<i64> = lens.s().iter().map(|&x| x as i64).collect();
    let mut counts = vec![vec![0u64; n + 1]; kmax + 1];

    // depth-first over coordinates with remaining one-norm budget
    #[allow(clippy::too_many_arguments)]
    fn walk(
        s: &[i64],
        q: i64,
        j: usize,
        residue: i64,
        norm: usize,
        zeros: usize,
        kmax: usize,
        counts: &mut [Vec<u64>],
    ) {
        if j == s.len() {
            if residue == 0 {
                counts[norm][zeros] += 1;
            }
            return;
        }
        let budget = (kmax - norm) as i64;
        for a in -budget..=budget {
            let r = (residue + a * s[j]).rem_euclid(q);
            walk(
                s,
                q,
                j + 1,
                r,
                norm + a.unsigned_abs() as usize,
                zeros + usize::from(a == 0),
                kmax,
                counts,
            );
        }
    }
    walk(&s, q, 0, 0, 0, 0, kmax, &mut counts);
    Ok(CountTable { counts })
}

/// `theta^(n-1)` from the isotropy data alone: the vectors with exactly one
/// nonzero coordinate `k e_i` lie in the lattice iff `q / gcd(q, s_i)`
/// divides `k`, which gives `sum_i 2 z^(m_i) / (1 - z^(m_i))` with
/// `m_i = q / gcd(q, s_i)`.
pub fn theta_nminus1_orbifold(lens: &LensParams) -> RationalFunction {
    let q = lens.q();
    let mut by_order = std::collections::BTreeMap::<u64, i64>::new();
    for &x in lens.s() {
        *by_order.entry(q / q.gcd(&x)).or_default() += 1;
    }
    let mut acc = RationalFunction::zero();
    for (m, count) in by_order {
        let term = RationalFunction::new(
            IntPoly::monomial(BigInt::from(2 * count), m as usize),
            IntPoly::one_minus_z_pow(m as usize),
            0,
        )
        .expect("nonzero");
        acc = acc.add(&term);
    }
    acc
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::TruncatedSeries;

    fn l(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    #[test]
    fn lattice_is_a_group() {
        let lat = CongruenceLattice::new(&l(12, &[1, 4, 6]));
        assert!(lat.contains(&[0, 0, 0]));
        let mut members = Vec::new();
        for a in -4i64..=4 {
            for b in -4i64..=4 {
                for c in -4i64..=4 {
                    if lat.contains(&[a, b, c]) {
                        members.push([a, b, c]);
                    }
                }
            }
        }
        assert!(members.len() > 1);
        for x in &members {
            assert!(lat.contains(&[-x[0], -x[1], -x[2]]));
            for y in members.iter().step_by(7) {
                assert!(lat.contains(&[x[0] + y[0], x[1] + y[1], x[2] + y[2]]));
            }
        }
        assert!(lat.contains(&[12, 0, 0]) && !lat.contains(&[1, 0, 0]) && lat.contains(&[2, 1, 1]));
    }

    #[test]
    fn two_one_one() {
        let p = phi_profile(&l(2, &[1, 1]));
        assert_eq!(p.phi(2), &IntPoly::one());
        assert!(p.phi(1).is_zero());
        assert_eq!(p.phi(0), &IntPoly::from_i64s(&[0, 0, 4]));
        let t = theta_profile(&p);
        let expected = RationalFunction::new(
            IntPoly::from_i64s(&[0, 0, 4, 0, 4]),
            IntPoly::from_i64s(&[1, 0, -1]).pow(2),
            0,
        )
        .unwrap();
        assert_eq!(t.theta(0), &expected);
    }

    #[test]
    fn lens_space_structure() {
        for lens in [l(11, &[1, 2, 3]), l(13, &[1, 2, 3, 5]), l(9, &[1, 2])] {
            let p = phi_profile(&lens);
            let n = lens.n();
            assert_eq!(p.phi(n), &IntPoly::one());
            assert!(p.phi(n - 1).is_zero());
            let t = theta_profile(&p);
            assert_eq!(t.theta(n), &RationalFunction::one());
            let expected = RationalFunction::new(
                IntPoly::monomial(BigInt::from(2 * n), lens.q() as usize),
                IntPoly::one_minus_z_pow(lens.q() as usize),
                0,
            )
            .unwrap();
            assert_eq!(t.theta(n - 1), &expected);
        }
    }

    #[test]
    fn brute_small_facts() {
        let t = brute_counts(&l(2, &[1, 1]), 4).unwrap();
        assert_eq!(t.get(0, 2), 1);
        assert_eq!(t.total(2), 8);
        let sphere = brute_counts(&l(1, &[0, 0]), 10).unwrap();
        for k in 1..=10 {
            assert_eq!(sphere.total(k), 4 * k as u64);
        }
    }

    #[test]
    fn sphere_theta_is_square_of_one_plus_z_over_one_minus_z() {
        let t = theta_profile(&phi_profile(&l(1, &[0, 0])));
        let expected = RationalFunction::new(
            IntPoly::from_i64s(&[1, 1]).pow(2),
            IntPoly::from_i64s(&[1, -1]).pow(2),
            0,
        )
        .unwrap();
        assert_eq!(t.total(), &expected);
    }

    #[test]
    fn brute_guard() {
        assert!(matches!(
            brute_counts(&l(7, &[1, 2, 3, 4, 5, 6]), 40),
            Err(LatticeError::TooLarge { .. })
        ));
    }

    #[test]
    fn theta_series_match_brute_counts() {
        for lens in [
            l(4, &[1, 1]),
            l(4, &[1, 0]),
            l(6, &[1, 2, 3]),
            l(8, &[0, 1, 3]),
        ] {
            let kmax = 3 * lens.q() as usize;
            let table = brute_counts(&lens, kmax).unwrap();
            let t = theta_profile(&phi_profile(&lens));
            for zeros in 0..=lens.n() {
                let series = t.theta(zeros).series(kmax).unwrap();
                let expected: Vec<i64> = (0..=kmax).map(|k| table.get(k, zeros) as i64).collect();
                assert_eq!(
                    series,
                    TruncatedSeries::from_integers(&expected, kmax),
                    "{lens} l={zeros}"
                );
            }
        }
    }

    #[test]
    fn isotropy_formula_for_one_nonzero_coordinate() {
        for lens in [
            l(4, &[1, 1]),
            l(4, &[1, 0]),
            l(6, &[1, 2, 3]),
            l(1, &[0, 0, 0]),
            l(12, &[2, 3, 4]),
        ] {
            let t = theta_profile(&phi_profile(&lens));
            assert_eq!(
                &theta_nminus1_orbifold(&lens),
                t.theta(lens.n() - 1),
                "{lens}"
            );
        }
        // q = 1: 2n z/(1-z)
        let sphere = theta_nminus1_orbifold(&l(1, &[0, 0, 0]));
        let expected =
            RationalFunction::new(IntPoly::from_i64s(&[0, 6]), IntPoly::from_i64s(&[1, -1]), 0)
                .unwrap();
        assert_eq!(sphere, expected);
    }

    #[test]
    fn profile_json() {
        let p = phi_profile(&l(2, &[1, 1]));
        let s = serde_json::to_string(&p).unwrap();
        assert_eq!(
            s,
            r#"{"schema":1,"q":2,"n":2,"phi":[["0","0","4"],[],["1"]]}"#
        );
        assert_eq!(serde_json::from_str::<PhiProfile>(&s).unwrap(), p);
        assert!(
            serde_json::from_str::<PhiProfile>(&s.replace("\"schema\":1", "\"schema\":2")).is_err()
        );
    }
}
