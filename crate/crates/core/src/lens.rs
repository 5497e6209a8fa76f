//! Lens orbifolds `L(q; s_1, ..., s_n)`: validation, isometry classes,
//! enumeration, isotropy and coverings.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_integer::Integer;
use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LensError {
    #[error("order q must be positive")]
    ZeroOrder,
    #[error("need at least two parameters, got {0}")]
    TooFewParameters(usize),
    #[error("gcd(q, s_1, ..., s_n) = {0}; the action is not effective")]
    NotEffective(u64),
    #[error("dimension mismatch: {0} vs {1} parameters")]
    DimensionMismatch(usize, usize),
    #[error("order mismatch: q = {0} vs q = {1}")]
    OrderMismatch(u64, u64),
    #[error("{0} does not divide q = {1}")]
    NotADivisor(u64, u64),
    #[error("cannot parse lens parameters from {0:?}")]
    Parse(String),
}

/// Parameters of a lens orbifold, each `s_j` folded into `[0, q/2]`.
///
/// Folding absorbs the sign choices of the isometry criterion, so the
/// stored vector already identifies `s_j` with `q - s_j`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawLens")]
pub struct LensParams {
    q: u64,
    s: Vec<u64>,
}

#[derive(Deserialize)]
struct RawLens {
    q: u64,
    s: Vec<i64>,
}

impl TryFrom<RawLens> for LensParams {
    type Error = LensError;
    fn try_from(raw: RawLens) -> Result<Self, LensError> {
        LensParams::new(raw.q, &raw.s)
    }
}

fn fold(q: u64, x: i64) -> u64 {
    let r = x.rem_euclid(q as i64) as u64;
    r.min(q - r)
}

impl LensParams {
    /// Reduces and folds the parameters; rejects `q = 0`, `n < 2` and
    /// non-effective actions (`gcd(q, s) > 1`).
    pub fn new(q: u64, s: &[i64]) -> Result<Self, LensError> {
        if q == 0 {
            return Err(LensError::ZeroOrder);
        }
        if s.len() < 2 {
            return Err(LensError::TooFewParameters(s.len()));
        }
        let s: Vec<u64> = s.iter().map(|&x| fold(q, x)).collect();
        let g = s.iter().fold(q, |g, &x| g.gcd(&x));
        if g != 1 {
            return Err(LensError::NotEffective(g));
        }
        Ok(LensParams { q, s })
    }

    pub fn q(&self) -> u64 {
        self.q
    }

    pub fn s(&self) -> &[u64] {
        &self.s
    }

    pub fn n(&self) -> usize {
        self.s.len()
    }

    /// Manifold (free action) iff every `gcd(q, s_j) = 1`.
    pub fn is_lens_space(&self) -> bool {
        self.s.iter().all(|&x| x.gcd(&self.q) == 1)
    }

    /// Appends `m` zero parameters.
    pub fn padded(&self, m: usize) -> LensParams {
        let mut s = self.s.clone();
        s.extend(std::iter::repeat_n(0, m));
        LensParams { q: self.q, s }
    }

    /// Appends one parameter.
    pub fn extended(&self, extra: i64) -> LensParams {
        let mut s = self.s.clone();
        s.push(fold(self.q, extra));
        LensParams { q: self.q, s }
    }

    pub fn canonical(&self) -> CanonicalLens {
        canonical_form(self)
    }
}

impl fmt::Display for LensParams {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "L({};", self.q)?;
        for (i, x) in self.s.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl FromStr for LensParams {
    type Err = LensError;

    /// Accepts `L(q;s1,...,sn)`, with optional whitespace.
    fn from_str(text: &str) -> Result<Self, LensError> {
        let err = || LensError::Parse(text.to_string());
        let compact: String = text.chars().filter(|c| !c.is_whitespace()).collect();
        let body = compact
            .strip_prefix("L(")
            .and_then(|b| b.strip_suffix(')'))
            .ok_or_else(err)?;
        let (q, rest) = body.split_once(';').ok_or_else(err)?;
        let q: u64 = q.parse().map_err(|_| err())?;
        let s = rest
            .split(',')
            .map(|x| x.parse::<i64>().map_err(|_| err()))
            .collect::<Result<Vec<_>, _>>()?;
        LensParams::new(q, &s)
    }
}

/// Lexicographically least sorted representative of an isometry class.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct CanonicalLens(LensParams);

impl CanonicalLens {
    pub fn params(&self) -> &LensParams {
        &self.0
    }

    pub fn q(&self) -> u64 {
        self.0.q
    }

    pub fn s(&self) -> &[u64] {
        &self.0.s
    }

    pub fn n(&self) -> usize {
        self.0.n()
    }

    pub fn is_lens_space(&self) -> bool {
        self.0.is_lens_space()
    }

    pub fn into_params(self) -> LensParams {
        self.0
    }
}

impl fmt::Display for CanonicalLens {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl AsRef<LensParams> for CanonicalLens {
    fn as_ref(&self) -> &LensParams {
        &self.0
    }
}

/// Units modulo `q` in `[1, q/2]`; `t` and `q - t` act identically after
/// folding. For `q <= 2` this is `[1]`.
fn half_units(q: u64) -> Vec<u64> {
    (1..=(q / 2).max(1)).filter(|t| t.gcd(&q) == 1).collect()
}

fn canonical_with_units(q: u64, s: &[u64], units: &[u64]) -> Vec<u64> {
    let mut best: Option<Vec<u64>> = None;
    let mut cand = vec![0u64; s.len()];
    for &t in units {
        for (c, &x) in cand.iter_mut().zip(s) {
            let r = (t * x) % q;
            *c = r.min(q - r);
        }
        cand.sort_unstable();
        if best.as_ref().is_none_or(|b| cand < *b) {
            best = Some(cand.clone());
        }
    }
    best.expect("at least one unit")
}

/// Minimizes the folded, sorted vector `t * s` over units `t`.
///
/// Permutations and signs are absorbed by sorting and folding, so two
/// orbifolds are isometric iff their canonical forms coincide.
pub fn canonical_form(lens: &LensParams) -> CanonicalLens {
    let s = canonical_with_units(lens.q, &lens.s, &half_units(lens.q));
    CanonicalLens(LensParams { q: lens.q, s })
}

pub fn is_isometric(a: &LensParams, b: &LensParams) -> Result<bool, LensError> {
    if a.n() != b.n() {
        return Err(LensError::DimensionMismatch(a.n(), b.n()));
    }
    if a.q != b.q {
        return Err(LensError::OrderMismatch(a.q, b.q));
    }
    Ok(canonical_form(a) == canonical_form(b))
}

/// All isometry classes of `n`-parameter lens orbifolds of order `q`, in
/// lexicographic order of their canonical forms.
pub fn enumerate_classes(q: u64, n: usize, spaces_only: bool) -> Vec<CanonicalLens> {
    assert!(q >= 1 && n >= 2, "enumerate_classes needs q >= 1, n >= 2");
    let half = q / 2;
    let units = half_units(q);
    let allowed: Vec<u64> = (0..=half)
        .filter(|&x| !spaces_only || x.gcd(&q) == 1)
        .collect();
    let mut seen = std::collections::BTreeSet::new();
    let mut idx = vec![0usize; n];
    if allowed.is_empty() {
        return Vec::new();
    }
    loop {
        let s: Vec<u64> = idx.iter().map(|&i| allowed[i]).collect();
        let g = s.iter().fold(q, |g, &x| g.gcd(&x));
        if g == 1 {
            let c = canonical_with_units(q, &s, &units);
            // Every class has a unique canonical vector; only keep it when
            // we are looking at that vector itself.
            if c == s {
                seen.insert(c);
            }
        }
        // next nondecreasing index vector
        let mut j = n;
        loop {
            if j == 0 {
                return seen
                    .into_iter()
                    .map(|s| CanonicalLens(LensParams { q, s }))
                    .collect();
            }
            j -= 1;
            if idx[j] + 1 < allowed.len() {
                idx[j] += 1;
                for k in j + 1..n {
                    idx[k] = idx[j];
                }
                break;
            }
        }
    }
}

/// Multiset `{{gcd(q, s_j)}}`, stored as value -> multiplicity.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct IsotropyProfile(pub BTreeMap<u64, usize>);

impl IsotropyProfile {
    pub fn is_trivial(&self) -> bool {
        self.0.keys().all(|&g| g == 1)
    }
}

impl fmt::Display for IsotropyProfile {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{{{")?;
        let mut first = true;
        for (g, m) in &self.0 {
            for _ in 0..*m {
                if !first {
                    write!(f, ",")?;
                }
                first = false;
                write!(f, "{g}")?;
            }
        }
        write!(f, "}}}}")
    }
}

pub fn isotropy_profile(lens: &LensParams) -> IsotropyProfile {
    let mut m = BTreeMap::new();
    for &x in &lens.s {
        *m.entry(x.gcd(&lens.q)).or_insert(0) += 1;
    }
    IsotropyProfile(m)
}

/// The cover `L(q1; s)` for a divisor `q1` of `q`, canonicalized.
pub fn cover(lens: &LensParams, q1: u64) -> Result<CanonicalLens, LensError> {
    if q1 == 0 || !lens.q.is_multiple_of(q1) {
        return Err(LensError::NotADivisor(q1, lens.q));
    }
    let s: Vec<i64> = lens.s.iter().map(|&x| x as i64).collect();
    Ok(canonical_form(&LensParams::new(q1, &s)?))
}

pub fn divisors(q: u64) -> Vec<u64> {
    (1..=q).filter(|d| q.is_multiple_of(*d)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    #[test]
    fn canonical_examples() {
        assert_eq!(l(11, &[3, 4, 5]).canonical().s(), &[1, 2, 4]);
        assert_eq!(l(13, &[2, 3, 4, 6]).canonical().s(), &[1, 2, 3, 5]);
        assert_eq!(l(13, &[3, 4, 5, 6]).canonical().s(), &[1, 2, 3, 6]);
        assert_eq!(l(13, &[2, 4, 5, 6]).canonical().s(), &[1, 2, 3, 4]);
        assert_eq!(l(11, &[2, 4, 5]).canonical().s(), &[1, 2, 3]);
    }

    #[test]
    fn sign_flip_is_absorbed() {
        assert_eq!(
            l(17, &[3, 5, 7]).canonical(),
            l(17, &[17 - 3, 5, 7]).canonical()
        );
        assert_eq!(l(17, &[3, 5, 7]), l(17, &[-3, 5, 7]));
    }

    #[test]
    fn canonical_is_idempotent() {
        let c = l(36, &[1, 3, 5, 17]).canonical();
        assert_eq!(c.params().canonical(), c);
    }

    #[test]
    fn isometry_examples() {
        assert!(is_isometric(&l(36, &[1, 3, 5, 17]), &l(36, &[1, 7, 11, 15])).unwrap());
        assert!(!is_isometric(&l(36, &[1, 3, 5, 17]), &l(36, &[1, 3, 7, 11])).unwrap());
        assert_eq!(
            is_isometric(&l(36, &[1, 5, 17]), &l(36, &[1, 5, 17, 3])),
            Err(LensError::DimensionMismatch(3, 4))
        );
        assert!(is_isometric(&l(36, &[1, 5, 17]), &l(36, &[1, 7, 11])).unwrap());
        assert!(!is_isometric(&l(15, &[1, 2]), &l(15, &[1, 4])).unwrap());
        let a = l(20, &[1, 3, 9]);
        assert!(is_isometric(&a, &a).unwrap());
        assert_eq!(
            is_isometric(&l(15, &[1, 2]), &l(16, &[1, 3])),
            Err(LensError::OrderMismatch(15, 16))
        );
    }

    #[test]
    fn invalid_parameters() {
        assert_eq!(LensParams::new(4, &[2, 0]), Err(LensError::NotEffective(2)));
        assert_eq!(LensParams::new(0, &[1, 1]), Err(LensError::ZeroOrder));
        assert_eq!(
            LensParams::new(5, &[1]),
            Err(LensError::TooFewParameters(1))
        );
    }

    #[test]
    fn degenerate_orders_admitted() {
        assert_eq!(
            enumerate_classes(1, 3, false),
            vec![l(1, &[0, 0, 0]).canonical()]
        );
        assert_eq!(enumerate_classes(1, 2, true).len(), 1);
        let two = enumerate_classes(2, 2, false);
        assert_eq!(two.len(), 2); // (0,1) and (1,1)
    }

    #[test]
    fn enumeration_small_counts() {
        let four = enumerate_classes(4, 2, true);
        assert_eq!(four, vec![l(4, &[1, 1]).canonical()]);
        let eleven: Vec<String> = enumerate_classes(11, 3, true)
            .iter()
            .map(|c| c.to_string())
            .collect();
        assert_eq!(
            eleven,
            [
                "L(11;1,1,1)",
                "L(11;1,1,2)",
                "L(11;1,1,3)",
                "L(11;1,1,4)",
                "L(11;1,1,5)",
                "L(11;1,2,3)",
                "L(11;1,2,4)"
            ]
        );
    }

    #[test]
    fn enumeration_by_brute_force_dedupe() {
        // Independent oracle: full orbit of every vector under units, signs
        // and permutations, without folding shortcuts.
        for q in 1..=12u64 {
            for n in 2..=3usize {
                let mut classes: Vec<Vec<Vec<u64>>> = Vec::new();
                let total = (q as usize).pow(n as u32);
                for code in 0..total {
                    let mut s = Vec::with_capacity(n);
                    let mut c = code;
                    for _ in 0..n {
                        s.push((c % q as usize) as u64);
                        c /= q as usize;
                    }
                    if s.iter().fold(q, |g, &x| g.gcd(&x)) != 1 {
                        continue;
                    }
                    let key = |v: &[u64]| {
                        let mut v = v.to_vec();
                        v.sort();
                        v
                    };
                    if classes.iter().any(|orbit| orbit.contains(&key(&s))) {
                        continue;
                    }
                    let mut orbit = Vec::new();
                    for t in (1..q.max(2)).filter(|t| t.gcd(&q) == 1) {
                        for signs in 0..(1u32 << n) {
                            let v: Vec<u64> = s
                                .iter()
                                .enumerate()
                                .map(|(j, &x)| {
                                    let y = (t * x) % q;
                                    if signs >> j & 1 == 1 {
                                        (q - y) % q
                                    } else {
                                        y
                                    }
                                })
                                .collect();
                            orbit.push(key(&v));
                        }
                    }
                    classes.push(orbit);
                }
                assert_eq!(
                    enumerate_classes(q, n, false).len(),
                    classes.len(),
                    "q={q} n={n}"
                );
            }
        }
    }

    #[test]
    fn isotropy_examples() {
        let p = isotropy_profile(&l(4, &[1, 0]));
        assert_eq!(p.to_string(), "{{1,4}}");
        let p = isotropy_profile(&l(4, &[0, 1, 2]));
        assert_eq!(p.0, BTreeMap::from([(1, 1), (2, 1), (4, 1)]));
        assert!(isotropy_profile(&l(11, &[1, 2, 3])).is_trivial());
    }

    #[test]
    fn covers() {
        let a = l(49, &[1, 6, 15]);
        assert_eq!(cover(&a, 49).unwrap(), a.canonical());
        assert_eq!(cover(&a, 1).unwrap(), l(1, &[0, 0, 0]).canonical());
        assert_eq!(cover(&a, 7).unwrap().s(), &[1, 1, 1]);
        assert_eq!(cover(&a, 5), Err(LensError::NotADivisor(5, 49)));
    }

    #[test]
    fn text_form_roundtrip() {
        let a: LensParams = "L(100; 1,11,21,31,41,61)".parse().unwrap();
        // stored folded: 61 -> 39
        assert_eq!(a.to_string(), "L(100;1,11,21,31,41,39)");
        assert_eq!(a.to_string().parse::<LensParams>().unwrap(), a);
        assert!("L(5;1)".parse::<LensParams>().is_err());
        assert!("M(5;1,2)".parse::<LensParams>().is_err());
        let json = serde_json::to_string(&a).unwrap();
        assert_eq!(json, r#"{"q":100,"s":[1,11,21,31,41,39]}"#);
        assert_eq!(serde_json::from_str::<LensParams>(&json).unwrap(), a);
        assert!(serde_json::from_str::<LensParams>(r#"{"q":4,"s":[2,2]}"#).is_err());
    }
}
