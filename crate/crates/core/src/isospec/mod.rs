//! p-isospectrality decisions between lens orbifolds and extraction of
//! I-isospectral families.
//!
//! For fixed `(q, n)` every `F^p` is determined by one integer polynomial
//! (see [`SpectralFingerprint`]), so two orbifolds are `p`-isospectral iff
//! the polynomials for `F^(p-1)` and `F^p` coincide. Each `p` thus induces an
//! equivalence relation on classes, and families are equivalence classes of
//! intersections of these relations.

mod amatrix;
mod filtration;
mod verify;

pub use amatrix::{a_matrix, a_matrix_minors, bareiss_determinant, eliminate, AMatrix};
pub use filtration::{
    complement_parameters, ikeda_consistency, ikeda_filtration_level, FiltrationViolation,
};
pub use verify::{
    moment_prefix, scan_conjectures, scan_theorems, verify_covering, verify_hole, verify_padding,
    ConjectureReport, CoveringViolation, HoleViolation, PaddingReport, TheoremViolation,
};

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::exactmath::rat_equal;
use crate::lattice::{phi_profile, PhiProfile};
use crate::lens::{enumerate_classes, CanonicalLens, LensError, LensParams};
use crate::spectra::{a_poly_table, SpectralFingerprint};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum IsospecError {
    #[error("orbifolds have different dimensions (n = {0} and n = {1})")]
    DimensionMismatch(usize, usize),
    #[error("degree p = {p} outside 0..{n}")]
    DegreeOutOfRange { p: usize, n: usize },
    #[error("{0} is not a lens space")]
    NotLensSpace(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("members must share q and n: {0}")]
    MixedMembers(String),
    #[error(transparent)]
    Lens(#[from] LensError),
}

/// Supplies the reduced counts of a class; lets callers plug in a cache.
pub type ProfileSource<'a> = dyn Fn(&CanonicalLens) -> PhiProfile + Sync + 'a;

/// Reduced counts computed directly, without a cache.
pub fn compute_profile(lens: &CanonicalLens) -> PhiProfile {
    phi_profile(lens.params())
}

fn fingerprint(lens: &LensParams) -> SpectralFingerprint {
    SpectralFingerprint::new(&phi_profile(lens), &a_poly_table(lens.n()))
}

/// Whether `F^p` agrees, `p >= -1`.
fn same_genfun(a: &SpectralFingerprint, b: &SpectralFingerprint, p: i64) -> bool {
    if p < 0 {
        return true;
    }
    if a.q() == b.q() {
        a.g(p as usize) == b.g(p as usize)
    } else {
        rat_equal(&a.genfun(p), &b.genfun(p))
    }
}

/// `{p : F^(p-1) and F^p agree}` for two fingerprints of the same `n`.
pub fn iset_of(a: &SpectralFingerprint, b: &SpectralFingerprint) -> BTreeSet<usize> {
    assert_eq!(a.n(), b.n());
    let same: Vec<bool> = (0..a.n() as i64).map(|p| same_genfun(a, b, p)).collect();
    (0..a.n())
        .filter(|&p| same[p] && (p == 0 || same[p - 1]))
        .collect()
}

/// Decides `p`-isospectrality of two orbifolds of equal dimension.
pub fn p_isospectral(a: &LensParams, b: &LensParams, p: usize) -> Result<bool, IsospecError> {
    if a.n() != b.n() {
        return Err(IsospecError::DimensionMismatch(a.n(), b.n()));
    }
    if p >= a.n() {
        return Err(IsospecError::DegreeOutOfRange { p, n: a.n() });
    }
    let (fa, fb) = (fingerprint(a), fingerprint(b));
    Ok(same_genfun(&fa, &fb, p as i64 - 1) && same_genfun(&fa, &fb, p as i64))
}

/// The exact set of degrees on which a pair is isospectral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IsospecSet {
    pub a: CanonicalLens,
    pub b: CanonicalLens,
    pub n: usize,
    pub iset: BTreeSet<usize>,
}

impl IsospecSet {
    pub fn is_full(&self) -> bool {
        self.iset.len() == self.n
    }
}

impl fmt::Display for IsospecSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} / {}: {}", self.a, self.b, format_iset(&self.iset))
    }
}

/// Degrees `p` where `p-1` and `p+1` are in `iset` but `p` is not; degree
/// `-1` counts as always present.
pub fn hole_violations(iset: &BTreeSet<usize>) -> Vec<usize> {
    let top = iset.iter().next_back().copied().unwrap_or(0);
    (0..top)
        .filter(|&p| {
            !iset.contains(&p) && iset.contains(&(p + 1)) && (p == 0 || iset.contains(&(p - 1)))
        })
        .collect()
}

/// # Panics
/// If the computed set has a hole, which would contradict the shared-string
/// structure of the spectra and therefore indicates a bug.
pub fn isospec_set(a: &LensParams, b: &LensParams) -> Result<IsospecSet, IsospecError> {
    if a.n() != b.n() {
        return Err(IsospecError::DimensionMismatch(a.n(), b.n()));
    }
    let iset = iset_of(&fingerprint(a), &fingerprint(b));
    assert!(
        hole_violations(&iset).is_empty(),
        "hole in isospectrality set {iset:?} for {a} / {b}"
    );
    Ok(IsospecSet {
        a: a.canonical(),
        b: b.canonical(),
        n: a.n(),
        iset,
    })
}

pub fn format_iset(iset: &BTreeSet<usize>) -> String {
    let parts: Vec<String> = iset.iter().map(|p| p.to_string()).collect();
    format!("{{{}}}", parts.join(","))
}

/// A maximal family mutually `p`-isospectral exactly for `p` in `iset`.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct Family {
    pub members: Vec<CanonicalLens>,
    pub iset: BTreeSet<usize>,
}

impl Family {
    pub fn all_lens_spaces(&self) -> bool {
        self.members.iter().all(CanonicalLens::is_lens_space)
    }

    pub fn any_lens_space(&self) -> bool {
        self.members.iter().any(CanonicalLens::is_lens_space)
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let m: Vec<String> = self.members.iter().map(ToString::to_string).collect();
        write!(f, "{} {{{}}}", format_iset(&self.iset), m.join(", "))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FamilyReport {
    pub q: u64,
    pub n: usize,
    pub families: Vec<Family>,
}

#[derive(Serialize, Deserialize)]
struct FamilyWire {
    members: Vec<String>,
    #[serde(rename = "I")]
    iset: Vec<usize>,
}

#[derive(Serialize, Deserialize)]
struct ReportWire {
    q: u64,
    n: usize,
    families: Vec<FamilyWire>,
}

impl Serialize for FamilyReport {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        ReportWire {
            q: self.q,
            n: self.n,
            families: self
                .families
                .iter()
                .map(|f| FamilyWire {
                    members: f.members.iter().map(ToString::to_string).collect(),
                    iset: f.iset.iter().copied().collect(),
                })
                .collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for FamilyReport {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error;
        let wire = ReportWire::deserialize(deserializer)?;
        let mut families = Vec::with_capacity(wire.families.len());
        for f in wire.families {
            let members = f
                .members
                .iter()
                .map(|m| m.parse::<LensParams>().map(|l| l.canonical()))
                .collect::<Result<Vec<_>, _>>()
                .map_err(D::Error::custom)?;
            families.push(Family {
                members,
                iset: f.iset.into_iter().collect(),
            });
        }
        Ok(FamilyReport {
            q: wire.q,
            n: wire.n,
            families,
        })
    }
}

/// Fingerprints of a list of classes, computed in parallel on the current
/// rayon pool; order follows the input.
pub fn fingerprints(
    classes: &[CanonicalLens],
    source: &ProfileSource<'_>,
) -> Vec<SpectralFingerprint> {
    let n = match classes.first() {
        Some(c) => c.n(),
        None => return Vec::new(),
    };
    let table = a_poly_table(n);
    classes
        .par_iter()
        .map(|c| SpectralFingerprint::new(&source(c), &table))
        .collect()
}

/// Families among `classes` (sorted, same `q` and `n`) given their
/// fingerprints. For each nonempty `I`, the classes of the intersected
/// equivalence relations with at least two members are candidates; a
/// candidate is kept when `I` is exactly the set of degrees on which all its
/// members agree.
pub fn extract_families(classes: &[CanonicalLens], fps: &[SpectralFingerprint]) -> Vec<Family> {
    assert_eq!(classes.len(), fps.len());
    if classes.len() < 2 {
        return Vec::new();
    }
    let n = fps[0].n();
    // ids[p][i]: label of F^p of class i
    let ids: Vec<Vec<usize>> = (0..n)
        .map(|p| {
            let mut labels = HashMap::new();
            fps.iter()
                .map(|f| {
                    let next = labels.len();
                    *labels.entry(f.g(p)).or_insert(next)
                })
                .collect()
        })
        .collect();
    // key of the p-isospectrality relation: labels of F^(p-1), F^p
    let key = |p: usize, i: usize| (if p == 0 { usize::MAX } else { ids[p - 1][i] }, ids[p][i]);

    let mut families = Vec::new();
    for mask in 1u32..(1 << n) {
        let iset: Vec<usize> = (0..n).filter(|p| mask & (1 << p) != 0).collect();
        let mut groups: BTreeMap<Vec<(usize, usize)>, Vec<usize>> = BTreeMap::new();
        for i in 0..classes.len() {
            let k: Vec<(usize, usize)> = iset.iter().map(|&p| key(p, i)).collect();
            groups.entry(k).or_default().push(i);
        }
        for members in groups.into_values().filter(|m| m.len() >= 2) {
            let exact: BTreeSet<usize> = (0..n)
                .filter(|&p| members.iter().all(|&i| key(p, i) == key(p, members[0])))
                .collect();
            if exact.iter().copied().eq(iset.iter().copied()) {
                families.push(Family {
                    members: members.iter().map(|&i| classes[i].clone()).collect(),
                    iset: exact,
                });
            }
        }
    }
    families.sort();
    families
}

/// All maximal I-isospectral families among `(2n-1)`-dimensional lens
/// orbifolds (or lens spaces) with fundamental group of order `q`.
pub fn classify_families(q: u64, n: usize, spaces_only: bool) -> FamilyReport {
    classify_families_with(q, n, spaces_only, &compute_profile)
}

pub fn classify_families_with(
    q: u64,
    n: usize,
    spaces_only: bool,
    source: &ProfileSource<'_>,
) -> FamilyReport {
    let classes = enumerate_classes(q, n, spaces_only);
    let fps = fingerprints(&classes, source);
    FamilyReport {
        q,
        n,
        families: extract_families(&classes, &fps),
    }
}

/// Families among an explicit member list, all with the same `q` and `n`.
pub fn classify_members(
    members: &[LensParams],
    source: &ProfileSource<'_>,
) -> Result<FamilyReport, IsospecError> {
    let first = members
        .first()
        .ok_or_else(|| IsospecError::MixedMembers("empty member list".into()))?;
    let (q, n) = (first.q(), first.n());
    if let Some(bad) = members.iter().find(|m| m.q() != q || m.n() != n) {
        return Err(IsospecError::MixedMembers(format!(
            "{bad} differs from {first}"
        )));
    }
    let classes: Vec<CanonicalLens> = members
        .iter()
        .map(LensParams::canonical)
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let fps = fingerprints(&classes, source);
    Ok(FamilyReport {
        q,
        n,
        families: extract_families(&classes, &fps),
    })
}

/// Existence of I-isospectral families over a range of `q`, split into
/// lens spaces and lens orbifolds, in the layout of a summary table.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SummaryTable {
    pub n: usize,
    pub spaces_only: bool,
    pub spaces: BTreeSet<BTreeSet<usize>>,
    pub orbifolds: BTreeSet<BTreeSet<usize>>,
}

impl SummaryTable {
    pub fn new(n: usize, spaces_only: bool) -> Self {
        SummaryTable {
            n,
            spaces_only,
            spaces: BTreeSet::new(),
            orbifolds: BTreeSet::new(),
        }
    }

    /// Adds one `q`: `classes` and `fps` cover every class considered.
    pub fn absorb(&mut self, classes: &[CanonicalLens], fps: &[SpectralFingerprint]) {
        let (sc, sf): (Vec<_>, Vec<_>) = classes
            .iter()
            .zip(fps)
            .filter(|(c, _)| c.is_lens_space())
            .map(|(c, f)| (c.clone(), f.clone()))
            .unzip();
        for f in extract_families(&sc, &sf) {
            self.spaces.insert(f.iset);
        }
        if !self.spaces_only {
            for f in extract_families(classes, fps) {
                self.orbifolds.insert(f.iset);
            }
        }
    }

    fn cell(&self, iset: &BTreeSet<usize>, found: bool, spaces: bool) -> &'static str {
        let n = self.n;
        if found {
            "exists"
        } else if !hole_violations(iset).is_empty() {
            "hole"
        } else if spaces && n >= 2 && iset.iter().copied().eq(0..n - 1) {
            "vandermonde"
        } else if spaces && n >= 2 && iset.len() == n - 2 && !iset.iter().copied().eq(0..n - 2) {
            "a-matrix"
        } else {
            "none"
        }
    }

    /// One row per nonempty `I`; cells are `exists`, an obstruction tag
    /// (`hole`, `vandermonde`, `a-matrix`), `none`, or `-` when not scanned.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("I,lens_spaces,lens_orbifolds\n");
        for mask in 1u32..(1 << self.n) {
            let iset: BTreeSet<usize> = (0..self.n).filter(|p| mask & (1 << p) != 0).collect();
            let s = self.cell(&iset, self.spaces.contains(&iset), true);
            let o = if self.spaces_only {
                "-"
            } else {
                self.cell(&iset, self.orbifolds.contains(&iset), false)
            };
            out.push_str(&format!("\"{}\",{s},{o}\n", format_iset(&iset)));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    fn set(v: &[usize]) -> BTreeSet<usize> {
        v.iter().copied().collect()
    }

    #[test]
    fn eleven_pair() {
        let (a, b) = (l(11, &[1, 2, 3]), l(11, &[1, 2, 4]));
        assert!(p_isospectral(&a, &b, 0).unwrap());
        assert!(!p_isospectral(&a, &b, 1).unwrap());
        assert_eq!(isospec_set(&a, &b).unwrap().iset, set(&[0]));
    }

    #[test]
    fn eight_pair_is_two_isospectral_only() {
        let (a, b) = (l(8, &[0, 1, 3]), l(8, &[1, 3, 4]));
        assert_eq!(isospec_set(&a, &b).unwrap().iset, set(&[2]));
    }

    #[test]
    fn reflexive_and_symmetric() {
        let (a, b) = (l(13, &[1, 2, 3, 4]), l(13, &[1, 2, 3, 5]));
        assert!(isospec_set(&a, &a).unwrap().is_full());
        assert_eq!(
            isospec_set(&a, &b).unwrap().iset,
            isospec_set(&b, &a).unwrap().iset
        );
        assert_eq!(isospec_set(&a, &b).unwrap().iset, set(&[0, 1]));
        assert_eq!(
            isospec_set(&l(13, &[1, 2, 3, 6]), &a).unwrap().iset,
            set(&[0])
        );
    }

    #[test]
    fn dimension_mismatch() {
        assert_eq!(
            p_isospectral(&l(5, &[1, 2]), &l(5, &[1, 2, 1]), 0),
            Err(IsospecError::DimensionMismatch(2, 3))
        );
    }

    #[test]
    fn holes() {
        assert_eq!(hole_violations(&set(&[0, 2])), vec![1]);
        assert_eq!(hole_violations(&set(&[1])), vec![0]);
        assert!(hole_violations(&set(&[2])).is_empty());
        assert!(hole_violations(&set(&[0, 1, 2])).is_empty());
        assert!(hole_violations(&set(&[])).is_empty());
    }

    #[test]
    fn thirteen_families() {
        let r = classify_families(13, 4, true);
        let shown: Vec<String> = r.families.iter().map(ToString::to_string).collect();
        assert_eq!(
            shown,
            [
                "{0,1} {L(13;1,2,3,4), L(13;1,2,3,5)}",
                "{0} {L(13;1,2,3,4), L(13;1,2,3,5), L(13;1,2,3,6)}"
            ]
        );
    }

    #[test]
    fn single_class_has_no_family() {
        assert!(classify_families(1, 3, false).families.is_empty());
        assert!(classify_families(2, 2, false).families.is_empty());
    }

    #[test]
    fn report_json_roundtrip() {
        let r = classify_families(11, 3, true);
        let s = serde_json::to_string(&r).unwrap();
        assert_eq!(
            s,
            r#"{"q":11,"n":3,"families":[{"members":["L(11;1,2,3)","L(11;1,2,4)"],"I":[0]}]}"#
        );
        assert_eq!(serde_json::from_str::<FamilyReport>(&s).unwrap(), r);
    }

    #[test]
    fn summary_csv_shape() {
        let classes = enumerate_classes(8, 3, false);
        let fps = fingerprints(&classes, &compute_profile);
        let mut t = SummaryTable::new(3, false);
        t.absorb(&classes, &fps);
        let csv = t.to_csv();
        assert!(csv.contains("\"{2}\",a-matrix,exists\n"), "{csv}");
        assert!(csv.contains("\"{1}\",hole,hole\n"));
        assert!(csv.contains("\"{0,1}\",vandermonde,none\n"));
    }
}
