//! Checks of proved statements over computed data, and scanners that report
//! on conjectured patterns without asserting them.

use std::collections::{BTreeSet, HashMap};

use super::{
    format_iset, hole_violations, iset_of, Family, FamilyReport, IsospecError, ProfileSource,
};
use crate::exactmath::IntPoly;
use crate::lens::{cover, divisors, CanonicalLens, LensParams};
use crate::spectra::{a_poly_table, ftilde0, SpectralFingerprint};

struct Memo<'a> {
    source: &'a ProfileSource<'a>,
    tables: HashMap<usize, crate::spectra::APolyTable>,
    fps: HashMap<CanonicalLens, SpectralFingerprint>,
}

impl<'a> Memo<'a> {
    fn new(source: &'a ProfileSource<'a>) -> Self {
        Memo {
            source,
            tables: HashMap::new(),
            fps: HashMap::new(),
        }
    }

    fn get(&mut self, lens: &CanonicalLens) -> &SpectralFingerprint {
        if !self.fps.contains_key(lens) {
            let table = self
                .tables
                .entry(lens.n())
                .or_insert_with(|| a_poly_table(lens.n()));
            let fp = SpectralFingerprint::new(&(self.source)(lens), table);
            self.fps.insert(lens.clone(), fp);
        }
        &self.fps[lens]
    }

    fn iset(&mut self, a: &CanonicalLens, b: &CanonicalLens) -> BTreeSet<usize> {
        let fa = self.get(a).clone();
        iset_of(&fa, self.get(b))
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HoleViolation {
    pub members: Vec<CanonicalLens>,
    pub iset: BTreeSet<usize>,
    pub missing: Vec<usize>,
}

/// Hole-freeness of every family's `I` and of every pairwise set inside
/// each family. An empty result is expected.
pub fn verify_hole(report: &FamilyReport, source: &ProfileSource<'_>) -> Vec<HoleViolation> {
    let mut memo = Memo::new(source);
    let mut out = Vec::new();
    for f in &report.families {
        let missing = hole_violations(&f.iset);
        if !missing.is_empty() {
            out.push(HoleViolation {
                members: f.members.clone(),
                iset: f.iset.clone(),
                missing,
            });
        }
        for (i, a) in f.members.iter().enumerate() {
            for b in &f.members[i + 1..] {
                let iset = memo.iset(a, b);
                let missing = hole_violations(&iset);
                if !missing.is_empty() {
                    out.push(HoleViolation {
                        members: vec![a.clone(), b.clone()],
                        iset,
                        missing,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoveringViolation {
    pub a: CanonicalLens,
    pub b: CanonicalLens,
    pub q1: u64,
}

/// For each divisor `q1` of `q`, whether the `q1`-covers have equal
/// `F~^0`. Valid for orbifolds as well; see [`verify_covering`].
pub fn cover_agreement(a: &LensParams, b: &LensParams) -> Result<Vec<(u64, bool)>, IsospecError> {
    if a.q() != b.q() || a.n() != b.n() {
        return Err(IsospecError::MixedMembers(format!("{a} vs {b}")));
    }
    divisors(a.q())
        .into_iter()
        .map(|q1| {
            let ca = cover(a, q1)?;
            let cb = cover(b, q1)?;
            Ok((q1, ftilde0(ca.params()) == ftilde0(cb.params())))
        })
        .collect()
}

/// Covering descent for 0-isospectral lens-space pairs: every pair of
/// covers of the same order is again 0-isospectral.
pub fn verify_covering(
    pairs: &[(LensParams, LensParams)],
) -> Result<Vec<CoveringViolation>, IsospecError> {
    let mut out = Vec::new();
    for (a, b) in pairs {
        for l in [a, b] {
            if !l.is_lens_space() {
                return Err(IsospecError::NotLensSpace(l.to_string()));
            }
        }
        for (q1, ok) in cover_agreement(a, b)? {
            if !ok {
                out.push(CoveringViolation {
                    a: a.canonical(),
                    b: b.canonical(),
                    q1,
                });
            }
        }
    }
    Ok(out)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PaddingReport {
    pub base: BTreeSet<usize>,
    pub padded: BTreeSet<usize>,
    pub zeros: usize,
}

impl PaddingReport {
    /// Zero-padding preserves and reflects 0-isospectrality.
    pub fn biconditional_holds(&self) -> bool {
        self.base.contains(&0) == self.padded.contains(&0)
    }

    /// Degrees `p > 0` isospectral before padding but not after.
    pub fn lost_degrees(&self) -> Vec<usize> {
        self.base
            .iter()
            .copied()
            .filter(|&p| p > 0 && !self.padded.contains(&p))
            .collect()
    }
}

pub fn verify_padding(
    a: &LensParams,
    b: &LensParams,
    zeros: usize,
) -> Result<PaddingReport, IsospecError> {
    let base = super::isospec_set(a, b)?.iset;
    let padded = super::isospec_set(&a.padded(zeros), &b.padded(zeros))?.iset;
    Ok(PaddingReport {
        base,
        padded,
        zeros,
    })
}

/// Number of leading `h = 0, 1, ...` (at most `n`) for which the moments
/// `sum_l l^h theta^(l)` agree; by the moment characterization this equals
/// the number of leading degrees `0, 1, ...` in the isospectrality set.
pub fn moment_prefix(a: &SpectralFingerprint, b: &SpectralFingerprint) -> usize {
    assert_eq!(a.q(), b.q());
    assert_eq!(a.n(), b.n());
    let moment = |fp: &SpectralFingerprint, h: u32| {
        let mut acc = IntPoly::zero();
        for (l, c) in fp.cleared_theta().iter().enumerate() {
            acc += &c.scale(&num_bigint::BigInt::from(l as u64).pow(h));
        }
        acc
    };
    (0..a.n() as u32)
        .take_while(|&h| moment(a, h) == moment(b, h))
        .count()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TheoremViolation {
    pub statement: &'static str,
    pub members: Vec<CanonicalLens>,
    pub iset: BTreeSet<usize>,
}

/// Checks over a report:
/// * lens-space pairs isospectral for all `p <= n-2` are isospectral for all `p`;
/// * lens-space pairs isospectral on an `(n-2)`-set other than `{0..n-3}` are
///   isospectral for all `p`;
/// * a 0-isospectral family containing a lens space has only lens spaces.
pub fn scan_theorems(report: &FamilyReport, source: &ProfileSource<'_>) -> Vec<TheoremViolation> {
    let n = report.n;
    let mut memo = Memo::new(source);
    let mut out = Vec::new();
    let lower: BTreeSet<usize> = (0..n.saturating_sub(1)).collect();
    let shifted_ok: BTreeSet<usize> = (0..n.saturating_sub(2)).collect();
    for f in &report.families {
        if f.iset.contains(&0) && f.any_lens_space() && !f.all_lens_spaces() {
            out.push(TheoremViolation {
                statement: "0-isospectral to a lens space implies lens space",
                members: f.members.clone(),
                iset: f.iset.clone(),
            });
        }
        let spaces: Vec<&CanonicalLens> = f.members.iter().filter(|m| m.is_lens_space()).collect();
        for (i, a) in spaces.iter().enumerate() {
            for b in &spaces[i + 1..] {
                let iset = memo.iset(a, b);
                if iset.len() == n {
                    continue;
                }
                if n >= 2 && lower.is_subset(&iset) {
                    out.push(TheoremViolation {
                        statement: "lens spaces isospectral for p <= n-2 are isospectral for all p",
                        members: vec![(*a).clone(), (*b).clone()],
                        iset: iset.clone(),
                    });
                }
                if n >= 2 && iset.len() == n - 2 && iset != shifted_ok {
                    out.push(TheoremViolation {
                        statement:
                            "no lens-space pair is I-isospectral for |I| = n-2, I != {0..n-3}",
                        members: vec![(*a).clone(), (*b).clone()],
                        iset,
                    });
                }
            }
        }
    }
    out
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct ConjectureReport {
    pub confirmations: Vec<String>,
    pub counterexamples: Vec<String>,
}

impl ConjectureReport {
    pub fn lines(&self) -> Vec<String> {
        let mut out: Vec<String> = self
            .confirmations
            .iter()
            .map(|c| format!("ok: {c}"))
            .collect();
        out.extend(
            self.counterexamples
                .iter()
                .map(|c| format!("COUNTEREXAMPLE: {c}")),
        );
        out
    }
}

fn predicted_dim5_pair(t: u64) -> Vec<CanonicalLens> {
    let q = 8 * t;
    let t = t as i64;
    let mut v = vec![
        LensParams::new(q, &[4, t, 3 * t])
            .expect("valid")
            .canonical(),
        LensParams::new(q, &[8, t, 3 * t])
            .expect("valid")
            .canonical(),
    ];
    v.sort();
    v
}

/// Scans reports for the conjectured patterns:
/// * `n = 3`: the `{2}`-families are exactly `{L(8t;4,t,3t), L(8t;8,t,3t)}`, `t` odd;
/// * `n = 4`: `{2}`-families have `3 | q`, `{3}`-families have `5 | q`;
/// * no family with nonempty `I` mixes lens spaces and singular orbifolds.
///
/// `orbifolds_scanned` must be true for the first pattern's completeness
/// check, which needs orbifold reports.
pub fn scan_conjectures(reports: &[FamilyReport], orbifolds_scanned: bool) -> ConjectureReport {
    let mut r = ConjectureReport::default();
    let two: BTreeSet<usize> = [2].into();
    let three: BTreeSet<usize> = [3].into();
    let mut mixed = 0usize;
    let mut families = 0usize;
    for rep in reports {
        for f in &rep.families {
            families += 1;
            if f.any_lens_space() && !f.all_lens_spaces() {
                mixed += 1;
                r.counterexamples
                    .push(format!("q={} mixes spaces and orbifolds: {f}", rep.q));
            }
        }
        match rep.n {
            3 => {
                let found: Vec<&Family> = rep.families.iter().filter(|f| f.iset == two).collect();
                let predicted = (rep.q % 8 == 0 && (rep.q / 8) % 2 == 1)
                    .then(|| predicted_dim5_pair(rep.q / 8));
                for f in &found {
                    if Some(&f.members) == predicted.as_ref() {
                        r.confirmations.push(format!("q={} {{2}}-pair {f}", rep.q));
                    } else {
                        r.counterexamples
                            .push(format!("q={} unexpected {{2}}-family {f}", rep.q));
                    }
                }
                if let (Some(p), true) = (&predicted, orbifolds_scanned) {
                    if !found.iter().any(|f| &f.members == p) {
                        let shown: Vec<String> = p.iter().map(ToString::to_string).collect();
                        r.counterexamples.push(format!(
                            "q={} predicted {{2}}-pair missing: {}",
                            rep.q,
                            shown.join(", ")
                        ));
                    }
                }
            }
            4 => {
                for f in &rep.families {
                    let bad =
                        (f.iset == two && rep.q % 3 != 0) || (f.iset == three && rep.q % 5 != 0);
                    if bad {
                        r.counterexamples
                            .push(format!("q={} divisibility fails: {f}", rep.q));
                    } else if f.iset == two || f.iset == three {
                        r.confirmations.push(format!(
                            "q={} {} family {f}",
                            rep.q,
                            format_iset(&f.iset)
                        ));
                    }
                }
            }
            _ => {}
        }
    }
    if mixed == 0 {
        r.confirmations.push(format!(
            "no mixed space/orbifold family among {families} families"
        ));
    }
    r
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::isospec::{classify_families, compute_profile};

    fn l(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    #[test]
    fn synthetic_hole_is_flagged() {
        let members = vec![l(11, &[1, 2, 3]).canonical(), l(11, &[1, 2, 4]).canonical()];
        for (iset, missing) in [(vec![0usize, 2], vec![1usize]), (vec![1], vec![0])] {
            let report = FamilyReport {
                q: 11,
                n: 3,
                families: vec![Family {
                    members: members.clone(),
                    iset: iset.into_iter().collect(),
                }],
            };
            let v = verify_hole(&report, &compute_profile);
            assert_eq!(v.len(), 1);
            assert_eq!(v[0].missing, missing);
        }
    }

    #[test]
    fn computed_reports_have_no_holes() {
        for (q, n) in [(11, 3), (13, 4), (8, 3), (12, 3)] {
            let r = classify_families(q, n, false);
            assert!(verify_hole(&r, &compute_profile).is_empty());
        }
    }

    #[test]
    fn covers_of_all_p_pair() {
        let pair = (l(49, &[1, 6, 15]), l(49, &[1, 6, 20]));
        assert!(verify_covering(std::slice::from_ref(&pair))
            .unwrap()
            .is_empty());
        let agree = cover_agreement(&pair.0, &pair.1).unwrap();
        assert_eq!(agree, vec![(1, true), (7, true), (49, true)]);
        assert!(verify_covering(&[(l(8, &[0, 1, 3]), l(8, &[1, 3, 4]))]).is_err());
    }

    #[test]
    fn padding() {
        let r = verify_padding(&l(11, &[1, 2, 3]), &l(11, &[1, 2, 4]), 1).unwrap();
        assert!(r.padded.contains(&0) && r.biconditional_holds());
        let r = verify_padding(&l(8, &[0, 1, 3]), &l(8, &[1, 3, 4]), 1).unwrap();
        assert!(r.base.contains(&2) && !r.padded.contains(&2));
        assert_eq!(r.lost_degrees(), vec![2]);
        let r = verify_padding(&l(15, &[1, 2]), &l(15, &[1, 4]), 2).unwrap();
        assert!(!r.padded.contains(&0) && r.biconditional_holds());
    }

    #[test]
    fn moments_agree_with_degrees() {
        let t = a_poly_table(4);
        let fp = |x: &LensParams| SpectralFingerprint::new(&crate::lattice::phi_profile(x), &t);
        let a = fp(&l(13, &[1, 2, 3, 4]));
        let b = fp(&l(13, &[1, 2, 3, 5]));
        let c = fp(&l(13, &[1, 2, 3, 6]));
        assert_eq!(moment_prefix(&a, &b), 2);
        assert_eq!(moment_prefix(&a, &c), 1);
        assert_eq!(moment_prefix(&a, &a), 4);
    }

    #[test]
    fn small_theorem_scan() {
        for (q, n) in [(11, 3), (13, 4), (16, 3)] {
            let r = classify_families(q, n, false);
            assert!(scan_theorems(&r, &compute_profile).is_empty(), "q={q}");
        }
    }

    #[test]
    fn first_dimension_five_pair() {
        let r = classify_families(8, 3, false);
        let c = scan_conjectures(&[r], true);
        assert!(c.counterexamples.is_empty(), "{:?}", c.counterexamples);
        assert!(
            c.confirmations[0].contains("L(8;0,1,3), L(8;1,3,4)"),
            "{:?}",
            c.confirmations
        );
    }
}
