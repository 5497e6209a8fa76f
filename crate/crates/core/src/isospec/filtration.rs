//! Ikeda's filtration of lens spaces with prime `q = 2n + 5`.
//!
//! For `L = L(q; s)` with `s_i != +-s_j`, the units mod `q` not of the form
//! `+-s_i` are `+-t_1, +-t_2`. `L` lies at level `p0` when no
//! `a_1 t_1 + a_2 t_2 = 0 mod q` with `1 <= |a_1| + |a_2| <= p0 + 2`;
//! members of a common level `p0` are `p`-isospectral for every `p <= p0`.

use std::collections::BTreeSet;

use num_integer::Integer;

use super::{iset_of, IsospecError};
use crate::lens::{enumerate_classes, CanonicalLens, LensParams};
use crate::spectra::{a_poly_table, SpectralFingerprint};

fn is_prime(q: u64) -> bool {
    q >= 2
        && (2..)
            .take_while(|d| d * d <= q)
            .all(|d| !q.is_multiple_of(d))
}

/// The two smallest positive residues not congruent to any `+-s_i`.
pub fn complement_parameters(lens: &LensParams) -> Result<(u64, u64), IsospecError> {
    let q = lens.q();
    let n = lens.n();
    if !is_prime(q) || q.is_multiple_of(2) || q != 2 * n as u64 + 5 {
        return Err(IsospecError::NotApplicable(format!(
            "need an odd prime q = 2n + 5, got q = {q}, n = {n}"
        )));
    }
    let mut hit = BTreeSet::new();
    for &s in lens.s() {
        if s % q == 0 {
            return Err(IsospecError::NotLensSpace(lens.to_string()));
        }
        if !hit.insert(s) {
            return Err(IsospecError::NotApplicable(format!(
                "{lens} has s_i = +-s_j"
            )));
        }
        hit.insert(q - s);
    }
    let mut free = (1..q).filter(|x| !hit.contains(x));
    match (free.next(), free.next()) {
        (Some(a), Some(b)) => Ok((a, b)),
        _ => unreachable!("2n + 4 = q - 1 leaves exactly four residues"),
    }
}

/// The largest `p0` with `L` in the level-`p0` class of the filtration.
pub fn ikeda_filtration_level(lens: &LensParams) -> Result<usize, IsospecError> {
    let (t1, t2) = complement_parameters(lens)?;
    let q = lens.q() as i64;
    let (t1, t2) = (t1 as i64, t2 as i64);
    // smallest one-norm of a nonzero solution; (q, 0) bounds it
    let mut norm = 1i64;
    loop {
        let hit = (-norm..=norm).any(|a1| {
            let rest = norm - a1.abs();
            [rest, -rest]
                .iter()
                .any(|&a2| (a1 * t1 + a2 * t2).mod_floor(&q) == 0)
        });
        if hit {
            return Ok((norm - 3) as usize);
        }
        norm += 1;
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FiltrationViolation {
    pub a: CanonicalLens,
    pub b: CanonicalLens,
    pub common_level: usize,
    pub iset: BTreeSet<usize>,
}

/// Checks that lens spaces sharing level `p0` (for `q = 2n + 5` prime) are
/// `p`-isospectral for `p <= min(p0, n - 1)`, and that a pair at levels
/// `p0` and `> p0` is not `(p0 + 1)`-isospectral.
pub fn ikeda_consistency(q: u64) -> Result<Vec<FiltrationViolation>, IsospecError> {
    if q < 7 || q.is_multiple_of(2) {
        return Err(IsospecError::NotApplicable(format!("q = {q}")));
    }
    let n = ((q - 5) / 2) as usize;
    let table = a_poly_table(n);
    let mut members = Vec::new();
    for c in enumerate_classes(q, n, true) {
        if let Ok(level) = ikeda_filtration_level(c.params()) {
            let fp = SpectralFingerprint::new(&crate::lattice::phi_profile(c.params()), &table);
            members.push((c, level, fp));
        }
    }
    let mut out = Vec::new();
    for i in 0..members.len() {
        for j in i + 1..members.len() {
            let (a, la, fa) = &members[i];
            let (b, lb, fb) = &members[j];
            let iset = iset_of(fa, fb);
            let common = (*la).min(*lb);
            let shared_ok = (0..=common.min(n - 1)).all(|p| iset.contains(&p));
            let split_ok = la == lb || common + 1 >= n || !iset.contains(&(common + 1));
            if !shared_ok || !split_ok {
                out.push(FiltrationViolation {
                    a: a.clone(),
                    b: b.clone(),
                    common_level: common,
                    iset,
                });
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn l(q: u64, s: &[i64]) -> LensParams {
        LensParams::new(q, s).unwrap()
    }

    #[test]
    fn eleven_levels() {
        assert_eq!(ikeda_filtration_level(&l(11, &[1, 2, 4])).unwrap(), 0);
        assert!(ikeda_filtration_level(&l(11, &[1, 2, 3])).unwrap() >= 1);
        assert_eq!(ikeda_filtration_level(&l(11, &[3, 4, 5])).unwrap(), 0);
    }

    #[test]
    fn thirteen_levels() {
        assert_eq!(ikeda_filtration_level(&l(13, &[1, 2, 3, 6])).unwrap(), 0);
        assert_eq!(ikeda_filtration_level(&l(13, &[1, 2, 3, 4])).unwrap(), 1);
        assert!(ikeda_filtration_level(&l(13, &[1, 2, 3, 5])).unwrap() >= 2);
    }

    #[test]
    fn not_applicable() {
        assert!(ikeda_filtration_level(&l(11, &[1, 1, 2])).is_err());
        assert!(ikeda_filtration_level(&l(15, &[1, 2, 4, 7, 1])).is_err());
        assert!(ikeda_filtration_level(&l(11, &[1, 2])).is_err());
    }

    #[test]
    fn levels_predict_isospectrality() {
        for q in [11, 13, 17] {
            assert!(ikeda_consistency(q).unwrap().is_empty(), "q = {q}");
        }
    }
}
