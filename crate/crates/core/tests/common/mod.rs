#![allow(dead_code)]

use std::collections::BTreeMap;

use num_integer::Integer;
use proptest::prelude::*;

use lenspec::exactmath::{IntPoly, RationalFunction};
use lenspec::lattice::{phi_profile, CongruenceLattice};
use lenspec::lens::LensParams;
use lenspec::spectra::{a_poly_table, SpectralFingerprint};

pub fn poly() -> impl Strategy<Value = IntPoly> {
    prop::collection::vec(-40i64..40, 0..7).prop_map(|c| IntPoly::from_i64s(&c))
}

/// Rational functions whose denominator has constant term 1.
pub fn expandable() -> impl Strategy<Value = RationalFunction> {
    (poly(), prop::collection::vec(-5i64..5, 0..5)).prop_map(|(num, tail)| {
        let mut d = vec![1];
        d.extend(tail);
        RationalFunction::new(num, IntPoly::from_i64s(&d), 0).unwrap()
    })
}

pub fn lens_strategy(
    max_q: u64,
    ns: std::ops::RangeInclusive<usize>,
) -> impl Strategy<Value = LensParams> {
    (1..=max_q, ns)
        .prop_flat_map(|(q, n)| (Just(q), prop::collection::vec(0..q as i64, n)))
        .prop_filter_map("gcd(q, s) must be 1", |(q, s)| LensParams::new(q, &s).ok())
}

pub fn units(q: u64) -> Vec<u64> {
    (1..=q.max(1)).filter(|t| t.gcd(&q) == 1).collect()
}

pub fn fingerprint(lens: &LensParams) -> SpectralFingerprint {
    SpectralFingerprint::new(&phi_profile(lens), &a_poly_table(lens.n()))
}

/// `s` moved by a unit, a permutation and signs; isometric to `lens`.
pub fn orbit_point(lens: &LensParams, t: u64, perm_seed: u64, signs: &[bool]) -> LensParams {
    let mut s: Vec<i64> = lens.s().iter().map(|&x| x as i64).collect();
    for i in (1..s.len()).rev() {
        s.swap(
            i,
            (perm_seed.rotate_left(i as u32) % (i as u64 + 1)) as usize,
        );
    }
    let moved: Vec<i64> = s
        .iter()
        .zip(signs.iter().cycle())
        .map(|(&x, &neg)| (if neg { -1 } else { 1 }) * t as i64 * x)
        .collect();
    LensParams::new(lens.q(), &moved).unwrap()
}

/// Lattice points with every `|a_i| < q`, tallied by (one-norm, zeros),
/// by walking the whole box.
pub fn box_tally(lens: &LensParams) -> BTreeMap<(usize, usize), u64> {
    let (q, n) = (lens.q() as i64, lens.n());
    let lattice = CongruenceLattice::new(lens);
    let side = (2 * q - 1) as usize;
    let mut tally = BTreeMap::new();
    let mut a = vec![0i64; n];
    for idx in 0..side.pow(n as u32) {
        let mut rest = idx;
        for x in a.iter_mut() {
            *x = (rest % side) as i64 - (q - 1);
            rest /= side;
        }
        if lattice.contains(&a) {
            let norm = a.iter().map(|x| x.unsigned_abs() as usize).sum();
            let zeros = a.iter().filter(|&&x| x == 0).count();
            *tally.entry((norm, zeros)).or_insert(0u64) += 1;
        }
    }
    tally
}
