//! Structural checks: minors of the A-matrix, covering descent, padding
//! and the dimension-5 {2}-pairs.

use lenspec::isospec::{
    a_matrix_minors, classify_families, compute_profile, scan_conjectures, scan_theorems,
    verify_covering, verify_padding,
};
use lenspec::lens::LensParams;

fn main() {
    for n in 2..=6 {
        let nonzero = a_matrix_minors(n).iter().all(|(_, d)| !d.is_zero());
        println!("n = {n}: minors nonzero = {nonzero}");
    }

    let a = LensParams::new(49, &[1, 6, 15]).unwrap();
    let b = LensParams::new(49, &[1, 6, 20]).unwrap();
    println!(
        "covering violations: {}",
        verify_covering(&[(a, b)]).unwrap().len()
    );

    let x = LensParams::new(8, &[0, 1, 3]).unwrap();
    let y = LensParams::new(8, &[1, 3, 4]).unwrap();
    let pad = verify_padding(&x, &y, 1).unwrap();
    println!(
        "padding {x} / {y}: {:?} -> {:?}, lost {:?}",
        pad.base,
        pad.padded,
        pad.lost_degrees()
    );

    let reports: Vec<_> = (1..=24).map(|q| classify_families(q, 3, false)).collect();
    let theorems: usize = reports
        .iter()
        .map(|r| scan_theorems(r, &compute_profile).len())
        .sum();
    println!("theorem violations for q <= 24: {theorems}");
    for line in scan_conjectures(&reports, true).lines() {
        println!("{line}");
    }
}
