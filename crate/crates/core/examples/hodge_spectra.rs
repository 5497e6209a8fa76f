//! Generating functions of the Hodge-Laplace spectra by both routes, and
//! the resulting eigenvalue multiplicities.

use lenspec::lens::LensParams;
use lenspec::spectra::{hodge_genfun_ikeda, hodge_genfun_lattice, multiplicities};

fn main() {
    let lens = LensParams::new(8, &[0, 1, 3]).unwrap();
    let order = 10;
    for p in 0..lens.n() as i64 {
        let f = hodge_genfun_lattice(&lens, p).unwrap();
        let lat = f.series(order).unwrap();
        let ik = hodge_genfun_ikeda(&lens, p, order).unwrap();
        println!("F^{p} = {}", f.f.normalized());
        println!("  routes agree through z^{order}: {}", lat == ik);
    }
    for p in 0..lens.n() as i64 {
        let spec = multiplicities(&lens, p, 6).unwrap();
        let parts: Vec<String> = spec
            .iter()
            .map(|e| format!("{}^{}", e.eigenvalue, e.multiplicity))
            .collect();
        println!("spec_{p}: {}", parts.join(" "));
    }
}
