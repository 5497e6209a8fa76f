//! Reduced one-norm counts of a congruence lattice and the theta series
//! rebuilt from them, next to direct enumeration.

use lenspec::lattice::{brute_counts, phi_profile, theta_nminus1_orbifold, theta_profile};
use lenspec::lens::LensParams;

fn main() {
    let lens = LensParams::new(6, &[1, 2, 3]).unwrap();
    let profile = phi_profile(&lens);
    for l in 0..=lens.n() {
        println!("Phi^({l}) = {}", profile.phi(l));
    }
    println!("points in the box: {}", profile.box_count());

    let order = 12;
    let theta = theta_profile(&profile);
    let brute = brute_counts(&lens, order).unwrap();
    let series = theta.total().series(order).unwrap();
    for k in 0..=order {
        println!("N({k}) = {} (direct {})", series.coeff(k), brute.total(k));
    }

    println!(
        "theta^(n-1) from isotropy: {}",
        theta_nminus1_orbifold(&lens).normalized()
    );
    println!(
        "theta^(n-1) from counts:   {}",
        theta.theta(lens.n() - 1).normalized()
    );
}
