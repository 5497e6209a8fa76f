//! Isometry classes, isotropy and covers.

use lenspec::lens::{
    cover, divisors, enumerate_classes, is_isometric, isotropy_profile, LensParams,
};

fn main() {
    let l = LensParams::new(11, &[3, 4, 5]).unwrap();
    println!("{l} -> {}", l.canonical());
    let m = LensParams::new(11, &[1, 2, 4]).unwrap();
    println!("isometric to {m}: {}", is_isometric(&l, &m).unwrap());

    println!("lens spaces of dimension 5 with q = 11:");
    for c in enumerate_classes(11, 3, true) {
        println!("  {c}");
    }

    let orb = LensParams::new(12, &[0, 3, 4]).unwrap();
    println!("{orb}: isotropy {}", isotropy_profile(&orb));
    let all = enumerate_classes(4, 3, false);
    println!("{} classes for q = 4, n = 3", all.len());

    let pair = LensParams::new(49, &[1, 6, 15]).unwrap();
    for d in divisors(49) {
        println!("cover of order {d}: {}", cover(&pair, d).unwrap());
    }
}
