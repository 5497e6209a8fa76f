//! Families of isospectral lens spaces and the filtration levels that
//! predict them for prime q = 2n + 5.

use lenspec::isospec::{classify_families, ikeda_filtration_level, isospec_set};
use lenspec::lens::LensParams;

fn main() {
    for (q, n) in [(11, 3), (13, 4)] {
        let report = classify_families(q, n, true);
        println!("q = {q}, n = {n}:");
        for f in &report.families {
            println!("  {f}");
            for m in &f.members {
                println!(
                    "    {m} at level {}",
                    ikeda_filtration_level(m.params()).unwrap()
                );
            }
        }
    }

    let a = LensParams::new(49, &[1, 6, 15]).unwrap();
    let b = LensParams::new(49, &[1, 6, 20]).unwrap();
    println!("{}", isospec_set(&a, &b).unwrap());
    println!(
        "json: {}",
        serde_json::to_string(&classify_families(11, 3, true)).unwrap()
    );
}
