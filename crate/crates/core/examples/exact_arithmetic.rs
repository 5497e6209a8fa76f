//! Integer polynomials, rational functions, series and cyclotomic sums.

use lenspec::exactmath::{
    cyclo_average, cyclotomic_poly, rat_equal, CyclotomicField, IntPoly, RationalFunction,
};

fn main() {
    let a = IntPoly::from_i64s(&[1, 1]);
    let b = IntPoly::from_i64s(&[1, -1]);
    println!("(1+z)(1-z) = {}", &a * &b);

    let f = RationalFunction::new(IntPoly::from_i64s(&[1, 0, -1]), b.clone(), 0).unwrap();
    let g = RationalFunction::from_poly(a.clone());
    println!("(1-z^2)/(1-z) == 1+z: {}", rat_equal(&f, &g));

    // (1+z)/(1-z)^3 = sum (k+1)^2 z^k
    let sq = RationalFunction::new(a, b.pow(3), 0).unwrap();
    let s = sq.series(6).unwrap();
    let shown: Vec<String> = s.coeffs().iter().map(ToString::to_string).collect();
    println!("(1+z)/(1-z)^3 = {} + ...", shown.join(", "));

    for q in [1, 4, 6, 12] {
        println!("Phi_{q} = {}", cyclotomic_poly(q));
    }

    let field = CyclotomicField::new(5);
    let avg = cyclo_average(&field, |h| field.root_power(2 * h as i64)).unwrap();
    println!("average of zeta_5^(2h) over h: {avg}");
}
