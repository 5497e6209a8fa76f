//! The `n x (n-1)` matrix of `A_p^(l)` (rows `p = 1..n`, columns
//! `l = 0..n-2`) and its maximal minors.

use crate::exactmath::IntPoly;
use crate::spectra::a_poly_table;

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AMatrix {
    pub n: usize,
    /// `rows[p - 1][l]`
    pub rows: Vec<Vec<IntPoly>>,
}

pub fn a_matrix(n: usize) -> AMatrix {
    assert!(n >= 2);
    let t = a_poly_table(n);
    let rows = (1..=n).map(|p| t.row(p)[..n - 1].to_vec()).collect();
    AMatrix { n, rows }
}

/// Determinant by fraction-free (Bareiss) elimination; every division is
/// exact in `Z[z]`.
pub fn bareiss_determinant(mut m: Vec<Vec<IntPoly>>) -> IntPoly {
    let size = m.len();
    if size == 0 {
        return IntPoly::one();
    }
    let mut negate = false;
    let mut prev = IntPoly::one();
    for k in 0..size - 1 {
        if m[k][k].is_zero() {
            match (k + 1..size).find(|&r| !m[r][k].is_zero()) {
                Some(r) => {
                    m.swap(k, r);
                    negate = !negate;
                }
                None => return IntPoly::zero(),
            }
        }
        for i in k + 1..size {
            for j in k + 1..size {
                let t = &(&m[i][j] * &m[k][k]) - &(&m[i][k] * &m[k][j]);
                m[i][j] = t.div_exact(&prev).expect("Bareiss step divides exactly");
            }
        }
        prev = m[k][k].clone();
    }
    let det = m[size - 1][size - 1].clone();
    if negate {
        -det
    } else {
        det
    }
}

/// `(p, det)` for each square matrix obtained by deleting row `p`.
pub fn a_matrix_minors(n: usize) -> Vec<(usize, IntPoly)> {
    let a = a_matrix(n);
    (1..=n)
        .map(|deleted| {
            let sub: Vec<Vec<IntPoly>> = a
                .rows
                .iter()
                .enumerate()
                .filter(|(i, _)| i + 1 != deleted)
                .map(|(_, r)| r.clone())
                .collect();
            (deleted, bareiss_determinant(sub))
        })
        .collect()
}

/// Cancels column `col` between two linear relations `a . x = 0` and
/// `b . x = 0`, returning `a[col] b - b[col] a` divided by the gcd of its
/// entries (sign fixed so the first nonzero entry has positive leading
/// coefficient).
pub fn eliminate(a: &[IntPoly], b: &[IntPoly], col: usize) -> Vec<IntPoly> {
    let raw: Vec<IntPoly> = a
        .iter()
        .zip(b)
        .map(|(x, y)| &(&a[col] * y) - &(&b[col] * x))
        .collect();
    let g = raw
        .iter()
        .filter(|p| !p.is_zero())
        .fold(IntPoly::zero(), |g, p| g.gcd(p));
    if g.is_zero() {
        return raw;
    }
    let mut out: Vec<IntPoly> = raw
        .iter()
        .map(|p| p.div_exact(&g).expect("gcd divides every entry"))
        .collect();
    let flip = out
        .iter()
        .find(|p| !p.is_zero())
        .and_then(IntPoly::leading_coeff)
        .is_some_and(|c| c < &num_bigint::BigInt::from(0));
    if flip {
        out = out.into_iter().map(|p| -p).collect();
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(c: &[i64]) -> IntPoly {
        IntPoly::from_i64s(c)
    }

    #[test]
    fn two_by_one() {
        let m = a_matrix_minors(2);
        assert_eq!(m, vec![(1, p(&[1, 0, 1])), (2, p(&[1]))]);
    }

    #[test]
    fn bareiss_matches_expansion() {
        // [[1, z], [z, 1]] -> 1 - z^2 ; pivot swap case [[0, 1], [1, 0]] -> -1
        let m = vec![vec![p(&[1]), p(&[0, 1])], vec![p(&[0, 1]), p(&[1])]];
        assert_eq!(bareiss_determinant(m), p(&[1, 0, -1]));
        let s = vec![vec![p(&[]), p(&[1])], vec![p(&[1]), p(&[])]];
        assert_eq!(bareiss_determinant(s), p(&[-1]));
        let three = vec![
            vec![p(&[2]), p(&[0, 1]), p(&[1])],
            vec![p(&[1]), p(&[3]), p(&[0, 0, 1])],
            vec![p(&[0, 1]), p(&[1]), p(&[1])],
        ];
        // 2(3 - z^2) - z(1 - z^3) + (1 - 3z) = 7 - 4z - 2z^2 + z^4
        assert_eq!(bareiss_determinant(three), p(&[7, -4, -2, 0, 1]));
    }

    #[test]
    fn degree_three_reduced_system() {
        let t = a_poly_table(3);
        assert_eq!(
            t.row(3)[..3],
            [
                p(&[1, 0, 4, 0, 1]),
                p(&[0, 0, 4, 0, 2]),
                p(&[0, 0, 2, 0, 4])
            ]
        );
        let (r2, r3) = (&t.row(2)[..3], &t.row(3)[..3]);
        assert_eq!(
            eliminate(r2, r3, 0),
            vec![p(&[]), p(&[1, 0, 0, 0, 1]), p(&[0, 0, 0, 0, 4])]
        );
        assert_eq!(
            eliminate(r2, r3, 2),
            vec![p(&[0, 0, 2]), p(&[-1, 0, 2]), p(&[])]
        );
    }
}
