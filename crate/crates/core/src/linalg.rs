//! Exact Gaussian elimination over the rationals.

use num_rational::BigRational;
use num_traits::Zero;

/// Solves the square system `a x = b`; `None` if `a` is singular.
pub fn solve(a: &[Vec<BigRational>], b: &[BigRational]) -> Option<Vec<BigRational>> {
    let n = a.len();
    assert_eq!(b.len(), n, "right-hand side length");
    let mut m: Vec<Vec<BigRational>> = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            assert_eq!(row.len(), n, "matrix must be square");
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !m[r][col].is_zero())?;
        m.swap(col, pivot);
        let inv = m[col][col].recip();
        for x in m[col].iter_mut().skip(col) {
            *x *= &inv;
        }
        for r in 0..n {
            if r == col || m[r][col].is_zero() {
                continue;
            }
            let factor = m[r][col].clone();
            for c in col..=n {
                let delta = &factor * &m[col][c];
                m[r][c] -= delta;
            }
        }
    }
    Some(m.into_iter().map(|mut r| r.pop().expect("augmented column")).collect())
}

/// Indices of a maximal linearly independent subset of `rows`, greedily in
/// order.
pub fn independent_rows(rows: &[Vec<BigRational>]) -> Vec<usize> {
    let mut basis: Vec<(usize, Vec<BigRational>)> = Vec::new(); // (pivot column, reduced row)
    let mut chosen = Vec::new();
    for (i, row) in rows.iter().enumerate() {
        let mut r = row.clone();
        for (p, b) in &basis {
            if !r[*p].is_zero() {
                let f = r[*p].clone() / &b[*p];
                for (x, y) in r.iter_mut().zip(b) {
                    *x -= &f * y;
                }
            }
        }
        if let Some(p) = r.iter().position(|x| !x.is_zero()) {
            basis.push((p, r));
            chosen.push(i);
        }
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn solves_small_system() {
        let a = vec![vec![q(2, 1), q(1, 1)], vec![q(1, 1), q(3, 1)]];
        let b = vec![q(3, 1), q(5, 1)];
        let x = solve(&a, &b).unwrap();
        assert_eq!(x, vec![q(4, 5), q(7, 5)]);
        let s = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(solve(&s, &b).is_none());
    }

    #[test]
    fn independent_subset() {
        let rows = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(2, 1), q(0, 1)],
            vec![q(1, 1), q(1, 1)],
        ];
        assert_eq!(independent_rows(&rows), vec![0, 2]);
    }
}
