//! Small dense linear algebra over exact rationals and over f64.
//!
//! Matrices here are at most phi(n) x phi(n) (phi(60) = 16), so plain
//! Gauss-Jordan with full pivoting-by-first-nonzero is entirely adequate.

use num_rational::BigRational;
use num_traits::{One, Zero};

pub type RatMatrix = Vec<Vec<BigRational>>;

/// Invert a square rational matrix. Returns None when singular.
pub fn rat_inverse(m: &RatMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: RatMatrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    if i == j {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] /= &p;
            inv[col][j] /= &p;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for j in 0..n {
                    let t = &f * &a[col][j];
                    a[r][j] -= t;
                    let t = &f * &inv[col][j];
                    inv[r][j] -= t;
                }
            }
        }
    }
    Some(inv)
}

/// Matrix-vector product.
pub fn rat_mat_vec(m: &RatMatrix, v: &[BigRational]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            let mut acc = BigRational::zero();
            for (a, b) in row.iter().zip(v) {
                if !a.is_zero() && !b.is_zero() {
                    acc += a * b;
                }
            }
            acc
        })
        .collect()
}

/// Solve A x = b for a tall consistent system (rows >= cols, full column
/// rank). Returns None when the system is inconsistent or rank-deficient.
pub fn rat_solve_tall(a: &RatMatrix, b: &[BigRational]) -> Option<Vec<BigRational>> {
    let rows = a.len();
    let cols = if rows == 0 { 0 } else { a[0].len() };
    let mut m: RatMatrix = a
        .iter()
        .zip(b)
        .map(|(row, rhs)| {
            let mut r = row.clone();
            r.push(rhs.clone());
            r
        })
        .collect();
    let mut pivot_row = 0usize;
    let mut pivots = Vec::with_capacity(cols);
    for col in 0..cols {
        let Some(p) = (pivot_row..rows).find(|&r| !m[r][col].is_zero()) else {
            return None;
        };
        m.swap(pivot_row, p);
        let pv = m[pivot_row][col].clone();
        for j in col..=cols {
            m[pivot_row][j] /= &pv;
        }
        for r in 0..rows {
            if r != pivot_row && !m[r][col].is_zero() {
                let f = m[r][col].clone();
                for j in col..=cols {
                    let t = &f * &m[pivot_row][j];
                    m[r][j] -= t;
                }
            }
        }
        pivots.push(pivot_row);
        pivot_row += 1;
    }
    // Any leftover nonzero right-hand side means the system was inconsistent.
    for r in pivot_row..rows {
        if !m[r][cols].is_zero() {
            return None;
        }
    }
    let mut x = vec![BigRational::zero(); cols];
    for (col, &pr) in pivots.iter().enumerate() {
        x[col] = m[pr][cols].clone();
    }
    Some(x)
}

/// Invert a square f64 matrix (partial pivoting). None when near-singular.
pub fn f64_inverse(m: &[Vec<f64>]) -> Option<Vec<Vec<f64>>> {
    let n = m.len();
    let mut a = m.to_vec();
    let mut inv: Vec<Vec<f64>> = (0..n)
        .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n)
            .max_by(|&r, &s| a[r][col].abs().partial_cmp(&a[s][col].abs()).unwrap())?;
        if a[pivot][col].abs() < 1e-12 {
            return None;
        }
        a.swap(col, pivot);
        inv.swap(col, pivot);
        let p = a[col][col];
        for j in 0..n {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for r in 0..n {
            if r != col {
                let f = a[r][col];
                if f != 0.0 {
                    for j in 0..n {
                        a[r][j] -= f * a[col][j];
                        inv[r][j] -= f * inv[col][j];
                    }
                }
            }
        }
    }
    Some(inv)
}

/// Greatest common divisor of the numerators' absolute values, used to put
/// integer coefficient vectors into a reduced display form.
pub fn vec_gcd(values: &[num_bigint::BigInt]) -> num_bigint::BigInt {
    use num_integer::Integer;
    let mut g = num_bigint::BigInt::zero();
    for v in values {
        g = g.gcd(v);
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn inverse_of_2x2() {
        let m = vec![vec![q(1, 1), q(2, 1)], vec![q(3, 1), q(5, 1)]];
        let inv = rat_inverse(&m).expect("matrix is invertible");
        assert_eq!(inv[0][0], q(-5, 1));
        assert_eq!(inv[0][1], q(2, 1));
        assert_eq!(inv[1][0], q(3, 1));
        assert_eq!(inv[1][1], q(-1, 1));
    }

    #[test]
    fn singular_matrix_rejected() {
        let m = vec![vec![q(1, 1), q(2, 1)], vec![q(2, 1), q(4, 1)]];
        assert!(rat_inverse(&m).is_none(), "rank-1 matrix has no inverse");
    }

    #[test]
    fn tall_solve_recovers_exact_solution() {
        // 3 equations, 2 unknowns, consistent by construction.
        let a = vec![
            vec![q(1, 1), q(0, 1)],
            vec![q(0, 1), q(1, 1)],
            vec![q(1, 1), q(1, 1)],
        ];
        let b = vec![q(1, 2), q(1, 3), q(5, 6)];
        let x = rat_solve_tall(&a, &b).expect("system is consistent");
        assert_eq!(x, vec![q(1, 2), q(1, 3)]);
        let bad = vec![q(1, 2), q(1, 3), q(1, 1)];
        assert!(rat_solve_tall(&a, &bad).is_none(), "inconsistent rhs must be rejected");
    }
}
