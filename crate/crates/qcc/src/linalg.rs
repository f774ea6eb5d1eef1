//! Small exact linear-algebra helpers over the integers and rationals.
//!
//! Exchange matrices are tiny (rank <= 8 in practice), so everything here
//! is straightforward dense arithmetic; the only nontrivial operation is an
//! exact rational inverse via Gauss-Jordan elimination, used to derive a
//! compatible skew form from an exchange matrix.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};

/// Row-major integer matrix.
pub type IMat = Vec<Vec<i64>>;

/// `rows x cols` zero matrix.
pub fn zeros(rows: usize, cols: usize) -> IMat {
    vec![vec![0; cols]; rows]
}

/// `n x n` identity matrix.
pub fn identity(n: usize) -> IMat {
    let mut m = zeros(n, n);
    for (i, row) in m.iter_mut().enumerate() {
        row[i] = 1;
    }
    m
}

pub fn transpose(m: &IMat) -> IMat {
    if m.is_empty() {
        return Vec::new();
    }
    let (rows, cols) = (m.len(), m[0].len());
    let mut t = zeros(cols, rows);
    for i in 0..rows {
        for j in 0..cols {
            t[j][i] = m[i][j];
        }
    }
    t
}

/// Exact integer matrix product.
pub fn mat_mul(a: &IMat, b: &IMat) -> IMat {
    let (ra, ca) = (a.len(), a[0].len());
    let cb = b[0].len();
    assert_eq!(ca, b.len(), "inner dimensions must agree");
    let mut out = zeros(ra, cb);
    for i in 0..ra {
        for k in 0..ca {
            if a[i][k] == 0 {
                continue;
            }
            for j in 0..cb {
                out[i][j] += a[i][k] * b[k][j];
            }
        }
    }
    out
}

/// Exact integer matrix-vector product.
pub fn mat_vec(m: &IMat, v: &[i64]) -> Vec<i64> {
    m.iter()
        .map(|row| row.iter().zip(v).map(|(a, b)| a * b).sum())
        .collect()
}

/// Exact inverse of a square integer matrix, as rationals.
///
/// Fails with [`Error::SingularMatrix`] when no inverse exists.
pub fn rational_inverse(m: &IMat) -> Result<Vec<Vec<BigRational>>> {
    let n = m.len();
    assert!(m.iter().all(|r| r.len() == n), "matrix must be square");
    // Augmented [M | I], reduced by Gauss-Jordan with exact rationals.
    let mut a: Vec<Vec<BigRational>> = (0..n)
        .map(|i| {
            (0..2 * n)
                .map(|j| {
                    if j < n {
                        BigRational::from_integer(BigInt::from(m[i][j]))
                    } else if j - n == i {
                        BigRational::one()
                    } else {
                        BigRational::zero()
                    }
                })
                .collect()
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero()).ok_or_else(|| {
            Error::SingularMatrix
        })?;
        a.swap(col, pivot);
        let p = a[col][col].clone();
        for x in &mut a[col] {
            *x /= &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..2 * n {
                let sub = &f * &a[col][j];
                a[r][j] -= sub;
            }
        }
    }
    Ok(a.into_iter().map(|row| row[n..].to_vec()).collect())
}
