//! LU factorization with partial pivoting: general-purpose determinants and
//! dense solves.
//!
//! This is the reference path the structured solver is benchmarked against,
//! so the elimination loop is written to stay on contiguous row slices.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::LinalgError;

/// Pivot magnitudes at or below `1e-13 * max|A|` make a solve refuse.
const PIVOT_FACTOR: f64 = 1e-13;

struct Factorization {
    n: usize,
    /// Row-major packed factors: unit-lower L strictly below the diagonal,
    /// U on and above it.
    lu: Vec<Complex64>,
    /// Row `k` was swapped with row `pivots[k]` at step `k`.
    pivots: Vec<usize>,
    /// Determinant sign of the row permutation.
    parity: f64,
}

fn factor(a: &ComplexMatrix) -> Factorization {
    assert!(a.is_square(), "LU factorization needs a square matrix");
    let n = a.rows();
    let mut lu = a.entries().to_vec();
    let mut pivots = vec![0usize; n];
    let mut parity = 1.0f64;

    for k in 0..n {
        let mut best = k;
        let mut best_mag = lu[k * n + k].norm_sqr();
        for i in k + 1..n {
            let mag = lu[i * n + k].norm_sqr();
            if mag > best_mag {
                best = i;
                best_mag = mag;
            }
        }
        pivots[k] = best;
        if best != k {
            for j in 0..n {
                lu.swap(k * n + j, best * n + j);
            }
            parity = -parity;
        }
        let pivot = lu[k * n + k];
        if pivot == Complex64::ZERO {
            // Structurally singular column; leave it and let the zero pivot
            // surface through the determinant or the solve guard.
            continue;
        }
        let (top, bottom) = lu.split_at_mut((k + 1) * n);
        let pivot_tail = &top[k * n + k + 1..(k + 1) * n];
        for row in bottom.chunks_exact_mut(n) {
            let factor = row[k] / pivot;
            row[k] = factor;
            if factor == Complex64::ZERO {
                continue;
            }
            for (x, &u) in row[k + 1..].iter_mut().zip(pivot_tail) {
                *x -= factor * u;
            }
        }
    }

    Factorization {
        n,
        lu,
        pivots,
        parity,
    }
}

/// Determinant via LU. A singular matrix yields exactly zero (a zero pivot
/// column short-circuits the product); no error path.
///
/// # Panics
/// Panics if the matrix is not square.
pub fn lu_determinant(a: &ComplexMatrix) -> Complex64 {
    let f = factor(a);
    let mut det = Complex64::new(f.parity, 0.0);
    for k in 0..f.n {
        let pivot = f.lu[k * f.n + k];
        if pivot == Complex64::ZERO {
            return Complex64::ZERO;
        }
        det *= pivot;
    }
    det
}

/// Solves `A x = b` by partially pivoted LU.
///
/// # Errors
/// [`LinalgError::Singular`] when any pivot magnitude falls at or below
/// `1e-13 * max|A|`.
///
/// # Panics
/// Panics if `A` is not square or `b.len() != A.rows()`.
pub fn lu_solve(a: &ComplexMatrix, b: &[Complex64]) -> Result<Vec<Complex64>, LinalgError> {
    assert_eq!(
        b.len(),
        a.rows(),
        "right-hand side length must match matrix size"
    );
    let f = factor(a);
    let n = f.n;
    let threshold = PIVOT_FACTOR * a.max_norm();
    for k in 0..n {
        let pivot = f.lu[k * n + k].norm();
        if pivot <= threshold {
            return Err(LinalgError::Singular { pivot });
        }
    }

    let mut x = b.to_vec();
    for k in 0..n {
        x.swap(k, f.pivots[k]);
    }
    // Forward substitution with unit-lower L.
    for i in 1..n {
        let row = &f.lu[i * n..i * n + i];
        let dot: Complex64 = row.iter().zip(&x[..i]).map(|(l, xj)| l * xj).sum();
        x[i] -= dot;
    }
    // Back substitution with U.
    for i in (0..n).rev() {
        let row = &f.lu[i * n + i + 1..(i + 1) * n];
        let dot: Complex64 = row.iter().zip(&x[i + 1..]).map(|(u, xj)| u * xj).sum();
        x[i] = (x[i] - dot) / f.lu[i * n + i];
    }
    Ok(x)
}
