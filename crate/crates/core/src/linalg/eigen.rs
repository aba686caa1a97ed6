//! Hermitian eigendecomposition via cyclic Jacobi rotations, plus the PSD
//! square root built on top of it.
//!
//! The solver uses complex Givens rotations: each pivot (p, q) first strips
//! the phase of `a_pq` with a unitary `diag(1, e^{-iφ})`, then applies the
//! classic real symmetric Schur rotation with the stable half-angle choice
//! `t = sign(τ) / (|τ| + sqrt(1 + τ²))`. Diagonal entries are assigned their
//! closed-form post-rotation values, so the iterate stays exactly Hermitian
//! in floating point instead of drifting.

use num_complex::Complex64;

use super::matrix::ComplexMatrix;
use super::LinalgError;

/// Maximum number of full pivot sweeps before giving up.
const MAX_SWEEPS: usize = 100;

/// Relative off-diagonal threshold that counts as converged.
const CONVERGENCE_FACTOR: f64 = 1e-13;

/// Relative tolerance for accepting the input as Hermitian.
const HERMITICITY_TOL: f64 = 1e-10;

/// Max-norm tolerance on `V†V - I` for the returned eigenvectors.
const GRAM_TOL: f64 = 1e-10;

/// Eigenvalues in descending order with matching eigenvector columns.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues, largest first.
    pub values: Vec<f64>,
    /// Unitary matrix whose `j`-th column is the eigenvector for `values[j]`.
    pub vectors: ComplexMatrix,
}

/// Diagonalizes a Hermitian matrix.
///
/// `recon_tol` bounds the acceptable reconstruction error
/// `max|V diag(λ) V† - H|` relative to `max(1, max|H|)`; exceeding it (or an
/// eigenvector Gram defect above 1e-10) is reported as an error rather than
/// returning silently wrong output.
///
/// # Errors
/// * [`LinalgError::NotSquare`] for a rectangular input.
/// * [`LinalgError::NotHermitian`] if `max|H - H†|` exceeds
///   `1e-10 * max(1, max|H|)`.
/// * [`LinalgError::NoConvergence`] if 100 sweeps do not suffice.
/// * [`LinalgError::ValidationFailed`] if the factorization check fails.
pub fn hermitian_eigensystem(
    h: &ComplexMatrix,
    recon_tol: f64,
) -> Result<HermitianEigen, LinalgError> {
    if !h.is_square() {
        return Err(LinalgError::NotSquare {
            rows: h.rows(),
            cols: h.cols(),
        });
    }
    let n = h.rows();
    let scale = h.max_norm().max(1.0);
    let defect = h.max_diff(&h.adjoint());
    if defect > HERMITICITY_TOL * scale {
        return Err(LinalgError::NotHermitian { defect });
    }

    // Work on the exactly-Hermitian average (H + H†)/2; the defect above is
    // already bounded, so this changes nothing beyond roundoff level.
    let mut a = h.add(&h.adjoint()).scale(Complex64::new(0.5, 0.0));
    let mut v = ComplexMatrix::identity(n);

    if n > 1 {
        let threshold = CONVERGENCE_FACTOR * a.frobenius_norm();
        let pivot_floor = threshold / (n * n) as f64;
        let mut converged = false;
        for _ in 0..MAX_SWEEPS {
            let mut rotated = false;
            for p in 0..n - 1 {
                for q in p + 1..n {
                    if rotate_pivot(&mut a, &mut v, p, q, pivot_floor) {
                        rotated = true;
                    }
                }
            }
            if !rotated {
                converged = true;
                break;
            }
        }
        if !converged {
            return Err(LinalgError::NoConvergence { sweeps: MAX_SWEEPS });
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].re.total_cmp(&a[(i, i)].re));
    let values: Vec<f64> = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);

    let gram = vectors.adjoint().multiply(&vectors);
    let gram_defect = gram.max_diff(&ComplexMatrix::identity(n));
    if gram_defect > GRAM_TOL {
        return Err(LinalgError::ValidationFailed {
            check: "eigenvector orthonormality",
            residual: gram_defect,
        });
    }

    let recon = reconstruct(&values, &vectors);
    let recon_defect = recon.max_diff(h);
    if recon_defect > recon_tol * scale {
        return Err(LinalgError::ValidationFailed {
            check: "eigendecomposition reconstruction",
            residual: recon_defect,
        });
    }

    Ok(HermitianEigen { values, vectors })
}

/// Applies one two-sided Jacobi rotation at pivot `(p, q)` if the
/// off-diagonal entry is above `floor`. Returns whether a rotation ran.
fn rotate_pivot(
    a: &mut ComplexMatrix,
    v: &mut ComplexMatrix,
    p: usize,
    q: usize,
    floor: f64,
) -> bool {
    let apq = a[(p, q)];
    let r = apq.norm();
    if r <= floor {
        return false;
    }

    // Unitary: U = diag(1, e^{-iφ}) · [[c, s], [-s, c]] on the (p, q) plane,
    // with φ = arg(a_pq), diagonalizing [[α, r e^{iφ}], [r e^{-iφ}, β]].
    let phase = apq / r; // e^{iφ}
    let alpha = a[(p, p)].re;
    let beta = a[(q, q)].re;
    let tau = (beta - alpha) / (2.0 * r);
    let t = if tau == 0.0 {
        1.0
    } else {
        tau.signum() / (tau.abs() + (1.0 + tau * tau).sqrt())
    };
    let c = 1.0 / (1.0 + t * t).sqrt();
    let s = t * c;
    let n = a.rows();

    // Column update: A ← A·U (touches columns p and q only).
    let phase_conj = phase.conj();
    for i in 0..n {
        let aip = a[(i, p)];
        let aiq = a[(i, q)];
        a[(i, p)] = c * aip - s * phase_conj * aiq;
        a[(i, q)] = s * aip + c * phase_conj * aiq;
    }
    // Row update: A ← U†·A (touches rows p and q only).
    for j in 0..n {
        let apj = a[(p, j)];
        let aqj = a[(q, j)];
        a[(p, j)] = c * apj - s * phase * aqj;
        a[(q, j)] = s * apj + c * phase * aqj;
    }
    // The 2x2 pivot block has exact post-rotation values; assigning them
    // (rather than trusting the updates above) keeps the iterate Hermitian
    // to the last bit and the pivot entry exactly zero.
    a[(p, p)] = Complex64::new(alpha - t * r, 0.0);
    a[(q, q)] = Complex64::new(beta + t * r, 0.0);
    a[(p, q)] = Complex64::ZERO;
    a[(q, p)] = Complex64::ZERO;

    // Accumulate the eigenvector basis: V ← V·U.
    for i in 0..n {
        let vip = v[(i, p)];
        let viq = v[(i, q)];
        v[(i, p)] = c * vip - s * phase_conj * viq;
        v[(i, q)] = s * vip + c * phase_conj * viq;
    }
    true
}

fn reconstruct(values: &[f64], vectors: &ComplexMatrix) -> ComplexMatrix {
    let n = values.len();
    let scaled = ComplexMatrix::from_fn(n, n, |i, j| vectors[(i, j)] * values[j]);
    scaled.multiply(&vectors.adjoint())
}

/// Hermitian square root of a positive semidefinite matrix.
///
/// Eigenvalues in `[-1e-8, 0)` are treated as roundoff and clamped to zero;
/// anything more negative is rejected as genuinely indefinite.
///
/// # Errors
/// Propagates [`hermitian_eigensystem`] errors, plus
/// [`LinalgError::NotPositiveSemidefinite`] when the smallest eigenvalue is
/// below `-1e-8`.
pub fn psd_sqrt(h: &ComplexMatrix) -> Result<ComplexMatrix, LinalgError> {
    const NEGATIVE_EIGENVALUE_LIMIT: f64 = -1e-8;
    let eigen = hermitian_eigensystem(h, 1e-10)?;
    let min = eigen.values.last().copied().unwrap_or(0.0);
    if min < NEGATIVE_EIGENVALUE_LIMIT {
        return Err(LinalgError::NotPositiveSemidefinite {
            min_eigenvalue: min,
        });
    }
    let roots: Vec<f64> = eigen.values.iter().map(|&x| x.max(0.0).sqrt()).collect();
    Ok(reconstruct(&roots, &eigen.vectors))
}
