//! Self-contained dense complex linear algebra: matrices, a Jacobi
//! Hermitian eigensolver, PSD square roots, and LU solve/determinant.

mod eigen;
mod lu;
mod matrix;

pub use eigen::{hermitian_eigensystem, psd_sqrt, HermitianEigen};
pub use lu::{lu_determinant, lu_solve};
pub use matrix::ComplexMatrix;

use thiserror::Error;

/// Failure modes of the numerical routines in this module.
#[derive(Debug, Error)]
pub enum LinalgError {
    /// An operation that needs a square matrix received a rectangular one.
    #[error("matrix is {rows}x{cols}, need square")]
    NotSquare { rows: usize, cols: usize },

    /// The input failed the Hermiticity check `max|H - H†| <= 1e-10 * scale`.
    #[error("matrix is not Hermitian: max|H - H\u{2020}| = {defect:.3e}")]
    NotHermitian { defect: f64 },

    /// The Jacobi sweep limit was reached before the off-diagonal mass fell
    /// under the convergence threshold.
    #[error("eigensolver did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// A post-hoc consistency check on a computed factorization failed.
    #[error("{check} check failed with residual {residual:.3e}")]
    ValidationFailed { check: &'static str, residual: f64 },

    /// An eigenvalue below the roundoff clamp band was found where a
    /// positive semidefinite matrix was required.
    #[error("matrix is not positive semidefinite: smallest eigenvalue {min_eigenvalue:.3e}")]
    NotPositiveSemidefinite { min_eigenvalue: f64 },

    /// An LU pivot fell below the relative threshold; the system is
    /// numerically singular.
    #[error("linear system is numerically singular (pivot magnitude {pivot:.3e})")]
    Singular { pivot: f64 },
}
