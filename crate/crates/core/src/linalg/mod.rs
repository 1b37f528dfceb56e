//! Dense complex linear algebra: general and Hermitian eigendecomposition,
//! matrix exponential, numerical rank, and semi-definiteness tests.
//!
//! All operations are pure functions on immutable inputs and perform no
//! internal parallelism; callers parallelize across matrices.

mod eig;
mod expm;
mod matrix;

pub use eig::{eig_general, eig_hermitian, Spectrum};
pub use expm::{expm, EXPM_NORM_CAP};
pub use matrix::ComplexMatrix;

use num_complex::Complex64;
use thiserror::Error;

/// Default relative tolerance for [`numerical_rank`].
pub const DEFAULT_RANK_REL_TOL: f64 = 1e-10;

/// Default tolerance on the Hermiticity defect `max|m - m†|`, relative to
/// `max(1, max|m|)`.
pub const DEFAULT_HERMITICITY_TOL: f64 = 1e-12;

#[derive(Debug, Error)]
pub enum LinalgError {
    #[error("matrix entries must be finite")]
    NonFinite,
    #[error("matrix is not Hermitian: defect {defect:.3e} exceeds tolerance {tol:.3e}")]
    NotHermitian { defect: f64, tol: f64 },
    #[error("eigensolver did not converge within {0} QR sweeps")]
    NonConvergence(usize),
    #[error("matrix 1-norm {norm:.3e} exceeds the matrix-exponential cap {cap:.3e}")]
    OverflowRisk { norm: f64, cap: f64 },
    #[error("singular linear system in Pade solve")]
    Singular,
    #[error("tolerance must be positive, got {0:.3e}")]
    InvalidTolerance(f64),
    #[error("failed to parse matrix JSON: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

/// Scalar product `⟨a|b⟩ = Σ conj(a_i) b_i` (conjugate-linear in the first
/// argument, physics convention).
pub fn inner(a: &[Complex64], b: &[Complex64]) -> Complex64 {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Euclidean norm of a complex vector.
pub fn vec_norm(a: &[Complex64]) -> f64 {
    a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt()
}

fn ensure_hermitian(m: &ComplexMatrix, tol: f64) -> Result<(), LinalgError> {
    let defect = m.hermiticity_defect();
    let scale = m.norm_max().max(1.0);
    if defect > tol * scale {
        return Err(LinalgError::NotHermitian {
            defect,
            tol: tol * scale,
        });
    }
    Ok(())
}

/// Number of eigenvalues of a Hermitian matrix with `|λ| > rel_tol · max|λ|`.
/// The zero matrix has rank 0.
pub fn numerical_rank(m: &ComplexMatrix, rel_tol: f64) -> Result<usize, LinalgError> {
    if !(rel_tol > 0.0) {
        return Err(LinalgError::InvalidTolerance(rel_tol));
    }
    let (vals, _) = eig_hermitian(m)?;
    let max_abs = vals.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    if max_abs == 0.0 {
        return Ok(0);
    }
    Ok(vals.iter().filter(|v| v.abs() > rel_tol * max_abs).count())
}

/// True iff the smallest eigenvalue of the Hermitian matrix `m` is at least
/// `-tol · max(1, max|λ|)`.
pub fn is_positive_semidefinite(m: &ComplexMatrix, tol: f64) -> Result<bool, LinalgError> {
    let (vals, _) = eig_hermitian(m)?;
    let max_abs = vals.iter().fold(0.0_f64, |acc, v| acc.max(v.abs()));
    let min = vals.first().copied().unwrap_or(0.0);
    Ok(min >= -tol * max_abs.max(1.0))
}
