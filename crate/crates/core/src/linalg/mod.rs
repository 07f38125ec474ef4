//! Random matrix construction and dense complex eigenvalues.
//!
//! `phi = A B` with `A` drawn from the GUE and `B = diag(1, …, 1, t, …, t)`
//! satisfies `phi^† B = B phi`; its spectrum is real or closed under
//! conjugation, which [`classify_spectrum`] makes explicit.

mod build;
mod classify;
mod eigen;
mod matrix;

use thiserror::Error;

pub(crate) use build::metric_diagonal;
pub use build::{build_metric, build_phi, intertwining_residual, intertwining_residual_dense, sample_gue};
pub use classify::{classify_spectrum, spectral_scale, Spectrum, DEFAULT_CLASSIFICATION_TOL};
pub use eigen::{
    balance, eigenvalues, eigenvalues_with, hessenberg_in_place, hessenberg_qr, EigenBackend, EigenOptions,
    AUTO_FAER_THRESHOLD,
};
pub use matrix::{ComplexMatrix, HermitianMatrix, MetricSpec};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LinalgError {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },
    #[error("invalid metric: {0}")]
    InvalidMetric(String),
    #[error("singular metric (t = 0) is not supported")]
    SingularMetric,
    #[error("matrix is not hermitian at ({row}, {col})")]
    NotHermitian { row: usize, col: usize },
    #[error("matrix contains NaN or infinite entries")]
    NonFinite,
    #[error("QR iteration did not converge in window {window_lo}..={window_hi} after {iterations} sweeps")]
    NoConvergence { window_lo: usize, window_hi: usize, iterations: usize },
    #[error("classification tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("eigenvalue {index} = {re} + {im}i has no conjugate partner")]
    Classification { index: usize, re: f64, im: f64 },
    #[error("ill-conditioned matrix: condition estimate {estimate:e}")]
    IllConditioned { estimate: f64 },
}
