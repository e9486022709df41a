use thiserror::Error;

/// Errors produced by constructors and numerical routines.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("expected {expected} entries for a {dim}x{dim} matrix, got {got}")]
    BadEntryCount { dim: usize, expected: usize, got: usize },

    #[error("non-finite entry at index {index}")]
    NotFinite { index: usize },

    #[error("matrix is not Hermitian (defect {defect:.3e} exceeds {tol:.3e})")]
    NotHermitian { defect: f64, tol: f64 },

    #[error("trace {trace:.17} deviates from 1 beyond {tol:.3e}")]
    BadTrace { trace: f64, tol: f64 },

    #[error("matrix is not positive semidefinite (minimum eigenvalue {min_eig:.3e})")]
    NotPositive { min_eig: f64 },

    #[error("eigensolver failed to converge within {max_sweeps} sweeps (off-norm {off:.3e})")]
    NoConvergence { max_sweeps: usize, off: f64 },

    #[error("state vector norm {norm:.17} deviates from 1 beyond {tol:.3e}")]
    BadNorm { norm: f64, tol: f64 },

    #[error("{what} must be {constraint}, got {value}")]
    OutOfRange {
        what: &'static str,
        constraint: &'static str,
        value: f64,
    },

    #[error("invalid scenario: {reason}")]
    BadScenario { reason: String },

    #[error("invalid sign pattern: {reason}")]
    BadPattern { reason: String },

    #[error("observable check failed: {reason}")]
    BadObservable { reason: String },

    #[error("invalid LHS model: {reason}")]
    BadModel { reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
