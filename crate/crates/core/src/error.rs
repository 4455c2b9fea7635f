use thiserror::Error;

/// Errors produced by the cascade library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("matrix is not square: {0}x{1}")]
    NotSquare(usize, usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not Hermitian (max asymmetry {0:e})")]
    NotHermitian(f64),

    #[error("trace is not 1 (got {0})")]
    InvalidTrace(f64),

    #[error("matrix is not positive semi-definite (min eigenvalue {0:e})")]
    NotPositive(f64),

    #[error("subsystem index {index} out of range for {count} subsystems")]
    SubsystemOutOfRange { index: usize, count: usize },

    #[error("eigensolver did not converge after {0} sweeps")]
    NoConvergence(usize),

    #[error("invalid decay parameters: {0}")]
    InvalidParams(String),

    #[error("dephasing factor {0} outside [0, 1]")]
    InvalidDephasing(f64),

    #[error("GHZ state needs at least 2 modes, got {0}")]
    GhzTooSmall(usize),

    #[error("invalid channel: {0}")]
    InvalidChannel(String),

    #[error("invalid split: {0}")]
    InvalidSplit(String),

    #[error("unknown mode label {0:?}")]
    UnknownMode(String),

    #[error("conditional mutual information paths disagree: {eq5} vs {entropies}")]
    InconsistentCmi { eq5: f64, entropies: f64 },

    #[error("integration step must be positive and at most delta_t/10, got {0}")]
    InvalidStep(f64),

    #[error("number of trials must be at least 1")]
    ZeroTrials,

    #[error("empty bracket [{0}, {1}]")]
    EmptyBracket(f64, f64),

    #[error("invalid `{field}`: {reason}")]
    InvalidSpec { field: &'static str, reason: String },

    #[error("i/o error on {path}: {message}")]
    Io { path: String, message: String },
}

pub type Result<T> = std::result::Result<T, Error>;
