use thiserror::Error;

/// Errors raised anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("dimension mismatch: expected {expected}, got {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("solver failed after {iterations} iterations (relative residual {residual:.3e}): {reason}")]
    SolverFailure {
        reason: String,
        iterations: usize,
        residual: f64,
    },

    #[error("eigensolver did not converge after {iterations} iterations (best estimate {estimate})")]
    EigenNonConvergence { iterations: usize, estimate: f64 },

    #[error("step {step} failed: {source}")]
    StepFailure {
        step: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("configuration error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
