use thiserror::Error;

/// Errors raised by the library. Verdict engines never use these for
/// "cannot decide"; that case is an `Unknown` verdict.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("structural error: {0}")]
    Structural(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("eigen iteration did not converge after {sweeps} sweeps (off-diagonal residual {residual:e})")]
    NoConvergence { sweeps: usize, residual: f64 },

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("internal consistency error: {0}")]
    Consistency(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
