use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    #[error("malformed edge list at line {line}: {reason}")]
    Format { line: usize, reason: String },

    #[error(
        "fixed-point iteration did not converge after {iterations} steps (last step {last_step:e})"
    )]
    NoConvergence { iterations: u64, last_step: f64 },

    #[error("parameter on a regime boundary: {0}")]
    Boundary(String),

    #[error("monotonicity check failed: {0}")]
    NotMonotone(String),

    #[error("degenerate sample: {0}")]
    Degenerate(String),

    #[error("unsupported operation: {0}")]
    Unsupported(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn invalid(name: &'static str, reason: impl Into<String>) -> Error {
    Error::InvalidParameter {
        name,
        reason: reason.into(),
    }
}
