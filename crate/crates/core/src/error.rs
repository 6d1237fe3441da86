use thiserror::Error;

/// Errors raised anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed arguments: out-of-range labels, bad sizes, empty sets.
    #[error("invalid input: {0}")]
    Input(String),

    /// The factor graph violates a structural invariant for the requested operation.
    #[error("invalid model: {0}")]
    Model(String),

    /// The operation is defined but not supported for this model or size.
    #[error("unsupported: {0}")]
    Unsupported(String),

    /// An operation was invoked in a mode it does not apply to.
    #[error("usage error: {0}")]
    Usage(String),

    /// A schedule string failed to parse.
    #[error("cannot parse schedule `{text}`: {reason} `{token}`")]
    Schedule {
        text: String,
        token: String,
        reason: &'static str,
    },

    /// Exhaustive search refused because the space exceeds the cap.
    #[error("search space of {size} exceeds the cap of {cap}")]
    TooLarge { size: f64, cap: f64 },

    /// The constraint system became infeasible or the solver hit a hard limit.
    #[error("internal error: {0}")]
    Internal(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
