use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// Malformed or out-of-range caller input.
    #[error("input error: {0}")]
    Input(String),

    /// A mathematical guarantee the engine relies on did not hold.
    #[error("invariant violated: {0}")]
    InvariantViolated(String),

    #[error("not found: {0}")]
    NotFound(String),

    /// A long-running computation was requested without the override flag.
    #[error("refused: {0} (pass the allow-long override to run it)")]
    Guard(String),

    #[error("limit exceeded: {0}")]
    LimitExceeded(String),

    #[error("checkpoint: {0}")]
    Checkpoint(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn input(msg: impl Into<String>) -> Self {
        Error::Input(msg.into())
    }

    pub(crate) fn invariant(msg: impl Into<String>) -> Self {
        Error::InvariantViolated(msg.into())
    }
}
