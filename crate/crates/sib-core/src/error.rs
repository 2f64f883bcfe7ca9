//! Error type shared by all solver modules.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid vector: {0}")]
    InvalidVector(String),

    #[error("invalid body: {0}")]
    InvalidBody(String),

    #[error("invalid dynamic face {face}: {reason}")]
    InvalidDynamic { face: usize, reason: String },

    #[error("unsupported body for {op}: {body}")]
    UnsupportedBody { op: &'static str, body: &'static str },

    #[error("infeasible set: {0}")]
    InfeasibleSet(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("empty grid: {0}")]
    EmptyGrid(String),

    #[error("subgradient selection failed: {0}")]
    SubgradientSelection(String),

    #[error("scenario error at {path}: {message}")]
    Scenario { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Classifies errors for the CLI exit-code contract: `true` for input
    /// validation failures (exit 1), `false` for runtime failures (exit 2).
    pub fn is_validation(&self) -> bool {
        matches!(
            self,
            Error::DimensionMismatch { .. }
                | Error::InvalidVector(_)
                | Error::InvalidBody(_)
                | Error::InvalidDynamic { .. }
                | Error::UnsupportedBody { .. }
                | Error::Precondition(_)
                | Error::Scenario { .. }
        )
    }
}
