use thiserror::Error;

/// Errors produced by the numerical core.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    /// The requested band is (numerically) degenerate with a neighbour.
    #[error("degenerate point: gap {gap:.3e} below threshold {threshold:.1e}")]
    Degenerate { gap: f64, threshold: f64 },
    #[error("numerical failure: {0}")]
    Numerical(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
