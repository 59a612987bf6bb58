use thiserror::Error;

/// Errors raised by the numerical and sampling routines.
#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the mathematical domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A series or quadrature did not reach its accuracy target.
    #[error("accuracy error in {context}: partial value {partial}, error estimate {estimate:e}")]
    Accuracy {
        context: String,
        partial: f64,
        estimate: f64,
    },

    /// Malformed or inconsistent input (grids, specs, configs).
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A Lévy measure with no mass, or one that violates the zero-mean contract.
    #[error("degenerate Lévy measure: {0}")]
    Degenerate(String),

    /// The operation is deliberately not provided for these arguments.
    #[error("unsupported: {0}")]
    Unsupported(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidInput(msg.into())
}
