use thiserror::Error;

/// Errors raised by the shrinkage library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// An integrand returned a non-finite value.
    #[error("non-finite integrand value at abscissa {abscissa}")]
    NumericalDomain { abscissa: f64 },
    #[error("degenerate input: {0}")]
    DegenerateInput(String),
    #[error("configuration error: {0}")]
    Config(String),
    /// Failure inside one simulation cell, tagged with the cell coordinates.
    #[error("cell {cell}: {source}")]
    Cell { cell: String, source: Box<Error> },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArgument(msg.into())
}
