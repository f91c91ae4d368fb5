use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("non-finite coordinate at index {index}")]
    NonFinite { index: usize },

    /// The point lies outside the domain on which the oracle is defined
    /// (singular log-det argument, non-positive log-barrier input, ...).
    #[error("domain error: {0}")]
    Domain(String),

    /// The oracle returned NaN or infinity.
    #[error("oracle failure: {0}")]
    OracleFailure(String),

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unsupported region: {0}")]
    UnsupportedRegion(String),

    #[error("invalid region: {0}")]
    InvalidRegion(String),

    #[error("simplex iteration cap of {0} exceeded")]
    IterationLimit(usize),

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub(crate) fn check_dim(expected: usize, got: usize) -> Result<()> {
    if expected != got {
        return Err(Error::DimensionMismatch { expected, got });
    }
    Ok(())
}
