use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("logarithm of zero")]
    ZeroInput,
    #[error("degenerate value: {0}")]
    Degenerate(String),
    #[error("non-finite result in {0}")]
    NonFinite(&'static str),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("no convergence: {0}")]
    NonConvergence(String),
    #[error("non-integer flattening {value} (off by {offset:e})")]
    NonIntegerFlattening { value: f64, offset: f64 },
    #[error("positive-dimensional solution locus suspected: {0}")]
    PositiveDimensional(String),
    #[error("chain check failed: {0}")]
    ChainCheck(String),
    #[error("degenerate tuple persists after {0} conjugation retries")]
    DegenerateAfterRetries(usize),
}

impl Error {
    /// True for failures of the numerics rather than of the input.
    pub fn is_numerical(&self) -> bool {
        !matches!(self, Error::InvalidInput(_) | Error::ChainCheck(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
