use thiserror::Error;

use crate::group::Prime;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{0} is not a prime")]
    NotPrime(u64),

    #[error("prime mismatch: {left} vs {right}")]
    PrimeMismatch { left: Prime, right: Prime },

    #[error("digit {digit} at position {position} is out of range for p = {prime}")]
    DigitOutOfRange {
        digit: u32,
        position: i64,
        prime: Prime,
    },

    #[error("point {point} has a digit at position {position}, beyond resolution {resolution}")]
    AnchorBeyondResolution {
        point: String,
        position: i64,
        resolution: i64,
    },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("overlapping pieces: {0}")]
    Overlap(String),

    #[error("hypothesis violated: {0}")]
    Hypothesis(String),

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
