use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("length mismatch: expected {expected}, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("non-binary symbol {value} at index {index}")]
    NonBinary { index: usize, value: u8 },

    #[error("{name} = {value} is outside {range}")]
    Domain {
        name: &'static str,
        value: f64,
        range: &'static str,
    },

    #[error("block length {0} is not a power of two")]
    BlockLength(usize),

    #[error("frozen set is invalid: {0}")]
    FrozenSet(String),

    #[error("channel error rate {0} is degenerate for LLR decoding")]
    DegenerateChannel(f64),

    #[error("generator matrix for n = {0} is too large (oracle use only, n <= 12)")]
    MatrixTooLarge(u32),

    #[error("invalid configuration field `{field}`: {reason}")]
    Config { field: &'static str, reason: String },

    #[error("insufficient key: need {needed} bits, have {available}")]
    InsufficientKey { needed: usize, available: usize },

    #[error("estimation sample too small: {available} positions survived, need {needed}")]
    EstimationSample { needed: usize, available: usize },

    #[error("parse error: {0}")]
    Parse(String),
}
