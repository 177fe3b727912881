use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("{name} = {value} is not a probability in [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },

    #[error("block length must be at least 1")]
    EmptyBlock,

    #[error("invalid bit value {0}, expected 0 or 1")]
    InvalidBit(u8),

    #[error("length mismatch: {left} is {left_len} long but {right} is {right_len}")]
    LengthMismatch {
        left: &'static str,
        left_len: usize,
        right: &'static str,
        right_len: usize,
    },

    #[error("block length {n} exceeds the enumeration limit of {limit}")]
    EnumerationLimit { n: usize, limit: usize },

    #[error("at least {min} replicates are required, got {got}")]
    TooFewReplicates { min: usize, got: usize },

    #[error("unknown conditioning pattern {0:?}")]
    UnknownPattern(String),
}

pub type Result<T> = std::result::Result<T, Error>;
