use thiserror::Error;

use crate::report::DecodeReport;

pub type Result<T, E = CodecError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CodecError {
    #[error("{0} is not a prime")]
    NotPrime(u32),
    #[error("invalid field: {0}")]
    InvalidField(String),
    #[error("modulus polynomial is reducible")]
    ReducibleModulus,
    #[error("operands belong to different fields")]
    FieldMismatch,
    #[error("division by zero")]
    DivisionByZero,
    #[error("symbol {value} is not an element of a field of order {order}")]
    ElementOutOfRange { value: u64, order: u64 },
    #[error("length mismatch: expected {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },
    #[error("duplicate index {0}")]
    DuplicateIndex(usize),
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("code has about {count} codewords, above the enumeration cap")]
    TooLargeToEnumerate { count: u128 },
    #[error("minimum distance is unknown")]
    UnknownDistance,
    #[error("code has no attached decoder")]
    NoDecoder,
    #[error("matrix shape error: {0}")]
    ShapeError(String),
    #[error("matrix too large: {0}")]
    TooLarge(String),
    #[error("matrix is not non-singular by columns")]
    NotNsc,
    #[error("invalid decoder options: {0}")]
    InvalidOptions(String),
    #[error("configuration error: {0}")]
    Config(String),
    #[error("decoding failed in round {round}")]
    DecodeFailure {
        round: usize,
        report: Box<DecodeReport>,
    },
}

impl CodecError {
    pub fn is_decode_failure(&self) -> bool {
        matches!(self, CodecError::DecodeFailure { .. })
    }
}
