use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("word size {0} is outside the supported range 1..=16")]
    WordSizeOutOfRange(u32),

    #[error("table has {actual} entries, expected {expected}")]
    WrongLength { expected: usize, actual: usize },

    #[error("value {value} appears at both index {first} and index {second}")]
    DuplicateValue {
        value: u32,
        first: usize,
        second: usize,
    },

    #[error("value {value} at index {index} is not below {limit}")]
    ValueOutOfRange { value: u32, index: usize, limit: u32 },

    #[error("word {word} does not fit in {bits} bits")]
    WordOutOfRange { word: u32, bits: u8 },

    #[error("word sizes differ: {left} vs {right}")]
    WordSizeMismatch { left: u8, right: u8 },

    #[error("dense matrices are limited to n <= {max}, got n = {n}")]
    DenseTooLarge { n: u8, max: u8 },

    #[error("required {required} bits, available {available}")]
    InsufficientKey { required: u64, available: u64 },

    #[error("key material ran out after consuming {consumed} bits")]
    KeyExhausted { consumed: u64 },

    #[error("key material for table {table} of the pad: {source}")]
    PadTable {
        table: usize,
        #[source]
        source: Box<Error>,
    },

    #[error("key length for n = {n}, M = {tables} overflows a 64-bit bit count")]
    KeyLengthOverflow { n: u8, tables: usize },

    #[error("a pad needs at least one table")]
    EmptyPad,

    #[error("otp key has {key} words but the message has {message}")]
    OtpKeyTooShort { key: usize, message: usize },

    #[error("declared bit length {declared} does not match {words} words of {bits} bits")]
    InconsistentBitLength { declared: u64, words: usize, bits: u8 },

    #[error("n = {n} is too large for exhaustive enumeration (max {max})")]
    TooLargeToEnumerate { n: u8, max: u8 },

    #[error("{samples} samples is below the minimum of {minimum}")]
    InsufficientSamples { samples: u64, minimum: u64 },
}

impl Error {
    /// True for errors caused by missing or short key material.
    pub fn is_key_error(&self) -> bool {
        match self {
            Error::InsufficientKey { .. } | Error::KeyExhausted { .. } => true,
            Error::PadTable { source, .. } => source.is_key_error(),
            _ => false,
        }
    }
}
