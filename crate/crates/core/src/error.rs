use thiserror::Error;

use crate::bmp::BmpError;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Bmp(#[from] BmpError),

    #[error("invalid image: {0}")]
    InvalidImage(String),

    #[error("message of {bits} bits exceeds capacity of {capacity} bits")]
    CapacityExceeded { bits: usize, capacity: usize },

    #[error("bit count {0} is not a multiple of 8")]
    NotByteAligned(usize),

    #[error("bit count {0} must be even for LSB matching")]
    OddBitCount(usize),

    #[error("invalid stego key: {0}")]
    InvalidKey(String),

    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("invalid trace: {0}")]
    InvalidTrace(String),

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("empty input: {0}")]
    Empty(&'static str),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
