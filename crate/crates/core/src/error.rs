use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("bit index {index} out of range 1..={len}")]
    Addressing { index: u64, len: u64 },

    #[error("message length {0} too small: at least 2 bits are required")]
    DomainTooSmall(usize),

    #[error("length mismatch: expected {expected} bits, got {actual}")]
    LengthMismatch { expected: usize, actual: usize },

    #[error("payload of {bytes} bytes cannot hold {bits} bits, or its pad bits are not zero")]
    MalformedPayload { bits: usize, bytes: usize },

    #[error("invalid hex input: {0}")]
    InvalidHex(String),

    #[error("insufficient randomness: needed {needed} bytes, got {got}")]
    InsufficientRandomness { needed: u64, got: u64 },

    #[error("key length {0} is below the 8-bit minimum")]
    KeyTooSmall(u64),

    #[error("corrupt key file: {0}")]
    CorruptKeyFile(String),

    #[error("unsupported key file version {0}")]
    UnsupportedVersion(u8),

    #[error("key file was generated for oracle {found:?}, but the running oracle is {expected:?}")]
    OracleMismatch { expected: String, found: String },

    #[error("invalid parameter: {0}")]
    Domain(String),

    #[error("problem too large to enumerate: {0}")]
    Resource(String),

    #[error("internal error: {0}")]
    Internal(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}
