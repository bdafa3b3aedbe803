use std::io;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("malformed encoding: {0}")]
    MalformedEncoding(String),

    #[error("invalid group parameters: {0}")]
    InvalidParams(String),

    #[error("exhaustive discrete-log search refused: group order {0} exceeds 2^24")]
    OracleRefused(u64),

    #[error("randomness source failed: {0}")]
    RngFailure(#[from] rand_core::Error),

    #[error("key exhausted: all {capacity} signatures have been issued")]
    KeyExhausted { capacity: u64 },

    #[error("capacity must be at least 1")]
    ZeroCapacity,

    #[error("cannot sign an empty message")]
    EmptyMessage,

    #[error("duplicate verification token at indices {first} and {second}")]
    DuplicateBeta { first: u32, second: u32 },

    #[error("transcripts share a challenge; private key is not extractable")]
    NotExtractable,

    #[error("counter could not be durably advanced; signature withheld")]
    StatePersistFailure(#[source] Box<Error>),

    #[error("stale signer state: expected counter {expected}, found {found}")]
    StaleState { expected: u64, found: u64 },

    #[error("corrupt key file: {0}")]
    CorruptState(String),

    #[error("unsupported scheme/operation combination: {0}")]
    UnsupportedCombo(String),

    #[error(transparent)]
    IoFailure(#[from] io::Error),
}

impl Error {
    pub(crate) fn malformed(msg: impl Into<String>) -> Self {
        Error::MalformedEncoding(msg.into())
    }

    pub(crate) fn corrupt(msg: impl Into<String>) -> Self {
        Error::CorruptState(msg.into())
    }
}
