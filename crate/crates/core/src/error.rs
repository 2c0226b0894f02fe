use thiserror::Error;

use crate::word::Generator;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArg(String),

    #[error("no image given for generator {0}")]
    MissingImage(Generator),

    #[error("generator {0} does not belong to the presentation")]
    UnknownGenerator(Generator),

    #[error("intermediate word of length {len} exceeds the cap of {cap} letters")]
    WordSizeExceeded { len: usize, cap: usize },

    #[error("parse error at byte {pos}: {msg}")]
    Parse { pos: usize, msg: String },

    #[error("no coordinate of the vector is a unit")]
    NoUnitCoordinate,

    #[error("images do not form a free basis of the level {level} kernel")]
    NotAnAutomorphism { level: u32 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidArg(msg.into())
}
