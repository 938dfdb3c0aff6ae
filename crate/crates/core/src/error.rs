use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A cache bound or helper precondition was not met.
    #[error("configuration error: {0}")]
    Config(String),

    /// The requested order or partition is outside the operation's domain.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("weight {weight} cannot be encoded as a single character (max 35)")]
    EncodingRange { weight: u32 },

    #[error("invalid character {ch:?} at position {pos}")]
    Parse { ch: char, pos: usize },

    #[error("empty weight sequence")]
    Empty,

    /// Input is not a tree, or not a valid weight sequence of one.
    #[error("structure error: {0}")]
    Structure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
