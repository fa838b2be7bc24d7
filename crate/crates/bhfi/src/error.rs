//! Error type shared by the library and the CLI.

use thiserror::Error;

/// Library result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Failure kinds. Each maps to a CLI exit code.
#[derive(Debug, Error)]
pub enum Error {
    /// Bad argument to a constructor or operation.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Malformed input file.
    #[error("parse error: {0}")]
    Parse(String),
    /// A complex whose differential does not square to zero.
    #[error("invalid complex: {0}")]
    InvalidComplex(String),
    /// A matrix that is not a chain map.
    #[error("invalid map: {0}")]
    InvalidMap(String),
    /// Structure relations fail.
    #[error("relation violation: {0}")]
    RelationViolation(String),
    /// No homotopy equivalence was found.
    #[error("not equivalent: {0}")]
    NotEquivalent(String),
    /// Bounded verification asked for too few inputs.
    #[error("insufficient arity: {0}")]
    InsufficientArity(String),
    /// Generator cap exceeded.
    #[error("divergence: {0}")]
    Divergence(String),
    /// I/O failure.
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl Error {
    /// CLI exit code for this error.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parse(_) | Error::Io(_) | Error::InvalidArgument(_) => 2,
            Error::RelationViolation(_) | Error::InvalidComplex(_) | Error::InvalidMap(_) => 3,
            Error::NotEquivalent(_) | Error::InsufficientArity(_) => 4,
            Error::Divergence(_) => 5,
        }
    }
}

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Parse(e.to_string())
    }
}
