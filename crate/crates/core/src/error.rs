//! Error type shared by every module.

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    /// Malformed input or violated precondition.
    #[error("{0}")]
    User(String),
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax { line: usize, column: usize, message: String },
    /// Budget exhausted (size caps, branch caps, wall-clock limit).
    #[error("resource limit: {0}")]
    Resource(String),
    /// A computed object failed one of its own invariants.
    #[error("internal invariant violated: {0}")]
    Internal(String),
}

impl Error {
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::User(_) | Error::Syntax { .. } => 1,
            Error::Resource(_) => 2,
            Error::Internal(_) => 3,
        }
    }

    pub fn user(msg: impl Into<String>) -> Self {
        Error::User(msg.into())
    }

    pub fn resource(msg: impl Into<String>) -> Self {
        Error::Resource(msg.into())
    }

    pub fn internal(msg: impl Into<String>) -> Self {
        Error::Internal(msg.into())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
