use thiserror::Error;

use crate::rational::Rational;

/// Precondition and domain failures raised by the exact layers.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid family parameters: {0}")]
    InvalidFamily(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("{value} is not an eigenvalue of {family}")]
    NotAnEigenvalue { family: String, value: Rational },
    #[error("no formula available: {0}")]
    Unsupported(String),
    #[error("spectrum sweep too short: {0}")]
    TailNotCertified(String),
    #[error("integer overflow while computing {0}")]
    Overflow(&'static str),
    #[error("cannot parse rational {0:?}")]
    ParseRational(String),
}

pub type Result<T> = std::result::Result<T, Error>;
