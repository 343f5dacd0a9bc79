//! Crate-wide error type.

use std::fmt;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Error {
    /// Mathematically invalid request (inverting zero, factoring the zero
    /// polynomial, non-prime modulus, ...).
    Domain(String),
    /// Caller broke an API contract (mismatched fields, index out of range,
    /// empty input list, ...).
    Usage(String),
    /// A configured budget or cap was exceeded.
    Resource(String),
    /// Text input could not be parsed. `line` is 1-based, 0 when unknown.
    Parse { line: usize, msg: String },
    Io(String),
}

impl fmt::Display for Error {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Error::Domain(m) => write!(f, "domain error: {m}"),
            Error::Usage(m) => write!(f, "usage error: {m}"),
            Error::Resource(m) => write!(f, "resource error: {m}"),
            Error::Parse { line, msg } => {
                if *line == 0 {
                    write!(f, "parse error: {msg}")
                } else {
                    write!(f, "parse error at line {line}: {msg}")
                }
            }
            Error::Io(m) => write!(f, "io error: {m}"),
        }
    }
}

impl std::error::Error for Error {}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}

pub(crate) fn usage(msg: impl Into<String>) -> Error {
    Error::Usage(msg.into())
}

pub(crate) fn resource(msg: impl Into<String>) -> Error {
    Error::Resource(msg.into())
}
