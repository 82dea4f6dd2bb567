use thiserror::Error;

/// Errors surfaced by the engine, the task system and the tooling around them.
#[derive(Debug, Error, PartialEq)]
pub enum Error {
    /// Invalid configuration, schema or setup input.
    #[error("configuration error: {0}")]
    Config(String),
    /// A query referenced an unknown column, attribute or entity.
    #[error("query error: {0}")]
    Query(String),
    /// An operation violated an internal precondition (double free, tick mismatch, ...).
    #[error("logic error: {0}")]
    Logic(String),
    /// A predicate was constructed with an invalid parameter.
    #[error("parameter error: {0}")]
    Parameter(String),
    /// The environment was driven outside its reset/step lifecycle.
    #[error("lifecycle error: {0}")]
    Lifecycle(String),
    /// A serialized artifact (map, replay, task file) could not be decoded.
    #[error("format error: {0}")]
    Format(String),
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
