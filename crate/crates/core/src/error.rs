use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("half-integer arithmetic overflow")]
    Overflow,

    #[error("parse error: {0}")]
    Parse(String),

    /// An operation was applied outside its domain (empty segment, unlinked pair, ...).
    #[error("domain error: {0}")]
    Domain(String),

    #[error("unknown cuspidal symbol `{0}`")]
    UnknownSymbol(String),

    #[error("incoherent epsilon data: {0}")]
    IncoherentEpsilon(String),

    #[error("invalid triple: {0}")]
    InvalidTriple(String),

    #[error("triple is not alternated: {0}")]
    NotAlternated(String),

    #[error("family validation failed: {}", .0.join("; "))]
    InvalidFamily(Vec<String>),

    #[error("query too large: {tuples} index tuples exceed the cap of {cap}")]
    QueryTooLarge { tuples: u128, cap: u128 },

    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    #[error("config error at `{path}`: {message}")]
    Config { path: String, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config {
            path: path.into(),
            message: message.into(),
        }
    }
}
