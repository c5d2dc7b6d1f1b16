use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Malformed input text. `line` is 1-based; 0 when no line applies.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// A value lies outside the carrier of the semiring it is used with.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured search cap was exceeded. Never returned in place of a
    /// wrong answer.
    #[error("resource cap exceeded: {0}")]
    Resource(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("no fraction with denominator <= {max_denominator} in [{lo}, {hi}]")]
    EmptyInterval {
        lo: String,
        hi: String,
        max_denominator: String,
    },

    #[error("malformed reduction value {0}: not an exact power of 1/4")]
    MalformedReductionValue(String),

    #[error("tree value identically 0")]
    ZeroTree,

    #[error("assignment satisfies no clause")]
    NoClauseSatisfied,
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
