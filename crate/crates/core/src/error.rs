use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// A syntax or consistency problem in a model document, tagged with the
/// 1-based line it was found on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "line {}: {}", self.line, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("invalid label `{label}`: {reason}")]
    InvalidLabel { label: String, reason: &'static str },

    #[error("unknown state `{0}`")]
    UnknownState(String),

    #[error("alphabet error: {0}")]
    Alphabet(String),

    #[error("models are not composable: {0}")]
    NotComposable(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("missing initial state in model `{0}`")]
    MissingInit(String),

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("unknown fixture `{name}` (available: {available})")]
    UnknownFixture { name: String, available: String },

    #[error("invalid generator parameters: {0}")]
    Params(String),
}
