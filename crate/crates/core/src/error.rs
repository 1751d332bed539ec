use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the toolkit can report.
///
/// Resource exhaustion is kept apart from the other variants: it is the third
/// outcome of a decision procedure (neither "yes" nor "no") and maps to its own
/// exit code on the command line.
#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("invalid algebra: {0}")]
    InvalidAlgebra(String),

    #[error("malformed term: {0}")]
    MalformedTerm(String),

    #[error("invalid argument: {0}")]
    Argument(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("resource budget exceeded: {what} (limit {limit})")]
    Resource { what: String, limit: usize },

    #[error("not found: {0}")]
    NotFound(String),

    #[error("line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("internal consistency violation: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn resource(what: impl Into<String>, limit: usize) -> Self {
        Error::Resource {
            what: what.into(),
            limit,
        }
    }

    pub fn is_resource(&self) -> bool {
        matches!(self, Error::Resource { .. })
    }
}
