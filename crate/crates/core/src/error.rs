use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// An argument outside the domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// Elements or operators built over different generator tables.
    #[error("generator tables do not match")]
    TableMismatch,
    #[error("invalid generator table: {0}")]
    InvalidTable(String),
    /// A precondition of a structural theorem does not hold.
    #[error("hypothesis violated: {0}")]
    Hypothesis(String),
    #[error("construction failed: {0}")]
    Construction(String),
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
