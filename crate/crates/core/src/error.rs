use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// Invalid arguments or inputs supplied by the caller.
    #[error("usage error: {0}")]
    Usage(String),
    /// A runtime guard refused to run (e.g. a combinatorial enumeration bound).
    #[error("guard exceeded: {0}")]
    Guard(String),
    /// An invariant that a proven bound should make impossible was violated.
    #[error("internal error: {0}")]
    Internal(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }
}
