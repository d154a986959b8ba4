use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument outside the region where an operation is defined.
    #[error("domain error: {0}")]
    Domain(String),

    #[error("cannot parse {input:?}: {reason}")]
    Parse { input: String, reason: String },

    /// A malformed record in an input file; `row` is the 1-based line number.
    #[error("line {row}: {reason}")]
    Row { row: usize, reason: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub fn is_domain(&self) -> bool {
        matches!(self, Error::Domain(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
