use thiserror::Error;

/// Everything that can go wrong between reading a dataset and writing results.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("{0}")]
    Invalid(String),

    #[error("arithmetic overflow while computing {0}")]
    Overflow(&'static str),

    #[error("item {item} does not occur in transaction {tid}")]
    ItemNotInTransaction { item: String, tid: u32 },

    #[error("{items} items have nonzero support, enumeration bound is {bound}")]
    EnumerationBound { items: usize, bound: usize },

    #[error("{path}: {source}")]
    InFile { path: String, source: Box<Error> },

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, message: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: message.into(),
        }
    }

    /// Attributes the error to a file.
    pub fn in_file(self, path: impl AsRef<std::path::Path>) -> Self {
        Error::InFile {
            path: path.as_ref().display().to_string(),
            source: Box::new(self),
        }
    }

    /// The error with any file attribution removed.
    pub fn root(&self) -> &Error {
        match self {
            Error::InFile { source, .. } => source.root(),
            other => other,
        }
    }

    pub(crate) fn invalid(message: impl Into<String>) -> Self {
        Error::Invalid(message.into())
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
