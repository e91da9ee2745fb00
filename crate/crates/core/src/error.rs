use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{}: invalid UTF-8 at byte offset {offset}", path.display())]
    InvalidUtf8 { path: PathBuf, offset: usize },

    #[error("split ratio must lie strictly between 0 and 1, got {0}")]
    InvalidRatio(f64),

    #[error("malformed XML at line {line}, column {column}: {message}")]
    Xml {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown judgment {0}")]
    UnknownJudgment(String),

    #[error("judgment for sentence {index} but document has {len} sentences")]
    JudgmentOutOfRange { index: usize, len: usize },

    #[error("sentence {index}: {message}")]
    InvalidSentence { index: usize, message: String },

    #[error("unsupported model version header {0:?}")]
    UnsupportedVersion(String),

    #[error("malformed model file at line {line}: {message}")]
    ModelFormat { line: usize, message: String },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("cannot train on an empty corpus")]
    EmptyCorpus,

    #[error("sentence {0} has no judgment")]
    MissingJudgment(usize),

    #[error("undefined metric: {0}")]
    UndefinedMetric(&'static str),

    #[error("documents not comparable: {0}")]
    NotComparable(String),

    #[error("{}: {source}", path.display())]
    InFile {
        path: PathBuf,
        #[source]
        source: Box<Error>,
    },
}

/// Broad failure classes, used by front ends to pick exit codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorClass {
    Usage,
    Io,
    DataFormat,
}

impl Error {
    pub fn class(&self) -> ErrorClass {
        match self {
            Error::Io { .. } => ErrorClass::Io,
            Error::InvalidRatio(_) | Error::Precondition(_) => ErrorClass::Usage,
            Error::InFile { source, .. } => source.class(),
            _ => ErrorClass::DataFormat,
        }
    }

    /// Attaches `path` to errors that do not already name one.
    pub fn in_file(self, path: impl Into<PathBuf>) -> Self {
        match self {
            Error::Io { .. } | Error::InvalidUtf8 { .. } | Error::InFile { .. } => self,
            e => Error::InFile {
                path: path.into(),
                source: Box::new(e),
            },
        }
    }

    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
