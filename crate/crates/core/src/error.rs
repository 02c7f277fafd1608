use std::io;
use std::path::PathBuf;

use thiserror::Error;

/// Errors produced anywhere in the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },

    #[error("unsupported language for {}", path.display())]
    UnsupportedLanguage { path: PathBuf },

    #[error("project `{0}` produced no sub-tokens")]
    EmptyProject(String),

    #[error("{context}:{line}: {message}")]
    Format { context: String, line: usize, message: String },

    #[error("dimension mismatch: expected {expected}, found {found}{}", at_line(*line))]
    DimensionMismatch { expected: usize, found: usize, line: Option<usize> },

    #[error("need at least {needed} points, got {got}")]
    InsufficientPoints { needed: usize, got: usize },

    #[error("zero vector for `{0}`")]
    ZeroVector(String),

    #[error("project `{0}` has no sub-tokens known to the cluster model")]
    NoKnownTokens(String),

    #[error("cluster model checksum mismatch: expected {expected}, found {found}")]
    ChecksumMismatch { expected: String, found: String },

    #[error("search index has no rows")]
    EmptyIndex,

    #[error("domain error: {0}")]
    Domain(String),

    #[error("`{0}` is not in the index")]
    UnknownResult(String),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

fn at_line(line: Option<usize>) -> String {
    line.map(|l| format!(" at line {l}")).unwrap_or_default()
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }

    pub(crate) fn format(context: impl Into<String>, line: usize, message: impl Into<String>) -> Self {
        Error::Format { context: context.into(), line, message: message.into() }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
