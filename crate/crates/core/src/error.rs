use thiserror::Error;

/// Errors produced anywhere in the solver stack.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error at line {line}{}: {message}", key.as_ref().map(|k| format!(" ({k})")).unwrap_or_default())]
    Parse { line: usize, key: Option<String>, message: String },
    #[error("usage error: {0}")]
    Usage(String),
    #[error("domain error: {0}")]
    Domain(String),
    #[error("numeric error: {0}")]
    Numeric(String),
    #[error("fit error: {0}")]
    Fit(String),
    #[error("internal error: {0}")]
    Internal(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(line: usize, key: Option<&str>, message: impl Into<String>) -> Self {
        Error::Parse { line, key: key.map(str::to_owned), message: message.into() }
    }

    pub fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io { path: path.as_ref().display().to_string(), source }
    }

    /// True for errors that stem from bad input or arguments rather than numerics.
    pub fn is_usage(&self) -> bool {
        matches!(self, Error::Parse { .. } | Error::Usage(_) | Error::Io { .. })
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
