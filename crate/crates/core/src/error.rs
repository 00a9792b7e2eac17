use thiserror::Error;

/// Errors produced anywhere in the engine.
///
/// The variants map onto the three failure classes the command line
/// distinguishes: configuration problems, bad input data (including
/// unparseable expressions), and runtime failures such as I/O.
#[derive(Debug, Error)]
pub enum Error {
    #[error("configuration error: {0}")]
    Config(String),

    #[error("line {line}: `{key}`: {message}")]
    ConfigKey {
        line: usize,
        key: String,
        message: String,
    },

    #[error("data error: {0}")]
    Data(String),

    #[error("parse error at position {position}: {message}")]
    Parse { position: usize, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn data(msg: impl Into<String>) -> Self {
        Error::Data(msg.into())
    }

    pub fn kind(&self) -> ErrorKind {
        match self {
            Error::Config(_) | Error::ConfigKey { .. } => ErrorKind::Config,
            Error::Data(_) | Error::Parse { .. } => ErrorKind::Data,
            Error::Csv(e) if !matches!(e.kind(), csv::ErrorKind::Io(_)) => ErrorKind::Data,
            Error::Io(_) | Error::Csv(_) => ErrorKind::Runtime,
        }
    }
}

/// Coarse error class, used for process exit codes and FFI status codes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Config,
    Data,
    Runtime,
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
