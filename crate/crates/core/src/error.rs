use std::io;
use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("configuration error: {0}")]
    Config(String),

    /// The OS accepted a socket option but applied a smaller value than asked for.
    #[error("socket option {option} requested {requested} bytes, effective {effective}")]
    BufferRejected {
        option: &'static str,
        requested: usize,
        effective: usize,
    },

    #[error("transport error after {chunks_sent} complete chunks: {source}")]
    Transport {
        chunks_sent: usize,
        #[source]
        source: io::Error,
    },

    #[error("timed out waiting for {0}")]
    Timeout(String),

    #[error("integrity check failed: {0}")]
    Integrity(String),

    #[error("{path}:{line}: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },

    #[error("invalid trace: {0}")]
    Validation(String),

    #[error("stage `{stage}` failed: {source}")]
    Stage {
        stage: String,
        #[source]
        source: Box<Error>,
    },

    #[error(transparent)]
    Io(#[from] io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub(crate) fn config(msg: impl Into<String>) -> Self {
        Error::Config(msg.into())
    }

    pub(crate) fn transport(chunks_sent: usize, source: io::Error) -> Self {
        Error::Transport {
            chunks_sent,
            source,
        }
    }
}
