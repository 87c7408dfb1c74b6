use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    /// Bad flags or inputs; exit status 2.
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] qed_core::Error),

    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub fn usage(msg: impl Into<String>) -> Self {
        Error::Usage(msg.into())
    }

    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    /// 2 for invalid input, 1 for failures while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Usage(_) => 2,
            Error::Core(e) => match e {
                qed_core::Error::Io(_) | qed_core::Error::Csv(_) => 1,
                _ => 2,
            },
            Error::Io { .. } => 1,
        }
    }
}
