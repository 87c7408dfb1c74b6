use thiserror::Error;

/// Errors raised across compilation, simulation and analysis.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid circuit: {0}")]
    InvalidCircuit(String),

    #[error("unsupported gate `{gate}`: {reason}")]
    UnsupportedGate { gate: String, reason: String },

    #[error("parse error at {location}: {message}")]
    Parse { location: String, message: String },

    #[error("circuit too large: {qubits} qubits exceeds the limit of {limit}")]
    TooLarge { qubits: usize, limit: usize },

    #[error("missing classical register `{0}`")]
    MissingRegister(String),

    #[error("invalid schedule: {0}")]
    Schedule(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn domain(msg: impl Into<String>) -> Self {
        Error::Domain(msg.into())
    }

    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidCircuit(msg.into())
    }
}
