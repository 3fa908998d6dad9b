use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("unsupported configuration: {0}")]
    UnsupportedConfig(String),

    #[error("capacity exceeded: {what} ({count} > cap {cap})")]
    CapacityExceeded { what: String, count: u64, cap: u64 },

    #[error("vector {0:?} is not in the semigroup NA")]
    NotInSemigroup(Vec<u32>),

    #[error("{0} is not an odd prime below 2^31")]
    NotPrime(u64),

    #[error("internal inconsistency: {0}")]
    Inconsistent(String),

    /// A per-multidegree job failed; names the offending `b`.
    #[error("at multidegree {multidegree:?}, dimension {j}: {source}")]
    Job { multidegree: Vec<u32>, j: i32, source: Box<Error> },

    #[error("computation cancelled")]
    Cancelled,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Capacity errors are reported with exit code 2 by the CLI, like usage errors.
    pub fn is_capacity(&self) -> bool {
        match self {
            Error::CapacityExceeded { .. } => true,
            Error::Job { source, .. } => source.is_capacity(),
            _ => false,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
