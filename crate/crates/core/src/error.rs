use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("parse error at byte {offset}: {message}")]
    Parse { offset: usize, message: String },

    #[error("invalid digraph: {0}")]
    Validation(String),

    #[error("rejection sampler gave up after {attempts} attempts")]
    AttemptCapExceeded { attempts: u64 },

    #[error("cycle enumeration exceeded the cap of {cap} cycles")]
    CycleCapExceeded { cap: usize },

    #[error("strongly connected component of size {size} exceeds the exhaustive-search cap of {cap}")]
    SccCapExceeded { size: usize, cap: usize },

    #[error("exact reachability is limited to n <= {limit} (got n = {n})")]
    SizeLimitExceeded { n: usize, limit: usize },

    #[error("replicate {index}: {source}")]
    Replicate {
        index: u64,
        #[source]
        source: Box<Error>,
    },

    #[error("invariant violated: {0}")]
    Invariant(String),

    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    /// True for errors that indicate a broken structural invariant rather than
    /// bad input or an I/O failure.
    pub fn is_invariant_violation(&self) -> bool {
        match self {
            Error::Invariant(_) => true,
            Error::Replicate { source, .. } => source.is_invariant_violation(),
            _ => false,
        }
    }

    pub fn is_io(&self) -> bool {
        match self {
            Error::Io { .. } => true,
            Error::Csv(e) => e.is_io_error(),
            Error::Json(e) => e.is_io(),
            Error::Replicate { source, .. } => source.is_io(),
            _ => false,
        }
    }
}
