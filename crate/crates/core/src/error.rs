use std::io;
use std::path::PathBuf;

use crate::graph::VertexId;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    /// Malformed graph input; the message names the offending row or edge.
    #[error("{0}")]
    Load(String),

    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),

    #[error("invalid parameter: {0}")]
    Parameter(String),

    #[error("unknown dimension {0}")]
    UnknownDimension(String),

    #[error("cuboid {0} is not materialized")]
    NotMaterialized(String),

    #[error("{path}:{line}: {msg}")]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },

    #[error("cannot compare cubes built from different graphs ({left} vs {right})")]
    FingerprintMismatch { left: String, right: String },

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }

    /// Process exit code used by the command-line tool.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Parameter(_) => 1,
            Error::Load(_) | Error::UnknownVertex(_) | Error::Parse { .. } | Error::Io { .. } => 2,
            Error::UnknownDimension(_) | Error::NotMaterialized(_) => 3,
            Error::FingerprintMismatch { .. } | Error::Verification(_) => 4,
        }
    }
}
