use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// A generator or experiment configuration violates its invariants.
    #[error("invalid configuration: {0}")]
    Config(String),

    /// An operation received arguments outside its domain.
    #[error("invalid argument: {0}")]
    Argument(String),

    /// The requested solver cannot handle the instance (e.g. exact enumeration on a large graph).
    #[error("solver capability exceeded: {0}")]
    Capability(String),

    /// Disease parameters cannot be derived from the given inputs.
    #[error("cannot derive disease parameters: {0}")]
    Derivation(String),

    #[error("cannot seed outbreak: {0}")]
    Seeding(String),

    /// A graph, assignment or QUBO file does not follow its documented format.
    #[error("malformed input: {0}")]
    Format(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("{path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }

    pub(crate) fn json(path: impl Into<PathBuf>, source: serde_json::Error) -> Self {
        Error::Json {
            path: path.into(),
            source,
        }
    }
}
