//! Crate-wide error type.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    /// Connected-graph generation gave up after the resample cap.
    #[error("failed to generate a connected graph for n={n}, p={p} within {attempts} attempts")]
    GenerationFailure { n: u32, p: f64, attempts: u32 },

    #[error("topology file {path}, line {line}: {message}")]
    TopologyFile {
        path: String,
        line: usize,
        message: String,
    },

    #[error("topology is disconnected: node {node} is unreachable from node 1")]
    Disconnected { node: u32 },

    #[error("replication traces have mismatched sampling grids")]
    MismatchedGrids,

    #[error("no data series supplied for plotting")]
    EmptySeries,

    #[error("config error: {0}")]
    Config(String),

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidArgument(msg.into())
    }

    pub fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
