use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("node index {index} out of range for graph with {len} nodes")]
    InvalidNode { index: usize, len: usize },

    #[error("unknown node label `{0}`")]
    UnknownLabel(String),

    #[error("query nodes must be distinct (got {0} twice)")]
    SameNode(usize),

    #[error("node set is empty")]
    EmptyNodeSet,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("distance matrix is not symmetric at ({i}, {j}): {dij} vs {dji}")]
    Asymmetric { i: usize, j: usize, dij: f64, dji: f64 },

    #[error("persistence threshold {tau} must exceed the largest distance {max}")]
    ThresholdTooLow { tau: f64, max: f64 },

    #[error("candidate `{0}` is missing from at least one ranked list")]
    MissingCandidate(String),

    #[error("hold-out split produced no test edges")]
    EmptyTestSet,

    #[error("no ranking for source `{0}`")]
    MissingRanking(String),

    #[error("read error: {0}")]
    Read(#[source] std::io::Error),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn invalid(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }
}
