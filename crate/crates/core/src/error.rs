use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("duplicate edge {0} -> {1}")]
    DuplicateEdge(usize, usize),
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
    #[error("node id {node} out of range (graph has {n} nodes)")]
    NodeOutOfRange { node: usize, n: usize },
    #[error("unknown tag id {tag} (catalog has {tag_count} tags)")]
    UnknownTag { tag: usize, tag_count: usize },
    #[error("no edge {0} -> {1}")]
    UnknownEdge(usize, usize),
    #[error("probability {p} on edge {src} -> {dst}, tag {tag} is outside [0, 1]")]
    ProbabilityOutOfRange {
        src: usize,
        dst: usize,
        tag: usize,
        p: f64,
    },
    #[error("{what} {id} has invalid cost {value} (costs must be finite and positive)")]
    InvalidCost {
        what: &'static str,
        id: usize,
        value: f64,
    },
    #[error("priority undefined without targets")]
    NoTargets,
    #[error("invalid value for `{field}`: {reason}")]
    InvalidParameter { field: String, reason: String },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{}:{line}: {msg}", path.display())]
    Parse {
        path: PathBuf,
        line: usize,
        msg: String,
    },
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn invalid(field: impl Into<String>, reason: impl Into<String>) -> Self {
        Error::InvalidParameter {
            field: field.into(),
            reason: reason.into(),
        }
    }
}
