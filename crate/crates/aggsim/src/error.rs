use crate::graph::NodeId;
use thiserror::Error;

/// Errors produced by graph loading, simulation, and measurement.
#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("input describes an empty graph")]
    EmptyGraph,

    #[error("unknown node {0}")]
    UnknownNode(NodeId),

    #[error("unknown model name `{name}`; valid names: {valid}")]
    UnknownModel { name: String, valid: String },

    #[error("node {0} has no label")]
    MissingLabel(NodeId),

    #[error("vector length mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("need both an aggressive and a normal example to rank against")]
    SingleClass,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            msg: msg.into(),
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
