use std::io;

use thiserror::Error;

use crate::graph::NodeId;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge list contains no edges")]
    EmptyInput,

    #[error("node id {0} is out of range")]
    InvalidNode(NodeId),

    #[error("node {0} is not a rankee")]
    NotRankee(NodeId),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("sketch mismatch: {0}")]
    Mismatch(String),

    #[error("malformed sketch file: {0}")]
    Format(String),

    #[error(transparent)]
    Io(#[from] io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn invalid(msg: impl Into<String>) -> Error {
    Error::InvalidParameter(msg.into())
}
