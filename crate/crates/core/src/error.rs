use std::io;

use thiserror::Error;

use crate::graph::{LabelId, VertexId};

pub type Result<T, E = PcsError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum PcsError {
    #[error("{source_name}:{line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },

    #[error("edges:{line}: vertex {vertex} has no profile entry (n = {n})")]
    DanglingVertex {
        line: usize,
        vertex: VertexId,
        n: usize,
    },

    #[error("ptrees: vertex {vertex} references label {label} which is not in the GP-tree")]
    UnknownLabel { vertex: VertexId, label: u64 },

    #[error("invalid GP-tree: {0}")]
    GpTree(String),

    #[error("vertex {vertex} out of range (n = {n})")]
    VertexOutOfRange { vertex: VertexId, n: usize },

    #[error("label {0} out of range")]
    LabelOutOfRange(LabelId),

    #[error("maximal common subtree of an empty list")]
    EmptyTreeList,

    #[error("invalid cut: {0}")]
    InvalidCut(String),

    #[error("unknown algorithm {0:?}")]
    UnknownAlgorithm(String),

    #[error("oracle bound exceeded: T(q) has {count} subtrees, bound is {bound}")]
    OracleBound { count: u128, bound: u128 },

    #[error("metric undefined: {0}")]
    Metric(String),

    #[error("index format: {0}")]
    Format(String),

    #[error("index version {found} is not supported (expected {expected})")]
    Version { found: u8, expected: u8 },

    #[error("index checksum mismatch (stored {stored:#010x}, computed {computed:#010x})")]
    Checksum { stored: u32, computed: u32 },

    #[error("io error: {0}")]
    Io(#[from] io::Error),
}

impl PcsError {
    pub(crate) fn parse(
        source_name: &'static str,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        PcsError::Parse {
            source_name,
            line,
            message: message.into(),
        }
    }
}
