use crate::graph::Vertex;

/// Errors raised by graph operations, protocols and searches.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("unknown vertex {0}")]
    UnknownVertex(Vertex),

    #[error("duplicate vertex {0}")]
    DuplicateVertex(Vertex),

    #[error("self-loop on vertex {0}")]
    SelfLoop(Vertex),

    #[error("vertex {neighbor} is not a neighbor of {vertex}")]
    NotANeighbor { vertex: Vertex, neighbor: Vertex },

    #[error("X-measurement of {0} needs a neighbor choice")]
    MissingNeighbor(Vertex),

    #[error("vertices {0} and {1} are not connected")]
    Disconnected(Vertex, Vertex),

    #[error("invalid path: {0}")]
    InvalidPath(String),

    #[error("hypothesis unmet: {0}")]
    HypothesisUnmet(String),

    #[error("size bound exceeded: {size} > {bound}")]
    SizeBound { size: usize, bound: usize },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("measurement branch has zero probability ({0:e})")]
    ZeroProbability(f64),

    #[error("vertex sets differ")]
    VertexSetMismatch,

    #[error("internal invariant violated: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
