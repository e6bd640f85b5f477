use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("graph must have at least one vertex")]
    EmptyGraph,
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("edge {u}-{v} has weight {weight}; weights must be at least 2")]
    WeightTooSmall { u: Vertex, v: Vertex, weight: u32 },
    #[error("graph is not connected")]
    Disconnected,

    #[error("invalid move {from}->{to}: not an edge")]
    InvalidMove { from: Vertex, to: Vertex },
    #[error("inverse move {from}->{to} needs a pebble on {to}")]
    NoPebble { from: Vertex, to: Vertex },
    #[error("dimension mismatch: {left} vs {right} vertices")]
    Dimension { left: usize, right: usize },

    #[error("domain error: {0}")]
    Domain(String),
    #[error("rewrite precondition violated: {0}")]
    RewritePrecondition(String),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("candidate queue exceeded {limit} entries ({processed} processed, largest size {largest})")]
    ResourceCap {
        limit: usize,
        processed: usize,
        largest: u64,
    },
}

impl Error {
    /// True when a search stopped at its queue cap rather than on bad input.
    pub fn is_resource_cap(&self) -> bool {
        matches!(self, Error::ResourceCap { .. })
    }
}
