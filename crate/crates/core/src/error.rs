use thiserror::Error;

use crate::graph::Vertex;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    InvalidVertex { vertex: Vertex, n: usize },
    #[error("self-loop at vertex {0}")]
    SelfLoop(Vertex),
    #[error("duplicate edge {0}-{1}")]
    DuplicateEdge(Vertex, Vertex),
    #[error("graph is not connected")]
    Disconnected,
    #[error("invalid spanning tree: {0}")]
    InvalidTree(String),
    #[error("coloring is partial: vertex {0} has no color")]
    PartialColoring(Vertex),
    #[error("coloring has {got} entries, graph has {expected} vertices")]
    ColoringSize { expected: usize, got: usize },
    #[error("{0} is not a path in the graph")]
    NotAPath(String),
    #[error("instance too large for exhaustive search: n = {n}, limit {limit}")]
    TooLarge { n: usize, limit: usize },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("generator could not satisfy its parameters after {attempts} attempts")]
    Unachievable { attempts: usize },
    #[error("palette of vertex {vertex} exhausted after {cap} entries")]
    PaletteExhausted { vertex: Vertex, cap: usize },
    #[error(
        "d-band run did not terminate: {uncolored} vertices uncolored after {delivered} deliveries{}",
        if *budget_exhausted { " (budget exhausted)" } else { " (deadlock)" }
    )]
    NonTermination {
        delivered: u64,
        uncolored: usize,
        budget_exhausted: bool,
    },
    #[error("verification failed: {0}")]
    VerificationFailed(String),
    #[error("malformed document: {0}")]
    Malformed(String),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}
