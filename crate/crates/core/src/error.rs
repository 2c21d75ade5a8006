use thiserror::Error;

/// Crate-wide error type.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid edge ({u}, {v}) on {num_vertices} vertices")]
    InvalidEdge {
        u: usize,
        v: usize,
        num_vertices: usize,
    },

    #[error("edge index {index} out of range for {num_vertices} vertices")]
    EdgeIndexOutOfRange { index: usize, num_vertices: usize },

    #[error("invalid vertex {v} on {num_vertices} vertices")]
    InvalidVertex { v: usize, num_vertices: usize },

    #[error("empty subgraph has no discrepancy")]
    EmptySubgraph,

    #[error("requested {requested} positive edges but K_{num_vertices} has only {max}")]
    CountOverflow {
        requested: usize,
        num_vertices: usize,
        max: usize,
    },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid graph: {0}")]
    InvalidGraph(String),

    #[error("num_vertices must be even and positive, got {0}")]
    OddVertexCount(usize),

    #[error("{what} requires num_vertices >= {min}, got {num_vertices}")]
    TooSmall {
        what: &'static str,
        num_vertices: usize,
        min: usize,
    },

    #[error("matchings share edge {edge_index}")]
    MatchingOverlap { edge_index: usize },

    #[error("matchings cover different vertex sets")]
    VertexSetMismatch,

    #[error("structure error: {0}")]
    Structure(String),

    #[error("cycle is not a component of the matching union")]
    NotAComponent,

    #[error("tuple arity mismatch: family has k={family}, signing expects k={signing}")]
    ArityMismatch { family: usize, signing: usize },

    #[error("positive count of the signing is not known exactly: {0}")]
    UnknownPositiveCount(String),

    #[error("no decomposition found for {num_vertices} vertices: {detail}")]
    ConstructionNotFound { num_vertices: usize, detail: String },

    #[error("brute-force oracle supports at most {max} vertices, got {num_vertices}")]
    SizeLimit { num_vertices: usize, max: usize },

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("nonpositive parameter {name} = {value}")]
    NonpositiveParameter { name: &'static str, value: f64 },

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
