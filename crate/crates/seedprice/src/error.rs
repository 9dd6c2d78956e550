use thiserror::Error;

/// Errors shared across network construction, solvers, and file parsing.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("duplicate edge {from} -> {to}")]
    DuplicateEdge { from: String, to: String },
    #[error("self-loop on node {node}")]
    SelfLoop { node: String },
    #[error("negative weight on edge {from} -> {to}")]
    NegativeWeight { from: String, to: String },
    #[error("negative valuation for node {node}")]
    NegativeValuation { node: String },
    #[error("unknown node {0}")]
    UnknownNode(String),
    #[error("influence function is not non-decreasing and concave")]
    InvalidInfluence,
    #[error("price set is empty")]
    EmptyPriceSet,
    #[error("prices must be positive and strictly ascending")]
    InvalidPriceSet,
    #[error("quantity must be at least 1")]
    InvalidQuantity,
    #[error("seed group of size {seeds} exceeds stock {stock}")]
    SeedsExceedStock { seeds: usize, stock: usize },
    #[error("instance with {nodes} nodes is too large for brute force (limit {limit})")]
    InstanceTooLarge { nodes: usize, limit: usize },
    #[error("random seed selection requires an rng seed")]
    MissingSeedForRandom,
    #[error("invalid parameters: {0}")]
    InvalidParams(String),
    #[error("line {line}: malformed input: {detail}")]
    MalformedLine { line: usize, detail: String },
    #[error("line {line}: negative weight")]
    NegativeWeightAt { line: usize },
    #[error("line {line}: negative valuation")]
    NegativeValuationAt { line: usize },
    #[error("line {line}: duplicate node {node}")]
    DuplicateNode { line: usize, node: String },
    #[error("io error: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
