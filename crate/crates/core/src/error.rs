use thiserror::Error;

/// Errors raised by graph construction, ingestion and the solvers.
#[derive(Debug, Error)]
pub enum Error {
    #[error("density undefined for empty edge set")]
    EmptyEdgeSet,

    #[error("edge id {id} out of range for a graph with {edge_count} edges")]
    InvalidEdgeId { id: usize, edge_count: usize },

    #[error("node id {id} out of range for a graph with {node_count} nodes")]
    InvalidNodeId { id: usize, node_count: usize },

    #[error("self-loop on node {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("graph must have at least 2 edges, found {0}")]
    TooFewEdges(usize),

    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("parameter {name} must be a nonnegative finite number, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },

    #[error("invalid similarity value {value} for pair ({a}, {b})")]
    InvalidSimilarity { a: usize, b: usize, value: f64 },

    #[error("similarity pair ({0}, {1}) given more than once")]
    DuplicatePair(usize, usize),

    #[error("label sets must be nonempty")]
    EmptyLabelSet,

    #[error("no nonzero similarities")]
    NoNonzeroSimilarity,

    #[error("cannot place {edges} distinct edges on {nodes} nodes")]
    InfeasibleInstance { nodes: usize, edges: usize },

    #[error("invalid flow network: {0}")]
    InvalidNetwork(String),

    #[error("monotonicity violated on parametric arc {arc}: {old} -> {new}")]
    MonotonicityViolated { arc: usize, old: f64, new: f64 },

    #[error("minimum cut is structurally infinite")]
    InfiniteCut,

    #[error("catalog was truncated by the evaluation budget; run a full exploration before querying by mu")]
    TruncatedCatalog,

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn check_nonnegative(name: &'static str, value: f64) -> Result<f64> {
    if value.is_finite() && value >= 0.0 {
        Ok(value)
    } else {
        Err(Error::NegativeParameter { name, value })
    }
}
