use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CostError {
    #[error("malformed cost literal {0:?}")]
    Syntax(String),
    #[error("zero denominator in cost literal")]
    ZeroDenominator,
    #[error("negative cost {0}")]
    Negative(String),
    #[error("cost difference {minuend} - {subtrahend} is negative")]
    NegativeDifference { minuend: String, subtrahend: String },
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("graph needs at least one node")]
    Empty,
    #[error("node index {index} out of range for {node_count} nodes")]
    NodeOutOfRange { index: usize, node_count: usize },
    #[error("arc index {index} out of range for {arc_count} arcs")]
    ArcOutOfRange { index: usize, arc_count: usize },
    #[error("self-loop on node {0}")]
    SelfLoop(usize),
}

/// Failures of a single-root solve.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SolveError {
    #[error("invalid root {root} for {node_count} nodes")]
    InvalidRoot { root: usize, node_count: usize },
    /// No branching rooted at `root` can cover the graph.
    #[error("no branching rooted at {root} covers the graph: {reason}")]
    InfeasibleRoot { root: usize, reason: String },
    /// No root admits a branching cover.
    #[error("no root admits a branching cover")]
    Infeasible,
    /// An internal invariant did not hold; always a solver bug.
    #[error("solver invariant violated: {0}")]
    Invariant(String),
}

impl From<CostError> for SolveError {
    fn from(e: CostError) -> Self {
        SolveError::Invariant(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("{arcs} arcs exceed the exhaustive-search limit of {limit}")]
    TooLarge { arcs: usize, limit: usize },
    #[error("{subsets} subsets exceed the exhaustive-search limit of {limit}")]
    TooManySubsets { subsets: usize, limit: usize },
    #[error("{nodes} nodes exceed the vertex-set search limit of {limit}")]
    TooManyNodes { nodes: usize, limit: usize },
    #[error("invalid root {0}")]
    InvalidRoot(usize),
}

/// A parse failure, with the 1-based line it occurred on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            message: message.into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ReductionError {
    #[error("a set cover instance needs at least one element")]
    NoElements,
    #[error("subset {subset} names element {element}, but there are only {element_count}")]
    MemberOutOfRange {
        subset: usize,
        element: usize,
        element_count: usize,
    },
    #[error("not a branching cover of the reduced graph: {0}")]
    InvalidTree(String),
}
