//! Single error type shared by every module of the engine.
//!
//! Variants are grouped into three reporting categories (configuration and
//! parsing problems, dimension problems, numerical validation failures);
//! [`Error::category`] and [`Error::exit_code`] expose that grouping so
//! front ends map failures to messages and exit statuses uniformly.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Every failure the engine can report.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at node {node}: the walk is defined on simple graphs")]
    SelfLoop { node: i64 },

    #[error("duplicate edge between nodes {a} and {b}")]
    DuplicateEdge { a: i64, b: i64 },

    #[error("the edge list is empty")]
    EmptyGraph,

    #[error("unknown node {node}")]
    UnknownNode { node: i64 },

    #[error("port {port} out of range at node {node} (degree {degree})")]
    PortOutOfRange { node: i64, port: usize, degree: usize },

    #[error("port list at node {node} is not a permutation of its neighbors")]
    PortListInvalid { node: i64 },

    #[error(
        "shift sends port {port} of node {node} to port {target}, outside the \
         target node's range 1..={neighbor_degree}"
    )]
    ShiftRangeViolated {
        node: i64,
        port: usize,
        target: usize,
        neighbor_degree: usize,
    },

    #[error(
        "shift assignment is not bijective: the ports arriving at node {node} \
         do not cover its full port range"
    )]
    ShiftRestrictionViolated { node: i64 },

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("basis index {index} out of range for dimension {dim}")]
    IndexOutOfRange { index: usize, dim: usize },

    #[error(
        "matrix block at node {node} must be {expected}x{expected} \
         (entries in row-major order), found {found} entries"
    )]
    BlockDimensionMismatch {
        node: i64,
        expected: usize,
        found: usize,
    },

    #[error("dense matrix of dimension {dim} exceeds the cap {cap}")]
    DenseCapExceeded { dim: usize, cap: usize },

    #[error("non-unitary matrix for {context}: max |M\u{2020}M - I| entry is {deviation:.3e}")]
    UnitarityViolation { context: String, deviation: f64 },

    #[error(
        "state norm too far from one: squared-norm deviation {deviation:.3e} \
         exceeds the rejection threshold"
    )]
    NormViolation { deviation: f64 },

    #[error("expected a {expected}-picture coefficient family, found {found}")]
    RoleMismatch {
        expected: &'static str,
        found: &'static str,
    },

    #[error("distribution mode '{mode}' is incompatible with a {model}-picture run")]
    ModeMismatch {
        mode: &'static str,
        model: &'static str,
    },

    #[error("components were built over different graphs ({context})")]
    GraphMismatch { context: &'static str },

    #[error("the two labelings disagree about the neighborhood of node {node}")]
    EdgeSetMismatch { node: i64 },

    #[error("port {port} of node {node} is aligned to a port of a different physical edge")]
    NotSameEdge { node: i64, port: usize },

    #[error("per-node port table at node {node} is not a bijection")]
    NotBijective { node: i64 },

    #[error(
        "graph is not regular (degrees range from {min_degree} to {max_degree}), \
         so the evolution does not factorize"
    )]
    NotRegular {
        min_degree: usize,
        max_degree: usize,
    },

    #[error("node {node} carries a different matrix: the factorization check needs one common block")]
    NonUniformBlocks { node: i64 },

    #[error("the {unitary} matrix is not defined for degree {degree}")]
    UnsupportedDegree {
        unitary: &'static str,
        degree: usize,
    },

    #[error("parse error: {message}")]
    Parse { message: String },

    #[error("i/o failure: {0}")]
    Io(#[from] std::io::Error),
}

impl From<serde_json::Error> for Error {
    fn from(err: serde_json::Error) -> Self {
        Error::Parse {
            message: err.to_string(),
        }
    }
}

impl Error {
    /// Reporting category of the failure.
    pub fn category(&self) -> &'static str {
        use Error::*;
        match self {
            DimensionMismatch { .. }
            | IndexOutOfRange { .. }
            | BlockDimensionMismatch { .. }
            | DenseCapExceeded { .. } => "DimensionMismatch",
            UnitarityViolation { .. } | NormViolation { .. } => "UnitarityViolation",
            _ => "ParseError",
        }
    }

    /// Process exit status conventionally paired with the category:
    /// 2 for configuration problems, 3 for numerical validation failures,
    /// 4 for dimension problems.
    pub fn exit_code(&self) -> i32 {
        match self.category() {
            "DimensionMismatch" => 4,
            "UnitarityViolation" => 3,
            _ => 2,
        }
    }
}
