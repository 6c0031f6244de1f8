//! Error type shared by every module.

use thiserror::Error;

/// Errors produced by construction, analysis, and I/O.
#[derive(Debug, Error)]
pub enum Error {
    /// The graph is not connected; carries one unreachable pair as a witness.
    #[error("graph is disconnected: no path between vertices {from} and {to}")]
    Disconnected { from: usize, to: usize },

    /// A construction would exceed the configured vertex cap.
    #[error("vertex cap exceeded: {actual} vertices, cap {cap}{}", context.as_deref().map(|c| format!(" ({c})")).unwrap_or_default())]
    VertexCapExceeded {
        actual: usize,
        cap: usize,
        context: Option<String>,
    },

    /// A distance table failed metric validation.
    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    /// A vertex index outside the graph.
    #[error("vertex index {index} out of range (graph has {len} vertices)")]
    VertexOutOfRange { index: usize, len: usize },

    /// A generator value cannot be represented.
    #[error("value overflow for index n={n}: 2^(2^{n}) is not representable")]
    Overflow { n: i32 },

    /// Bad argument combinations detected before any computation runs.
    #[error("invalid input: {0}")]
    InvalidInput(String),

    /// A segment is too short for the map construction.
    #[error("segment of length {len} is shorter than the required threshold {required}")]
    SegmentTooShort { len: usize, required: f64 },

    /// A verified invariant failed at run time; signals a bug upstream.
    #[error("invariant violation: {0}")]
    InvariantViolation(String),

    /// A centroid query on an empty set.
    #[error("centroid set is empty")]
    EmptyCentroidSet,

    /// Boundary triples must consist of distinct representatives.
    #[error("boundary triple contains a repeated representative: vertex {0}")]
    RepeatedBoundaryPoint(usize),

    /// A stretch plan referenced a tooth the comb does not have.
    #[error("stretch plan references missing tooth {index} (comb has {count} teeth)")]
    MissingTooth { index: usize, count: usize },

    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    /// Process exit code for the CLI: 2 for invariant violations, 1 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::InvariantViolation(_) => 2,
            _ => 1,
        }
    }

    /// Short machine-readable kind tag used in structured stderr output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::Disconnected { .. } => "disconnected",
            Error::VertexCapExceeded { .. } => "vertex_cap_exceeded",
            Error::InvalidMetric(_) => "invalid_metric",
            Error::VertexOutOfRange { .. } => "vertex_out_of_range",
            Error::Overflow { .. } => "overflow",
            Error::InvalidInput(_) => "invalid_input",
            Error::SegmentTooShort { .. } => "segment_too_short",
            Error::InvariantViolation(_) => "invariant_violation",
            Error::EmptyCentroidSet => "empty_centroid_set",
            Error::RepeatedBoundaryPoint(_) => "repeated_boundary_point",
            Error::MissingTooth { .. } => "missing_tooth",
            Error::Io(_) => "io",
            Error::Parse(_) => "parse",
        }
    }
}
