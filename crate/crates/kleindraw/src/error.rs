use thiserror::Error;

use crate::drawing::Drawing;
use crate::graph::GraphKind;

/// Unified error type for graph construction, rotation-system algorithms,
/// the drawing pipeline and the text formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("self-loop at vertex {0}")]
    SelfLoop(usize),

    #[error("duplicate edge ({0}, {1})")]
    DuplicateEdge(usize, usize),

    #[error("vertex {v} out of range for {n} vertices")]
    VertexOutOfRange { v: usize, n: usize },

    #[error("unknown graph name `{0}`")]
    UnknownName(String),

    #[error("bad grid dimensions {m}x{n}: {reason}")]
    BadDimensions {
        m: usize,
        n: usize,
        reason: &'static str,
    },

    #[error("vertex {v} has degree {degree}, need at least 3")]
    DegreeTooLow { v: usize, degree: usize },

    #[error("graph is not connected")]
    DisconnectedGraph,

    #[error("{what}: {size} exceeds the brute-force limit {limit}")]
    TooLarge {
        what: &'static str,
        size: usize,
        limit: usize,
    },

    #[error("graph is planar")]
    GraphIsPlanar,

    #[error("graph is not 3-connected")]
    NotThreeConnected,

    #[error("not a Kuratowski subdivision: {0}")]
    NotASubdivision(&'static str),

    #[error("vertex {0} is not an interior chain vertex")]
    NotAChainVertex(usize),

    #[error("edge ({u}, {v}) is not incident to vertex {at}")]
    NotIncident { at: usize, u: usize, v: usize },

    #[error("rotation system does not describe a Klein bottle embedding")]
    NotKleinSystem,

    #[error("no base embedding matches the induced rotation system")]
    NoBaseMatch,

    #[error("invalid rotation system: {0}")]
    InvalidRotationSystem(String),

    #[error("barycentric iteration did not converge within {sweeps} sweeps")]
    NoConvergence { sweeps: usize, last: Box<Drawing> },

    #[error("degenerate edge angles at vertex {0}")]
    DegenerateAngles(usize),

    #[error("no authored base drawing for canonical {kind} system #{index}")]
    MissingDrawing { kind: GraphKind, index: usize },

    #[error("base drawing for {kind} #{index} invalid: {reason}")]
    DrawingInvalid {
        kind: GraphKind,
        index: usize,
        reason: String,
    },

    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("edge ({u}, {v}) has inconsistent twist marks")]
    SignMismatch { u: usize, v: usize },

    #[error("rotation line for vertex {0} does not list its neighbor set")]
    AdjacencyMismatch(usize),
}

impl Error {
    /// Short machine-readable reason code, used by the CLI on stderr.
    pub fn reason_code(&self) -> &'static str {
        match self {
            Error::SelfLoop(_) => "self-loop",
            Error::DuplicateEdge(..) => "duplicate-edge",
            Error::VertexOutOfRange { .. } => "vertex-out-of-range",
            Error::UnknownName(_) => "unknown-name",
            Error::BadDimensions { .. } => "bad-dimensions",
            Error::DegreeTooLow { .. } => "degree-too-low",
            Error::DisconnectedGraph => "disconnected-graph",
            Error::TooLarge { .. } => "too-large",
            Error::GraphIsPlanar => "graph-is-planar",
            Error::NotThreeConnected => "not-three-connected",
            Error::NotASubdivision(_) => "not-a-subdivision",
            Error::NotAChainVertex(_) => "not-a-chain-vertex",
            Error::NotIncident { .. } => "not-incident",
            Error::NotKleinSystem => "not-klein-system",
            Error::NoBaseMatch => "no-base-match",
            Error::InvalidRotationSystem(_) => "invalid-rotation-system",
            Error::NoConvergence { .. } => "no-convergence",
            Error::DegenerateAngles(_) => "degenerate-angles",
            Error::MissingDrawing { .. } => "missing-drawing",
            Error::DrawingInvalid { .. } => "drawing-invalid",
            Error::Parse { .. } => "parse-error",
            Error::SignMismatch { .. } => "sign-mismatch",
            Error::AdjacencyMismatch(_) => "adjacency-mismatch",
        }
    }

    /// True for syntax-level errors of the text formats (CLI exit code 2).
    pub fn is_parse(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. } | Error::SignMismatch { .. } | Error::AdjacencyMismatch(_)
        )
    }
}
