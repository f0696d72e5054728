use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("graph must have at least one node")]
    NoNodes,

    #[error("duplicate arc {src} -> {dst}")]
    DuplicateArc { src: usize, dst: usize },

    #[error("arc {src} -> {dst} has weight {weight}, outside the scale [{low}, {high}] of node {src}")]
    WeightOutOfBounds {
        src: usize,
        dst: usize,
        weight: f64,
        low: f64,
        high: f64,
    },

    #[error("invalid weight scale for node {node}: [{low}, {high}] (need 0 <= low < high)")]
    InvalidBounds { node: usize, low: f64, high: f64 },

    #[error("per-node bounds cover {got} nodes, graph has {expected}")]
    BoundsLength { expected: usize, got: usize },

    #[error("arc {src} -> {dst} references a node outside 0..{n}")]
    NodeIndexOutOfRange { src: usize, dst: usize, n: usize },

    #[error("self-loop on node {node}")]
    SelfLoop { node: usize },

    #[error("{}line {line}: {reason}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        reason: String,
    },

    #[error("edge list contains no arcs")]
    EmptyGraph,

    #[error("node {node} has outgoing arcs but their weights sum to zero")]
    ZeroOutStrength { node: usize },

    #[error("degenerate weight scale [{low}, {high}]{}", node.map(|n| format!(" for node {n}")).unwrap_or_default())]
    DegenerateScale { node: Option<usize>, low: f64, high: f64 },

    #[error("weight {weight} lies outside [{low}, {high}]")]
    WeightOutsideScale { weight: f64, low: f64, high: f64 },

    #[error("dense construction limited to {limit} nodes, graph has {n}")]
    TooLarge { n: usize, limit: usize },

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("preferential-attachment process cannot add nodes when alpha = gamma = 0")]
    SpecUnreachable,

    #[error("rank vectors differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },

    #[error("PageRank changed under weight scaling (max deviation {deviation:e}, allowed {allowed:e})")]
    ScaleInvarianceViolated { deviation: f64, allowed: f64 },

    #[error("{context}: {source}")]
    Io {
        context: String,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn io(context: impl Into<String>, source: std::io::Error) -> Self {
        Error::Io {
            context: context.into(),
            source,
        }
    }
}
