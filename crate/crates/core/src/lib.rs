//! Weighted PageRank and the Black Hole Metric on bounded weighted digraphs.
//!
//! PageRank normalizes each node's outgoing weights to sum to one, which
//! discards their absolute level: a node giving every neighbour 1 out of 10
//! looks the same as one giving 9 out of 10. The Black Hole Metric rescales
//! weights against a known `[low, high]` range and sends the unassigned
//! remainder to an extra absorbing node, so low weights translate into more
//! teleportation instead of being inflated.
//!
//! ```
//! use bhrank::{blackhole_metric, pagerank, PageRankConfig, WeightBounds, WeightedDigraph};
//!
//! let g = WeightedDigraph::new(
//!     3,
//!     [(0, 1, 9.0), (0, 2, 1.0), (1, 2, 5.0)],
//!     WeightBounds::global(0.0, 10.0),
//! )?;
//! let cfg = PageRankConfig::default();
//! let pr = pagerank(&g, &cfg)?;
//! let bh = blackhole_metric(&g, &cfg)?;
//! assert!(pr.converged && bh.converged);
//! assert!(bh.black_hole > 0.0);
//! # Ok::<(), bhrank::Error>(())
//! ```

// `!(x > y)` is used on purpose so NaN fails validation.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
#![allow(clippy::needless_range_loop)]

pub mod blackhole;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod graph;
pub mod io;
pub mod ranking;
pub mod sparse;

pub use blackhole::{
    bh_arc_weight, black_hole_weight, blackhole_metric, blackhole_metric_on, dense_oracle, transform, wariness,
    BlackHoleResult, BlackHoleSolver, IterationScalars, TransformedNetwork,
};
pub use error::{Error, Result};
pub use experiments::{compare_ranks, rank_positions, run_scaling_experiment, RankComparison, RankPositions};
pub use generators::{generate_er, generate_scale_free, scale_weights, ErdosRenyiSpec, ScaleFreeSpec, SeedGraph};
pub use graph::{sink_vector, Arc, NodeId, SinkVector, WeightBounds, WeightedDigraph};
pub use ranking::{normalize_weights, pagerank, PageRankConfig, Personalization, RankResult, ZeroStrength};
pub use sparse::SparseMatrix;
