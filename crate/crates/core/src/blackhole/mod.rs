//! The Black Hole Metric.
//!
//! Raw weights `r_ij ∈ [l_i, h_i]` are mapped to
//!
//! ```text
//! ā_ij = (r_ij - l_i) / (out_i (h_i - l_i))
//! b_i  = Σ_j (h_i - r_ij) / (out_i (h_i - l_i))
//! ```
//!
//! so that every non-sink row of `Ā` plus its black-hole weight `b_i` sums to
//! one. The black hole is an extra sink that is never a teleport target; its
//! row in the bordered transition matrix is `V`. Iteration runs on the `N`
//! real nodes plus one scalar:
//!
//! ```text
//! P̄_n  = d Āᵀ P̄_{n-1} + [1 - d (1 - Sᵀ P̄_{n-1} - p_b,{n-1})] Vᵀ
//! p_b,n = d Bᵀ P̄_{n-1}
//! ```
//!
//! starting from `P̄_0 = Vᵀ`, `p_b,0 = 0`.

mod dense;

pub use dense::{assemble_bordered, dense_oracle, dense_oracle_with_limit, DenseMatrix, DEFAULT_DENSE_LIMIT};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SinkVector, WeightedDigraph};
use crate::ranking::{l1_distance, PageRankConfig};
use crate::sparse::SparseMatrix;

/// Transformed weight of a single arc.
pub fn bh_arc_weight(r: f64, l: f64, h: f64, out: usize) -> Result<f64> {
    check_scale(l, h)?;
    if !(r >= l && r <= h) {
        return Err(Error::WeightOutsideScale {
            weight: r,
            low: l,
            high: h,
        });
    }
    if out == 0 {
        return Err(Error::InvalidConfig("outdegree must be at least 1".into()));
    }
    Ok((r - l) / (out as f64 * (h - l)))
}

/// Weight of the arc from a node to the black hole, given all of the node's
/// outgoing raw weights.
pub fn black_hole_weight(weights: &[f64], l: f64, h: f64) -> Result<f64> {
    check_scale(l, h)?;
    if weights.is_empty() {
        return Err(Error::InvalidConfig(
            "black-hole weight needs at least one outgoing arc".into(),
        ));
    }
    if let Some(&r) = weights.iter().find(|&&r| !(r >= l && r <= h)) {
        return Err(Error::WeightOutsideScale {
            weight: r,
            low: l,
            high: h,
        });
    }
    let denom = weights.len() as f64 * (h - l);
    Ok(weights.iter().map(|&r| (h - r) / denom).sum())
}

fn check_scale(l: f64, h: f64) -> Result<()> {
    if h > l && l.is_finite() && h.is_finite() {
        Ok(())
    } else {
        Err(Error::DegenerateScale {
            node: None,
            low: l,
            high: h,
        })
    }
}

/// A network after the black-hole transformation.
#[derive(Debug, Clone, PartialEq)]
pub struct TransformedNetwork {
    /// `Ā`, N×N.
    pub abar: SparseMatrix,
    /// `B`, one entry per node; zero for sinks.
    pub black_hole: Vec<f64>,
    pub sinks: SinkVector,
}

impl TransformedNetwork {
    pub fn node_count(&self) -> usize {
        self.black_hole.len()
    }
}

pub fn transform(g: &WeightedDigraph) -> Result<TransformedNetwork> {
    let n = g.node_count();
    let mut triplets = Vec::with_capacity(g.arc_count());
    let mut b = vec![0.0; n];
    for (i, bi) in b.iter_mut().enumerate() {
        let arcs = g.out_arcs(i);
        if arcs.is_empty() {
            continue;
        }
        let (l, h) = g.bounds().of(i);
        if !(h > l) {
            return Err(Error::DegenerateScale {
                node: Some(i),
                low: l,
                high: h,
            });
        }
        let denom = arcs.len() as f64 * (h - l);
        for a in arcs {
            triplets.push((i, a.dst, (a.weight - l) / denom));
            *bi += (h - a.weight) / denom;
        }
    }
    Ok(TransformedNetwork {
        abar: SparseMatrix::from_triplets(n, n, triplets),
        black_hole: b,
        sinks: g.sink_vector(),
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BlackHoleResult {
    /// `P̄`, the steady-state probabilities of the real nodes.
    pub scores: Vec<f64>,
    /// `p_b`, the steady-state probability of the black hole.
    pub black_hole: f64,
    pub iterations: usize,
    pub converged: bool,
    /// L1 distance between the last two iterates over `(P̄, p_b)`.
    pub residual: f64,
}

impl BlackHoleResult {
    /// Largest entry of the combined vector `(P̄, p_b)`.
    pub fn max_probability(&self) -> f64 {
        self.scores.iter().copied().fold(self.black_hole, f64::max)
    }
}

/// The scalars one step of the recurrence needs, all taken on `P̄_{n-1}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct IterationScalars {
    /// `Sᵀ P̄`
    pub sink_mass: f64,
    /// `Bᵀ P̄`
    pub black_hole_inflow: f64,
    /// `Tᵀ P̄`, which equals `1 - p_b`.
    pub total_mass: f64,
}

/// Step-by-step driver for the split recurrence.
#[derive(Debug, Clone)]
pub struct BlackHoleSolver<'a> {
    net: &'a TransformedNetwork,
    damping: f64,
    teleport: Vec<f64>,
    scores: Vec<f64>,
    next: Vec<f64>,
    black_hole: f64,
}

impl<'a> BlackHoleSolver<'a> {
    pub fn new(net: &'a TransformedNetwork, cfg: &PageRankConfig) -> Result<Self> {
        let n = net.node_count();
        cfg.validate(n)?;
        let teleport = cfg.teleport_vector(n);
        Ok(Self {
            net,
            damping: cfg.damping,
            scores: teleport.clone(),
            next: vec![0.0; n],
            teleport,
            black_hole: 0.0,
        })
    }

    pub fn scores(&self) -> &[f64] {
        &self.scores
    }

    pub fn black_hole(&self) -> f64 {
        self.black_hole
    }

    /// Scalars of the current iterate.
    pub fn scalars(&self) -> IterationScalars {
        IterationScalars {
            sink_mass: self.net.sinks.dot(&self.scores),
            black_hole_inflow: self.net.black_hole.iter().zip(&self.scores).map(|(b, p)| b * p).sum(),
            total_mass: 1.0 - self.black_hole,
        }
    }

    /// Advances one iteration and returns the L1 change over `(P̄, p_b)`
    /// together with the scalars that drove it.
    pub fn step(&mut self) -> (f64, IterationScalars) {
        let d = self.damping;
        let s = self.scalars();
        let coefficient = 1.0 - d * (1.0 - s.sink_mass - self.black_hole);
        self.net.abar.transpose_mul_into(&self.scores, &mut self.next);
        for (x, &v) in self.next.iter_mut().zip(&self.teleport) {
            *x = d * *x + coefficient * v;
        }
        let next_black_hole = d * s.black_hole_inflow;
        let delta = l1_distance(&self.scores, &self.next) + (self.black_hole - next_black_hole).abs();
        std::mem::swap(&mut self.scores, &mut self.next);
        self.black_hole = next_black_hole;
        (delta, s)
    }

    pub fn run(mut self, tolerance: f64, max_iterations: usize) -> BlackHoleResult {
        let mut residual = f64::INFINITY;
        let mut iterations = 0;
        while iterations < max_iterations {
            residual = self.step().0;
            iterations += 1;
            if residual < tolerance {
                break;
            }
        }
        BlackHoleResult {
            scores: self.scores,
            black_hole: self.black_hole,
            iterations,
            converged: residual < tolerance,
            residual,
        }
    }
}

pub fn blackhole_metric(g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<BlackHoleResult> {
    let net = transform(g)?;
    blackhole_metric_on(&net, cfg)
}

pub fn blackhole_metric_on(net: &TransformedNetwork, cfg: &PageRankConfig) -> Result<BlackHoleResult> {
    Ok(BlackHoleSolver::new(net, cfg)?.run(cfg.tolerance, cfg.max_iterations))
}

/// Network-level wariness `W = sqrt(p_b / max P · Σ_k (b_k + s_k) / N)`,
/// with `max P` taken over `(P̄, p_b)`. Lies in `[0, 1]`.
pub fn wariness(net: &TransformedNetwork, result: &BlackHoleResult) -> f64 {
    let n = net.node_count();
    let max = result.max_probability();
    if max <= 0.0 || result.black_hole <= 0.0 {
        return 0.0;
    }
    let unassigned: f64 = (0..n).map(|k| net.black_hole[k] + net.sinks.value(k)).sum::<f64>() / n as f64;
    ((result.black_hole / max) * unassigned).sqrt().clamp(0.0, 1.0)
}
