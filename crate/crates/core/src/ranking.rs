//! Weighted PageRank by power iteration.
//!
//! The transition matrix `M = d (A + S V) + (1 - d) T V` is never built.
//! Each step evaluates
//!
//! ```text
//! Mᵀ P = d Aᵀ P + [d (Sᵀ P) + (1 - d)] Vᵀ
//! ```
//!
//! which uses `Tᵀ P = 1` for a stochastic `P`. The cost of a step is
//! `O(|E| + N)`.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{SinkVector, WeightedDigraph};
use crate::sparse::SparseMatrix;

pub const DEFAULT_DAMPING: f64 = 0.85;
pub const DEFAULT_TOLERANCE: f64 = 1e-10;
pub const DEFAULT_MAX_ITERATIONS: usize = 1000;

/// Teleport target distribution `V`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum Personalization {
    Uniform,
    Explicit(Vec<f64>),
}

/// What to do with a node whose outgoing weights are all zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum ZeroStrength {
    /// Fail with [`Error::ZeroOutStrength`].
    #[default]
    Reject,
    /// Give the node an empty row so its mass is redistributed like a sink's.
    TreatAsSink,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PageRankConfig {
    pub damping: f64,
    pub personalization: Personalization,
    /// Stop once the L1 distance between successive iterates drops below this.
    pub tolerance: f64,
    pub max_iterations: usize,
    pub zero_strength: ZeroStrength,
}

impl Default for PageRankConfig {
    fn default() -> Self {
        Self {
            damping: DEFAULT_DAMPING,
            personalization: Personalization::Uniform,
            tolerance: DEFAULT_TOLERANCE,
            max_iterations: DEFAULT_MAX_ITERATIONS,
            zero_strength: ZeroStrength::Reject,
        }
    }
}

impl PageRankConfig {
    pub fn with_damping(mut self, damping: f64) -> Self {
        self.damping = damping;
        self
    }

    pub fn with_tolerance(mut self, tolerance: f64) -> Self {
        self.tolerance = tolerance;
        self
    }

    pub fn with_max_iterations(mut self, max_iterations: usize) -> Self {
        self.max_iterations = max_iterations;
        self
    }

    pub fn with_zero_strength(mut self, policy: ZeroStrength) -> Self {
        self.zero_strength = policy;
        self
    }

    pub fn with_personalization(mut self, personalization: Personalization) -> Self {
        self.personalization = personalization;
        self
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        if !(self.damping > 0.0 && self.damping < 1.0) {
            return Err(Error::InvalidConfig(format!(
                "damping factor must lie strictly between 0 and 1, got {}",
                self.damping
            )));
        }
        if !(self.tolerance > 0.0) {
            return Err(Error::InvalidConfig(format!(
                "tolerance must be positive, got {}",
                self.tolerance
            )));
        }
        if self.max_iterations == 0 {
            return Err(Error::InvalidConfig("max_iterations must be positive".into()));
        }
        if let Personalization::Explicit(v) = &self.personalization {
            if v.len() != n {
                return Err(Error::InvalidConfig(format!(
                    "personalization vector has {} entries, graph has {n} nodes",
                    v.len()
                )));
            }
            if v.iter().any(|&x| !(x >= 0.0) || !x.is_finite()) {
                return Err(Error::InvalidConfig(
                    "personalization entries must be finite and non-negative".into(),
                ));
            }
            let sum: f64 = v.iter().sum();
            if (sum - 1.0).abs() > 1e-12 {
                return Err(Error::InvalidConfig(format!(
                    "personalization vector sums to {sum}, not 1"
                )));
            }
        }
        Ok(())
    }

    /// `Vᵀ` as a dense vector of length `n`.
    pub fn teleport_vector(&self, n: usize) -> Vec<f64> {
        match &self.personalization {
            Personalization::Uniform => vec![1.0 / n as f64; n],
            Personalization::Explicit(v) => v.clone(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankResult {
    pub scores: Vec<f64>,
    pub iterations: usize,
    pub converged: bool,
    /// L1 distance between the last two iterates.
    pub residual: f64,
}

/// Row-normalized link matrix `a_ij = r_ij / Σ_k r_ik`. Sink rows are empty.
pub fn normalize_weights(g: &WeightedDigraph) -> Result<SparseMatrix> {
    normalize_weights_with(g, ZeroStrength::Reject).map(|(m, _)| m)
}

/// Like [`normalize_weights`], also returning the sink vector the iteration
/// must use (sinks plus, under [`ZeroStrength::TreatAsSink`], nodes whose
/// outgoing weights sum to zero).
pub fn normalize_weights_with(g: &WeightedDigraph, policy: ZeroStrength) -> Result<(SparseMatrix, SinkVector)> {
    let n = g.node_count();
    let mut dangling = vec![false; n];
    let mut triplets = Vec::with_capacity(g.arc_count());
    for (i, flag) in dangling.iter_mut().enumerate() {
        let arcs = g.out_arcs(i);
        if arcs.is_empty() {
            *flag = true;
            continue;
        }
        let strength: f64 = arcs.iter().map(|a| a.weight).sum();
        if strength <= 0.0 {
            match policy {
                ZeroStrength::Reject => return Err(Error::ZeroOutStrength { node: i }),
                ZeroStrength::TreatAsSink => {
                    *flag = true;
                    continue;
                }
            }
        }
        triplets.extend(arcs.iter().map(|a| (i, a.dst, a.weight / strength)));
    }
    Ok((
        SparseMatrix::from_triplets(n, n, triplets),
        SinkVector::from_flags(dangling),
    ))
}

pub fn pagerank(g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<RankResult> {
    cfg.validate(g.node_count())?;
    let (a, sinks) = normalize_weights_with(g, cfg.zero_strength)?;
    Ok(iterate(&a, &sinks, cfg))
}

fn iterate(a: &SparseMatrix, sinks: &SinkVector, cfg: &PageRankConfig) -> RankResult {
    let n = a.n_rows();
    let d = cfg.damping;
    let v = cfg.teleport_vector(n);
    let mut p = v.clone();
    let mut next = vec![0.0; n];
    let mut residual = f64::INFINITY;
    let mut iterations = 0;

    while iterations < cfg.max_iterations {
        let sink_mass = sinks.dot(&p);
        let teleport = d * sink_mass + (1.0 - d);
        a.transpose_mul_into(&p, &mut next);
        for (x, &vi) in next.iter_mut().zip(&v) {
            *x = d * *x + teleport * vi;
        }
        residual = l1_distance(&p, &next);
        std::mem::swap(&mut p, &mut next);
        iterations += 1;
        if residual < cfg.tolerance {
            break;
        }
    }

    RankResult {
        scores: p,
        iterations,
        converged: residual < cfg.tolerance,
        residual,
    }
}

pub(crate) fn l1_distance(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum()
}
