//! Seeded random networks with bounded integer weights.
//!
//! Both generators draw from `ChaCha8Rng` seeded with `seed_from_u64`, and
//! every integer draw goes through `u64` ranges, so a given spec and seed
//! yields the same graph on every platform.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{Arc, WeightBounds, WeightedDigraph};

/// Above this node count the ER generator skips geometrically between arcs
/// instead of visiting every ordered pair.
pub const ER_PAIRWISE_LIMIT: usize = 10_000;

/// Collision retries in a preferential-attachment step before it is skipped.
pub const MAX_RESAMPLES: usize = 50;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ErdosRenyiSpec {
    pub n: usize,
    pub mean_outdegree: f64,
    pub weight_low: u32,
    pub weight_high: u32,
    pub seed: u64,
}

impl ErdosRenyiSpec {
    pub fn new(n: usize, mean_outdegree: f64, seed: u64) -> Self {
        Self {
            n,
            mean_outdegree,
            weight_low: 0,
            weight_high: 49,
            seed,
        }
    }

    pub fn arc_probability(&self) -> f64 {
        if self.n < 2 {
            0.0
        } else {
            self.mean_outdegree / (self.n - 1) as f64
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n == 0 {
            return Err(Error::NoNodes);
        }
        if !(self.mean_outdegree >= 0.0) || (self.n > 1 && self.mean_outdegree > (self.n - 1) as f64) {
            return Err(Error::InvalidConfig(format!(
                "mean outdegree {} not achievable with {} nodes",
                self.mean_outdegree, self.n
            )));
        }
        check_weights(self.weight_low, self.weight_high)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScaleFreeSpec {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta_in: f64,
    pub delta_out: f64,
    pub weight_low: u32,
    pub weight_high: u32,
    pub seed: u64,
    #[serde(default)]
    pub initial: SeedGraph,
}

/// Two-node graph the preferential-attachment process grows from.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub enum SeedGraph {
    /// `0 -> 1`
    #[default]
    SingleArc,
    /// `0 -> 1` and `1 -> 0`
    MutualPair,
}

impl SeedGraph {
    fn arcs(self) -> &'static [(usize, usize)] {
        match self {
            SeedGraph::SingleArc => &[(0, 1)],
            SeedGraph::MutualPair => &[(0, 1), (1, 0)],
        }
    }
}

impl ScaleFreeSpec {
    /// α = 0.41, β = 0.54, γ = 0.05, δ_in = 0.2, δ_out = 0, weights in [0, 49].
    pub fn with_defaults(n: usize, seed: u64) -> Self {
        Self {
            n,
            alpha: 0.41,
            beta: 0.54,
            gamma: 0.05,
            delta_in: 0.2,
            delta_out: 0.0,
            weight_low: 0,
            weight_high: 49,
            seed,
            initial: SeedGraph::SingleArc,
        }
    }

    fn validate(&self) -> Result<()> {
        if self.n < 2 {
            return Err(Error::InvalidConfig(
                "scale-free graphs start from two nodes; n must be >= 2".into(),
            ));
        }
        let probs = [self.alpha, self.beta, self.gamma];
        if probs.iter().any(|p| !(0.0..=1.0).contains(p)) || (probs.iter().sum::<f64>() - 1.0).abs() > 1e-12 {
            return Err(Error::InvalidConfig(format!(
                "alpha, beta, gamma must be probabilities summing to 1, got {}, {}, {}",
                self.alpha, self.beta, self.gamma
            )));
        }
        if !(self.delta_in >= 0.0 && self.delta_out >= 0.0) {
            return Err(Error::InvalidConfig(
                "delta_in and delta_out must be non-negative".into(),
            ));
        }
        if self.alpha == 0.0 && self.gamma == 0.0 {
            return Err(Error::SpecUnreachable);
        }
        check_weights(self.weight_low, self.weight_high)
    }
}

fn check_weights(low: u32, high: u32) -> Result<()> {
    if low < high {
        Ok(())
    } else {
        Err(Error::InvalidConfig(format!(
            "weight range [{low}, {high}] is empty or degenerate"
        )))
    }
}

fn weight(rng: &mut ChaCha8Rng, low: u32, high: u32) -> f64 {
    rng.random_range(low as u64..=high as u64) as f64
}

/// Directed G(n, p) with `p = mean_outdegree / (n - 1)`. The returned graph
/// is bounded by `[weight_low, weight_high]`.
pub fn generate_er(spec: &ErdosRenyiSpec) -> Result<WeightedDigraph> {
    spec.validate()?;
    let n = spec.n;
    let p = spec.arc_probability();
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut arcs = Vec::new();

    if p > 0.0 {
        if n <= ER_PAIRWISE_LIMIT || p >= 1.0 {
            for i in 0..n {
                for j in 0..n {
                    if i != j && rng.random::<f64>() < p {
                        arcs.push(Arc::new(i, j, weight(&mut rng, spec.weight_low, spec.weight_high)));
                    }
                }
            }
        } else {
            // Walk the n(n-1) off-diagonal slots, jumping Geometric(p) gaps.
            let slots = n as u64 * (n as u64 - 1);
            let log_q = (1.0 - p).ln();
            let mut k: u64 = 0;
            loop {
                let u: f64 = 1.0 - rng.random::<f64>();
                let gap = (u.ln() / log_q).floor();
                if !gap.is_finite() || gap >= (slots - k) as f64 {
                    break;
                }
                k += gap as u64;
                let i = (k / (n as u64 - 1)) as usize;
                let mut j = (k % (n as u64 - 1)) as usize;
                if j >= i {
                    j += 1;
                }
                arcs.push(Arc::new(i, j, weight(&mut rng, spec.weight_low, spec.weight_high)));
                k += 1;
                if k >= slots {
                    break;
                }
            }
        }
    }

    WeightedDigraph::new(
        n,
        arcs,
        WeightBounds::global(spec.weight_low as f64, spec.weight_high as f64),
    )
}

/// Step counts of one preferential-attachment run.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaleFreeTrace {
    pub alpha_steps: usize,
    pub beta_steps: usize,
    pub gamma_steps: usize,
    /// β steps abandoned after [`MAX_RESAMPLES`] collisions.
    pub skipped: usize,
}

impl ScaleFreeTrace {
    /// Steps that added an arc.
    pub fn steps(&self) -> usize {
        self.alpha_steps + self.beta_steps + self.gamma_steps
    }
}

pub fn generate_scale_free(spec: &ScaleFreeSpec) -> Result<WeightedDigraph> {
    generate_scale_free_traced(spec).map(|(g, _)| g)
}

/// Directed preferential attachment grown from a two-node [`SeedGraph`].
///
/// Each step picks one of three moves:
/// - α: new node `v`, arc `v -> w` with `w` drawn ∝ `indeg(w) + δ_in`;
/// - β: arc `v -> w` between existing nodes, `v` ∝ `outdeg(v) + δ_out`,
///   `w` ∝ `indeg(w) + δ_in`;
/// - γ: new node `w`, arc `v -> w` with `v` drawn ∝ `outdeg(v) + δ_out`.
///
/// Growth stops once `n` nodes exist. A β step landing on an existing arc or
/// a self-loop is redrawn up to [`MAX_RESAMPLES`] times and then skipped.
pub fn generate_scale_free_traced(spec: &ScaleFreeSpec) -> Result<(WeightedDigraph, ScaleFreeTrace)> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let mut state = Attachment {
        srcs: Vec::new(),
        dsts: Vec::new(),
        nodes: 2,
        present: std::collections::HashSet::new(),
    };
    for &(v, w) in spec.initial.arcs() {
        state.add(v, w);
    }
    let mut trace = ScaleFreeTrace::default();

    while state.nodes < spec.n {
        let u: f64 = rng.random();
        if u < spec.alpha {
            let v = state.nodes;
            let w = state.pick_by_indegree(&mut rng, spec.delta_in);
            state.nodes += 1;
            state.add(v, w);
            trace.alpha_steps += 1;
        } else if u < spec.alpha + spec.beta {
            let mut added = false;
            for _ in 0..MAX_RESAMPLES {
                let v = state.pick_by_outdegree(&mut rng, spec.delta_out);
                let w = state.pick_by_indegree(&mut rng, spec.delta_in);
                if v != w && !state.present.contains(&(v, w)) {
                    state.add(v, w);
                    added = true;
                    break;
                }
            }
            if added {
                trace.beta_steps += 1;
            } else {
                trace.skipped += 1;
            }
        } else {
            let v = state.pick_by_outdegree(&mut rng, spec.delta_out);
            let w = state.nodes;
            state.nodes += 1;
            state.add(v, w);
            trace.gamma_steps += 1;
        }
    }

    let arcs: Vec<Arc> = state
        .srcs
        .iter()
        .zip(&state.dsts)
        .map(|(&s, &d)| Arc::new(s, d, weight(&mut rng, spec.weight_low, spec.weight_high)))
        .collect();
    let g = WeightedDigraph::new(
        state.nodes,
        arcs,
        WeightBounds::global(spec.weight_low as f64, spec.weight_high as f64),
    )?;
    Ok((g, trace))
}

struct Attachment {
    srcs: Vec<usize>,
    dsts: Vec<usize>,
    nodes: usize,
    present: std::collections::HashSet<(usize, usize)>,
}

impl Attachment {
    fn add(&mut self, v: usize, w: usize) {
        self.srcs.push(v);
        self.dsts.push(w);
        self.present.insert((v, w));
    }

    /// Endpoint of a uniformly chosen arc (probability ∝ degree) or, with the
    /// share `δ·N / (E + δ·N)`, a uniformly chosen node.
    fn pick(rng: &mut ChaCha8Rng, ends: &[usize], nodes: usize, delta: f64) -> usize {
        let e = ends.len() as f64;
        let extra = delta * nodes as f64;
        if rng.random::<f64>() * (e + extra) < e {
            ends[rng.random_range(0..ends.len() as u64) as usize]
        } else {
            rng.random_range(0..nodes as u64) as usize
        }
    }

    fn pick_by_indegree(&self, rng: &mut ChaCha8Rng, delta_in: f64) -> usize {
        Self::pick(rng, &self.dsts, self.nodes, delta_in)
    }

    fn pick_by_outdegree(&self, rng: &mut ChaCha8Rng, delta_out: f64) -> usize {
        Self::pick(rng, &self.srcs, self.nodes, delta_out)
    }
}

/// Multiplies every weight by `factor` and re-validates under `new_bounds`.
///
/// A product that overshoots its upper bound by at most a few ulps (as
/// `49 * (99 / 49)` can) is snapped onto the bound.
pub fn scale_weights(g: &WeightedDigraph, factor: f64, new_bounds: WeightBounds) -> Result<WeightedDigraph> {
    if !(factor.is_finite() && factor > 0.0) {
        return Err(Error::InvalidConfig(format!(
            "scale factor must be positive, got {factor}"
        )));
    }
    new_bounds.validate(g.node_count())?;
    let snap = |src: usize, w: f64| {
        let scaled = w * factor;
        let (low, high) = new_bounds.of(src);
        let slack = 4.0 * f64::EPSILON * high.abs().max(1.0);
        if scaled > high && scaled - high <= slack {
            high
        } else if scaled < low && low - scaled <= slack {
            low
        } else {
            scaled
        }
    };
    g.map_weights(new_bounds.clone(), snap)
}
