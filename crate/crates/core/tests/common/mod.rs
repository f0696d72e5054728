//! Shared fixtures and reference computations for integration tests.

#![allow(dead_code)]

use bhrank::{Arc, PageRankConfig, WeightBounds, WeightedDigraph};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn toy() -> WeightedDigraph {
    let arcs = [
        (2, 1, 1.0),
        (2, 3, 1.0),
        (3, 2, 9.0),
        (3, 6, 9.0),
        (4, 1, 1.0),
        (4, 5, 1.0),
        (5, 4, 9.0),
        (5, 6, 9.0),
    ]
    .map(|(s, d, w)| (s - 1, d - 1, w));
    WeightedDigraph::new(6, arcs, WeightBounds::global(0.0, 10.0)).unwrap()
}

#[derive(Debug, Clone, Copy)]
pub enum Shape {
    /// Independent arcs with a random density.
    Random,
    /// No arcs at all.
    AllSinks,
    /// Two halves with no arcs between them.
    Disconnected,
}

/// Random bounded graph on `2..=max_n` nodes. Bounds are global or per-node
/// at random, weights uniform inside each node's scale with occasional hits
/// on either end.
pub fn random_graph(rng: &mut ChaCha8Rng, max_n: usize, shape: Shape) -> WeightedDigraph {
    let n = rng.random_range(2..=max_n);
    let bounds = if rng.random_bool(0.5) {
        let low = rng.random_range(0.0..5.0);
        WeightBounds::global(low, low + rng.random_range(0.5..20.0))
    } else {
        WeightBounds::PerNode(
            (0..n)
                .map(|_| {
                    let low = rng.random_range(0.0..5.0);
                    (low, low + rng.random_range(0.5..20.0))
                })
                .collect(),
        )
    };
    let density = rng.random_range(0.0..0.5);
    let half = n / 2;
    let mut arcs = Vec::new();
    if !matches!(shape, Shape::AllSinks) {
        for i in 0..n {
            for j in 0..n {
                if i == j || !rng.random_bool(density) {
                    continue;
                }
                if matches!(shape, Shape::Disconnected) && (i < half) != (j < half) {
                    continue;
                }
                let (l, h) = bounds.of(i);
                let w = match rng.random_range(0..10) {
                    0 => l,
                    1 => h,
                    _ => rng.random_range(l..=h),
                };
                arcs.push(Arc::new(i, j, w));
            }
        }
    }
    WeightedDigraph::new(n, arcs, bounds).unwrap()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// Same topology with every weight set to its node's upper bound.
pub fn saturate(g: &WeightedDigraph) -> WeightedDigraph {
    let bounds = g.bounds().clone();
    g.map_weights(bounds.clone(), |src, _| bounds.of(src).1).unwrap()
}

/// Dense PageRank: assembles `M = d (A + S V) + (1 - d) T V` entry by entry
/// from the raw weights and iterates `P ← Mᵀ P` from `V`.
pub fn dense_pagerank(g: &WeightedDigraph, cfg: &PageRankConfig) -> Vec<f64> {
    let n = g.node_count();
    let d = cfg.damping;
    let v = cfg.teleport_vector(n);
    let mut a = vec![vec![0.0; n]; n];
    for i in 0..n {
        let total: f64 = g.out_arcs(i).iter().map(|a| a.weight).sum();
        for arc in g.out_arcs(i) {
            a[i][arc.dst] = arc.weight / total;
        }
    }
    let mut m = vec![vec![0.0; n]; n];
    for i in 0..n {
        let s = if g.outdegree(i) == 0 { 1.0 } else { 0.0 };
        for j in 0..n {
            m[i][j] = d * (a[i][j] + s * v[j]) + (1.0 - d) * v[j];
        }
    }
    let mut p = v.clone();
    for _ in 0..cfg.max_iterations {
        let mut next = vec![0.0; n];
        for i in 0..n {
            for j in 0..n {
                next[j] += m[i][j] * p[i];
            }
        }
        let delta: f64 = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        if delta < cfg.tolerance {
            break;
        }
    }
    p
}

pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

/// True when every non-sink node has positive outgoing weight.
pub fn has_positive_strengths(g: &WeightedDigraph) -> bool {
    (0..g.node_count()).all(|i| g.is_sink(i) || g.out_strength(i) > 0.0)
}
