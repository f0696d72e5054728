//! Dense construction of the bordered transition matrix.
//!
//! Builds `A'`, `S'`, `T'` and `V'` explicitly from the raw arcs and forms
//! `M' = d (A' + S' V') + (1 - d) T' V'`, an `(N+1)×(N+1)` matrix whose last
//! index is the black hole. Power iteration on `M'ᵀ` is slow but shares no
//! code with the sparse solver, which makes it a reference for testing.

use crate::error::{Error, Result};
use crate::graph::WeightedDigraph;
use crate::ranking::PageRankConfig;

use super::BlackHoleResult;

pub const DEFAULT_DENSE_LIMIT: usize = 200;

/// Square row-major matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseMatrix {
    dim: usize,
    data: Vec<f64>,
}

impl DenseMatrix {
    pub fn zeros(dim: usize) -> Self {
        Self {
            dim,
            data: vec![0.0; dim * dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.dim + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.dim + j] = v;
    }

    pub fn row(&self, i: usize) -> &[f64] {
        &self.data[i * self.dim..(i + 1) * self.dim]
    }

    pub fn row_sums(&self) -> Vec<f64> {
        (0..self.dim).map(|i| self.row(i).iter().sum()).collect()
    }

    /// `y = Mᵀ x`.
    pub fn transpose_mul(&self, x: &[f64]) -> Vec<f64> {
        let mut y = vec![0.0; self.dim];
        for (i, &xi) in x.iter().enumerate() {
            for (yj, &m) in y.iter_mut().zip(self.row(i)) {
                *yj += m * xi;
            }
        }
        y
    }
}

/// Assembles `M'` for `g`. The black hole is index `N`.
pub fn assemble_bordered(g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<DenseMatrix> {
    let n = g.node_count();
    cfg.validate(n)?;
    let d = cfg.damping;
    let dim = n + 1;
    let bh = n;

    // A' = [[Ā, B], [0, 0]]
    let mut a_prime = DenseMatrix::zeros(dim);
    for i in 0..n {
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
        let weights: Vec<f64> = arcs.iter().map(|a| a.weight).collect();
        for a in arcs {
            a_prime.set(i, a.dst, super::bh_arc_weight(a.weight, l, h, arcs.len())?);
        }
        a_prime.set(i, bh, super::black_hole_weight(&weights, l, h)?);
    }

    // S' = (S, 1/d), T' = (1, .., 1, 0), V' = (V, 0)
    let mut s_prime = vec![0.0; dim];
    for i in 0..n {
        if g.is_sink(i) {
            s_prime[i] = 1.0;
        }
    }
    s_prime[bh] = 1.0 / d;
    let mut t_prime = vec![1.0; dim];
    t_prime[bh] = 0.0;
    let mut v_prime = cfg.teleport_vector(n);
    v_prime.push(0.0);

    let mut m = DenseMatrix::zeros(dim);
    for i in 0..dim {
        for j in 0..dim {
            let value = d * (a_prime.get(i, j) + s_prime[i] * v_prime[j]) + (1.0 - d) * t_prime[i] * v_prime[j];
            m.set(i, j, value);
        }
    }
    Ok(m)
}

pub fn dense_oracle(g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<BlackHoleResult> {
    dense_oracle_with_limit(g, cfg, DEFAULT_DENSE_LIMIT)
}

/// Power iteration on the assembled `M'` from `P'_0 = (Vᵀ, 0)`.
pub fn dense_oracle_with_limit(g: &WeightedDigraph, cfg: &PageRankConfig, limit: usize) -> Result<BlackHoleResult> {
    let n = g.node_count();
    if n > limit {
        return Err(Error::TooLarge { n, limit });
    }
    let m = assemble_bordered(g, cfg)?;
    let mut p = cfg.teleport_vector(n);
    p.push(0.0);

    let mut residual = f64::INFINITY;
    let mut iterations = 0;
    while iterations < cfg.max_iterations {
        let next = m.transpose_mul(&p);
        residual = p.iter().zip(&next).map(|(a, b)| (a - b).abs()).sum();
        p = next;
        iterations += 1;
        if residual < cfg.tolerance {
            break;
        }
    }

    let black_hole = p.pop().unwrap_or(0.0);
    Ok(BlackHoleResult {
        scores: p,
        black_hole,
        iterations,
        converged: residual < cfg.tolerance,
        residual,
    })
}
