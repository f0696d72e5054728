//! Weighted directed graphs with bounded arc weights.
//!
//! A [`WeightedDigraph`] is immutable once built. Arcs are kept sorted by
//! `(src, dst)` so each node's outgoing arcs form a contiguous slice.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub type NodeId = usize;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Arc {
    pub src: NodeId,
    pub dst: NodeId,
    pub weight: f64,
}

impl Arc {
    pub fn new(src: NodeId, dst: NodeId, weight: f64) -> Self {
        Self { src, dst, weight }
    }
}

impl From<(NodeId, NodeId, f64)> for Arc {
    fn from((src, dst, weight): (NodeId, NodeId, f64)) -> Self {
        Self { src, dst, weight }
    }
}

/// The interval `[low, high]` each node's outgoing weights must lie in.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub enum WeightBounds {
    Global { low: f64, high: f64 },
    PerNode(Vec<(f64, f64)>),
}

impl WeightBounds {
    pub fn global(low: f64, high: f64) -> Self {
        WeightBounds::Global { low, high }
    }

    /// Global bounds `[0, max]` enclosing the given weights. Useful when only
    /// PageRank is needed and the file carries no scale.
    pub fn enclosing<I: IntoIterator<Item = f64>>(weights: I) -> Self {
        let max = weights.into_iter().fold(0.0_f64, f64::max);
        WeightBounds::Global {
            low: 0.0,
            high: if max > 0.0 { max } else { 1.0 },
        }
    }

    /// `(low, high)` for `node`. Caller guarantees `node` is in range.
    #[inline]
    pub fn of(&self, node: NodeId) -> (f64, f64) {
        match self {
            WeightBounds::Global { low, high } => (*low, *high),
            WeightBounds::PerNode(v) => v[node],
        }
    }

    pub fn validate(&self, n: usize) -> Result<()> {
        let check = |node: usize, low: f64, high: f64| {
            if !(low.is_finite() && high.is_finite()) || low < 0.0 || high <= low {
                Err(Error::InvalidBounds { node, low, high })
            } else {
                Ok(())
            }
        };
        match self {
            WeightBounds::Global { low, high } => check(0, *low, *high),
            WeightBounds::PerNode(v) => {
                if v.len() != n {
                    return Err(Error::BoundsLength {
                        expected: n,
                        got: v.len(),
                    });
                }
                v.iter().enumerate().try_for_each(|(i, &(l, h))| check(i, l, h))
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct WeightedDigraph {
    n: usize,
    arcs: Vec<Arc>,
    /// `offsets[i]..offsets[i + 1]` indexes the outgoing arcs of node `i`.
    offsets: Vec<usize>,
    bounds: WeightBounds,
}

impl WeightedDigraph {
    /// Validates and builds a graph. Arcs may be given in any order.
    pub fn new<I, A>(n: usize, arcs: I, bounds: WeightBounds) -> Result<Self>
    where
        I: IntoIterator<Item = A>,
        A: Into<Arc>,
    {
        if n == 0 {
            return Err(Error::NoNodes);
        }
        bounds.validate(n)?;

        let mut arcs: Vec<Arc> = arcs.into_iter().map(Into::into).collect();
        for a in &arcs {
            if a.src >= n || a.dst >= n {
                return Err(Error::NodeIndexOutOfRange {
                    src: a.src,
                    dst: a.dst,
                    n,
                });
            }
            if a.src == a.dst {
                return Err(Error::SelfLoop { node: a.src });
            }
            let (low, high) = bounds.of(a.src);
            if !(a.weight >= low && a.weight <= high) {
                return Err(Error::WeightOutOfBounds {
                    src: a.src,
                    dst: a.dst,
                    weight: a.weight,
                    low,
                    high,
                });
            }
        }

        arcs.sort_by_key(|a| (a.src, a.dst));
        if let Some(w) = arcs.windows(2).find(|w| w[0].src == w[1].src && w[0].dst == w[1].dst) {
            return Err(Error::DuplicateArc {
                src: w[0].src,
                dst: w[0].dst,
            });
        }

        let mut offsets = vec![0usize; n + 1];
        for a in &arcs {
            offsets[a.src + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }

        Ok(Self {
            n,
            arcs,
            offsets,
            bounds,
        })
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// All arcs, sorted by `(src, dst)`.
    pub fn arcs(&self) -> &[Arc] {
        &self.arcs
    }

    pub fn out_arcs(&self, node: NodeId) -> &[Arc] {
        &self.arcs[self.offsets[node]..self.offsets[node + 1]]
    }

    pub fn outdegree(&self, node: NodeId) -> usize {
        self.offsets[node + 1] - self.offsets[node]
    }

    pub fn out_strength(&self, node: NodeId) -> f64 {
        self.out_arcs(node).iter().map(|a| a.weight).sum()
    }

    pub fn indegrees(&self) -> Vec<usize> {
        let mut deg = vec![0; self.n];
        for a in &self.arcs {
            deg[a.dst] += 1;
        }
        deg
    }

    pub fn bounds(&self) -> &WeightBounds {
        &self.bounds
    }

    pub fn is_sink(&self, node: NodeId) -> bool {
        self.outdegree(node) == 0
    }

    pub fn sink_vector(&self) -> SinkVector {
        sink_vector(self)
    }

    /// Same topology and weights under a different scale.
    pub fn with_bounds(&self, bounds: WeightBounds) -> Result<Self> {
        Self::new(self.n, self.arcs.iter().copied(), bounds)
    }

    /// Same topology with every weight replaced by `f(src, weight)`.
    pub fn map_weights<F>(&self, bounds: WeightBounds, mut f: F) -> Result<Self>
    where
        F: FnMut(NodeId, f64) -> f64,
    {
        let arcs: Vec<Arc> = self
            .arcs
            .iter()
            .map(|a| Arc::new(a.src, a.dst, f(a.src, a.weight)))
            .collect();
        Self::new(self.n, arcs, bounds)
    }
}

/// `s_i = 1` exactly for nodes without outgoing arcs.
#[derive(Debug, Clone, PartialEq)]
pub struct SinkVector(Vec<bool>);

impl SinkVector {
    pub fn from_flags(flags: Vec<bool>) -> Self {
        Self(flags)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    #[inline]
    pub fn is_sink(&self, node: NodeId) -> bool {
        self.0[node]
    }

    /// Entry `s_i` as a number.
    #[inline]
    pub fn value(&self, node: NodeId) -> f64 {
        if self.0[node] {
            1.0
        } else {
            0.0
        }
    }

    pub fn to_vec(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.value(i)).collect()
    }

    pub fn sinks(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.0.iter().enumerate().filter_map(|(i, &s)| s.then_some(i))
    }

    /// `Sᵀ x`.
    pub fn dot(&self, x: &[f64]) -> f64 {
        self.sinks().map(|i| x[i]).sum()
    }
}

pub fn sink_vector(g: &WeightedDigraph) -> SinkVector {
    SinkVector((0..g.node_count()).map(|i| g.is_sink(i)).collect())
}
