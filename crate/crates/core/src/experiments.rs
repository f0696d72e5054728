//! Rank-position comparisons between PageRank and the Black Hole Metric.
//!
//! Scores become 1-based rank positions, pairs of rankings become absolute
//! position differences, and those differences are summarized as an
//! empirical CDF. The scaling experiment ranks a graph, rescales its
//! weights, ranks it again and compares all three rankings.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;
use std::time::Instant;

use serde::Serialize;

use crate::blackhole::{blackhole_metric_on, transform, wariness};
use crate::error::{Error, Result};
use crate::generators::scale_weights;
use crate::graph::{WeightBounds, WeightedDigraph};
use crate::io::{load_edge_list, load_label_map, write_rank_csv, EdgeListFormat};
use crate::ranking::{pagerank, PageRankConfig};

/// Share of `N` kept on the x-axis of emitted CDF data.
pub const CDF_DISPLAY_FRACTION: f64 = 0.2;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum TiePolicy {
    /// Equal scores are ordered by ascending node index.
    ByNodeIndex,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankPositions {
    /// `positions[i]` is the 1-based rank of node `i`.
    pub positions: Vec<usize>,
    pub tie_policy: TiePolicy,
}

impl RankPositions {
    pub fn len(&self) -> usize {
        self.positions.len()
    }

    pub fn is_empty(&self) -> bool {
        self.positions.is_empty()
    }

    /// Node ids in rank order.
    pub fn order(&self) -> Vec<usize> {
        let mut order = vec![0; self.positions.len()];
        for (node, &pos) in self.positions.iter().enumerate() {
            order[pos - 1] = node;
        }
        order
    }
}

/// Sorts descending by score; ties go to the smaller node index.
pub fn rank_positions(scores: &[f64]) -> RankPositions {
    let mut order: Vec<usize> = (0..scores.len()).collect();
    order.sort_by(|&a, &b| scores[b].total_cmp(&scores[a]).then(a.cmp(&b)));
    let mut positions = vec![0; scores.len()];
    for (rank, node) in order.into_iter().enumerate() {
        positions[node] = rank + 1;
    }
    RankPositions {
        positions,
        tie_policy: TiePolicy::ByNodeIndex,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct CdfPoint {
    pub diff: usize,
    pub cum_freq: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankComparison {
    pub label: String,
    pub abs_diffs: Vec<usize>,
    /// One point per distinct difference, ascending.
    pub cdf: Vec<CdfPoint>,
}

impl RankComparison {
    /// Fraction of nodes whose position moved by at most `x`.
    pub fn cdf_at(&self, x: f64) -> f64 {
        self.cdf
            .iter()
            .take_while(|p| p.diff as f64 <= x)
            .last()
            .map_or(0.0, |p| p.cum_freq)
    }

    /// Smallest difference `x` with `cdf_at(x) >= q`.
    pub fn quantile(&self, q: f64) -> usize {
        self.cdf
            .iter()
            .find(|p| p.cum_freq >= q)
            .or(self.cdf.last())
            .map_or(0, |p| p.diff)
    }

    /// CDF points with `diff <= max_diff`.
    pub fn trimmed_cdf(&self, max_diff: f64) -> &[CdfPoint] {
        let end = self.cdf.partition_point(|p| p.diff as f64 <= max_diff);
        &self.cdf[..end]
    }

    pub fn changed_fraction(&self) -> f64 {
        if self.abs_diffs.is_empty() {
            return 0.0;
        }
        self.abs_diffs.iter().filter(|&&d| d > 0).count() as f64 / self.abs_diffs.len() as f64
    }

    pub fn write_cdf_csv<W: std::io::Write>(&self, max_diff: f64, mut out: W) -> Result<()> {
        let io = |e| Error::io("writing CDF", e);
        writeln!(out, "diff,cum_freq").map_err(io)?;
        for p in self.trimmed_cdf(max_diff) {
            writeln!(out, "{},{}", p.diff, p.cum_freq).map_err(io)?;
        }
        out.flush().map_err(io)
    }
}

pub fn compare_ranks(a: &RankPositions, b: &RankPositions, label: impl Into<String>) -> Result<RankComparison> {
    if a.len() != b.len() {
        return Err(Error::LengthMismatch {
            left: a.len(),
            right: b.len(),
        });
    }
    let n = a.len();
    let abs_diffs: Vec<usize> = a
        .positions
        .iter()
        .zip(&b.positions)
        .map(|(&x, &y)| x.abs_diff(y))
        .collect();

    let mut counts: BTreeMap<usize, usize> = BTreeMap::new();
    for &d in &abs_diffs {
        *counts.entry(d).or_default() += 1;
    }
    let mut running = 0;
    let cdf = counts
        .into_iter()
        .map(|(diff, c)| {
            running += c;
            CdfPoint {
                diff,
                cum_freq: running as f64 / n as f64,
            }
        })
        .collect();

    Ok(RankComparison {
        label: label.into(),
        abs_diffs,
        cdf,
    })
}

/// Result of checking that one CDF lies at or above another at given
/// quantiles of the reference.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DominanceCheck {
    pub x_points: Vec<usize>,
    pub reference: Vec<f64>,
    pub candidate: Vec<f64>,
}

impl DominanceCheck {
    pub fn holds(&self) -> bool {
        self.candidate.iter().zip(&self.reference).all(|(c, r)| c >= r)
    }
}

/// Evaluates both CDFs at the `quantiles` of `reference`'s differences.
pub fn dominance(reference: &RankComparison, candidate: &RankComparison, quantiles: &[f64]) -> DominanceCheck {
    let x_points: Vec<usize> = quantiles.iter().map(|&q| reference.quantile(q)).collect();
    DominanceCheck {
        reference: x_points.iter().map(|&x| reference.cdf_at(x as f64)).collect(),
        candidate: x_points.iter().map(|&x| candidate.cdf_at(x as f64)).collect(),
        x_points,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricRun {
    pub name: String,
    pub scores: Vec<f64>,
    pub positions: RankPositions,
    pub iterations: usize,
    pub converged: bool,
    pub residual: f64,
    pub black_hole: Option<f64>,
    pub wariness: Option<f64>,
    pub runtime_secs: f64,
}

impl MetricRun {
    fn pagerank(name: &str, g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<Self> {
        let start = Instant::now();
        let r = pagerank(g, cfg)?;
        Ok(Self {
            name: name.into(),
            positions: rank_positions(&r.scores),
            scores: r.scores,
            iterations: r.iterations,
            converged: r.converged,
            residual: r.residual,
            black_hole: None,
            wariness: None,
            runtime_secs: start.elapsed().as_secs_f64(),
        })
    }

    fn blackhole(name: &str, g: &WeightedDigraph, cfg: &PageRankConfig) -> Result<Self> {
        let start = Instant::now();
        let net = transform(g)?;
        let r = blackhole_metric_on(&net, cfg)?;
        let w = wariness(&net, &r);
        Ok(Self {
            name: name.into(),
            positions: rank_positions(&r.scores),
            iterations: r.iterations,
            converged: r.converged,
            residual: r.residual,
            black_hole: Some(r.black_hole),
            wariness: Some(w),
            scores: r.scores,
            runtime_secs: start.elapsed().as_secs_f64(),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopEntry {
    pub rank: usize,
    pub pagerank_label: String,
    pub pagerank_score: f64,
    pub blackhole_label: String,
    pub blackhole_score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ExperimentReport {
    pub name: String,
    pub nodes: usize,
    pub arcs: usize,
    pub config: PageRankConfig,
    pub runs: Vec<MetricRun>,
    pub comparisons: Vec<RankComparison>,
    /// `‖PR₁ − PR₂‖∞` for scaling experiments.
    pub pagerank_scale_deviation: Option<f64>,
    pub top: Vec<TopEntry>,
    pub labels: Vec<String>,
    /// Free-form provenance (seeds, generator spec, input path).
    pub provenance: BTreeMap<String, String>,
}

impl ExperimentReport {
    pub fn run(&self, name: &str) -> Option<&MetricRun> {
        self.runs.iter().find(|r| r.name == name)
    }

    pub fn comparison(&self, label: &str) -> Option<&RankComparison> {
        self.comparisons.iter().find(|c| c.label == label)
    }

    pub fn all_converged(&self) -> bool {
        self.runs.iter().all(|r| r.converged)
    }

    /// Largest difference kept in emitted CDF files.
    pub fn display_limit(&self) -> f64 {
        CDF_DISPLAY_FRACTION * self.nodes as f64
    }

    /// Summary without per-node vectors.
    pub fn manifest(&self) -> serde_json::Value {
        let runs: Vec<_> = self
            .runs
            .iter()
            .map(|r| {
                serde_json::json!({
                    "name": r.name,
                    "iterations": r.iterations,
                    "converged": r.converged,
                    "residual": r.residual,
                    "p_b": r.black_hole,
                    "wariness": r.wariness,
                    "runtime_secs": r.runtime_secs,
                })
            })
            .collect();
        let comparisons: Vec<_> = self
            .comparisons
            .iter()
            .map(|c| {
                serde_json::json!({
                    "label": c.label,
                    "file": cdf_file_name(&c.label),
                    "changed_fraction": c.changed_fraction(),
                    "median_diff": c.quantile(0.5),
                })
            })
            .collect();
        serde_json::json!({
            "experiment": self.name,
            "nodes": self.nodes,
            "arcs": self.arcs,
            "d": self.config.damping,
            "tol": self.config.tolerance,
            "max_iters": self.config.max_iterations,
            "zero_strength": format!("{:?}", self.config.zero_strength),
            "pagerank_scale_deviation": self.pagerank_scale_deviation,
            "cdf_display_limit": self.display_limit(),
            "runs": runs,
            "comparisons": comparisons,
            "top": self.top,
            "provenance": self.provenance,
        })
    }

    /// Writes `manifest.json`, one `cdf_*.csv` per comparison (trimmed for
    /// display) and one `rank_*.csv` per metric run.
    pub fn write_to_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        fs::create_dir_all(dir).map_err(|e| Error::io(format!("creating {}", dir.display()), e))?;
        let create = |name: String| {
            let path = dir.join(name);
            fs::File::create(&path)
                .map(std::io::BufWriter::new)
                .map_err(|e| Error::io(format!("creating {}", path.display()), e))
        };
        for c in &self.comparisons {
            c.write_cdf_csv(self.display_limit(), create(cdf_file_name(&c.label))?)?;
        }
        for r in &self.runs {
            let mut header = vec![
                ("d", self.config.damping.to_string()),
                ("tol", format!("{:e}", self.config.tolerance)),
                ("iterations", r.iterations.to_string()),
            ];
            if let (Some(pb), Some(w)) = (r.black_hole, r.wariness) {
                header.push(("p_b", pb.to_string()));
                header.push(("wariness", w.to_string()));
            }
            write_rank_csv(
                &self.labels,
                &r.scores,
                &r.positions.positions,
                Some(&header),
                create(format!("rank_{}.csv", slug(&r.name)))?,
            )?;
        }
        let manifest = serde_json::to_string_pretty(&self.manifest()).expect("manifest is valid JSON");
        fs::write(dir.join("manifest.json"), manifest + "\n").map_err(|e| Error::io("writing manifest.json", e))
    }
}

fn slug(s: &str) -> String {
    s.chars()
        .filter_map(|c| match c {
            'a'..='z' | '0'..='9' => Some(c),
            'A'..='Z' => Some(c.to_ascii_lowercase()),
            '-' | ' ' | '_' => Some('_'),
            _ => None,
        })
        .collect::<String>()
        .split('_')
        .filter(|s| !s.is_empty())
        .collect::<Vec<_>>()
        .join("_")
}

pub fn cdf_file_name(label: &str) -> String {
    format!("cdf_{}.csv", slug(label))
}

/// Ranks `g` with PageRank and the Black Hole Metric under `full_bounds`,
/// then again after multiplying every weight by `factor`, and compares
/// `PR − BH1`, `PR − BH2` and `BH1 − BH2`.
///
/// Fails with [`Error::ScaleInvarianceViolated`] when the two PageRank
/// vectors differ by more than `10 · tol`.
pub fn run_scaling_experiment(
    g: &WeightedDigraph,
    factor: f64,
    full_bounds: &WeightBounds,
    cfg: &PageRankConfig,
) -> Result<ExperimentReport> {
    let base = g.with_bounds(full_bounds.clone())?;
    let scaled = scale_weights(&base, factor, full_bounds.clone())?;

    let (pr1, pr2, bh1, bh2) = std::thread::scope(|s| {
        let pr1 = s.spawn(|| MetricRun::pagerank("PR1", &base, cfg));
        let pr2 = s.spawn(|| MetricRun::pagerank("PR2", &scaled, cfg));
        let bh1 = s.spawn(|| MetricRun::blackhole("BH1", &base, cfg));
        let bh2 = s.spawn(|| MetricRun::blackhole("BH2", &scaled, cfg));
        (
            pr1.join().expect("PR1 worker panicked"),
            pr2.join().expect("PR2 worker panicked"),
            bh1.join().expect("BH1 worker panicked"),
            bh2.join().expect("BH2 worker panicked"),
        )
    });
    let (pr1, pr2, bh1, bh2) = (pr1?, pr2?, bh1?, bh2?);

    let deviation = pr1
        .scores
        .iter()
        .zip(&pr2.scores)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    let allowed = 10.0 * cfg.tolerance;
    if deviation > allowed {
        return Err(Error::ScaleInvarianceViolated { deviation, allowed });
    }

    let comparisons = vec![
        compare_ranks(&pr1.positions, &bh1.positions, "PR - BH1")?,
        compare_ranks(&pr1.positions, &bh2.positions, "PR - BH2")?,
        compare_ranks(&bh1.positions, &bh2.positions, "BH1 - BH2")?,
    ];
    let mut pr = pr1;
    pr.name = "PR".into();

    let mut provenance = BTreeMap::new();
    provenance.insert("factor".into(), factor.to_string());
    provenance.insert("full_bounds".into(), format!("{full_bounds:?}"));

    Ok(ExperimentReport {
        name: "scaling".into(),
        nodes: g.node_count(),
        arcs: g.arc_count(),
        config: cfg.clone(),
        runs: vec![pr, bh1, bh2],
        comparisons,
        pagerank_scale_deviation: Some(deviation),
        top: Vec::new(),
        labels: (0..g.node_count()).map(|i| i.to_string()).collect(),
        provenance,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct AdvogatoOptions {
    pub low: f64,
    pub high: f64,
    pub top_k: usize,
    pub format: EdgeListFormat,
    /// Optional `id name` file mapping dataset ids to user names.
    pub labels: Option<std::path::PathBuf>,
}

impl Default for AdvogatoOptions {
    fn default() -> Self {
        Self {
            low: 0.6,
            high: 1.0,
            top_k: 10,
            format: EdgeListFormat::konect(),
            labels: None,
        }
    }
}

/// Certification levels of the Advogato trust network.
pub const ADVOGATO_LEVELS: [f64; 3] = [0.6, 0.8, 1.0];

/// PageRank versus the Black Hole Metric on a trust network with a global
/// scale, plus a side-by-side top-K table.
pub fn advogato_experiment(
    path: impl AsRef<Path>,
    cfg: &PageRankConfig,
    opts: &AdvogatoOptions,
) -> Result<ExperimentReport> {
    let path = path.as_ref();
    let el = load_edge_list(path, opts.format)?;
    let g = el.build(WeightBounds::global(opts.low, opts.high))?;

    let labels: Vec<String> = match &opts.labels {
        Some(p) => {
            let names = load_label_map(p)?;
            el.labels
                .iter()
                .map(|id| names.get(id).cloned().unwrap_or_else(|| id.clone()))
                .collect()
        }
        None => el.labels.clone(),
    };
    let unexpected = el
        .arcs
        .iter()
        .filter(|a| !ADVOGATO_LEVELS.iter().any(|&l| (a.weight - l).abs() < 1e-9))
        .count();
    if unexpected > 0 {
        log::warn!("{unexpected} arcs carry weights outside the certification levels {ADVOGATO_LEVELS:?}");
    }

    let (pr, bh) = std::thread::scope(|s| {
        let pr = s.spawn(|| MetricRun::pagerank("PR", &g, cfg));
        let bh = s.spawn(|| MetricRun::blackhole("BH", &g, cfg));
        (
            pr.join().expect("PR worker panicked"),
            bh.join().expect("BH worker panicked"),
        )
    });
    let (pr, bh) = (pr?, bh?);

    let pr_order = pr.positions.order();
    let bh_order = bh.positions.order();
    let top = (0..opts.top_k.min(g.node_count()))
        .map(|k| TopEntry {
            rank: k + 1,
            pagerank_label: labels[pr_order[k]].clone(),
            pagerank_score: pr.scores[pr_order[k]],
            blackhole_label: labels[bh_order[k]].clone(),
            blackhole_score: bh.scores[bh_order[k]],
        })
        .collect();

    let comparisons = vec![compare_ranks(&pr.positions, &bh.positions, "PR - BH")?];
    let mut provenance = BTreeMap::new();
    provenance.insert("input".into(), path.display().to_string());
    provenance.insert("bounds".into(), format!("[{}, {}]", opts.low, opts.high));
    provenance.insert("arc_lines".into(), el.lines_read.to_string());
    provenance.insert("self_loops_dropped".into(), el.self_loops_dropped.to_string());
    provenance.insert("duplicates_collapsed".into(), el.duplicates_collapsed.to_string());
    provenance.insert("unexpected_weights".into(), unexpected.to_string());

    Ok(ExperimentReport {
        name: "advogato".into(),
        nodes: g.node_count(),
        arcs: g.arc_count(),
        config: cfg.clone(),
        runs: vec![pr, bh],
        comparisons,
        pagerank_scale_deviation: None,
        top,
        labels,
        provenance,
    })
}
