//! Edge-list files, metadata sidecars and rank CSVs.
//!
//! Edge lists are whitespace separated `src dst weight` lines. Lines starting
//! with `#` or `%` are comments, which covers KONECT headers. Columns after
//! the weight (KONECT timestamps) are ignored.
//!
//! The metadata sidecar is a flat `key = value` file:
//!
//! ```text
//! nodes = 3
//! label.0 = alice
//! label.1 = bob
//! label.2 = carol
//! bounds = global
//! bounds.low = 0
//! bounds.high = 10
//! ```
//!
//! Per-node scales use `bounds = per-node` with one `bound.<index> = low high`
//! line per node.

use std::collections::{BTreeMap, HashMap};
use std::fs::File;
use std::io::{BufRead, BufReader, BufWriter, Read, Write};
use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::graph::{Arc, WeightBounds, WeightedDigraph};

/// How node identifiers in the first two columns are read.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum IdKind {
    /// Any token is a label; dense indices follow first appearance.
    #[default]
    Token,
    /// Identifiers must be non-negative integers; dense indices follow
    /// ascending numeric order.
    Integer,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum SelfLoopPolicy {
    #[default]
    Reject,
    /// Drop the line and count it.
    Drop,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct EdgeListFormat {
    pub ids: IdKind,
    pub self_loops: SelfLoopPolicy,
}

impl EdgeListFormat {
    /// Integer ids, self-loops dropped.
    pub fn konect() -> Self {
        Self {
            ids: IdKind::Integer,
            self_loops: SelfLoopPolicy::Drop,
        }
    }
}

/// A parsed edge list, before weight bounds are attached.
#[derive(Debug, Clone, PartialEq)]
pub struct EdgeList {
    /// Original identifier of each dense index.
    pub labels: Vec<String>,
    pub arcs: Vec<Arc>,
    /// Arc lines that repeated an earlier `(src, dst)`; the last one wins.
    pub duplicates_collapsed: usize,
    pub self_loops_dropped: usize,
    /// Arc lines read from the input, including dropped and collapsed ones.
    pub lines_read: usize,
}

impl EdgeList {
    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.labels.iter().position(|l| l == label)
    }

    pub fn build(&self, bounds: WeightBounds) -> Result<WeightedDigraph> {
        WeightedDigraph::new(self.labels.len(), self.arcs.iter().copied(), bounds)
    }

    /// Builds with bounds just wide enough for the observed weights.
    pub fn build_unbounded(&self) -> Result<WeightedDigraph> {
        self.build(WeightBounds::enclosing(self.arcs.iter().map(|a| a.weight)))
    }
}

pub fn parse_edge_list<R: Read>(reader: R, format: EdgeListFormat) -> Result<EdgeList> {
    parse_edge_list_seeded(reader, format, &[], None)
}

/// Parses an edge list. `seed_labels` pre-assigns indices `0..seed.len()`,
/// which keeps nodes without arcs and a fixed index order.
pub fn parse_edge_list_seeded<R: Read>(
    reader: R,
    format: EdgeListFormat,
    seed_labels: &[String],
    path: Option<&Path>,
) -> Result<EdgeList> {
    let parse_err = |line: usize, reason: String| Error::Parse {
        path: path.map(Path::to_path_buf),
        line,
        reason,
    };

    let mut raw: Vec<(String, String, f64)> = Vec::new();
    let mut self_loops_dropped = 0;
    let reader = BufReader::new(reader);
    for (idx, line) in reader.lines().enumerate() {
        let lineno = idx + 1;
        let line = line.map_err(|e| Error::io(format!("reading line {lineno}"), e))?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') || trimmed.starts_with('%') {
            continue;
        }
        let mut fields = trimmed.split_whitespace();
        let (Some(src), Some(dst)) = (fields.next(), fields.next()) else {
            return Err(parse_err(lineno, "expected `src dst weight`".into()));
        };
        let Some(weight) = fields.next() else {
            return Err(parse_err(lineno, "missing weight column".into()));
        };
        if format.ids == IdKind::Integer {
            for tok in [src, dst] {
                if tok.parse::<u64>().is_err() {
                    return Err(parse_err(
                        lineno,
                        format!("node id `{tok}` is not a non-negative integer"),
                    ));
                }
            }
        }
        let weight: f64 = weight
            .parse()
            .map_err(|_| parse_err(lineno, format!("weight `{weight}` is not a number")))?;
        if !weight.is_finite() {
            return Err(parse_err(lineno, format!("weight `{weight}` is not finite")));
        }
        if src == dst {
            match format.self_loops {
                SelfLoopPolicy::Reject => return Err(parse_err(lineno, format!("self-loop on node `{src}`"))),
                SelfLoopPolicy::Drop => {
                    self_loops_dropped += 1;
                    continue;
                }
            }
        }
        raw.push((src.to_owned(), dst.to_owned(), weight));
    }

    if raw.is_empty() {
        return Err(Error::EmptyGraph);
    }

    let mut labels: Vec<String> = seed_labels.to_vec();
    let mut index: HashMap<String, usize> = labels.iter().enumerate().map(|(i, l)| (l.clone(), i)).collect();
    match format.ids {
        IdKind::Token => {
            for (s, d, _) in &raw {
                for tok in [s, d] {
                    if !index.contains_key(tok) {
                        index.insert(tok.clone(), labels.len());
                        labels.push(tok.clone());
                    }
                }
            }
        }
        IdKind::Integer => {
            let mut fresh: Vec<(u64, &String)> = raw
                .iter()
                .flat_map(|(s, d, _)| [s, d])
                .filter(|t| !index.contains_key(*t))
                .map(|t| (t.parse::<u64>().expect("validated above"), t))
                .collect();
            fresh.sort();
            fresh.dedup_by(|a, b| a.0 == b.0);
            for (_, tok) in fresh {
                index.insert(tok.clone(), labels.len());
                labels.push(tok.clone());
            }
        }
    }

    let lines_read = raw.len() + self_loops_dropped;
    let mut last: BTreeMap<(usize, usize), f64> = BTreeMap::new();
    let mut duplicates_collapsed = 0;
    for (s, d, w) in raw {
        if last.insert((index[&s], index[&d]), w).is_some() {
            duplicates_collapsed += 1;
        }
    }
    if duplicates_collapsed > 0 {
        log::warn!("collapsed {duplicates_collapsed} duplicate arcs (kept the last occurrence)");
    }
    if self_loops_dropped > 0 {
        log::warn!("dropped {self_loops_dropped} self-loops");
    }

    Ok(EdgeList {
        labels,
        arcs: last.into_iter().map(|((s, d), w)| Arc::new(s, d, w)).collect(),
        duplicates_collapsed,
        self_loops_dropped,
        lines_read,
    })
}

pub fn load_edge_list(path: impl AsRef<Path>, format: EdgeListFormat) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    parse_edge_list_seeded(file, format, &[], Some(path))
}

/// Loads an edge list whose node set and index order come from `meta`.
pub fn load_edge_list_with_metadata(
    path: impl AsRef<Path>,
    format: EdgeListFormat,
    meta: &Metadata,
) -> Result<EdgeList> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    parse_edge_list_seeded(file, format, &meta.labels, Some(path))
}

/// Writes `src dst weight` lines using `labels` (or dense indices when
/// `labels` is `None`).
pub fn write_edge_list<W: Write>(g: &WeightedDigraph, labels: Option<&[String]>, mut out: W) -> Result<()> {
    let io = |e| Error::io("writing edge list", e);
    for a in g.arcs() {
        match labels {
            Some(l) => writeln!(out, "{} {} {}", l[a.src], l[a.dst], a.weight).map_err(io)?,
            None => writeln!(out, "{} {} {}", a.src, a.dst, a.weight).map_err(io)?,
        }
    }
    out.flush().map_err(io)
}

pub fn save_edge_list(g: &WeightedDigraph, labels: Option<&[String]>, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let file = File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
    write_edge_list(g, labels, BufWriter::new(file))
}

/// Contents of a metadata sidecar.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct Metadata {
    pub labels: Vec<String>,
    pub bounds: Option<WeightBounds>,
}

impl Metadata {
    pub fn for_graph(g: &WeightedDigraph, labels: Option<&[String]>) -> Self {
        Self {
            labels: match labels {
                Some(l) => l.to_vec(),
                None => (0..g.node_count()).map(|i| i.to_string()).collect(),
            },
            bounds: Some(g.bounds().clone()),
        }
    }

    pub fn write<W: Write>(&self, mut out: W) -> Result<()> {
        let io = |e| Error::io("writing metadata", e);
        writeln!(out, "nodes = {}", self.labels.len()).map_err(io)?;
        for (i, l) in self.labels.iter().enumerate() {
            writeln!(out, "label.{i} = {l}").map_err(io)?;
        }
        match &self.bounds {
            None => {}
            Some(WeightBounds::Global { low, high }) => {
                writeln!(out, "bounds = global\nbounds.low = {low}\nbounds.high = {high}").map_err(io)?;
            }
            Some(WeightBounds::PerNode(v)) => {
                writeln!(out, "bounds = per-node").map_err(io)?;
                for (i, (l, h)) in v.iter().enumerate() {
                    writeln!(out, "bound.{i} = {l} {h}").map_err(io)?;
                }
            }
        }
        out.flush().map_err(io)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(format!("creating {}", path.display()), e))?;
        self.write(BufWriter::new(file))
    }

    pub fn parse<R: Read>(reader: R) -> Result<Self> {
        Self::parse_from(reader, None)
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
        Self::parse_from(file, Some(path.to_path_buf()))
    }

    fn parse_from<R: Read>(reader: R, path: Option<PathBuf>) -> Result<Self> {
        let err = |line: usize, reason: String| Error::Parse {
            path: path.clone(),
            line,
            reason,
        };
        let mut kv: Vec<(usize, String, String)> = Vec::new();
        for (idx, line) in BufReader::new(reader).lines().enumerate() {
            let line = line.map_err(|e| Error::io("reading metadata", e))?;
            let t = line.trim();
            if t.is_empty() || t.starts_with('#') {
                continue;
            }
            let Some((k, v)) = t.split_once('=') else {
                return Err(err(idx + 1, "expected `key = value`".into()));
            };
            kv.push((idx + 1, k.trim().to_owned(), v.trim().to_owned()));
        }

        let num = |line: usize, s: &str| -> Result<f64> {
            s.parse::<f64>()
                .map_err(|_| err(line, format!("`{s}` is not a number")))
        };

        let mut nodes: Option<usize> = None;
        let mut labels: BTreeMap<usize, String> = BTreeMap::new();
        let mut mode: Option<String> = None;
        let (mut low, mut high) = (None, None);
        let mut per_node: BTreeMap<usize, (f64, f64)> = BTreeMap::new();
        for (line, k, v) in &kv {
            let line = *line;
            match k.as_str() {
                "nodes" => nodes = Some(v.parse().map_err(|_| err(line, format!("bad node count `{v}`")))?),
                "bounds" => mode = Some(v.clone()),
                "bounds.low" => low = Some(num(line, v)?),
                "bounds.high" => high = Some(num(line, v)?),
                _ => {
                    if let Some(i) = k.strip_prefix("label.") {
                        let i: usize = i.parse().map_err(|_| err(line, format!("bad label key `{k}`")))?;
                        labels.insert(i, v.clone());
                    } else if let Some(i) = k.strip_prefix("bound.") {
                        let i: usize = i.parse().map_err(|_| err(line, format!("bad bound key `{k}`")))?;
                        let mut parts = v.split_whitespace();
                        let (Some(l), Some(h), None) = (parts.next(), parts.next(), parts.next()) else {
                            return Err(err(line, "per-node bound needs `low high`".into()));
                        };
                        per_node.insert(i, (num(line, l)?, num(line, h)?));
                    } else {
                        return Err(err(line, format!("unknown key `{k}`")));
                    }
                }
            }
        }

        let n = nodes.unwrap_or(labels.len());
        if !labels.is_empty() && (labels.len() != n || labels.keys().copied().ne(0..n)) {
            return Err(err(0, format!("labels must cover indices 0..{n} exactly")));
        }
        let bounds = match mode.as_deref() {
            None => None,
            Some("global") => match (low, high) {
                (Some(low), Some(high)) => Some(WeightBounds::Global { low, high }),
                _ => return Err(err(0, "global bounds need bounds.low and bounds.high".into())),
            },
            Some("per-node") => {
                if per_node.len() != n || per_node.keys().copied().ne(0..n) {
                    return Err(err(0, format!("per-node bounds must cover indices 0..{n} exactly")));
                }
                Some(WeightBounds::PerNode(per_node.into_values().collect()))
            }
            Some(other) => return Err(err(0, format!("unknown bounds mode `{other}`"))),
        };
        Ok(Self {
            labels: labels.into_values().collect(),
            bounds,
        })
    }
}

/// Reads a two-column `id label` file (e.g. user names for KONECT ids).
pub fn load_label_map(path: impl AsRef<Path>) -> Result<HashMap<String, String>> {
    let path = path.as_ref();
    let file = File::open(path).map_err(|e| Error::io(format!("opening {}", path.display()), e))?;
    let mut map = HashMap::new();
    for (idx, line) in BufReader::new(file).lines().enumerate() {
        let line = line.map_err(|e| Error::io("reading labels", e))?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') || t.starts_with('%') {
            continue;
        }
        let mut parts = t.splitn(2, char::is_whitespace);
        let (Some(id), Some(label)) = (parts.next(), parts.next()) else {
            return Err(Error::Parse {
                path: Some(path.to_path_buf()),
                line: idx + 1,
                reason: "expected `id label`".into(),
            });
        };
        map.insert(id.to_owned(), label.trim().to_owned());
    }
    Ok(map)
}

/// Writes `node_label,score,rank_position` rows in node order, optionally
/// preceded by a `# key=value,...` comment line.
pub fn write_rank_csv<W: Write>(
    labels: &[String],
    scores: &[f64],
    positions: &[usize],
    header: Option<&[(&str, String)]>,
    mut out: W,
) -> Result<()> {
    let io = |e| Error::io("writing rank CSV", e);
    if let Some(h) = header {
        let line: Vec<String> = h.iter().map(|(k, v)| format!("{k}={v}")).collect();
        writeln!(out, "# {}", line.join(",")).map_err(io)?;
    }
    writeln!(out, "node_label,score,rank_position").map_err(io)?;
    for ((l, s), p) in labels.iter().zip(scores).zip(positions) {
        writeln!(out, "{},{},{}", csv_field(l), s, p).map_err(io)?;
    }
    out.flush().map_err(io)
}

fn csv_field(s: &str) -> String {
    if s.contains([',', '"', '\n']) {
        format!("\"{}\"", s.replace('"', "\"\""))
    } else {
        s.to_owned()
    }
}
