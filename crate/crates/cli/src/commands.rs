use std::fs::{self, File};
use std::io::{self, BufWriter};
use std::path::{Path, PathBuf};

use bhrank::experiments::{advogato_experiment, dominance, AdvogatoOptions, ExperimentReport};
use bhrank::io::{
    load_edge_list, load_edge_list_with_metadata, write_edge_list, write_rank_csv, EdgeList, EdgeListFormat, IdKind,
    Metadata, SelfLoopPolicy,
};
use bhrank::{
    blackhole_metric_on, generate_er, generate_scale_free, pagerank, rank_positions, run_scaling_experiment, transform,
    wariness, ErdosRenyiSpec, Error, PageRankConfig, Result, ScaleFreeSpec, SeedGraph, WeightBounds, WeightedDigraph,
    ZeroStrength,
};

use crate::{
    AdvogatoArgs, Command, ErArgs, ExperimentCommand, Family, GenerateCommand, GraphArgs, Metric, RankArgs,
    ScalingArgs, SfArgs, SolverArgs, WarinessArgs, WeightArgs,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Status {
    Converged,
    NotConverged,
}

impl Status {
    fn from_flag(converged: bool) -> Self {
        if converged {
            Status::Converged
        } else {
            Status::NotConverged
        }
    }
}

pub fn run(command: Command) -> Result<Status> {
    match command {
        Command::Rank(args) => cmd_rank(args),
        Command::Wariness(args) => cmd_wariness(args),
        Command::Generate(GenerateCommand::Er { spec, out }) => cmd_generate_er(spec, out),
        Command::Generate(GenerateCommand::Sf { spec, out }) => cmd_generate_sf(spec, out),
        Command::Experiment(ExperimentCommand::Scaling(args)) => cmd_scaling(args),
        Command::Experiment(ExperimentCommand::Advogato(args)) => cmd_advogato(args),
    }
}

impl SolverArgs {
    fn config(&self, default_zero_strength: ZeroStrength) -> Result<PageRankConfig> {
        let cfg = PageRankConfig::default()
            .with_damping(self.damping)
            .with_tolerance(self.tol)
            .with_max_iterations(self.max_iters)
            .with_zero_strength(if self.zero_strength_as_sink {
                ZeroStrength::TreatAsSink
            } else {
                default_zero_strength
            });
        cfg.validate(1)?;
        Ok(cfg)
    }
}

impl GraphArgs {
    fn format(&self) -> EdgeListFormat {
        EdgeListFormat {
            ids: if self.integer_ids {
                IdKind::Integer
            } else {
                IdKind::Token
            },
            self_loops: if self.drop_self_loops {
                SelfLoopPolicy::Drop
            } else {
                SelfLoopPolicy::Reject
            },
        }
    }

    /// Loads the edge list and resolves the weight scale. Without `--bounds`
    /// or `--bounds-file` the scale is `None`.
    fn load(&self) -> Result<(EdgeList, Option<WeightBounds>)> {
        match &self.bounds_file {
            Some(meta_path) => {
                let meta = Metadata::load(meta_path)?;
                let el = load_edge_list_with_metadata(&self.input, self.format(), &meta)?;
                Ok((el, meta.bounds))
            }
            None => {
                let el = load_edge_list(&self.input, self.format())?;
                Ok((el, self.bounds.map(|(low, high)| WeightBounds::global(low, high))))
            }
        }
    }
}

fn require_bounds(bounds: Option<WeightBounds>) -> Result<WeightBounds> {
    bounds.ok_or_else(|| {
        Error::InvalidConfig(
            "the black hole metric needs a weight scale: pass --bounds low:high or --bounds-file".into(),
        )
    })
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    File::create(path).map(BufWriter::new).map_err(|e| Error::Io {
        context: format!("creating {}", path.display()),
        source: e,
    })
}

fn create_dir(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir).map_err(|e| Error::Io {
        context: format!("creating {}", dir.display()),
        source: e,
    })
}

fn cmd_rank(args: RankArgs) -> Result<Status> {
    let cfg = args.solver.config(ZeroStrength::Reject)?;
    let (el, bounds) = args.graph.load()?;
    let g = match (args.metric, bounds) {
        (Metric::Pagerank, None) => el.build_unbounded()?,
        (_, bounds) => el.build(require_bounds(bounds)?)?,
    };
    log::info!("{} nodes, {} arcs", g.node_count(), g.arc_count());
    create_dir(&args.out_dir)?;

    let mut converged = true;
    let common = [("d", cfg.damping.to_string()), ("tol", format!("{:e}", cfg.tolerance))];
    if matches!(args.metric, Metric::Pagerank | Metric::Both) {
        let res = pagerank(&g, &cfg)?;
        let path = args.out_dir.join("pagerank.csv");
        let mut header = common.to_vec();
        header.push(("iterations", res.iterations.to_string()));
        header.push(("converged", res.converged.to_string()));
        write_rank_csv(
            &el.labels,
            &res.scores,
            &rank_positions(&res.scores).positions,
            Some(&header),
            create(&path)?,
        )?;
        println!(
            "pagerank: {} iterations, residual {:.3e} -> {}",
            res.iterations,
            res.residual,
            path.display()
        );
        converged &= res.converged;
    }
    if matches!(args.metric, Metric::Blackhole | Metric::Both) {
        let net = transform(&g)?;
        let res = blackhole_metric_on(&net, &cfg)?;
        let w = wariness(&net, &res);
        let path = args.out_dir.join("blackhole.csv");
        let mut header = common.to_vec();
        header.push(("iterations", res.iterations.to_string()));
        header.push(("converged", res.converged.to_string()));
        header.push(("p_b", res.black_hole.to_string()));
        header.push(("wariness", w.to_string()));
        write_rank_csv(
            &el.labels,
            &res.scores,
            &rank_positions(&res.scores).positions,
            Some(&header),
            create(&path)?,
        )?;
        println!(
            "blackhole: {} iterations, residual {:.3e} -> {}",
            res.iterations,
            res.residual,
            path.display()
        );
        println!("p_b = {:.6}", res.black_hole);
        println!("wariness = {w:.6}");
        converged &= res.converged;
    }
    Ok(Status::from_flag(converged))
}

fn cmd_wariness(args: WarinessArgs) -> Result<Status> {
    let cfg = args.solver.config(ZeroStrength::Reject)?;
    let (el, bounds) = args.graph.load()?;
    let g = el.build(require_bounds(bounds)?)?;
    let net = transform(&g)?;
    let res = blackhole_metric_on(&net, &cfg)?;
    println!("{}", wariness(&net, &res));
    Ok(Status::from_flag(res.converged))
}

fn er_spec(common: &WeightArgs, mean_out: f64) -> ErdosRenyiSpec {
    ErdosRenyiSpec {
        n: common.n,
        mean_outdegree: mean_out,
        weight_low: common.weights.0,
        weight_high: common.weights.1,
        seed: common.seed,
    }
}

fn sf_spec(args: &SfArgs) -> ScaleFreeSpec {
    ScaleFreeSpec {
        n: args.common.n,
        alpha: args.alpha,
        beta: args.beta,
        gamma: args.gamma,
        delta_in: args.delta_in,
        delta_out: args.delta_out,
        weight_low: args.common.weights.0,
        weight_high: args.common.weights.1,
        seed: args.common.seed,
        initial: if args.mutual_seed {
            SeedGraph::MutualPair
        } else {
            SeedGraph::SingleArc
        },
    }
}

fn emit_graph(g: &WeightedDigraph, out: Option<PathBuf>) -> Result<Status> {
    match out {
        Some(path) => {
            write_edge_list(g, None, create(&path)?)?;
            let mut meta_path = path.into_os_string();
            meta_path.push(".meta");
            Metadata::for_graph(g, None).save(PathBuf::from(meta_path))?;
        }
        None => write_edge_list(g, None, io::stdout().lock())?,
    }
    eprintln!("{} nodes, {} arcs", g.node_count(), g.arc_count());
    Ok(Status::Converged)
}

fn cmd_generate_er(args: ErArgs, out: Option<PathBuf>) -> Result<Status> {
    emit_graph(&generate_er(&er_spec(&args.common, args.mean_out))?, out)
}

fn cmd_generate_sf(args: SfArgs, out: Option<PathBuf>) -> Result<Status> {
    emit_graph(&generate_scale_free(&sf_spec(&args))?, out)
}

fn print_report(report: &ExperimentReport, out_dir: &Path) {
    println!("{}: {} nodes, {} arcs", report.name, report.nodes, report.arcs);
    for r in &report.runs {
        print!("  {:<4} {:>4} iterations, {:.3}s", r.name, r.iterations, r.runtime_secs);
        if let (Some(pb), Some(w)) = (r.black_hole, r.wariness) {
            print!(", p_b {pb:.6}, wariness {w:.6}");
        }
        if !r.converged {
            print!(" (not converged)");
        }
        println!();
    }
    for c in &report.comparisons {
        println!(
            "  {:<10} changed {:.1}%, median |diff| {}",
            c.label,
            100.0 * c.changed_fraction(),
            c.quantile(0.5)
        );
    }
    println!("report written to {}", out_dir.display());
}

fn cmd_scaling(args: ScalingArgs) -> Result<Status> {
    let cfg = args.solver.config(ZeroStrength::TreatAsSink)?;
    let (full_low, full_high) = args.full_bounds;
    let full = WeightBounds::global(full_low, full_high);
    let mut provenance = Vec::new();

    let (g, factor) = match &args.input {
        Some(path) => {
            let factor = args
                .factor
                .ok_or_else(|| Error::InvalidConfig("--factor is required with --input".into()))?;
            let ids = if args.integer_ids {
                IdKind::Integer
            } else {
                IdKind::Token
            };
            let el = load_edge_list(
                path,
                EdgeListFormat {
                    ids,
                    ..Default::default()
                },
            )?;
            provenance.push(("input", path.display().to_string()));
            (el.build(full.clone())?, factor)
        }
        None => {
            let factor = args.factor.unwrap_or(full_high / f64::from(args.weights.weights.1));
            let g = match args.family {
                Family::Er => {
                    let spec = er_spec(&args.weights, args.mean_out);
                    provenance.push(("generator", format!("{spec:?}")));
                    generate_er(&spec)?
                }
                Family::Sf => {
                    let spec = ScaleFreeSpec {
                        weight_low: args.weights.weights.0,
                        weight_high: args.weights.weights.1,
                        ..ScaleFreeSpec::with_defaults(args.weights.n, args.weights.seed)
                    };
                    provenance.push(("generator", format!("{spec:?}")));
                    generate_scale_free(&spec)?
                }
            };
            provenance.push(("seed", args.weights.seed.to_string()));
            (g, factor)
        }
    };

    let mut report = run_scaling_experiment(&g, factor, &full, &cfg)?;
    for (k, v) in provenance {
        report.provenance.insert(k.into(), v);
    }
    let dom = dominance(
        report.comparison("PR - BH1").expect("scaling report compares PR - BH1"),
        report.comparison("PR - BH2").expect("scaling report compares PR - BH2"),
        &[0.25, 0.5, 0.75],
    );
    report
        .provenance
        .insert("dominance_x_points".into(), format!("{:?}", dom.x_points));
    report
        .provenance
        .insert("dominance_holds".into(), dom.holds().to_string());
    report.write_to_dir(&args.out_dir)?;

    print_report(&report, &args.out_dir);
    println!(
        "  ||PR1 - PR2||inf = {:.3e}, PR - BH2 above PR - BH1 at x = {:?}: {}",
        report.pagerank_scale_deviation.unwrap_or(0.0),
        dom.x_points,
        dom.holds()
    );
    Ok(Status::from_flag(report.all_converged()))
}

fn cmd_advogato(args: AdvogatoArgs) -> Result<Status> {
    let cfg = args.solver.config(ZeroStrength::Reject)?;
    let opts = AdvogatoOptions {
        low: args.low,
        high: args.high,
        top_k: args.top,
        labels: args.labels,
        ..AdvogatoOptions::default()
    };
    let report = advogato_experiment(&args.data, &cfg, &opts)?;
    report.write_to_dir(&args.out_dir)?;

    print_report(&report, &args.out_dir);
    println!(
        "{:>4}  {:<16} {:>12}  {:<16} {:>12}",
        "rank", "PageRank", "", "BlackHole", ""
    );
    for t in &report.top {
        println!(
            "{:>4}  {:<16} {:>12.8}  {:<16} {:>12.8}",
            t.rank, t.pagerank_label, t.pagerank_score, t.blackhole_label, t.blackhole_score
        );
    }
    Ok(Status::from_flag(report.all_converged()))
}
