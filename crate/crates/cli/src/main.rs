//! `bhrank`: rank weighted digraphs with PageRank and the Black Hole Metric,
//! generate synthetic networks and run the comparison experiments.

mod commands;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(name = "bhrank", version, about = "Weighted PageRank and the Black Hole Metric")]
pub struct Cli {
    /// More log output (repeat for debug).
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    pub verbose: u8,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Rank the nodes of an edge-list file.
    Rank(RankArgs),
    /// Print the wariness of a network.
    Wariness(WarinessArgs),
    /// Generate a synthetic network.
    #[command(subcommand)]
    Generate(GenerateCommand),
    /// Compare PageRank and the Black Hole Metric.
    #[command(subcommand)]
    Experiment(ExperimentCommand),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Metric {
    Pagerank,
    Blackhole,
    Both,
}

#[derive(Args, Debug)]
pub struct SolverArgs {
    /// Damping factor, strictly between 0 and 1.
    #[arg(short = 'd', long = "d", default_value_t = bhrank::ranking::DEFAULT_DAMPING)]
    pub damping: f64,
    /// L1 distance between successive iterates that stops the iteration.
    #[arg(long, default_value_t = bhrank::ranking::DEFAULT_TOLERANCE)]
    pub tol: f64,
    #[arg(long, default_value_t = bhrank::ranking::DEFAULT_MAX_ITERATIONS)]
    pub max_iters: usize,
    /// Treat nodes whose outgoing weights are all zero as sinks under
    /// PageRank instead of failing.
    #[arg(long)]
    pub zero_strength_as_sink: bool,
}

#[derive(Args, Debug)]
pub struct GraphArgs {
    /// Edge list: `src dst weight` per line, `#` and `%` start comments.
    pub input: PathBuf,
    /// Global weight scale as `low:high`.
    #[arg(long, value_parser = parse_bounds, allow_hyphen_values = true, conflicts_with = "bounds_file")]
    pub bounds: Option<(f64, f64)>,
    /// Metadata sidecar with node labels and global or per-node bounds.
    #[arg(long)]
    pub bounds_file: Option<PathBuf>,
    /// Node ids are integers; index order follows their numeric value.
    #[arg(long)]
    pub integer_ids: bool,
    /// Skip `v v w` lines instead of rejecting them.
    #[arg(long)]
    pub drop_self_loops: bool,
}

#[derive(Args, Debug)]
pub struct RankArgs {
    #[arg(long, value_enum, default_value_t = Metric::Both)]
    pub metric: Metric,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
    /// Directory for `pagerank.csv` and `blackhole.csv`.
    #[arg(long, env = "BHRANK_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct WarinessArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub solver: SolverArgs,
}

#[derive(Args, Debug)]
pub struct WeightArgs {
    /// Integer weight range as `low:high`.
    #[arg(long, value_parser = parse_weights, default_value = "0:49")]
    pub weights: (u32, u32),
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 1000)]
    pub n: usize,
}

#[derive(Args, Debug)]
pub struct ErArgs {
    #[command(flatten)]
    pub common: WeightArgs,
    #[arg(long, default_value_t = 10.0)]
    pub mean_out: f64,
}

#[derive(Args, Debug)]
pub struct SfArgs {
    #[command(flatten)]
    pub common: WeightArgs,
    #[arg(long, default_value_t = 0.41)]
    pub alpha: f64,
    #[arg(long, default_value_t = 0.54)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.05)]
    pub gamma: f64,
    #[arg(long, default_value_t = 0.2)]
    pub delta_in: f64,
    #[arg(long, default_value_t = 0.0)]
    pub delta_out: f64,
    /// Grow from `0 -> 1, 1 -> 0` instead of the single arc `0 -> 1`.
    #[arg(long)]
    pub mutual_seed: bool,
}

#[derive(Subcommand, Debug)]
pub enum GenerateCommand {
    /// Erdős–Rényi digraph with a given mean outdegree.
    Er {
        #[command(flatten)]
        spec: ErArgs,
        /// Output edge list (a `.meta` sidecar is written next to it);
        /// stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Preferential-attachment digraph.
    Sf {
        #[command(flatten)]
        spec: SfArgs,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
pub enum Family {
    Er,
    Sf,
}

#[derive(Subcommand, Debug)]
pub enum ExperimentCommand {
    /// Rank a network, multiply its weights, rank again and compare.
    Scaling(ScalingArgs),
    /// PageRank against the Black Hole Metric on the Advogato trust network.
    Advogato(AdvogatoArgs),
}

#[derive(Args, Debug)]
pub struct ScalingArgs {
    /// Generator family; ignored with `--input`.
    #[arg(long, value_enum, default_value_t = Family::Er)]
    pub family: Family,
    /// Use this edge list instead of a generated network.
    #[arg(long)]
    pub input: Option<PathBuf>,
    #[arg(long, requires = "input")]
    pub integer_ids: bool,
    #[command(flatten)]
    pub weights: WeightArgs,
    #[arg(long, default_value_t = 10.0)]
    pub mean_out: f64,
    /// Weight multiplier; defaults to `full.high / weights.high`.
    #[arg(long)]
    pub factor: Option<f64>,
    /// Scale both rankings are computed against, as `low:high`.
    #[arg(long, value_parser = parse_bounds, default_value = "0:99")]
    pub full_bounds: (f64, f64),
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, env = "BHRANK_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

#[derive(Args, Debug)]
pub struct AdvogatoArgs {
    /// KONECT `out.advogato` file.
    #[arg(long)]
    pub data: PathBuf,
    /// `id name` file mapping node ids to user names.
    #[arg(long)]
    pub labels: Option<PathBuf>,
    #[arg(long, default_value_t = 10)]
    pub top: usize,
    #[arg(long, default_value_t = 0.6)]
    pub low: f64,
    #[arg(long, default_value_t = 1.0)]
    pub high: f64,
    #[command(flatten)]
    pub solver: SolverArgs,
    #[arg(long, env = "BHRANK_OUT_DIR", default_value = ".")]
    pub out_dir: PathBuf,
}

fn split_pair(s: &str) -> Result<(&str, &str), String> {
    s.split_once(':')
        .ok_or_else(|| format!("expected `low:high`, got `{s}`"))
}

fn parse_bounds(s: &str) -> Result<(f64, f64), String> {
    let (l, h) = split_pair(s)?;
    let parse = |x: &str| x.trim().parse::<f64>().map_err(|e| format!("`{x}`: {e}"));
    Ok((parse(l)?, parse(h)?))
}

fn parse_weights(s: &str) -> Result<(u32, u32), String> {
    let (l, h) = split_pair(s)?;
    let parse = |x: &str| x.trim().parse::<u32>().map_err(|e| format!("`{x}`: {e}"));
    Ok((parse(l)?, parse(h)?))
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();

    match commands::run(cli.command) {
        Ok(commands::Status::Converged) => ExitCode::SUCCESS,
        Ok(commands::Status::NotConverged) => {
            eprintln!("warning: iteration did not converge; results were written but are flagged");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
