//! `kcoreset` command-line driver.

mod compare;
mod input;
mod simulate;

use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use kcoreset::coreset::{tradeoff_table, write_tradeoff_csv};
use kcoreset::graph::VisitOrder;
use kcoreset::metric::{validate_metric_with, write_points_csv};
use kcoreset::rng::{derive, Stream};
use kcoreset::solvers::{
    efficient_parametric_pruning, exact_kcenter, gonzalez, parametric_pruning, ClusteringResult,
    Start,
};
use kcoreset::Error;
use serde::Serialize;

use input::InputArgs;

#[derive(Parser)]
#[command(name = "kcoreset", version, about = "k-center, dual clustering and composable coresets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one sequential k-center solver.
    Solve(SolveArgs),
    /// Run a distributed pipeline on simulated machines.
    Simulate(simulate::SimulateArgs),
    /// Compare randomized solvers across seeds.
    Compare(compare::CompareArgs),
    /// Emit the coreset size / cover radius table.
    Tradeoff(TradeoffArgs),
    /// Write a generated point set as CSV.
    Generate(GenerateArgs),
    /// Check the metric axioms of an input.
    Validate(ValidateArgs),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum SolverName {
    Gonzalez,
    Parametric,
    Efficient,
    Exact,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Args)]
pub struct OutputArgs {
    /// Write to this file instead of stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Include wall-clock times (makes output non-reproducible).
    #[arg(long)]
    pub timing: bool,
}

#[derive(Args)]
struct SolveArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum)]
    algo: SolverName,
    #[arg(long)]
    k: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Seeded random start point (gonzalez) or visit order (parametric).
    #[arg(long)]
    randomize: bool,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct TradeoffArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, default_value_t = 1)]
    k: usize,
    #[arg(long = "max-R", default_value_t = 3)]
    max_r: u32,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenerateArgs {
    #[arg(long)]
    gen: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ValidateArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Run the cubic triangle scan even on large matrices.
    #[arg(long)]
    force: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

/// Writes `bytes` to `path` or stdout.
pub fn emit(path: Option<&PathBuf>, bytes: &[u8]) -> kcoreset::Result<()> {
    match path {
        Some(p) => std::fs::write(p, bytes)?,
        None => std::io::stdout().lock().write_all(bytes)?,
    }
    Ok(())
}

/// Pretty JSON with a trailing newline.
pub fn json_bytes(value: &impl Serialize) -> kcoreset::Result<Vec<u8>> {
    let mut bytes =
        serde_json::to_vec_pretty(value).map_err(|e| Error::Internal(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

/// The JSON record of a clustering result; `wall_time_s` only when timing.
pub fn result_record(r: &ClusteringResult, timing: bool) -> kcoreset::Result<serde_json::Value> {
    let mut v = serde_json::to_value(r).map_err(|e| Error::Internal(e.to_string()))?;
    if timing {
        v["wall_time_s"] = serde_json::json!(r.wall_time_s);
    }
    Ok(v)
}

pub fn run_solver(
    view: &kcoreset::MetricView<'_>,
    algo: SolverName,
    k: usize,
    epsilon: f64,
    random: Option<u64>,
) -> kcoreset::Result<ClusteringResult> {
    match algo {
        SolverName::Gonzalez => {
            let start = match random {
                Some(seed) => Start::Random(seed),
                None => Start::Index(0),
            };
            gonzalez(view, k, start)
        }
        SolverName::Parametric => {
            let order = match random {
                Some(seed) => VisitOrder::seeded_random(view.len(), seed),
                None => VisitOrder::index(view.len()),
            };
            parametric_pruning(view, k, &order)
        }
        SolverName::Efficient => efficient_parametric_pruning(view, k, epsilon),
        SolverName::Exact => exact_kcenter(view, k),
    }
}

fn solve(args: SolveArgs) -> kcoreset::Result<()> {
    let space = args.input.load(args.seed)?;
    let view = space.view();
    let random = args.randomize.then(|| match args.algo {
        SolverName::Parametric => derive(args.seed, Stream::Order, 0),
        _ => derive(args.seed, Stream::Start, 0),
    });
    let result = run_solver(&view, args.algo, args.k, args.epsilon, random)?;
    let bytes = match args.format {
        Format::Json => json_bytes(&result_record(&result, args.output.timing)?)?,
        Format::Csv => {
            let mut text = String::from("algo,k,radius,work,centers\n");
            let centers: Vec<String> = result.centers.iter().map(usize::to_string).collect();
            text += &format!(
                "{},{},{},{},{}\n",
                result.algo,
                result.k,
                result.radius,
                result.work,
                centers.join(";")
            );
            text.into_bytes()
        }
    };
    emit(args.output.out.as_ref(), &bytes)
}

fn tradeoff(args: TradeoffArgs) -> kcoreset::Result<()> {
    let space = args.input.load(args.seed)?;
    let view = space.view();
    let rows = tradeoff_table(&view, args.k, args.max_r, &VisitOrder::index(space.len()))?;
    let mut bytes = Vec::new();
    write_tradeoff_csv(&rows, &mut bytes)?;
    emit(args.out.as_ref(), &bytes)
}

fn generate(args: GenerateArgs) -> kcoreset::Result<()> {
    let spec = kcoreset::metric::GeneratorSpec::parse(&args.gen, args.seed)?;
    let points = kcoreset::metric::generate(&spec)?;
    let mut bytes = Vec::new();
    write_points_csv(&points, &mut bytes)?;
    emit(args.out.as_ref(), &bytes)
}

fn validate(args: ValidateArgs) -> kcoreset::Result<bool> {
    let space = args.input.load_unchecked(0)?;
    let report = validate_metric_with(&space, args.force);
    emit(args.out.as_ref(), &json_bytes(&report)?)?;
    Ok(report.is_valid())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Solve(a) => solve(a).map(|_| true),
        Command::Simulate(a) => simulate::run(a).map(|_| true),
        Command::Compare(a) => compare::run(a).map(|_| true),
        Command::Tradeoff(a) => tradeoff(a).map(|_| true),
        Command::Generate(a) => generate(a).map(|_| true),
        Command::Validate(a) => validate(a),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("kcoreset: {e}");
            match e {
                Error::Usage(_) => ExitCode::from(2),
                _ => ExitCode::from(1),
            }
        }
    }
}
