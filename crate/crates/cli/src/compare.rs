use std::collections::BTreeMap;

use clap::{Args, ValueEnum};
use kcoreset::distributed::{composable_kcenter, generalized_kcenter, partition, LocalAlgo, Strategy};
use kcoreset::rng::{derive, Stream};
use kcoreset::{Error, MetricSpace, Result};
use rayon::prelude::*;
use serde::Serialize;

use crate::input::InputArgs;
use crate::{emit, json_bytes, run_solver, Format, OutputArgs, SolverName};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CompareAlgo {
    Composable,
    Efficient,
    Exact,
    Generalized,
    Gonzalez,
    Parametric,
}

impl CompareAlgo {
    fn name(self) -> &'static str {
        match self {
            CompareAlgo::Composable => "composable",
            CompareAlgo::Efficient => "efficient",
            CompareAlgo::Exact => "exact",
            CompareAlgo::Generalized => "generalized",
            CompareAlgo::Gonzalez => "gonzalez",
            CompareAlgo::Parametric => "parametric",
        }
    }

    fn randomized(self) -> bool {
        !matches!(self, CompareAlgo::Efficient | CompareAlgo::Exact)
    }
}

#[derive(Args)]
pub struct CompareArgs {
    #[command(flatten)]
    input: InputArgs,
    /// Smallest k of the range.
    #[arg(long)]
    k: usize,
    /// Largest k of the range (defaults to --k).
    #[arg(long = "k-max")]
    k_max: Option<usize>,
    /// Algorithms to compare.
    #[arg(long, value_enum, value_delimiter = ',', default_values_t = [CompareAlgo::Gonzalez, CompareAlgo::Parametric])]
    algo: Vec<CompareAlgo>,
    /// Also compare the composable pipeline with the greedy MapReduce pipeline.
    #[arg(long)]
    mapreduce: bool,
    #[arg(long = "L", default_value_t = 2)]
    machines: usize,
    #[arg(long, default_value_t = 0.1)]
    epsilon: f64,
    #[arg(long, default_value_t = 10)]
    reps: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Debug, Clone, Serialize)]
struct RunRow {
    k: usize,
    algo: CompareAlgo,
    #[serde(skip_serializing_if = "Option::is_none")]
    seed: Option<u64>,
    radius: f64,
    work: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    wall_time_s: Option<f64>,
}

#[derive(Debug, Clone, Serialize)]
struct SummaryRow {
    k: usize,
    algo: CompareAlgo,
    mean_radius: f64,
    min_radius: f64,
    max_radius: f64,
}

#[derive(Debug, Clone, Serialize)]
struct Ratio {
    k: usize,
    numerator: CompareAlgo,
    denominator: CompareAlgo,
    mean_radius_ratio: f64,
}

#[derive(Debug, Serialize)]
struct Report {
    runs: Vec<RunRow>,
    summary: Vec<SummaryRow>,
    ratios: Vec<Ratio>,
}

fn run_job(
    space: &MetricSpace,
    args: &CompareArgs,
    k: usize,
    algo: CompareAlgo,
    rep: usize,
) -> Result<RunRow> {
    let rep = rep as u64;
    let view = space.view();
    let (seed, result) = match algo {
        CompareAlgo::Gonzalez => {
            let s = derive(args.seed, Stream::Start, rep);
            (Some(s), run_solver(&view, SolverName::Gonzalez, k, args.epsilon, Some(s))?)
        }
        CompareAlgo::Parametric => {
            let s = derive(args.seed, Stream::Order, rep);
            (Some(s), run_solver(&view, SolverName::Parametric, k, args.epsilon, Some(s))?)
        }
        CompareAlgo::Efficient => (None, run_solver(&view, SolverName::Efficient, k, args.epsilon, None)?),
        CompareAlgo::Exact => (None, run_solver(&view, SolverName::Exact, k, args.epsilon, None)?),
        CompareAlgo::Composable | CompareAlgo::Generalized => {
            let s = derive(args.seed, Stream::Partition, rep);
            let p = partition(space.len(), args.machines, Strategy::Random(s), None)?;
            let run = if algo == CompareAlgo::Composable {
                composable_kcenter(space, &p, k, args.epsilon)?
            } else {
                generalized_kcenter(space, &p, k, LocalAlgo::Gonzalez)?
            };
            (Some(s), run.result)
        }
    };
    Ok(RunRow {
        k,
        algo,
        seed,
        radius: result.radius,
        work: result.work,
        wall_time_s: args.output.timing.then_some(result.wall_time_s),
    })
}

pub fn run(args: CompareArgs) -> Result<()> {
    if args.reps == 0 {
        return Err(Error::Usage("--reps must be at least 1".into()));
    }
    let k_max = args.k_max.unwrap_or(args.k);
    if k_max < args.k {
        return Err(Error::Usage("--k-max must not be below --k".into()));
    }
    let mut algos = args.algo.clone();
    if args.mapreduce {
        algos.extend([CompareAlgo::Composable, CompareAlgo::Generalized]);
    }
    algos.sort();
    algos.dedup();
    let space = args.input.load(args.seed)?;

    let jobs: Vec<(usize, CompareAlgo, usize)> = (args.k..=k_max)
        .flat_map(|k| {
            let reps = args.reps;
            algos.iter().flat_map(move |&a| {
                let n = if a.randomized() { reps } else { 1 };
                (0..n).map(move |r| (k, a, r))
            })
        })
        .collect();
    let mut runs = jobs
        .par_iter()
        .map(|&(k, a, r)| run_job(&space, &args, k, a, r))
        .collect::<Result<Vec<_>>>()?;
    runs.sort_by_key(|r| (r.k, r.algo, r.seed));

    let mut groups: BTreeMap<(usize, CompareAlgo), Vec<f64>> = BTreeMap::new();
    for r in &runs {
        groups.entry((r.k, r.algo)).or_default().push(r.radius);
    }
    let summary: Vec<SummaryRow> = groups
        .iter()
        .map(|(&(k, algo), radii)| SummaryRow {
            k,
            algo,
            mean_radius: radii.iter().sum::<f64>() / radii.len() as f64,
            min_radius: radii.iter().copied().fold(f64::INFINITY, f64::min),
            max_radius: radii.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        })
        .collect();
    let mean = |k: usize, a: CompareAlgo| {
        summary.iter().find(|s| s.k == k && s.algo == a).map(|s| s.mean_radius)
    };
    let pairs = [
        (CompareAlgo::Parametric, CompareAlgo::Gonzalez),
        (CompareAlgo::Composable, CompareAlgo::Generalized),
    ];
    let mut ratios = Vec::new();
    for k in args.k..=k_max {
        for (num, den) in pairs {
            if let (Some(a), Some(b)) = (mean(k, num), mean(k, den)) {
                if b > 0.0 {
                    ratios.push(Ratio { k, numerator: num, denominator: den, mean_radius_ratio: a / b });
                }
            }
        }
    }

    let bytes = match args.format {
        Format::Json => json_bytes(&Report { runs, summary, ratios })?,
        Format::Csv => {
            let mut text = String::from("k,algo,mean_radius,min_radius,max_radius\n");
            for s in &summary {
                text += &format!(
                    "{},{},{},{},{}\n",
                    s.k,
                    s.algo.name(),
                    s.mean_radius,
                    s.min_radius,
                    s.max_radius
                );
            }
            text.into_bytes()
        }
    };
    emit(args.output.out.as_ref(), &bytes)
}
