use std::path::PathBuf;

use clap::{Args, ValueEnum};
use kcoreset::distributed::{
    canonical_labels, composable_kcenter, dbscan_coreset, fixed_k_kcenter, generalized_kcenter,
    partition, reference_dbscan, trace_report, DbscanLabels, LocalAlgo, PipelineRun, Strategy,
};
use kcoreset::{Error, MetricSpace, Result};
use serde::Deserialize;
use serde_json::{json, Value};

use crate::input::InputArgs;
use crate::{emit, json_bytes, result_record, OutputArgs};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Pipeline {
    Composable,
    Generalized,
    Fixedk,
    Dbscan,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PartitionName {
    Arbitrary,
    Random,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalName {
    Gonzalez,
    Parametric,
}

#[derive(Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    input: InputArgs,
    #[arg(long, value_enum, required_unless_present = "config")]
    pipeline: Option<Pipeline>,
    #[arg(long, default_value_t = 2)]
    k: usize,
    #[arg(long, default_value_t = 0.5)]
    epsilon: f64,
    /// DBSCAN neighbourhood radius.
    #[arg(long)]
    eps: Option<f64>,
    /// DBSCAN core threshold (other points within eps).
    #[arg(long, default_value_t = 3)]
    minpts: usize,
    #[arg(long = "L", default_value_t = 1)]
    machines: usize,
    /// Per-machine capacity; defaults to ⌈n/L⌉.
    #[arg(long)]
    m: Option<usize>,
    #[arg(long, value_enum, default_value_t = PartitionName::Arbitrary)]
    partition: PartitionName,
    #[arg(long = "local-algo", value_enum, default_value_t = LocalName::Gonzalez)]
    local_algo: LocalName,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// JSON array of scenarios; each entry overrides the flags above.
    #[arg(long)]
    config: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

/// One entry of a `--config` file.
#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
struct Scenario {
    pipeline: Option<Pipeline>,
    k: Option<usize>,
    epsilon: Option<f64>,
    eps: Option<f64>,
    minpts: Option<usize>,
    #[serde(rename = "L")]
    machines: Option<usize>,
    m: Option<usize>,
    partition: Option<PartitionName>,
    local_algo: Option<LocalName>,
    seed: Option<u64>,
}

struct Resolved {
    pipeline: Pipeline,
    k: usize,
    epsilon: f64,
    eps: Option<f64>,
    minpts: usize,
    machines: usize,
    m: Option<usize>,
    partition: PartitionName,
    local_algo: LocalName,
    seed: u64,
}

impl SimulateArgs {
    fn resolve(&self, s: &Scenario) -> Result<Resolved> {
        Ok(Resolved {
            pipeline: s
                .pipeline
                .or(self.pipeline)
                .ok_or_else(|| Error::Usage("scenario has no pipeline".into()))?,
            k: s.k.unwrap_or(self.k),
            epsilon: s.epsilon.unwrap_or(self.epsilon),
            eps: s.eps.or(self.eps),
            minpts: s.minpts.unwrap_or(self.minpts),
            machines: s.machines.unwrap_or(self.machines),
            m: s.m.or(self.m),
            partition: s.partition.unwrap_or(self.partition),
            local_algo: s.local_algo.unwrap_or(self.local_algo),
            seed: s.seed.unwrap_or(self.seed),
        })
    }
}

fn kcenter_record(r: &Resolved, run: &PipelineRun, timing: bool) -> Result<Value> {
    let mut v = json!({
        "pipeline": format!("{:?}", r.pipeline).to_lowercase(),
        "L": r.machines,
        "partition": format!("{:?}", r.partition).to_lowercase(),
        "k": r.k,
        "result": result_record(&run.result, timing)?,
        "trace": trace_report(&run.trace),
        "coreset_size": run.coreset.len(),
    });
    if r.pipeline == Pipeline::Generalized {
        v["local_algo"] = json!(format!("{:?}", r.local_algo).to_lowercase());
    }
    if let Some(reduced) = &run.reduced {
        v["reduced_size"] = json!(reduced.len());
    }
    if let Some(count) = run.subsets_enumerated {
        v["subsets_enumerated"] = json!(count);
    }
    Ok(v)
}

fn core_partition(l: &DbscanLabels) -> Vec<Option<usize>> {
    let masked: Vec<Option<usize>> =
        l.labels.iter().zip(&l.core).map(|(x, &c)| if c { *x } else { None }).collect();
    canonical_labels(&masked)
}

fn run_one(space: &MetricSpace, r: &Resolved, timing: bool) -> Result<Value> {
    let strategy = match r.partition {
        PartitionName::Arbitrary => Strategy::Arbitrary,
        PartitionName::Random => Strategy::Random(r.seed),
    };
    let p = partition(space.len(), r.machines, strategy, r.m)?;
    match r.pipeline {
        Pipeline::Composable => kcenter_record(r, &composable_kcenter(space, &p, r.k, r.epsilon)?, timing),
        Pipeline::Fixedk => kcenter_record(r, &fixed_k_kcenter(space, &p, r.k, r.epsilon)?, timing),
        Pipeline::Generalized => {
            let local = match r.local_algo {
                LocalName::Gonzalez => LocalAlgo::Gonzalez,
                LocalName::Parametric => LocalAlgo::Parametric,
            };
            kcenter_record(r, &generalized_kcenter(space, &p, r.k, local)?, timing)
        }
        Pipeline::Dbscan => {
            let eps = r.eps.ok_or_else(|| Error::Usage("dbscan needs --eps".into()))?;
            let (res, trace) = dbscan_coreset(space, &p, eps, r.minpts)?;
            let reference = reference_dbscan(space, eps, r.minpts)?;
            Ok(json!({
                "pipeline": "dbscan",
                "L": r.machines,
                "partition": format!("{:?}", r.partition).to_lowercase(),
                "eps": eps,
                "minpts": r.minpts,
                "clusters": res.points.clusters,
                "core_points": res.points.core.iter().filter(|&&c| c).count(),
                "noise_points": res.points.labels.iter().filter(|l| l.is_none()).count(),
                "coreset_size": res.coreset.len(),
                "reference_clusters": reference.clusters,
                "matches_reference": core_partition(&res.points) == core_partition(&reference),
                "trace": trace_report(&trace),
            }))
        }
    }
}

pub fn run(args: SimulateArgs) -> Result<()> {
    let space = args.input.load(args.seed)?;
    let value = match &args.config {
        Some(path) => {
            let text = std::fs::read_to_string(path)?;
            let scenarios: Vec<Scenario> = serde_json::from_str(&text)
                .map_err(|e| Error::Usage(format!("bad scenario file: {e}")))?;
            let records = scenarios
                .iter()
                .map(|s| run_one(&space, &args.resolve(s)?, args.output.timing))
                .collect::<Result<Vec<_>>>()?;
            Value::Array(records)
        }
        None => run_one(&space, &args.resolve(&Scenario::default())?, args.output.timing)?,
    };
    emit(args.output.out.as_ref(), &json_bytes(&value)?)
}
