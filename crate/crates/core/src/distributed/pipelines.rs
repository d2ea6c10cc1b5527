use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::{Partition, SimulationTrace};
use crate::coreset::{dual_clustering, epsilon_coreset};
use crate::graph::VisitOrder;
use crate::metric::MetricSpace;
use crate::solvers::{
    binomial, evaluate_centers, exact_kcenter, gonzalez, parametric_pruning, Algo,
    ClusteringResult, Start,
};
use crate::{Error, Result};

/// Local solver of the generalized pipeline. Both pick centers that are
/// pairwise farther apart than their radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LocalAlgo {
    Gonzalez,
    Parametric,
}

/// A finished pipeline run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PipelineRun {
    pub result: ClusteringResult,
    pub trace: SimulationTrace,
    /// Union of the machine coresets, as received by machine 0.
    pub coreset: Vec<usize>,
    /// Second-level coreset of the fixed-k pipeline.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub reduced: Option<Vec<usize>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub subsets_enumerated: Option<u64>,
}

fn check(space: &MetricSpace, partition: &Partition, k: usize) -> Result<()> {
    if partition.n() != space.len() {
        return Err(Error::usage(format!(
            "partition covers {} points but the input has {}",
            partition.n(),
            space.len()
        )));
    }
    if k == 0 || k > space.len() {
        return Err(Error::usage(format!("k = {k} must lie in 1..={}", space.len())));
    }
    Ok(())
}

/// Per-machine farthest-first radius, then a net covering the machine's
/// points within `ε·r_i/2`. Returns the nets and the work spent.
fn local_nets(
    space: &MetricSpace,
    partition: &Partition,
    k: usize,
    epsilon: f64,
) -> Result<(Vec<Vec<usize>>, u64)> {
    let per_machine: Vec<(Vec<usize>, u64)> = partition
        .machine_sets
        .par_iter()
        .map(|ids| {
            let view = space.subset(ids.iter().copied())?;
            let seed = gonzalez(&view, k.min(view.len()), Start::Index(0))?;
            let net = if seed.radius == 0.0 {
                let mut c = seed.centers;
                c.sort_unstable();
                c
            } else {
                dual_clustering(&view, epsilon * seed.radius / 2.0, &VisitOrder::index(view.len()))?
                    .subset
            };
            Ok((net, view.work()))
        })
        .collect::<Result<_>>()?;
    let work = per_machine.iter().map(|m| m.1).sum();
    Ok((per_machine.into_iter().map(|m| m.0).collect(), work))
}

fn union(parts: &[Vec<usize>]) -> Vec<usize> {
    let mut u = parts.concat();
    u.sort_unstable();
    u.dedup();
    u
}

/// Broadcasts `centers`, evaluates each machine's points against them and
/// gathers one local radius per machine.
fn assign_round(
    space: &MetricSpace,
    partition: &Partition,
    centers: &[usize],
    trace: &mut SimulationTrace,
) -> Result<(Vec<usize>, f64)> {
    trace.broadcast("broadcast-centers", centers.len() as u64);
    let per_machine: Vec<(Vec<usize>, f64, u64)> = partition
        .machine_sets
        .par_iter()
        .map(|ids| {
            let view = space.subset(ids.iter().copied())?;
            let (assignment, radius) = evaluate_centers(&view, centers)?;
            Ok((assignment, radius, view.work()))
        })
        .collect::<Result<_>>()?;
    trace.gather("report-radius", partition.machines() as u64);
    let mut assignment = vec![usize::MAX; space.len()];
    let mut radius: f64 = 0.0;
    for (ids, (local, r, work)) in partition.machine_sets.iter().zip(per_machine) {
        for (&g, c) in ids.iter().zip(local) {
            assignment[g] = c;
        }
        radius = radius.max(r);
        trace.total_work += work;
    }
    Ok((assignment, radius))
}

struct Finish {
    algo: Algo,
    k: usize,
    epsilon: Option<f64>,
    centers: Vec<usize>,
    coreset: Vec<usize>,
    reduced: Option<Vec<usize>>,
    subsets_enumerated: Option<u64>,
}

fn finish(
    space: &MetricSpace,
    partition: &Partition,
    mut trace: SimulationTrace,
    f: Finish,
    clock: Instant,
) -> Result<PipelineRun> {
    let (assignment, radius) = assign_round(space, partition, &f.centers, &mut trace)?;
    Ok(PipelineRun {
        result: ClusteringResult {
            algo: f.algo,
            k: f.k,
            epsilon: f.epsilon,
            seed: match partition.strategy {
                super::Strategy::Random(s) => Some(s),
                super::Strategy::Arbitrary => None,
            },
            radius,
            centers: f.centers,
            assignment,
            work: trace.total_work,
            wall_time_s: clock.elapsed().as_secs_f64(),
        },
        trace,
        coreset: f.coreset,
        reduced: f.reduced,
        subsets_enumerated: f.subsets_enumerated,
    })
}

/// Composable `(2+ε)`-approximate k-center: local nets at `ε·r_i/2`, a
/// farthest-first solve on their union at machine 0, then a broadcast of the
/// centers. Three rounds.
pub fn composable_kcenter(
    space: &MetricSpace,
    partition: &Partition,
    k: usize,
    epsilon: f64,
) -> Result<PipelineRun> {
    check(space, partition, k)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::usage(format!("epsilon must be positive, got {epsilon}")));
    }
    let clock = Instant::now();
    let mut trace = SimulationTrace::new(partition);
    let (nets, work) = local_nets(space, partition, k, epsilon)?;
    trace.total_work += work;
    trace.gather("ship-coresets", nets.iter().map(|c| c.len() as u64).sum());

    let coreset = union(&nets);
    let view = space.subset(coreset.iter().copied())?;
    let solved = gonzalez(&view, k.min(view.len()), Start::Index(0))?;
    trace.total_work += view.work();
    let f = Finish {
        algo: Algo::Composable,
        k,
        epsilon: Some(epsilon),
        centers: solved.centers,
        coreset,
        reduced: None,
        subsets_enumerated: None,
    };
    finish(space, partition, trace, f, clock)
}

/// Generalized pipeline: `k` local centers per machine from `local`, then a
/// farthest-first solve on their union. Ships exactly `Σ min(k, |S_i|)` items
/// in the first round.
pub fn generalized_kcenter(
    space: &MetricSpace,
    partition: &Partition,
    k: usize,
    local: LocalAlgo,
) -> Result<PipelineRun> {
    check(space, partition, k)?;
    let clock = Instant::now();
    let mut trace = SimulationTrace::new(partition);
    let per_machine: Vec<(Vec<usize>, u64)> = partition
        .machine_sets
        .par_iter()
        .map(|ids| {
            let view = space.subset(ids.iter().copied())?;
            let kk = k.min(view.len());
            let r = match local {
                LocalAlgo::Gonzalez => gonzalez(&view, kk, Start::Index(0))?,
                LocalAlgo::Parametric => {
                    parametric_pruning(&view, kk, &VisitOrder::index(view.len()))?
                }
            };
            Ok((r.centers, view.work()))
        })
        .collect::<Result<_>>()?;
    trace.total_work += per_machine.iter().map(|m| m.1).sum::<u64>();
    trace.gather("ship-centers", per_machine.iter().map(|m| m.0.len() as u64).sum());

    let coreset = union(&per_machine.into_iter().map(|m| m.0).collect::<Vec<_>>());
    let view = space.subset(coreset.iter().copied())?;
    let solved = gonzalez(&view, k.min(view.len()), Start::Index(0))?;
    trace.total_work += view.work();
    let f = Finish {
        algo: Algo::Generalized,
        k,
        epsilon: None,
        centers: solved.centers,
        coreset,
        reduced: None,
        subsets_enumerated: None,
    };
    finish(space, partition, trace, f, clock)
}

/// Fixed-k pipeline: the composable union is reduced again with an
/// ε-coreset at machine 0, and the k-center of the reduced set is solved
/// exactly by enumerating all `C(|C'|, k)` subsets.
pub fn fixed_k_kcenter(
    space: &MetricSpace,
    partition: &Partition,
    k: usize,
    epsilon: f64,
) -> Result<PipelineRun> {
    check(space, partition, k)?;
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::usage(format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    let clock = Instant::now();
    let mut trace = SimulationTrace::new(partition);
    let (nets, work) = local_nets(space, partition, k, epsilon)?;
    trace.total_work += work;
    trace.gather("ship-coresets", nets.iter().map(|c| c.len() as u64).sum());

    let coreset = union(&nets);
    let view = space.subset(coreset.iter().copied())?;
    let kk = k.min(view.len());
    let reduced = epsilon_coreset(&view, kk, epsilon, &VisitOrder::index(view.len()))?.subset;
    trace.total_work += view.work();
    let inner = space.subset(reduced.iter().copied())?;
    let kk = kk.min(inner.len());
    let solved = exact_kcenter(&inner, kk)?;
    trace.total_work += inner.work();
    let f = Finish {
        algo: Algo::FixedK,
        k,
        epsilon: Some(epsilon),
        centers: solved.centers,
        coreset,
        subsets_enumerated: Some(binomial(reduced.len(), kk)),
        reduced: Some(reduced),
    };
    finish(space, partition, trace, f, clock)
}

#[cfg(test)]
mod tests {
    use super::super::{partition, trace_report, Strategy};
    use super::*;
    use crate::metric::{generate, GeneratorSpec, PointSet};
    use crate::solvers::exact_kcenter;

    fn planar(n: usize, seed: u64) -> MetricSpace {
        MetricSpace::euclidean(
            generate(&GeneratorSpec::UniformBox { n, dim: 2, side: 1.0, seed }).unwrap(),
        )
    }

    #[test]
    fn composable_bound_and_rounds() {
        for seed in 0..20 {
            let space = planar(14, seed);
            let opt = exact_kcenter(&space.view(), 3).unwrap().radius;
            let p = partition(14, 2, Strategy::Arbitrary, None).unwrap();
            let run = composable_kcenter(&space, &p, 3, 0.5).unwrap();
            assert!(run.result.radius <= 2.5 * opt);
            assert!(run.result.centers.len() <= 3);
            assert!(run.result.assignment.iter().all(|c| run.result.centers.contains(c)));
            let rep = trace_report(&run.trace);
            assert_eq!(rep.rounds, 3);
            assert_eq!(rep.items_per_round[0], run.coreset.len() as u64);
            assert_eq!(rep.items_per_round[1], 3 * 2);
        }
    }

    #[test]
    fn composable_with_four_machines_has_three_rounds() {
        let space = planar(100, 4);
        let p = partition(100, 4, Strategy::Random(1), None).unwrap();
        let run = composable_kcenter(&space, &p, 5, 1.0).unwrap();
        assert_eq!(trace_report(&run.trace).rounds, 3);
        assert_eq!(run.result.seed, Some(1));
    }

    #[test]
    fn single_machine_matches_sequential_steps() {
        let space = planar(30, 9);
        let p = partition(30, 1, Strategy::Arbitrary, None).unwrap();
        let run = composable_kcenter(&space, &p, 4, 0.5).unwrap();
        let view = space.view();
        let r = gonzalez(&view, 4, Start::Index(0)).unwrap().radius;
        let net = dual_clustering(&view, 0.5 * r / 2.0, &VisitOrder::index(30)).unwrap().subset;
        assert_eq!(run.coreset, net);
        let sub = space.subset(net).unwrap();
        let centers = gonzalez(&sub, 4, Start::Index(0)).unwrap().centers;
        assert_eq!(run.result.centers, centers);
    }

    #[test]
    fn generalized_ships_k_per_machine() {
        for local in [LocalAlgo::Gonzalez, LocalAlgo::Parametric] {
            let space = planar(14, 3);
            let opt = exact_kcenter(&space.view(), 3).unwrap().radius;
            let p = partition(14, 2, Strategy::Arbitrary, None).unwrap();
            let run = generalized_kcenter(&space, &p, 3, local).unwrap();
            assert_eq!(run.trace.items_per_round[0], 6);
            assert!(run.result.radius <= 4.0 * opt);
        }
    }

    #[test]
    fn fixed_k_bound() {
        for seed in 0..10 {
            let space = planar(12, seed);
            let opt = exact_kcenter(&space.view(), 2).unwrap().radius;
            let p = partition(12, 2, Strategy::Arbitrary, None).unwrap();
            let run = fixed_k_kcenter(&space, &p, 2, 1.0).unwrap();
            assert!(run.result.radius <= 4.0 * opt);
            let tight = fixed_k_kcenter(&space, &p, 2, 0.25).unwrap();
            assert!(tight.result.radius <= 1.5625 * opt);
            assert!(tight.subsets_enumerated.unwrap() >= 1);
        }
        let space = planar(12, 0);
        let p = partition(12, 1, Strategy::Arbitrary, None).unwrap();
        assert!(fixed_k_kcenter(&space, &p, 3, 2.0).unwrap().result.centers.len() <= 3);
    }

    #[test]
    fn duplicate_heavy_machines() {
        let space = MetricSpace::euclidean(PointSet::new(vec![vec![1.0, 1.0]; 8]).unwrap());
        let p = partition(8, 2, Strategy::Arbitrary, None).unwrap();
        let run = composable_kcenter(&space, &p, 2, 0.5).unwrap();
        assert_eq!(run.result.radius, 0.0);
        assert_eq!(run.coreset, vec![0, 4]);
    }

    #[test]
    fn usage_errors() {
        let space = planar(10, 0);
        let p = partition(10, 2, Strategy::Arbitrary, None).unwrap();
        assert!(composable_kcenter(&space, &p, 0, 0.5).is_err());
        assert!(composable_kcenter(&space, &p, 2, 0.0).is_err());
        let short = partition(8, 2, Strategy::Arbitrary, None).unwrap();
        assert!(composable_kcenter(&space, &short, 2, 0.5).is_err());
    }
}
