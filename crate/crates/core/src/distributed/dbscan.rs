use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::{Partition, SimulationTrace};
use crate::coreset::dual_clustering;
use crate::graph::{build_disk_graph, connected_components, VisitOrder};
use crate::metric::{MetricSpace, MetricView};
use crate::{Error, Result};

/// Per-point density labels.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DbscanLabels {
    pub core: Vec<bool>,
    /// Cluster of each point; `None` is noise.
    pub labels: Vec<Option<usize>>,
    pub clusters: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DbscanCoresetResult {
    /// Global ids, ascending.
    pub coreset: Vec<usize>,
    /// Machine that contributed each coreset point.
    pub provenance: Vec<usize>,
    /// Component of each coreset point in the disk graph at `eps`.
    pub component_labels: Vec<usize>,
    pub points: DbscanLabels,
    pub eps: f64,
    pub minpts: usize,
}

/// A point is core when at least `minpts` other points lie within `eps`.
pub fn core_points(view: &MetricView<'_>, eps: f64, minpts: usize) -> Vec<bool> {
    let n = view.len();
    let mut count = vec![0usize; n];
    for i in 0..n {
        for j in i + 1..n {
            if view.dist(i, j) <= eps {
                count[i] += 1;
                count[j] += 1;
            }
        }
    }
    count.into_iter().map(|c| c >= minpts).collect()
}

/// Relabels clusters `0, 1, …` in order of first appearance.
pub fn canonical_labels(labels: &[Option<usize>]) -> Vec<Option<usize>> {
    let mut map = HashMap::new();
    labels
        .iter()
        .map(|l| {
            l.map(|l| {
                let next = map.len();
                *map.entry(l).or_insert(next)
            })
        })
        .collect()
}

fn check(eps: f64, minpts: usize) -> Result<()> {
    if !(eps > 0.0 && eps.is_finite()) {
        return Err(Error::usage(format!("eps must be positive, got {eps}")));
    }
    if minpts == 0 {
        return Err(Error::usage("minpts must be at least 1"));
    }
    Ok(())
}

/// Sequential DBSCAN: clusters are connected components of the `eps` disk
/// graph on core points; a non-core point joins the cluster of its nearest
/// core point within `eps` (lowest index on ties), otherwise it is noise.
pub fn reference_dbscan(space: &MetricSpace, eps: f64, minpts: usize) -> Result<DbscanLabels> {
    check(eps, minpts)?;
    let view = space.view();
    let core = core_points(&view, eps, minpts);
    let core_ids: Vec<usize> = (0..space.len()).filter(|&i| core[i]).collect();
    let core_view = space.subset(core_ids.iter().copied())?;
    let comp = connected_components(&build_disk_graph(&core_view, eps)?);
    let clusters = comp.iter().max().map_or(0, |m| m + 1);
    let mut labels = vec![None; space.len()];
    for (&g, &c) in core_ids.iter().zip(&comp) {
        labels[g] = Some(c);
    }
    for p in (0..space.len()).filter(|&p| !core[p]) {
        let nearest = core_ids
            .iter()
            .zip(&comp)
            .map(|(&g, &c)| (space.raw_distance(p, g), c))
            .fold((f64::INFINITY, None), |b, (d, c)| if d < b.0 { (d, Some(c)) } else { b });
        if nearest.0 <= eps {
            labels[p] = nearest.1;
        }
    }
    Ok(DbscanLabels { core, labels, clusters })
}

/// Distributed DBSCAN through a coreset of core points. Four rounds: core
/// identification, shipping the per-machine nets (radius `eps/2`) to machine
/// 0, connected components of the `eps` disk graph on their union, and a
/// broadcast of the labelled coreset. Every point then takes the label of its
/// nearest coreset point (non-core points only within `eps`).
pub fn dbscan_coreset(
    space: &MetricSpace,
    partition: &Partition,
    eps: f64,
    minpts: usize,
) -> Result<(DbscanCoresetResult, SimulationTrace)> {
    check(eps, minpts)?;
    if partition.n() != space.len() {
        return Err(Error::usage("partition does not match the input size"));
    }
    let mut trace = SimulationTrace::new(partition);
    let machines = partition.machines();

    let view = space.view();
    let core = core_points(&view, eps, minpts);
    trace.total_work += view.work();
    trace.round("identify-core", &vec![0; machines]);

    let nets: Vec<(Vec<usize>, u64)> = partition
        .machine_sets
        .par_iter()
        .map(|ids| {
            let local = space.subset(ids.iter().copied().filter(|&g| core[g]))?;
            if local.is_empty() {
                return Ok((Vec::new(), 0));
            }
            let net = dual_clustering(&local, eps / 2.0, &VisitOrder::index(local.len()))?;
            Ok((net.subset, local.work()))
        })
        .collect::<Result<_>>()?;
    trace.total_work += nets.iter().map(|m| m.1).sum::<u64>();
    trace.gather("ship-coresets", nets.iter().map(|m| m.0.len() as u64).sum());

    let mut tagged: Vec<(usize, usize)> = nets
        .iter()
        .enumerate()
        .flat_map(|(m, (net, _))| net.iter().map(move |&g| (g, m)))
        .collect();
    tagged.sort_unstable();
    let coreset: Vec<usize> = tagged.iter().map(|t| t.0).collect();
    let provenance: Vec<usize> = tagged.iter().map(|t| t.1).collect();
    let union_view = space.subset(coreset.iter().copied())?;
    let component_labels = connected_components(&build_disk_graph(&union_view, eps)?);
    trace.total_work += union_view.work();
    let clusters = component_labels.iter().max().map_or(0, |m| m + 1);
    trace.round("components", &vec![0; machines]);
    trace.broadcast("broadcast-labels", coreset.len() as u64);

    let per_machine: Vec<(Vec<Option<usize>>, u64)> = partition
        .machine_sets
        .par_iter()
        .map(|ids| {
            let mut work = 0;
            let labels = ids
                .iter()
                .map(|&p| {
                    let mut best = (f64::INFINITY, None);
                    for (&c, &l) in coreset.iter().zip(&component_labels) {
                        work += 1;
                        let d = space.raw_distance(p, c);
                        if d < best.0 {
                            best = (d, Some(l));
                        }
                    }
                    if core[p] || best.0 <= eps {
                        best.1
                    } else {
                        None
                    }
                })
                .collect();
            (labels, work)
        })
        .collect();
    let mut labels = vec![None; space.len()];
    for (ids, (local, work)) in partition.machine_sets.iter().zip(per_machine) {
        for (&g, l) in ids.iter().zip(local) {
            labels[g] = l;
        }
        trace.total_work += work;
    }

    let result = DbscanCoresetResult {
        coreset,
        provenance,
        component_labels,
        points: DbscanLabels { core, labels, clusters },
        eps,
        minpts,
    };
    Ok((result, trace))
}
