//! Simulated MapReduce execution of the composable-coreset pipelines.
//!
//! Machines are logical task scopes over disjoint parts of the input. A round
//! is a machine-local phase followed by a message exchange; the simulator
//! counts every shipped item (a point id, a center, a label or a scalar),
//! including items a machine sends to itself. Machine 0 aggregates.
//! Machine-local phases run on the rayon pool and are merged in ascending
//! machine order, so results do not depend on scheduling.

mod dbscan;
mod pipelines;

use rand::seq::SliceRandom;
use serde::Serialize;

use crate::rng::{stream, Stream};
use crate::{Error, Result};

pub use dbscan::{
    canonical_labels, core_points, dbscan_coreset, reference_dbscan, DbscanCoresetResult,
    DbscanLabels,
};
pub use pipelines::{
    composable_kcenter, fixed_k_kcenter, generalized_kcenter, LocalAlgo, PipelineRun,
};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    /// Contiguous index ranges.
    Arbitrary,
    /// Seeded shuffle, then contiguous ranges.
    Random(u64),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Partition {
    /// Sorted global ids per machine.
    pub machine_sets: Vec<Vec<usize>>,
    pub strategy: Strategy,
    /// Per-machine capacity `m`.
    pub capacity: usize,
}

impl Partition {
    pub fn machines(&self) -> usize {
        self.machine_sets.len()
    }

    pub fn n(&self) -> usize {
        self.machine_sets.iter().map(Vec::len).sum()
    }
}

/// Splits `0..n` over `machines` machines of capacity `capacity` (default
/// `⌈n/L⌉`). Sizes differ by at most one; the first `n mod L` machines get the
/// larger share.
pub fn partition(
    n: usize,
    machines: usize,
    strategy: Strategy,
    capacity: Option<usize>,
) -> Result<Partition> {
    if machines == 0 {
        return Err(Error::usage("L must be at least 1"));
    }
    if machines > n {
        return Err(Error::usage(format!("L = {machines} exceeds the number of points n = {n}")));
    }
    let capacity = capacity.unwrap_or_else(|| n.div_ceil(machines));
    if capacity.checked_mul(machines).is_some_and(|total| total < n) {
        return Err(Error::usage(format!(
            "L·m = {machines}·{capacity} cannot hold n = {n} points"
        )));
    }
    let mut ids: Vec<usize> = (0..n).collect();
    if let Strategy::Random(seed) = strategy {
        ids.shuffle(&mut stream(seed, Stream::Partition));
    }
    let (base, extra) = (n / machines, n % machines);
    let mut machine_sets = Vec::with_capacity(machines);
    let mut at = 0;
    for i in 0..machines {
        let size = base + usize::from(i < extra);
        let mut set = ids[at..at + size].to_vec();
        set.sort_unstable();
        machine_sets.push(set);
        at += size;
    }
    Ok(Partition { machine_sets, strategy, capacity })
}

/// Round and communication accounting of one pipeline run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SimulationTrace {
    pub round_names: Vec<&'static str>,
    pub items_per_round: Vec<u64>,
    pub peak_items_per_machine: Vec<u64>,
    pub total_work: u64,
    #[serde(skip)]
    resident: Vec<u64>,
}

impl SimulationTrace {
    pub(crate) fn new(partition: &Partition) -> Self {
        let resident: Vec<u64> = partition.machine_sets.iter().map(|s| s.len() as u64).collect();
        SimulationTrace {
            round_names: Vec::new(),
            items_per_round: Vec::new(),
            peak_items_per_machine: resident.clone(),
            total_work: 0,
            resident,
        }
    }

    pub fn rounds(&self) -> usize {
        self.round_names.len()
    }

    /// Closes a round in which machine `i` received `received[i]` items.
    pub(crate) fn round(&mut self, name: &'static str, received: &[u64]) {
        debug_assert_eq!(received.len(), self.resident.len());
        self.round_names.push(name);
        self.items_per_round.push(received.iter().sum());
        for ((peak, &res), &got) in
            self.peak_items_per_machine.iter_mut().zip(&self.resident).zip(received)
        {
            *peak = (*peak).max(res + got);
        }
    }

    /// `items` sent to machine 0.
    pub(crate) fn gather(&mut self, name: &'static str, items: u64) {
        let mut received = vec![0; self.resident.len()];
        received[0] = items;
        self.round(name, &received);
    }

    /// `items` sent to every machine.
    pub(crate) fn broadcast(&mut self, name: &'static str, items: u64) {
        let received = vec![items; self.resident.len()];
        self.round(name, &received);
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct TraceReport {
    pub rounds: usize,
    pub items_per_round: Vec<u64>,
    pub peak_items_per_machine: Vec<u64>,
    pub total_work: u64,
}

pub fn trace_report(trace: &SimulationTrace) -> TraceReport {
    TraceReport {
        rounds: trace.rounds(),
        items_per_round: trace.items_per_round.clone(),
        peak_items_per_machine: trace.peak_items_per_machine.clone(),
        total_work: trace.total_work,
    }
}
