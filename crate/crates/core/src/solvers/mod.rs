//! Sequential k-center solvers.
//!
//! All solvers take a [`MetricView`] and report centers and assignments as
//! global point ids. Ties are always broken towards the lowest index.

mod efficient;
mod exact;
mod gonzalez;
mod parametric;

use serde::Serialize;

use crate::metric::MetricView;
use crate::{Error, Result};

pub use efficient::{efficient_parametric_pruning, RadiusSchedule};
pub use exact::{binomial, exact_kcenter, exact_optimal_subsets, EXACT_SUBSET_LIMIT};
pub use gonzalez::{gonzalez, Start};
pub use parametric::{parametric_pruning, parametric_pruning_with_candidate};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algo {
    Gonzalez,
    Parametric,
    Efficient,
    Exact,
    Composable,
    Generalized,
    FixedK,
}

impl Algo {
    pub fn name(self) -> &'static str {
        match self {
            Algo::Gonzalez => "gonzalez",
            Algo::Parametric => "parametric",
            Algo::Efficient => "efficient",
            Algo::Exact => "exact",
            Algo::Composable => "composable",
            Algo::Generalized => "generalized",
            Algo::FixedK => "fixedk",
        }
    }
}

impl std::fmt::Display for Algo {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

/// Output of a k-center run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ClusteringResult {
    pub algo: Algo,
    pub k: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    /// Largest point-to-assigned-center distance.
    pub radius: f64,
    /// Global ids, in the order the solver chose them.
    pub centers: Vec<usize>,
    /// For each point of the input view, the global id of its nearest center.
    #[serde(skip)]
    pub assignment: Vec<usize>,
    /// Distance evaluations spent by this run.
    pub work: u64,
    #[serde(skip)]
    pub wall_time_s: f64,
}

impl ClusteringResult {
    pub fn sorted_centers(&self) -> Vec<usize> {
        let mut c = self.centers.clone();
        c.sort_unstable();
        c
    }
}

pub(crate) fn check_k(k: usize, n: usize) -> Result<()> {
    if k == 0 {
        return Err(Error::usage("k must be at least 1"));
    }
    if k > n {
        return Err(Error::usage(format!("k = {k} exceeds the number of points n = {n}")));
    }
    Ok(())
}

/// Nearest-center assignment over the whole view, `len()·|centers|`
/// evaluations. `centers` are local indices; the returned assignment holds
/// global ids. Ties go to the center with the lowest index.
pub fn assign(view: &MetricView<'_>, centers: &[usize]) -> (Vec<usize>, f64) {
    let mut sorted = centers.to_vec();
    sorted.sort_unstable();
    let mut assignment = Vec::with_capacity(view.len());
    let mut radius: f64 = 0.0;
    for p in 0..view.len() {
        let mut best = (f64::INFINITY, usize::MAX);
        for &c in &sorted {
            let d = view.dist(p, c);
            if d < best.0 {
                best = (d, c);
            }
        }
        assignment.push(view.global(best.1));
        radius = radius.max(best.0);
    }
    (assignment, radius)
}

/// Assignment and radius of a set of global center ids over `view`. Centers
/// need not belong to the view.
pub fn evaluate_centers(view: &MetricView<'_>, centers: &[usize]) -> Result<(Vec<usize>, f64)> {
    let space = view.space();
    let mut sorted = centers.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() {
        return Err(Error::usage("no centers to evaluate"));
    }
    let all: Vec<usize> = view.globals();
    let union = space.subset(all.iter().copied().chain(sorted.iter().copied()))?;
    let center_locals: Vec<usize> = sorted.iter().map(|&g| union.local(g).unwrap()).collect();
    let mut assignment = Vec::with_capacity(all.len());
    let mut radius: f64 = 0.0;
    for &g in &all {
        let p = union.local(g).unwrap();
        let mut best = (f64::INFINITY, usize::MAX);
        for (&c, &cg) in center_locals.iter().zip(&sorted) {
            let d = union.dist(p, c);
            if d < best.0 {
                best = (d, cg);
            }
        }
        assignment.push(best.1);
        radius = radius.max(best.0);
    }
    view.charge(union.work());
    Ok((assignment, radius))
}

/// Anti-cover certificate: the centers are pairwise more than `radius` apart
/// and every point lies within `radius` of a center, i.e. the centers form a
/// maximal independent set of the disk graph at threshold `radius`.
pub fn is_gonzalez_consistent(result: &ClusteringResult, view: &MetricView<'_>) -> bool {
    let space = view.space();
    let r = result.radius;
    let c = &result.centers;
    for (a, &ca) in c.iter().enumerate() {
        for &cb in &c[a + 1..] {
            if space.raw_distance(ca, cb) <= r {
                return false;
            }
        }
    }
    (0..view.len()).all(|p| {
        let g = view.global(p);
        c.iter().any(|&ci| space.raw_distance(g, ci) <= r)
    })
}

/// Smallest threshold `τ` at which `centers` is a maximal independent set of
/// the squared disk graph at `τ`, if one exists. Such a set is a possible
/// output of parametric pruning for some visit order. Uses an uncounted
/// `O(|C|·n²)` scan.
pub fn parametric_certificate(centers: &[usize], view: &MetricView<'_>) -> Option<f64> {
    let space = view.space();
    let ids = view.globals();
    // two-hop bottleneck distance through any point of the view
    let hop2 = |a: usize, b: usize| {
        ids.iter()
            .map(|&w| space.raw_distance(a, w).max(space.raw_distance(w, b)))
            .fold(f64::INFINITY, f64::min)
    };
    let mut upper = f64::INFINITY;
    for (i, &a) in centers.iter().enumerate() {
        for &b in &centers[i + 1..] {
            upper = upper.min(hop2(a, b));
        }
    }
    let lower = ids
        .iter()
        .map(|&v| centers.iter().map(|&c| hop2(v, c)).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    (lower < upper).then_some(lower)
}
