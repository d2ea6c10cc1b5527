use std::time::Instant;

use super::{assign, check_k, gonzalez, Algo, ClusteringResult, Start};
use crate::metric::MetricView;
use crate::{Error, Result};

/// Geometric candidate radii `lower·growth^t` for `t = 0, 1, …` while they
/// do not exceed `upper_factor·lower`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RadiusSchedule {
    pub lower: f64,
    pub growth: f64,
    pub upper_factor: f64,
}

impl RadiusSchedule {
    pub fn new(lower: f64, growth: f64, upper_factor: f64) -> Result<Self> {
        if !(lower > 0.0 && lower.is_finite()) {
            return Err(Error::usage(format!("schedule lower bound must be positive, got {lower}")));
        }
        if !(growth > 1.0 && growth.is_finite()) {
            return Err(Error::usage(format!("schedule growth must exceed 1, got {growth}")));
        }
        Ok(RadiusSchedule { lower, growth, upper_factor })
    }

    /// Starts at `R0/2`, grows by `1+ε` and stops past `2(1+ε)R0`.
    pub fn from_gonzalez(r0: f64, epsilon: f64) -> Result<Self> {
        Self::new(r0 / 2.0, 1.0 + epsilon, 4.0 * (1.0 + epsilon))
    }

    pub fn upper(&self) -> f64 {
        self.lower * self.upper_factor
    }

    pub fn candidates(&self) -> impl Iterator<Item = f64> + '_ {
        let upper = self.upper();
        (0..)
            .map(move |t| self.lower * self.growth.powi(t))
            .take_while(move |&r| r <= upper)
    }
}

/// Parametric pruning over a geometric radius schedule seeded by a
/// farthest-first run. Each candidate is tested with one greedy sweep in
/// index order: the first unmarked point opens a center and marks every
/// unmarked point within the candidate radius. The first candidate needing at
/// most `k` centers wins.
pub fn efficient_parametric_pruning(
    view: &MetricView<'_>,
    k: usize,
    epsilon: f64,
) -> Result<ClusteringResult> {
    let n = view.len();
    check_k(k, n)?;
    if !(epsilon > 0.0 && epsilon.is_finite()) {
        return Err(Error::usage(format!("epsilon must be positive, got {epsilon}")));
    }
    let clock = Instant::now();
    let before = view.work();
    let seed = gonzalez(view, k, Start::Index(0))?;
    let finish = |centers: Vec<usize>, assignment: Vec<usize>, radius: f64| ClusteringResult {
        algo: Algo::Efficient,
        k,
        epsilon: Some(epsilon),
        seed: None,
        radius,
        centers,
        assignment,
        work: view.work() - before,
        wall_time_s: clock.elapsed().as_secs_f64(),
    };
    if seed.radius == 0.0 {
        return Ok(finish(seed.centers, seed.assignment, 0.0));
    }

    let schedule = RadiusSchedule::from_gonzalez(seed.radius, epsilon)?;
    for r in schedule.candidates() {
        if let Some(centers) = sweep(view, k, r) {
            let (assignment, radius) = assign(view, &centers);
            let centers = centers.iter().map(|&c| view.global(c)).collect();
            return Ok(finish(centers, assignment, radius));
        }
    }
    Err(Error::Internal(format!(
        "no candidate up to {} covered the input with {k} centers (farthest-first radius {})",
        schedule.upper(),
        seed.radius
    )))
}

/// Greedy cover at radius `r`; `None` as soon as a `k+1`-th center would open.
fn sweep(view: &MetricView<'_>, k: usize, r: f64) -> Option<Vec<usize>> {
    let n = view.len();
    let mut unmarked: Vec<usize> = (0..n).collect();
    let mut centers = Vec::new();
    while let Some(&c) = unmarked.first() {
        if centers.len() == k {
            return None;
        }
        centers.push(c);
        unmarked = unmarked[1..].iter().copied().filter(|&p| view.dist(c, p) > r).collect();
    }
    Some(centers)
}
