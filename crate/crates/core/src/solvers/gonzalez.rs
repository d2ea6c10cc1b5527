use std::time::Instant;

use rand::Rng;

use super::{check_k, Algo, ClusteringResult};
use crate::metric::MetricView;
use crate::rng::{stream, Stream};
use crate::Result;

/// First center of a farthest-first traversal.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Start {
    /// Local index into the view.
    Index(usize),
    /// Uniform choice drawn from the seed's start stream.
    Random(u64),
}

/// Farthest-first traversal. Stops early once every point coincides with a
/// center, so fewer than `k` centers are returned only when the radius is 0.
/// Uses at most `n·k` distance evaluations.
pub fn gonzalez(view: &MetricView<'_>, k: usize, start: Start) -> Result<ClusteringResult> {
    let n = view.len();
    check_k(k, n)?;
    let clock = Instant::now();
    let before = view.work();
    let (first, seed) = match start {
        Start::Index(i) => {
            if i >= n {
                return Err(crate::Error::usage(format!("start index {i} out of range")));
            }
            (i, None)
        }
        Start::Random(seed) => (stream(seed, Stream::Start).random_range(0..n), Some(seed)),
    };

    let mut centers = vec![first];
    let mut nearest = vec![first; n];
    let mut gap: Vec<f64> = (0..n).map(|p| view.dist(p, first)).collect();
    loop {
        // farthest point, lowest index on ties
        let (far, far_gap) = gap
            .iter()
            .enumerate()
            .fold((0, f64::NEG_INFINITY), |best, (p, &g)| if g > best.1 { (p, g) } else { best });
        if centers.len() == k || far_gap == 0.0 {
            break;
        }
        centers.push(far);
        for p in 0..n {
            let d = view.dist(p, far);
            if d < gap[p] || (d == gap[p] && far < nearest[p]) {
                gap[p] = d;
                nearest[p] = far;
            }
        }
    }
    let radius = gap.iter().copied().fold(0.0, f64::max);
    Ok(ClusteringResult {
        algo: Algo::Gonzalez,
        k,
        epsilon: None,
        seed,
        radius,
        centers: centers.iter().map(|&c| view.global(c)).collect(),
        assignment: nearest.iter().map(|&c| view.global(c)).collect(),
        work: view.work() - before,
        wall_time_s: clock.elapsed().as_secs_f64(),
    })
}
