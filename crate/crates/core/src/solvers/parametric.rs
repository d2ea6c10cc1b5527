use std::time::Instant;

use super::{check_k, Algo, ClusteringResult};
use crate::graph::VisitOrder;
use crate::metric::MetricView;
use crate::{Error, Result};

/// Parametric pruning: the smallest pairwise distance `τ` at which the
/// greedy maximal independent set of the squared disk graph (threshold `τ`,
/// scanned in `order`) has at most `k` vertices. Those vertices are the
/// centers.
///
/// Candidates are not scanned one by one. For a fixed `τ` the greedy scan is
/// driven only by two-hop bottleneck distances
/// `h(u, v) = min_w max(d(u, w), d(w, v))`, and its first `k + 1` picks stay
/// the same until `τ` reaches the smallest `h` among them, so the search jumps
/// straight to that value. The output equals the naive candidate scan.
///
/// Evaluates every pairwise distance once; the scan itself runs on the cached
/// table.
pub fn parametric_pruning(
    view: &MetricView<'_>,
    k: usize,
    order: &VisitOrder,
) -> Result<ClusteringResult> {
    parametric_pruning_with_candidate(view, k, order).map(|(r, _)| r)
}

/// As [`parametric_pruning`], also returning the accepted candidate `τ`.
pub fn parametric_pruning_with_candidate(
    view: &MetricView<'_>,
    k: usize,
    order: &VisitOrder,
) -> Result<(ClusteringResult, f64)> {
    let n = view.len();
    check_k(k, n)?;
    if order.len() != n {
        return Err(Error::usage(format!(
            "visit order has {} entries for {n} points",
            order.len()
        )));
    }
    let clock = Instant::now();
    let before = view.work();
    let table = Table::new(view);

    let (centers, tau) = if n == 1 {
        (vec![0], 0.0)
    } else {
        let mut tau = table.min_off_diagonal();
        loop {
            let picks = table.greedy(order, tau, k + 1);
            if picks.len() <= k {
                break (picks, tau);
            }
            let next = table.min_pair_bottleneck(&picks);
            if next.is_nan() || next <= tau {
                return Err(Error::Internal(format!(
                    "parametric scan did not advance past {tau}"
                )));
            }
            tau = next;
        }
    };

    let mut sorted = centers.clone();
    sorted.sort_unstable();
    let mut assignment = Vec::with_capacity(n);
    let mut radius: f64 = 0.0;
    for p in 0..n {
        let (d, c) = sorted
            .iter()
            .map(|&c| (table.d(p, c), c))
            .fold((f64::INFINITY, usize::MAX), |b, x| if x.0 < b.0 { x } else { b });
        assignment.push(view.global(c));
        radius = radius.max(d);
    }
    let result = ClusteringResult {
        algo: Algo::Parametric,
        k,
        epsilon: None,
        seed: match order.provenance {
            crate::graph::OrderProvenance::SeededRandom(s) => Some(s),
            _ => None,
        },
        radius,
        centers: centers.iter().map(|&c| view.global(c)).collect(),
        assignment,
        work: view.work() - before,
        wall_time_s: clock.elapsed().as_secs_f64(),
    };
    Ok((result, tau))
}

/// Pairwise distances plus, per point, the other points sorted by distance.
struct Table {
    n: usize,
    d: Vec<f64>,
    by_dist: Vec<Vec<u32>>,
}

impl Table {
    fn new(view: &MetricView<'_>) -> Self {
        let n = view.len();
        let d = view.pairwise();
        let by_dist = (0..n)
            .map(|u| {
                let row = &d[u * n..(u + 1) * n];
                let mut idx: Vec<u32> = (0..n as u32).filter(|&v| v as usize != u).collect();
                idx.sort_by(|&a, &b| row[a as usize].total_cmp(&row[b as usize]).then(a.cmp(&b)));
                idx
            })
            .collect();
        Table { n, d, by_dist }
    }

    #[inline]
    fn d(&self, u: usize, v: usize) -> f64 {
        self.d[u * self.n + v]
    }

    fn min_off_diagonal(&self) -> f64 {
        (0..self.n)
            .filter_map(|u| self.by_dist[u].first().map(|&v| self.d(u, v as usize)))
            .fold(f64::INFINITY, f64::min)
    }

    /// Points within `tau` of `u`, excluding `u`.
    fn ball(&self, u: usize, tau: f64) -> impl Iterator<Item = usize> + '_ {
        self.by_dist[u]
            .iter()
            .map(|&v| v as usize)
            .take_while(move |&v| self.d(u, v) <= tau)
    }

    /// Greedy MIS of the squared disk graph at `tau`, stopping after `limit`
    /// picks.
    fn greedy(&self, order: &VisitOrder, tau: f64, limit: usize) -> Vec<usize> {
        let mut blocked = vec![false; self.n];
        let mut expanded = vec![false; self.n];
        let mut picks = Vec::new();
        for &v in order.as_slice() {
            if blocked[v] {
                continue;
            }
            picks.push(v);
            if picks.len() == limit {
                break;
            }
            blocked[v] = true;
            expanded[v] = true;
            for t in self.ball(v, tau) {
                blocked[t] = true;
                if !std::mem::replace(&mut expanded[t], true) {
                    for w in self.ball(t, tau) {
                        blocked[w] = true;
                    }
                }
            }
        }
        picks
    }

    fn bottleneck(&self, u: usize, v: usize) -> f64 {
        (0..self.n)
            .map(|w| self.d(u, w).max(self.d(w, v)))
            .fold(f64::INFINITY, f64::min)
    }

    fn min_pair_bottleneck(&self, picks: &[usize]) -> f64 {
        let mut best = f64::INFINITY;
        for (i, &a) in picks.iter().enumerate() {
            for &b in &picks[i + 1..] {
                best = best.min(self.bottleneck(a, b));
            }
        }
        best
    }
}
