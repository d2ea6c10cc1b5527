//! r-nets for dual clustering and coresets for k-center.
//!
//! A net at radius `r` is the greedy maximal independent set of the squared
//! disk graph at threshold `r/2`: every point is within two hops of length
//! `r/2` of the net, and net points are pairwise more than `r/2` apart.

use std::io::Write;

use serde::Serialize;

use crate::graph::{approx_dominating_set, Graph, VisitOrder};
use crate::metric::MetricView;
use crate::solvers::{gonzalez, ClusteringResult, Start};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Mode {
    ByK,
    ByRadius,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoresetResult {
    /// Global ids, ascending.
    pub subset: Vec<usize>,
    /// Guaranteed covering radius.
    pub cover_radius: f64,
    /// Largest point-to-subset distance actually observed.
    pub achieved_radius: f64,
    /// Subset points are pairwise strictly farther apart than this.
    pub separation: f64,
    pub mode: Mode,
    /// `k` in by-k mode, `r` in by-radius mode.
    pub requested: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub halvings: Option<u32>,
    pub size: usize,
    /// In by-k mode: the most subset points falling in one farthest-first
    /// cluster, minus one.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_star_degree: Option<usize>,
    pub work: u64,
}

/// Greedy r-net of the view: covers every point within `r`.
pub fn dual_clustering(view: &MetricView<'_>, r: f64, order: &VisitOrder) -> Result<CoresetResult> {
    if !(r > 0.0 && r.is_finite()) {
        return Err(Error::usage(format!("dual clustering radius must be positive, got {r}")));
    }
    let before = view.work();
    let (locals, achieved) = net(view, r, order)?;
    Ok(CoresetResult {
        size: locals.len(),
        subset: sorted_globals(view, &locals),
        cover_radius: r,
        achieved_radius: achieved,
        separation: r / 2.0,
        mode: Mode::ByRadius,
        requested: r,
        halvings: None,
        max_star_degree: None,
        work: view.work() - before,
    })
}

/// Net at radius `r` as local indices in pick order, plus the achieved radius.
fn net(view: &MetricView<'_>, r: f64, order: &VisitOrder) -> Result<(Vec<usize>, f64)> {
    let n = view.len();
    if order.len() != n {
        return Err(Error::usage(format!("visit order has {} entries for {n} points", order.len())));
    }
    let d = view.pairwise();
    let threshold = r / 2.0;
    let edges = (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)));
    let g = Graph::from_edges(n, edges.filter(|&(i, j)| d[i * n + j] <= threshold))?;
    let picks = approx_dominating_set(&g, order);
    let achieved = (0..n)
        .map(|p| picks.iter().map(|&c| d[p * n + c]).fold(f64::INFINITY, f64::min))
        .fold(0.0, f64::max);
    Ok((picks, achieved))
}

fn sorted_globals(view: &MetricView<'_>, locals: &[usize]) -> Vec<usize> {
    let mut g: Vec<usize> = locals.iter().map(|&l| view.global(l)).collect();
    g.sort_unstable();
    g
}

/// One representative per distinct location, scanned in `order`.
fn distinct_points(view: &MetricView<'_>, order: &VisitOrder) -> Vec<usize> {
    let mut kept: Vec<usize> = Vec::new();
    for &p in order.as_slice() {
        if kept.iter().all(|&q| view.dist(p, q) > 0.0) {
            kept.push(p);
        }
    }
    kept
}

fn star_degree(seed: &ClusteringResult, view: &MetricView<'_>, subset: &[usize]) -> usize {
    let mut per_cluster = std::collections::BTreeMap::new();
    for &g in subset {
        let owner = seed.assignment[view.local(g).expect("subset point in view")];
        *per_cluster.entry(owner).or_insert(0usize) += 1;
    }
    per_cluster.values().max().copied().unwrap_or(1) - 1
}

fn degenerate(view: &MetricView<'_>, k: usize, order: &VisitOrder, before: u64) -> CoresetResult {
    let kept = distinct_points(view, order);
    CoresetResult {
        size: kept.len(),
        subset: sorted_globals(view, &kept),
        cover_radius: 0.0,
        achieved_radius: 0.0,
        separation: 0.0,
        mode: Mode::ByK,
        requested: k as f64,
        halvings: None,
        max_star_degree: Some(0),
        work: view.work() - before,
    }
}

/// Farthest-first radius `r` for `k` centers (started at the first point of
/// `order`), then a net at `r / 2^halvings`.
pub fn coreset_for_k(
    view: &MetricView<'_>,
    k: usize,
    halvings: u32,
    order: &VisitOrder,
) -> Result<CoresetResult> {
    let before = view.work();
    let start = order.first().ok_or_else(|| Error::usage("empty view"))?;
    let seed = gonzalez(view, k, Start::Index(start))?;
    if seed.radius == 0.0 {
        let mut res = degenerate(view, k, order, before);
        res.halvings = Some(halvings);
        return Ok(res);
    }
    let r = seed.radius / 2f64.powi(halvings as i32);
    let (locals, achieved) = net(view, r, order)?;
    let subset = sorted_globals(view, &locals);
    Ok(CoresetResult {
        size: subset.len(),
        max_star_degree: Some(star_degree(&seed, view, &subset)),
        subset,
        cover_radius: r,
        achieved_radius: achieved,
        separation: r / 2.0,
        mode: Mode::ByK,
        requested: k as f64,
        halvings: Some(halvings),
        work: view.work() - before,
    })
}

/// Smallest `R` with `2^R ≥ 2/ε`.
pub fn halvings_for_epsilon(epsilon: f64) -> Result<u32> {
    if !(epsilon > 0.0 && epsilon <= 2.0) {
        return Err(Error::usage(format!("epsilon must lie in (0, 2], got {epsilon}")));
    }
    let mut r = 0u32;
    while 2f64.powi(r as i32) * epsilon < 2.0 {
        r += 1;
    }
    Ok(r)
}

/// Coreset whose optimal k-center radius is within `1+ε` of the optimum on
/// the whole view.
pub fn epsilon_coreset(
    view: &MetricView<'_>,
    k: usize,
    epsilon: f64,
    order: &VisitOrder,
) -> Result<CoresetResult> {
    coreset_for_k(view, k, halvings_for_epsilon(epsilon)?, order)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TradeoffRow {
    #[serde(rename = "R")]
    pub halvings: u32,
    pub size: usize,
    pub cover_radius: f64,
}

/// Net sizes for `R = 0..=max_halvings`. Each row's net is grown from the
/// previous one (its points are scanned first), so sizes never decrease.
pub fn tradeoff_table(
    view: &MetricView<'_>,
    k: usize,
    max_halvings: u32,
    order: &VisitOrder,
) -> Result<Vec<TradeoffRow>> {
    let start = order.first().ok_or_else(|| Error::usage("empty view"))?;
    let seed = gonzalez(view, k, Start::Index(start))?;
    let n = view.len();
    let mut rows = Vec::new();
    if seed.radius == 0.0 {
        let size = distinct_points(view, order).len();
        for h in 0..=max_halvings {
            rows.push(TradeoffRow { halvings: h, size, cover_radius: 0.0 });
        }
        return Ok(rows);
    }
    let mut prev: Vec<usize> = Vec::new();
    for h in 0..=max_halvings {
        let r = seed.radius / 2f64.powi(h as i32);
        let mut perm = prev.clone();
        let mut placed = vec![false; n];
        for &p in &prev {
            placed[p] = true;
        }
        perm.extend(order.as_slice().iter().copied().filter(|&p| !placed[p]));
        let nested = VisitOrder::from_permutation(perm)?;
        let (picks, _) = net(view, r, &nested)?;
        rows.push(TradeoffRow { halvings: h, size: picks.len(), cover_radius: r });
        prev = picks;
    }
    Ok(rows)
}

/// CSV with header `R,size,cover_radius`.
pub fn write_tradeoff_csv(rows: &[TradeoffRow], out: impl Write) -> Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for row in rows {
        w.serialize(row)?;
    }
    w.flush()?;
    Ok(())
}
