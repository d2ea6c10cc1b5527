use std::time::Instant;

use super::{check_k, Algo, ClusteringResult};
use crate::metric::MetricView;
use crate::{Error, Result};

/// Largest number of k-subsets the exhaustive search will enumerate.
pub const EXACT_SUBSET_LIMIT: u64 = 10_000_000;

/// `C(n, k)`, saturating at `u64::MAX`.
pub fn binomial(n: usize, k: usize) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k) as u64;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n as u128 - i as u128) / (i as u128 + 1);
        if acc > u64::MAX as u128 {
            return u64::MAX;
        }
    }
    acc as u64
}

fn guard(n: usize, k: usize) -> Result<u64> {
    check_k(k, n)?;
    let count = binomial(n, k);
    if count > EXACT_SUBSET_LIMIT {
        return Err(Error::Guard(format!(
            "exhaustive k-center needs C({n}, {k}) = {count} subsets, limit is {EXACT_SUBSET_LIMIT}"
        )));
    }
    Ok(count)
}

/// Depth-first enumeration of all k-subsets in lexicographic order, calling
/// `visit(subset, radius)` at each leaf. Per-level nearest-distance arrays
/// keep each step at `O(n)`.
fn enumerate(d: &[f64], n: usize, k: usize, mut visit: impl FnMut(&[usize], f64)) {
    let mut levels = vec![vec![f64::INFINITY; n]; k + 1];
    let mut chosen = Vec::with_capacity(k);
    fn rec(
        d: &[f64],
        n: usize,
        k: usize,
        from: usize,
        levels: &mut [Vec<f64>],
        chosen: &mut Vec<usize>,
        visit: &mut dyn FnMut(&[usize], f64),
    ) {
        let depth = chosen.len();
        if depth == k {
            let radius = levels[depth].iter().copied().fold(0.0, f64::max);
            visit(chosen, radius);
            return;
        }
        for c in from..=n - (k - depth) {
            let (head, tail) = levels.split_at_mut(depth + 1);
            let (prev, next) = (&head[depth], &mut tail[0]);
            for p in 0..n {
                next[p] = prev[p].min(d[c * n + p]);
            }
            chosen.push(c);
            rec(d, n, k, c + 1, levels, chosen, visit);
            chosen.pop();
        }
    }
    rec(d, n, k, 0, &mut levels, &mut chosen, &mut visit);
}

/// Optimal k-center with centers drawn from the view, by enumerating every
/// k-subset. Ties go to the lexicographically first subset.
///
/// Fails with [`Error::Guard`] when `C(n, k)` exceeds [`EXACT_SUBSET_LIMIT`].
pub fn exact_kcenter(view: &MetricView<'_>, k: usize) -> Result<ClusteringResult> {
    let n = view.len();
    guard(n, k)?;
    let clock = Instant::now();
    let before = view.work();
    let d = view.pairwise();
    let mut best: (f64, Vec<usize>) = (f64::INFINITY, Vec::new());
    enumerate(&d, n, k, |subset, radius| {
        if radius < best.0 {
            best = (radius, subset.to_vec());
        }
    });
    let (radius, centers) = best;
    let assignment = (0..n)
        .map(|p| {
            let c = centers
                .iter()
                .copied()
                .fold(usize::MAX, |b, c| if b == usize::MAX || d[p * n + c] < d[p * n + b] { c } else { b });
            view.global(c)
        })
        .collect();
    Ok(ClusteringResult {
        algo: Algo::Exact,
        k,
        epsilon: None,
        seed: None,
        radius,
        centers: centers.iter().map(|&c| view.global(c)).collect(),
        assignment,
        work: view.work() - before,
        wall_time_s: clock.elapsed().as_secs_f64(),
    })
}

/// The optimal radius and every k-subset (global ids, lexicographic) that
/// attains it.
pub fn exact_optimal_subsets(view: &MetricView<'_>, k: usize) -> Result<(f64, Vec<Vec<usize>>)> {
    let n = view.len();
    guard(n, k)?;
    let d = view.pairwise();
    let mut best = f64::INFINITY;
    let mut all = Vec::new();
    enumerate(&d, n, k, |subset, radius| {
        if radius < best {
            best = radius;
            all.clear();
        }
        if radius == best {
            all.push(subset.iter().map(|&c| view.global(c)).collect());
        }
    });
    Ok((best, all))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{MetricSpace, PointSet};
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    fn line5() -> MetricSpace {
        MetricSpace::euclidean(
            PointSet::new((0..5).map(|i| vec![0.5 * i as f64]).collect()).unwrap(),
        )
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(5, 2), 10);
        assert_eq!(binomial(14, 4), 1001);
        assert_eq!(binomial(3, 4), 0);
        assert_eq!(binomial(100, 50), 100891344545564193334812497256u128.min(u64::MAX as u128) as u64);
    }

    #[test]
    fn line_optimum() {
        let space = line5();
        let r = exact_kcenter(&space.view(), 2).unwrap();
        assert_eq!(r.radius, 0.5);
        let (best, all) = exact_optimal_subsets(&space.view(), 2).unwrap();
        assert_eq!(best, 0.5);
        assert!(all.contains(&vec![1, 3]));
        assert_eq!(all[0], r.centers);
    }

    #[test]
    fn k_equals_n() {
        let space = line5();
        assert_eq!(exact_kcenter(&space.view(), 5).unwrap().radius, 0.0);
    }

    #[test]
    fn guard_refuses_large_enumerations() {
        let space = MetricSpace::euclidean(
            PointSet::new((0..60).map(|i| vec![i as f64]).collect()).unwrap(),
        );
        assert!(matches!(exact_kcenter(&space.view(), 10), Err(Error::Guard(_))));
    }

    #[test]
    fn matches_flat_enumeration() {
        let mut rng = ChaCha8Rng::seed_from_u64(11);
        for _ in 0..20 {
            let rows: Vec<Vec<f64>> =
                (0..10).map(|_| vec![rng.random::<f64>(), rng.random::<f64>()]).collect();
            let space = MetricSpace::euclidean(PointSet::new(rows).unwrap());
            let view = space.view();
            let mut best = f64::INFINITY;
            for mask in 0u32..1 << 10 {
                if mask.count_ones() != 3 {
                    continue;
                }
                let centers: Vec<usize> = (0..10).filter(|i| mask >> i & 1 == 1).collect();
                let r = (0..10)
                    .map(|p| {
                        centers
                            .iter()
                            .map(|&c| space.distance(p, c).unwrap())
                            .fold(f64::INFINITY, f64::min)
                    })
                    .fold(0.0, f64::max);
                best = best.min(r);
            }
            assert_eq!(exact_kcenter(&view, 3).unwrap().radius, best);
        }
    }
}
