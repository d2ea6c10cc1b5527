mod common;

use common::{min_cover, planar};
use kcoreset::coreset::{coreset_for_k, dual_clustering, epsilon_coreset, tradeoff_table};
use kcoreset::graph::VisitOrder;
use kcoreset::metric::{generate, GeneratorSpec};
use kcoreset::solvers::exact_kcenter;
use kcoreset::MetricSpace;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn epsilon_coreset_preserves_optimum() {
    for seed in 0..40u64 {
        let n = 10 + (seed % 5) as usize;
        let k = 2 + (seed % 3) as usize;
        let space = planar(n, 2000 + seed);
        let view = space.view();
        let opt = exact_kcenter(&view, k).unwrap().radius;
        for eps in [0.25, 0.5, 1.0] {
            let c = epsilon_coreset(&view, k, eps, &VisitOrder::index(n)).unwrap();
            assert!(c.achieved_radius <= c.cover_radius);
            let sub = space.subset(c.subset.iter().copied()).unwrap();
            let r = exact_kcenter(&sub, k.min(sub.len())).unwrap().radius;
            assert!(r <= (1.0 + eps) * opt, "seed {seed} eps {eps}");
        }
    }
}

#[test]
fn fourteen_points_half_epsilon() {
    let space = planar(14, 77);
    let opt = exact_kcenter(&space.view(), 3).unwrap().radius;
    let c = epsilon_coreset(&space.view(), 3, 0.5, &VisitOrder::index(14)).unwrap();
    let sub = space.subset(c.subset).unwrap();
    assert!(exact_kcenter(&sub, 3).unwrap().radius <= 1.5 * opt);
}

#[test]
fn dual_clustering_within_49_of_minimum() {
    for seed in 0..40u64 {
        let space = planar(6 + (seed % 7) as usize, 3000 + seed);
        for r in [0.1, 0.25, 0.5] {
            let net = dual_clustering(&space.view(), r, &VisitOrder::index(space.len())).unwrap();
            assert!(net.size <= 49 * min_cover(&space, r));
        }
    }
}

#[test]
fn gaussian_subsamples_with_two_halvings() {
    let space = MetricSpace::euclidean(
        generate(&GeneratorSpec::GaussianClusters {
            n: 500,
            dim: 2,
            clusters: 5,
            spread: 0.5,
            separation: 4.0,
            seed: 8,
        })
        .unwrap(),
    );
    let full = coreset_for_k(&space.view(), 5, 2, &VisitOrder::index(500)).unwrap();
    assert!(full.cover_radius * 4.0 >= full.achieved_radius);
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    for _ in 0..20 {
        let ids = sample(&mut rng, 500, 14).into_vec();
        let sub = space.subset(ids).unwrap();
        let opt = exact_kcenter(&sub, 5).unwrap().radius;
        let c = coreset_for_k(&sub, 5, 2, &VisitOrder::index(14)).unwrap();
        let inner = space.subset(c.subset.iter().copied()).unwrap();
        let r = exact_kcenter(&inner, 5.min(inner.len())).unwrap().radius;
        assert!(r <= 1.5 * opt);
    }
}

#[test]
fn tradeoff_on_recursive_cover() {
    let space = MetricSpace::euclidean(
        generate(&GeneratorSpec::RecursiveCover { depth: 4, radius: 2.0 }).unwrap(),
    );
    let rows = tradeoff_table(&space.view(), 1, 3, &VisitOrder::index(space.len())).unwrap();
    let sizes: Vec<usize> = rows.iter().map(|r| r.size).collect();
    assert_eq!(sizes, vec![7, 49, 343, 2401]);
    for w in rows.windows(2) {
        assert_eq!(w[1].cover_radius * 2.0, w[0].cover_radius);
    }
}

#[test]
fn coreset_sizes_respect_planar_bound() {
    for seed in 0..20u64 {
        let space = planar(200, 4000 + seed);
        for r in 0..3u32 {
            let c = coreset_for_k(&space.view(), 3, r, &VisitOrder::index(200)).unwrap();
            let bound = 49f64.powi(r as i32 + 1) * 3.0;
            assert!((c.size as f64) <= bound);
            assert!(c.max_star_degree.unwrap() < 49usize.pow(r + 1));
        }
    }
}
