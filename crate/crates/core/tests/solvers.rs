mod common;

use common::{from_rows, line5, planar};
use kcoreset::graph::VisitOrder;
use kcoreset::solvers::{
    efficient_parametric_pruning, exact_kcenter, exact_optimal_subsets, gonzalez,
    is_gonzalez_consistent, parametric_pruning, Start,
};
use proptest::prelude::*;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

#[test]
fn approximation_factors_against_exhaustive_oracle() {
    for seed in 0..60u64 {
        let n = 8 + (seed % 7) as usize;
        let k = 2 + (seed % 3) as usize;
        let space = planar(n, seed);
        let view = space.view();
        let opt = exact_kcenter(&view, k).unwrap().radius;
        for start in [Start::Index(0), Start::Random(seed)] {
            assert!(gonzalez(&view, k, start).unwrap().radius <= 2.0 * opt);
        }
        for order in [VisitOrder::index(n), VisitOrder::seeded_random(n, seed)] {
            assert!(parametric_pruning(&view, k, &order).unwrap().radius <= 2.0 * opt);
        }
        for eps in [0.01, 0.1, 0.5] {
            let r = efficient_parametric_pruning(&view, k, eps).unwrap().radius;
            assert!(r <= 2.0 * (1.0 + eps) * opt, "seed {seed} eps {eps}");
        }
    }
}

#[test]
fn twelve_uniform_points_k3() {
    let space = planar(12, 42);
    let opt = exact_kcenter(&space.view(), 3).unwrap().radius;
    assert!(gonzalez(&space.view(), 3, Start::Index(0)).unwrap().radius <= 2.0 * opt);
}

#[test]
fn fourteen_points_efficient_k4() {
    for seed in 0..10 {
        let space = planar(14, 100 + seed);
        let opt = exact_kcenter(&space.view(), 4).unwrap().radius;
        let r = efficient_parametric_pruning(&space.view(), 4, 0.1).unwrap().radius;
        assert!(r <= 2.2 * opt);
    }
}

#[test]
fn collinear_instance() {
    let space = line5();
    let view = space.view();
    let (best, optimal) = exact_optimal_subsets(&view, 2).unwrap();
    assert_eq!(best, 0.5);
    assert!(optimal.contains(&vec![1, 3]));
    let mut radii = std::collections::BTreeSet::new();
    for seed in 0..100 {
        let g = gonzalez(&view, 2, Start::Random(seed)).unwrap();
        let p = parametric_pruning(&view, 2, &VisitOrder::seeded_random(5, seed)).unwrap();
        assert_ne!(g.sorted_centers(), vec![1, 3]);
        assert_ne!(p.sorted_centers(), vec![1, 3]);
        assert!(g.sorted_centers().contains(&0) || g.sorted_centers().contains(&4));
        radii.insert((g.radius.to_bits(), p.radius.to_bits()));
    }
    // an endpoint plus the far interior point is also optimal, e.g. {P2, P5}
    assert!(optimal.contains(&vec![1, 4]));
    assert!(radii.iter().any(|&(g, _)| f64::from_bits(g) == 0.5));
}

#[test]
fn subset_radius_at_most_twice() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    for seed in 0..10u64 {
        let space = planar(10, 300 + seed);
        let k = 2 + (seed % 2) as usize;
        let whole = exact_kcenter(&space.view(), k).unwrap().radius;
        for _ in 0..100 {
            let size = k + (rand::Rng::random_range(&mut rng, 0..=10 - k));
            let ids = sample(&mut rng, 10, size).into_vec();
            let sub = space.subset(ids).unwrap();
            assert!(exact_kcenter(&sub, k).unwrap().radius <= 2.0 * whole);
        }
    }
}

#[test]
fn work_counters() {
    let (n, k) = (500usize, 7usize);
    let space = planar(n, 5);
    let g = gonzalez(&space.view(), k, Start::Index(0)).unwrap();
    assert!(g.work <= (n * k + n) as u64);
    let eps = 0.2;
    let e = efficient_parametric_pruning(&space.view(), k, eps).unwrap();
    let steps = 1 + (8f64.ln() / (1.0f64 + eps).ln()).ceil() as usize;
    assert!(e.work <= ((n * k + n) * steps + n * k + n) as u64);
}

fn arb_planar() -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(-5.0f64..5.0, 2), 2..=40)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn gonzalez_is_consistent(rows in arb_planar(), k in 1usize..6, seed in any::<u64>()) {
        let space = from_rows(rows);
        let k = k.min(space.len());
        let view = space.view();
        let g = gonzalez(&view, k, Start::Random(seed)).unwrap();
        prop_assert!(is_gonzalez_consistent(&g, &view));
        prop_assert!(g.assignment.iter().all(|c| g.centers.contains(c)));
    }

    #[test]
    fn results_cover_within_radius(rows in arb_planar(), k in 1usize..6, seed in any::<u64>()) {
        let space = from_rows(rows);
        let n = space.len();
        let k = k.min(n);
        let view = space.view();
        for r in [
            gonzalez(&view, k, Start::Random(seed)).unwrap(),
            parametric_pruning(&view, k, &VisitOrder::seeded_random(n, seed)).unwrap(),
            efficient_parametric_pruning(&view, k, 0.3).unwrap(),
        ] {
            prop_assert!(r.centers.len() <= k);
            let worst = (0..n)
                .map(|p| space.distance(p, r.assignment[p]).unwrap())
                .fold(0.0, f64::max);
            prop_assert_eq!(worst, r.radius);
            for p in 0..n {
                let nearest = r.centers.iter().map(|&c| space.distance(p, c).unwrap()).fold(f64::INFINITY, f64::min);
                prop_assert_eq!(space.distance(p, r.assignment[p]).unwrap(), nearest);
            }
        }
    }
}
