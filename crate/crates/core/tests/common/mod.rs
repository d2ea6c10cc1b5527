#![allow(dead_code)]

use kcoreset::metric::{generate, GeneratorSpec};
use kcoreset::{MetricSpace, PointSet};

pub fn planar(n: usize, seed: u64) -> MetricSpace {
    MetricSpace::euclidean(
        generate(&GeneratorSpec::UniformBox { n, dim: 2, side: 1.0, seed }).unwrap(),
    )
}

pub fn line5() -> MetricSpace {
    MetricSpace::euclidean(PointSet::new((0..5).map(|i| vec![0.5 * i as f64]).collect()).unwrap())
}

pub fn from_rows(rows: Vec<Vec<f64>>) -> MetricSpace {
    MetricSpace::euclidean(PointSet::new(rows).unwrap())
}

/// Smallest number of input points covering every point within `r` (n ≤ 20).
pub fn min_cover(space: &MetricSpace, r: f64) -> usize {
    let n = space.len();
    let reach: Vec<u32> = (0..n)
        .map(|c| (0..n).filter(|&p| space.distance(c, p).unwrap() <= r).fold(0, |m, p| m | 1 << p))
        .collect();
    let full = (1u32 << n) - 1;
    (1..=n)
        .find(|&size| {
            (0u32..1 << n).filter(|m| m.count_ones() as usize == size).any(|m| {
                (0..n).filter(|&c| m >> c & 1 == 1).fold(0, |acc, c| acc | reach[c]) == full
            })
        })
        .unwrap()
}
