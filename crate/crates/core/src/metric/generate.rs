//! Deterministic synthetic instances.

use rand::Rng;
use rand_distr::StandardNormal;

use super::PointSet;
use crate::rng::{stream, Stream};
use crate::{Error, Result};

/// Children per node in the recursive-cover construction.
pub const COVER_FANOUT: usize = 7;

/// Recipe for a synthetic point set. Identical specs give identical points.
#[derive(Debug, Clone, PartialEq)]
pub enum GeneratorSpec {
    /// `n` points uniform in `[0, side]^dim`.
    UniformBox { n: usize, dim: usize, side: f64, seed: u64 },
    /// `n` points split round-robin over `clusters` isotropic Gaussian blobs
    /// with standard deviation `spread`. Blob `c` is centred at
    /// `c · separation` on the first axis.
    GaussianClusters { n: usize, dim: usize, clusters: usize, spread: f64, separation: f64, seed: u64 },
    /// `n` points `0, spacing, 2·spacing, …` on the first axis.
    CollinearLine { n: usize, spacing: f64, dim: usize },
    /// `7^depth` points: the leaves of a tree in which every node has seven
    /// children at pairwise distance `sqrt(7/3) · radius / 2^level`.
    RecursiveCover { depth: usize, radius: f64 },
}

impl GeneratorSpec {
    /// Parses the `kind:params` mini-language:
    ///
    /// * `line:N:SPACING`
    /// * `uniform:N:DIM[:SIDE]`
    /// * `gauss:N:DIM:CLUSTERS:SPREAD[:SEPARATION]`
    /// * `cover:DEPTH:RADIUS`
    pub fn parse(text: &str, seed: u64) -> Result<Self> {
        let mut parts = text.split(':');
        let kind = parts.next().unwrap_or_default();
        let args: Vec<&str> = parts.collect();
        let bad = || Error::usage(format!("bad generator spec `{text}`"));
        let int = |i: usize| -> Result<usize> {
            args.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let real = |i: usize| -> Result<f64> {
            args.get(i).ok_or_else(bad)?.parse().map_err(|_| bad())
        };
        let opt_real = |i: usize, default: f64| -> Result<f64> {
            if args.len() > i {
                real(i)
            } else {
                Ok(default)
            }
        };
        let spec = match (kind, args.len()) {
            ("line", 2) => GeneratorSpec::CollinearLine { n: int(0)?, spacing: real(1)?, dim: 1 },
            ("uniform", 2 | 3) => {
                GeneratorSpec::UniformBox { n: int(0)?, dim: int(1)?, side: opt_real(2, 1.0)?, seed }
            }
            ("gauss", 4 | 5) => {
                let spread = real(3)?;
                GeneratorSpec::GaussianClusters {
                    n: int(0)?,
                    dim: int(1)?,
                    clusters: int(2)?,
                    spread,
                    separation: opt_real(4, 10.0 * spread)?,
                    seed,
                }
            }
            ("cover", 2) => GeneratorSpec::RecursiveCover { depth: int(0)?, radius: real(1)? },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// Builds the point set described by `spec`.
pub fn generate(spec: &GeneratorSpec) -> Result<PointSet> {
    match *spec {
        GeneratorSpec::UniformBox { n, dim, side, seed } => {
            check_size(n, dim)?;
            if !(side > 0.0 && side.is_finite()) {
                return Err(Error::usage("uniform box side must be positive"));
            }
            let mut rng = stream(seed, Stream::Generator);
            let coords = (0..n * dim).map(|_| rng.random::<f64>() * side).collect();
            PointSet::from_flat(dim, coords)
        }
        GeneratorSpec::GaussianClusters { n, dim, clusters, spread, separation, seed } => {
            check_size(n, dim)?;
            if clusters == 0 {
                return Err(Error::usage("gaussian generator needs at least one cluster"));
            }
            if !(spread >= 0.0 && spread.is_finite() && separation.is_finite()) {
                return Err(Error::usage("gaussian spread and separation must be finite, spread ≥ 0"));
            }
            let mut rng = stream(seed, Stream::Generator);
            let mut coords = Vec::with_capacity(n * dim);
            for i in 0..n {
                let cluster = (i % clusters) as f64;
                for axis in 0..dim {
                    let centre = if axis == 0 { cluster * separation } else { 0.0 };
                    let z: f64 = rng.sample(StandardNormal);
                    coords.push(centre + spread * z);
                }
            }
            PointSet::from_flat(dim, coords)
        }
        GeneratorSpec::CollinearLine { n, spacing, dim } => {
            check_size(n, dim)?;
            if !(spacing > 0.0 && spacing.is_finite()) {
                return Err(Error::usage("line spacing must be positive"));
            }
            let mut coords = vec![0.0; n * dim];
            for i in 0..n {
                coords[i * dim] = i as f64 * spacing;
            }
            PointSet::from_flat(dim, coords)
        }
        GeneratorSpec::RecursiveCover { depth, radius } => recursive_cover(depth, radius),
    }
}

fn check_size(n: usize, dim: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::usage("generator needs n ≥ 1"));
    }
    if dim == 0 {
        return Err(Error::usage("generator needs dim ≥ 1"));
    }
    Ok(())
}

// Level `j` (1-based) owns coordinates `7(j-1)..7j`; choosing child `c` puts
// `scale_j` on coordinate `7(j-1)+c`. The seven children of a node form a
// regular simplex with circumradius `radius / 2^j`, and because levels are
// orthogonal two leaves that first differ at level `j` are between `a_j` and
// `a_j·sqrt(4/3)` apart, where `a_j = sqrt(2)·scale_j`. Leaves are listed in
// lexicographic order of their child choices, so every subtree is contiguous.
fn recursive_cover(depth: usize, radius: f64) -> Result<PointSet> {
    if depth == 0 || depth > 6 {
        return Err(Error::usage("recursive cover depth must be in 1..=6"));
    }
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(Error::usage("recursive cover radius must be positive"));
    }
    let dim = COVER_FANOUT * depth;
    let n = COVER_FANOUT.pow(depth as u32);
    let circum_to_scale = (COVER_FANOUT as f64 / (COVER_FANOUT as f64 - 1.0)).sqrt();
    let scales: Vec<f64> = (1..=depth)
        .map(|j| radius / f64::powi(2.0, j as i32) * circum_to_scale)
        .collect();
    let mut coords = vec![0.0; n * dim];
    for leaf in 0..n {
        let mut rest = leaf;
        for level in (0..depth).rev() {
            let child = rest % COVER_FANOUT;
            rest /= COVER_FANOUT;
            coords[leaf * dim + level * COVER_FANOUT + child] = scales[level];
        }
    }
    PointSet::from_flat(dim, coords)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::MetricSpace;

    #[test]
    fn collinear_line_positions() {
        let p = generate(&GeneratorSpec::parse("line:5:0.5", 0).unwrap()).unwrap();
        let xs: Vec<f64> = p.iter().map(|q| q[0]).collect();
        assert_eq!(xs, vec![0.0, 0.5, 1.0, 1.5, 2.0]);
    }

    #[test]
    fn single_uniform_point() {
        let p = generate(&GeneratorSpec::UniformBox { n: 1, dim: 3, side: 1.0, seed: 99 }).unwrap();
        assert_eq!(p.len(), 1);
        assert_eq!(p.dim(), 3);
    }

    #[test]
    fn generation_is_deterministic() {
        for text in ["uniform:50:3", "gauss:40:2:3:0.5:8", "cover:2:1"] {
            let a = generate(&GeneratorSpec::parse(text, 11).unwrap()).unwrap();
            let b = generate(&GeneratorSpec::parse(text, 11).unwrap()).unwrap();
            assert_eq!(a, b, "{text}");
        }
        let a = generate(&GeneratorSpec::parse("uniform:50:3", 11).unwrap()).unwrap();
        let c = generate(&GeneratorSpec::parse("uniform:50:3", 12).unwrap()).unwrap();
        assert_ne!(a, c);
    }

    #[test]
    fn bad_specs_are_usage_errors() {
        for text in ["line:0:0.5", "uniform:0:2", "cover:0:1", "blob:3", "line:5", "gauss:10:2:0:1"] {
            let res = GeneratorSpec::parse(text, 0).and_then(|s| generate(&s));
            assert!(matches!(res, Err(Error::Usage(_))), "{text}");
        }
    }

    #[test]
    fn recursive_cover_level_distances() {
        let r = 1.0;
        let p = generate(&GeneratorSpec::RecursiveCover { depth: 2, radius: r }).unwrap();
        assert_eq!(p.len(), 49);
        let space = MetricSpace::euclidean(p);
        let a = |j: i32| (7.0f64 / 3.0).sqrt() * r / 2f64.powi(j);
        // siblings at level 2 share the level-1 choice
        let d = space.distance(0, 1).unwrap();
        assert!((d - a(2)).abs() < 1e-12);
        // leaves in different level-1 groups
        let d = space.distance(0, 7).unwrap();
        assert!((d - a(1)).abs() < 1e-12);
        let d = space.distance(0, 8).unwrap();
        assert!((d - (a(1).powi(2) + a(2).powi(2)).sqrt()).abs() < 1e-12);
    }
}
