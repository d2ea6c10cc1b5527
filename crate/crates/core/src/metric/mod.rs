//! Point storage and distance evaluation.
//!
//! A [`MetricSpace`] is immutable and may be shared across threads. All
//! algorithms read distances through a [`MetricView`], a (possibly restricted)
//! window onto the space that counts every distance evaluation. Views are
//! cheap, single-threaded, and owned by one task; their counters are merged by
//! the caller when the task finishes.

mod generate;
mod io;

use std::cell::Cell;

use serde::Serialize;

use crate::{Error, Result};

pub use generate::{generate, GeneratorSpec};
pub use io::{load_matrix, load_points_csv, parse_matrix, parse_points_csv, write_points_csv};

/// Explicit matrices above this size are not triangle-checked unless asked.
pub const EXHAUSTIVE_CHECK_LIMIT: usize = 200;

/// A finite collection of equal-length, finite coordinate vectors.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSet {
    dim: usize,
    coords: Vec<f64>,
}

impl PointSet {
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let dim = rows.first().map_or(0, Vec::len);
        if dim == 0 {
            return Err(Error::usage("point set needs at least one point of positive dimension"));
        }
        let mut coords = Vec::with_capacity(rows.len() * dim);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != dim {
                return Err(Error::usage(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    row.len()
                )));
            }
            coords.extend(row);
        }
        Self::from_flat(dim, coords)
    }

    /// Row-major constructor: point `i` occupies `coords[i*dim..(i+1)*dim]`.
    pub fn from_flat(dim: usize, coords: Vec<f64>) -> Result<Self> {
        if dim == 0 || coords.is_empty() || !coords.len().is_multiple_of(dim) {
            return Err(Error::usage(format!(
                "{} coordinates do not form points of dimension {dim}",
                coords.len()
            )));
        }
        if let Some(pos) = coords.iter().position(|c| !c.is_finite()) {
            return Err(Error::usage(format!(
                "point {} has a non-finite coordinate",
                pos / dim
            )));
        }
        Ok(PointSet { dim, coords })
    }

    pub fn len(&self) -> usize {
        self.coords.len() / self.dim
    }

    pub fn is_empty(&self) -> bool {
        self.coords.is_empty()
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn iter(&self) -> impl Iterator<Item = &[f64]> {
        self.coords.chunks_exact(self.dim)
    }
}

/// A dense n×n distance table.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    n: usize,
    data: Vec<f64>,
}

impl DistanceMatrix {
    /// Only the shape is checked here; use [`validate_metric`] for the axioms.
    pub fn new(rows: Vec<Vec<f64>>) -> Result<Self> {
        let n = rows.len();
        if n == 0 {
            return Err(Error::usage("distance matrix is empty"));
        }
        let mut data = Vec::with_capacity(n * n);
        for (i, row) in rows.into_iter().enumerate() {
            if row.len() != n {
                return Err(Error::usage(format!(
                    "matrix row {i} has {} entries, expected {n}",
                    row.len()
                )));
            }
            data.extend(row);
        }
        Ok(DistanceMatrix { n, data })
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Euclidean(PointSet),
    Matrix(DistanceMatrix),
}

/// The universe P together with its distance function.
#[derive(Debug, Clone, PartialEq)]
pub struct MetricSpace {
    source: Source,
    /// User-supplied doubling dimension `b` (doubling constant `2^b`). Never
    /// estimated from data.
    pub doubling_dim_hint: Option<f64>,
}

impl MetricSpace {
    pub fn euclidean(points: PointSet) -> Self {
        MetricSpace { source: Source::Euclidean(points), doubling_dim_hint: None }
    }

    /// Wraps a matrix without checking the metric axioms.
    pub fn from_matrix(matrix: DistanceMatrix) -> Self {
        MetricSpace { source: Source::Matrix(matrix), doubling_dim_hint: None }
    }

    /// Wraps a matrix and rejects it if [`validate_metric`] finds a violation.
    /// The triangle inequality is only checked up to [`EXHAUSTIVE_CHECK_LIMIT`]
    /// points unless `force_triangle_check` is set.
    pub fn checked_matrix(matrix: DistanceMatrix, force_triangle_check: bool) -> Result<Self> {
        let space = Self::from_matrix(matrix);
        let report = validate_metric_with(&space, force_triangle_check);
        match report.violations.first() {
            Some(v) => Err(Error::usage(format!("distance matrix is not a metric: {v}"))),
            None => Ok(space),
        }
    }

    pub fn with_doubling_dim(mut self, b: f64) -> Self {
        self.doubling_dim_hint = Some(b);
        self
    }

    pub fn source(&self) -> &Source {
        &self.source
    }

    pub fn points(&self) -> Option<&PointSet> {
        match &self.source {
            Source::Euclidean(p) => Some(p),
            Source::Matrix(_) => None,
        }
    }

    pub fn len(&self) -> usize {
        match &self.source {
            Source::Euclidean(p) => p.len(),
            Source::Matrix(m) => m.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Checked, uncounted distance between points `i` and `j`.
    pub fn distance(&self, i: usize, j: usize) -> Result<f64> {
        let n = self.len();
        if i >= n || j >= n {
            return Err(Error::usage(format!("index pair ({i}, {j}) out of range for n = {n}")));
        }
        Ok(self.raw_distance(i, j))
    }

    #[inline]
    pub(crate) fn raw_distance(&self, i: usize, j: usize) -> f64 {
        match &self.source {
            Source::Euclidean(p) => euclidean(p.point(i), p.point(j)),
            Source::Matrix(m) => m.get(i, j),
        }
    }

    /// A counting view over every point.
    pub fn view(&self) -> MetricView<'_> {
        MetricView { space: self, ids: None, work: Cell::new(0) }
    }

    /// A counting view over the given points. Ids are sorted and deduplicated,
    /// so local index order always follows global index order.
    pub fn subset(&self, ids: impl IntoIterator<Item = usize>) -> Result<MetricView<'_>> {
        let mut ids: Vec<usize> = ids.into_iter().collect();
        ids.sort_unstable();
        ids.dedup();
        if let Some(&last) = ids.last() {
            if last >= self.len() {
                return Err(Error::usage(format!("point id {last} out of range")));
            }
        }
        Ok(MetricView { space: self, ids: Some(ids), work: Cell::new(0) })
    }
}

#[inline]
fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y) * (x - y))
        .sum::<f64>()
        .sqrt()
}

/// A window onto a [`MetricSpace`] addressed by local indices `0..len()`.
///
/// Every call to [`MetricView::dist`] increments the view's work counter.
#[derive(Debug)]
pub struct MetricView<'a> {
    space: &'a MetricSpace,
    ids: Option<Vec<usize>>,
    work: Cell<u64>,
}

impl<'a> MetricView<'a> {
    pub fn space(&self) -> &'a MetricSpace {
        self.space
    }

    pub fn len(&self) -> usize {
        self.ids.as_ref().map_or(self.space.len(), Vec::len)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Global id of local index `i`.
    #[inline]
    pub fn global(&self, i: usize) -> usize {
        match &self.ids {
            Some(ids) => ids[i],
            None => i,
        }
    }

    /// Local index of global id `g`, if the view contains it.
    pub fn local(&self, g: usize) -> Option<usize> {
        match &self.ids {
            Some(ids) => ids.binary_search(&g).ok(),
            None => (g < self.space.len()).then_some(g),
        }
    }

    pub fn globals(&self) -> Vec<usize> {
        (0..self.len()).map(|i| self.global(i)).collect()
    }

    /// Counted distance between local indices.
    #[inline]
    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.work.set(self.work.get() + 1);
        self.space.raw_distance(self.global(i), self.global(j))
    }

    /// Distance evaluations performed through this view so far.
    pub fn work(&self) -> u64 {
        self.work.get()
    }

    /// Adds evaluations performed elsewhere (e.g. on a derived view).
    pub fn charge(&self, evaluations: u64) {
        self.work.set(self.work.get() + evaluations);
    }

    /// A view over a subset of this view, given as local indices. The new view
    /// starts with a fresh counter.
    pub fn restrict(&self, locals: impl IntoIterator<Item = usize>) -> Result<MetricView<'a>> {
        let globals: Vec<usize> = locals
            .into_iter()
            .map(|i| {
                if i < self.len() {
                    Ok(self.global(i))
                } else {
                    Err(Error::usage(format!("local index {i} out of range")))
                }
            })
            .collect::<Result<_>>()?;
        self.space.subset(globals)
    }

    /// Full pairwise table for this view; costs `len()·(len()-1)/2` evaluations.
    pub fn pairwise(&self) -> Vec<f64> {
        let n = self.len();
        let mut d = vec![0.0; n * n];
        for i in 0..n {
            for j in i + 1..n {
                let v = self.dist(i, j);
                d[i * n + j] = v;
                d[j * n + i] = v;
            }
        }
        d
    }
}

/// One violated metric axiom with its witness.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "kebab-case")]
pub enum Violation {
    NonFinite { i: usize, j: usize },
    Negative { i: usize, j: usize, value: f64 },
    NonzeroDiagonal { i: usize, value: f64 },
    ZeroOffDiagonal { i: usize, j: usize },
    Asymmetric { i: usize, j: usize },
    /// `d(i, via) + d(via, j) < d(i, j)`.
    Triangle { i: usize, via: usize, j: usize, direct: f64, detour: f64 },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NonFinite { i, j } => write!(f, "d({i},{j}) is not finite"),
            Violation::Negative { i, j, value } => write!(f, "d({i},{j}) = {value} < 0"),
            Violation::NonzeroDiagonal { i, value } => write!(f, "d({i},{i}) = {value} != 0"),
            Violation::ZeroOffDiagonal { i, j } => write!(f, "d({i},{j}) = 0 for i != j"),
            Violation::Asymmetric { i, j } => write!(f, "d({i},{j}) != d({j},{i})"),
            Violation::Triangle { i, via, j, direct, detour } => write!(
                f,
                "triangle ({i},{via},{j}): d({i},{via}) + d({via},{j}) = {detour} < d({i},{j}) = {direct}"
            ),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum CheckStatus {
    Checked,
    /// Euclidean sources are metrics by construction.
    AssumedValid,
    /// Matrix too large for the O(n³) triangle scan without opting in.
    TriangleSkipped,
}

/// Outcome of [`validate_metric`]: at most one witness per violated axiom.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricReport {
    pub status: CheckStatus,
    pub violations: Vec<Violation>,
}

impl MetricReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks the metric axioms of an explicit matrix (triangle inequality only
/// up to [`EXHAUSTIVE_CHECK_LIMIT`] points).
pub fn validate_metric(space: &MetricSpace) -> MetricReport {
    validate_metric_with(space, false)
}

pub fn validate_metric_with(space: &MetricSpace, force_triangle_check: bool) -> MetricReport {
    let m = match &space.source {
        Source::Euclidean(_) => {
            return MetricReport { status: CheckStatus::AssumedValid, violations: Vec::new() }
        }
        Source::Matrix(m) => m,
    };
    let n = m.len();
    let mut found: Vec<Violation> = Vec::new();
    let mut note = |v: Violation| {
        if !found.iter().any(|f| std::mem::discriminant(f) == std::mem::discriminant(&v)) {
            found.push(v);
        }
    };
    for i in 0..n {
        for j in 0..n {
            let d = m.get(i, j);
            if !d.is_finite() {
                note(Violation::NonFinite { i, j });
            } else if d < 0.0 {
                note(Violation::Negative { i, j, value: d });
            } else if i == j && d != 0.0 {
                note(Violation::NonzeroDiagonal { i, value: d });
            } else if i != j && d == 0.0 {
                note(Violation::ZeroOffDiagonal { i, j });
            }
            if j > i && m.get(i, j) != m.get(j, i) {
                note(Violation::Asymmetric { i, j });
            }
        }
    }
    let check_triangle = force_triangle_check || n <= EXHAUSTIVE_CHECK_LIMIT;
    if check_triangle {
        'outer: for i in 0..n {
            for j in i + 1..n {
                let direct = m.get(i, j);
                for via in 0..n {
                    if via == i || via == j {
                        continue;
                    }
                    let detour = m.get(i, via) + m.get(via, j);
                    if detour < direct {
                        note(Violation::Triangle { i, via, j, direct, detour });
                        break 'outer;
                    }
                }
            }
        }
    }
    MetricReport {
        status: if check_triangle { CheckStatus::Checked } else { CheckStatus::TriangleSkipped },
        violations: found,
    }
}
