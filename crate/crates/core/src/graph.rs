//! Threshold graphs and the combinatorial primitives built on them.

use std::collections::VecDeque;
use std::io::Write;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::metric::MetricView;
use crate::{Error, Result};

/// Read access to an undirected simple graph on vertices `0..vertex_count()`.
pub trait Adjacency {
    fn vertex_count(&self) -> usize;
    /// Sorted, without `v` itself.
    fn neighbors(&self, v: usize) -> &[usize];

    fn is_adjacent(&self, u: usize, v: usize) -> bool {
        self.neighbors(u).binary_search(&v).is_ok()
    }

    fn edge_count(&self) -> usize {
        (0..self.vertex_count()).map(|v| self.neighbors(v).len()).sum::<usize>() / 2
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: Vec<Vec<usize>>,
}

impl Graph {
    /// Builds a graph from an edge list; self-loops and duplicates are dropped.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = (usize, usize)>) -> Result<Self> {
        let mut adj = vec![Vec::new(); n];
        for (u, v) in edges {
            if u >= n || v >= n {
                return Err(Error::usage(format!("edge ({u}, {v}) out of range for n = {n}")));
            }
            if u != v {
                adj[u].push(v);
                adj[v].push(u);
            }
        }
        for list in &mut adj {
            list.sort_unstable();
            list.dedup();
        }
        Ok(Graph { adj })
    }

    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        self.adj
            .iter()
            .enumerate()
            .flat_map(|(u, list)| list.iter().filter(move |&&v| v > u).map(move |&v| (u, v)))
    }
}

impl Adjacency for Graph {
    fn vertex_count(&self) -> usize {
        self.adj.len()
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        &self.adj[v]
    }
}

/// Threshold graph: `(i, j)` is an edge iff `d(i, j) ≤ radius`, over the local
/// indices of the view it was built from.
#[derive(Debug, Clone, PartialEq)]
pub struct DiskGraph {
    pub radius: f64,
    graph: Graph,
}

impl DiskGraph {
    pub fn graph(&self) -> &Graph {
        &self.graph
    }
}

impl Adjacency for DiskGraph {
    fn vertex_count(&self) -> usize {
        self.graph.vertex_count()
    }

    fn neighbors(&self, v: usize) -> &[usize] {
        self.graph.neighbors(v)
    }
}

/// Exact threshold graph with `n(n-1)/2` distance evaluations. Ties are edges.
pub fn build_disk_graph(view: &MetricView<'_>, threshold: f64) -> Result<DiskGraph> {
    if threshold.is_nan() || threshold < 0.0 {
        return Err(Error::usage(format!("disk graph threshold must be ≥ 0, got {threshold}")));
    }
    let n = view.len();
    let mut adj = vec![Vec::new(); n];
    for i in 0..n {
        for j in i + 1..n {
            if view.dist(i, j) <= threshold {
                adj[i].push(j);
                adj[j].push(i);
            }
        }
    }
    // rows are filled in increasing order of the other endpoint, so already sorted
    Ok(DiskGraph { radius: threshold, graph: Graph { adj } })
}

/// `u ~ v` in the result iff they are adjacent in `g` or share a neighbour.
pub fn square(g: &impl Adjacency) -> Graph {
    let n = g.vertex_count();
    let mut adj = Vec::with_capacity(n);
    let mut seen = vec![usize::MAX; n];
    for u in 0..n {
        seen[u] = u;
        let mut list = Vec::new();
        for &t in g.neighbors(u) {
            if seen[t] != u {
                seen[t] = u;
                list.push(t);
            }
            for &v in g.neighbors(t) {
                if seen[v] != u {
                    seen[v] = u;
                    list.push(v);
                }
            }
        }
        list.sort_unstable();
        adj.push(list);
    }
    Graph { adj }
}

/// How a [`VisitOrder`] was produced.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum OrderProvenance {
    Index,
    SeededRandom(u64),
    FarthestFirstTrace,
    Explicit,
}

/// A permutation of vertex indices driving greedy scans.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct VisitOrder {
    perm: Vec<usize>,
    pub provenance: OrderProvenance,
}

impl VisitOrder {
    pub fn index(n: usize) -> Self {
        VisitOrder { perm: (0..n).collect(), provenance: OrderProvenance::Index }
    }

    pub fn seeded_random(n: usize, seed: u64) -> Self {
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        VisitOrder { perm, provenance: OrderProvenance::SeededRandom(seed) }
    }

    /// `centers` in the given order, then every other vertex by index. Used to
    /// replay a farthest-first traversal through a greedy scan.
    pub fn centers_first(n: usize, centers: &[usize]) -> Result<Self> {
        let mut perm = Vec::with_capacity(n);
        let mut placed = vec![false; n];
        for &c in centers {
            if c >= n || placed[c] {
                return Err(Error::usage(format!("center {c} is out of range or repeated")));
            }
            placed[c] = true;
            perm.push(c);
        }
        perm.extend((0..n).filter(|&v| !placed[v]));
        Ok(VisitOrder { perm, provenance: OrderProvenance::FarthestFirstTrace })
    }

    pub fn from_permutation(perm: Vec<usize>) -> Result<Self> {
        let n = perm.len();
        let mut seen = vec![false; n];
        for &v in &perm {
            if v >= n || std::mem::replace(&mut seen[v], true) {
                return Err(Error::usage("visit order is not a permutation"));
            }
        }
        Ok(VisitOrder { perm, provenance: OrderProvenance::Explicit })
    }

    pub fn len(&self) -> usize {
        self.perm.len()
    }

    pub fn is_empty(&self) -> bool {
        self.perm.is_empty()
    }

    pub fn as_slice(&self) -> &[usize] {
        &self.perm
    }

    pub fn first(&self) -> Option<usize> {
        self.perm.first().copied()
    }
}

/// Greedy maximal independent set: scan `order`, take a vertex iff none of
/// its neighbours was taken earlier. Returned in the order taken.
///
/// Panics if `order` does not cover the graph's vertices.
pub fn maximal_independent_set(g: &impl Adjacency, order: &VisitOrder) -> Vec<usize> {
    assert_eq!(order.len(), g.vertex_count(), "visit order does not match graph size");
    let mut blocked = vec![false; g.vertex_count()];
    let mut taken = Vec::new();
    for &v in order.as_slice() {
        if blocked[v] {
            continue;
        }
        taken.push(v);
        blocked[v] = true;
        for &u in g.neighbors(v) {
            blocked[u] = true;
        }
    }
    taken
}

/// Same output as `maximal_independent_set(&square(g), order)` without
/// materialising the square: a taken vertex blocks everything within two hops.
/// Each vertex's neighbourhood is expanded at most once, so the cost is
/// `O(|V| + |E|)`.
pub fn approx_dominating_set(g: &impl Adjacency, order: &VisitOrder) -> Vec<usize> {
    assert_eq!(order.len(), g.vertex_count(), "visit order does not match graph size");
    let n = g.vertex_count();
    let mut blocked = vec![false; n];
    let mut expanded = vec![false; n];
    let mut taken = Vec::new();
    for &v in order.as_slice() {
        if blocked[v] {
            continue;
        }
        taken.push(v);
        blocked[v] = true;
        expanded[v] = true;
        for &t in g.neighbors(v) {
            blocked[t] = true;
            if !std::mem::replace(&mut expanded[t], true) {
                for &w in g.neighbors(t) {
                    blocked[w] = true;
                }
            }
        }
    }
    taken
}

/// Component labels `0, 1, …` assigned in order of each component's lowest
/// vertex, so equal partitions always produce equal label vectors.
pub fn connected_components(g: &impl Adjacency) -> Vec<usize> {
    let n = g.vertex_count();
    let mut label = vec![usize::MAX; n];
    let mut next = 0;
    let mut queue = VecDeque::new();
    for s in 0..n {
        if label[s] != usize::MAX {
            continue;
        }
        label[s] = next;
        queue.push_back(s);
        while let Some(u) = queue.pop_front() {
            for &v in g.neighbors(u) {
                if label[v] == usize::MAX {
                    label[v] = next;
                    queue.push_back(v);
                }
            }
        }
        next += 1;
    }
    label
}

/// Debug dump: one `u v` line per edge with `u < v`.
pub fn write_edge_list(g: &impl Adjacency, mut out: impl Write) -> Result<()> {
    for u in 0..g.vertex_count() {
        for &v in g.neighbors(u).iter().filter(|&&v| v > u) {
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metric::{generate, GeneratorSpec, MetricSpace, PointSet};
    use proptest::prelude::*;

    fn line(xs: &[f64]) -> MetricSpace {
        MetricSpace::euclidean(PointSet::new(xs.iter().map(|&x| vec![x]).collect()).unwrap())
    }

    fn path(n: usize) -> Graph {
        Graph::from_edges(n, (1..n).map(|i| (i - 1, i))).unwrap()
    }

    fn complete(n: usize) -> Graph {
        Graph::from_edges(n, (0..n).flat_map(|i| (i + 1..n).map(move |j| (i, j)))).unwrap()
    }

    #[test]
    fn disk_graph_on_line() {
        let space = line(&[0.0, 0.5, 1.0]);
        let g = build_disk_graph(&space.view(), 0.5).unwrap();
        assert_eq!(g.graph().edges().collect::<Vec<_>>(), vec![(0, 1), (1, 2)]);
        let g0 = build_disk_graph(&space.view(), 0.0).unwrap();
        assert_eq!(g0.edge_count(), 0);
        assert!(build_disk_graph(&space.view(), -1.0).is_err());
    }

    #[test]
    fn disk_graph_path_power() {
        let space = line(&[0.0, 0.5, 1.0, 1.5, 2.0]);
        let view = space.view();
        let g = build_disk_graph(&view, 1.0).unwrap();
        // oracle: enumerate all pairs by position difference
        let expected: Vec<(usize, usize)> = (0..5)
            .flat_map(|i| (i + 1..5).map(move |j| (i, j)))
            .filter(|&(i, j)| (j - i) as f64 * 0.5 <= 1.0)
            .collect();
        assert_eq!(g.graph().edges().collect::<Vec<_>>(), expected);
        assert_eq!(view.work(), 10);
    }

    #[test]
    fn square_examples() {
        let sq = square(&path(3));
        assert!(sq.is_adjacent(0, 2));
        assert_eq!(square(&Graph::from_edges(4, []).unwrap()).edge_count(), 0);
        let c5 = Graph::from_edges(5, (0..5).map(|i| (i, (i + 1) % 5))).unwrap();
        assert_eq!(square(&c5), complete(5));
    }

    #[test]
    fn mis_examples() {
        assert_eq!(maximal_independent_set(&path(3), &VisitOrder::index(3)), vec![0, 2]);
        let empty = Graph::from_edges(4, []).unwrap();
        assert_eq!(maximal_independent_set(&empty, &VisitOrder::index(4)), vec![0, 1, 2, 3]);
        let order = VisitOrder::from_permutation(vec![2, 0, 3, 1]).unwrap();
        assert_eq!(maximal_independent_set(&complete(4), &order), vec![2]);
    }

    #[test]
    fn components_examples() {
        let two = MetricSpace::euclidean(PointSet::new(vec![vec![0.0], vec![3.0]]).unwrap());
        let g = build_disk_graph(&two.view(), 1.0).unwrap();
        assert_eq!(connected_components(&g), vec![0, 1]);
        assert_eq!(connected_components(&path(6)), vec![0; 6]);
    }

    fn union_find_labels(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
        fn find(p: &mut [usize], x: usize) -> usize {
            let mut r = x;
            while p[r] != r {
                r = p[r];
            }
            p[x] = r;
            r
        }
        let mut parent: Vec<usize> = (0..n).collect();
        for &(u, v) in edges {
            let (a, b) = (find(&mut parent, u), find(&mut parent, v));
            parent[a.max(b)] = a.min(b);
        }
        let roots: Vec<usize> = (0..n).map(|v| find(&mut parent, v)).collect();
        let mut relabel = std::collections::HashMap::new();
        roots
            .iter()
            .map(|r| {
                let next = relabel.len();
                *relabel.entry(*r).or_insert(next)
            })
            .collect()
    }

    #[test]
    fn recursive_cover_components() {
        let r = 1.0;
        let space = MetricSpace::euclidean(
            generate(&GeneratorSpec::RecursiveCover { depth: 1, radius: r }).unwrap(),
        );
        for (threshold, expected) in [(r, 1), (r / 100.0, 7)] {
            let g = build_disk_graph(&space.view(), threshold).unwrap();
            let edges: Vec<_> = g.graph().edges().collect();
            let labels = connected_components(&g);
            assert_eq!(labels, union_find_labels(7, &edges));
            assert_eq!(labels.iter().max().unwrap() + 1, expected);
        }
    }

    #[test]
    fn edge_list_dump() {
        let mut out = Vec::new();
        write_edge_list(&path(3), &mut out).unwrap();
        assert_eq!(String::from_utf8(out).unwrap(), "0 1\n1 2\n");
    }

    #[test]
    fn orders_are_permutations() {
        let o = VisitOrder::seeded_random(20, 5);
        let mut s = o.as_slice().to_vec();
        s.sort_unstable();
        assert_eq!(s, (0..20).collect::<Vec<_>>());
        assert_eq!(o, VisitOrder::seeded_random(20, 5));
        assert!(VisitOrder::from_permutation(vec![0, 0]).is_err());
        let c = VisitOrder::centers_first(5, &[3, 1]).unwrap();
        assert_eq!(c.as_slice(), &[3, 1, 0, 2, 4]);
    }

    fn arb_graph() -> impl Strategy<Value = Graph> {
        (1usize..=64).prop_flat_map(|n| {
            proptest::collection::vec((0..n, 0..n), 0..(3 * n))
                .prop_map(move |edges| Graph::from_edges(n, edges).unwrap())
        })
    }

    proptest! {
        #[test]
        fn mis_is_independent_and_maximal(g in arb_graph(), seed in any::<u64>()) {
            let order = VisitOrder::seeded_random(g.vertex_count(), seed);
            let set = maximal_independent_set(&g, &order);
            let mut member = vec![false; g.vertex_count()];
            for &v in &set { member[v] = true; }
            for &u in &set {
                prop_assert!(g.neighbors(u).iter().all(|&v| !member[v]));
            }
            for w in 0..g.vertex_count() {
                prop_assert!(member[w] || g.neighbors(w).iter().any(|&u| member[u]));
            }
        }

        #[test]
        fn squared_mis_dominates_with_pairwise_nonadjacent_members(g in arb_graph(), seed in any::<u64>()) {
            let order = VisitOrder::seeded_random(g.vertex_count(), seed);
            let fast = approx_dominating_set(&g, &order);
            prop_assert_eq!(&fast, &maximal_independent_set(&square(&g), &order));
            let mut member = vec![false; g.vertex_count()];
            for &v in &fast { member[v] = true; }
            for w in 0..g.vertex_count() {
                prop_assert!(member[w] || g.neighbors(w).iter().any(|&u| member[u])
                    || g.neighbors(w).iter().any(|&t| g.neighbors(t).iter().any(|&u| member[u])));
            }
            for &u in &fast {
                prop_assert!(g.neighbors(u).iter().all(|&v| !member[v]));
            }
        }

        #[test]
        fn square_contains_graph(g in arb_graph()) {
            let sq = square(&g);
            for (u, v) in g.edges() {
                prop_assert!(sq.is_adjacent(u, v));
            }
        }

        #[test]
        fn components_match_union_find(g in arb_graph()) {
            let edges: Vec<_> = g.edges().collect();
            prop_assert_eq!(connected_components(&g), union_find_labels(g.vertex_count(), &edges));
        }
    }
}
