//! Metric trees: continuum edge-weighted trees with the path-length metric.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use super::metric::FiniteMetricSpace;
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct TreeEdge {
    pub a: usize,
    pub b: usize,
    pub length: f64,
}

/// A point of a metric tree: a node, or an interior point of an edge at
/// `offset` from the edge's `a` endpoint.
///
/// Locations built through [`MetricTree::location`] are canonical: offsets
/// `0` and `length` become the corresponding node.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(into = "LocationRepr", from = "LocationRepr")]
pub enum TreeLocation {
    Node(usize),
    Edge { edge: usize, offset: f64 },
}

#[derive(Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
enum LocationRepr {
    Node { node: usize },
    Edge { edge: usize, offset: f64 },
}

impl From<TreeLocation> for LocationRepr {
    fn from(l: TreeLocation) -> Self {
        match l {
            TreeLocation::Node(node) => LocationRepr::Node { node },
            TreeLocation::Edge { edge, offset } => LocationRepr::Edge { edge, offset },
        }
    }
}

impl From<LocationRepr> for TreeLocation {
    fn from(l: LocationRepr) -> Self {
        match l {
            LocationRepr::Node { node } => TreeLocation::Node(node),
            LocationRepr::Edge { edge, offset } => TreeLocation::Edge { edge, offset },
        }
    }
}

/// A finite tree with positive edge lengths, viewed as a geodesic metric space.
#[derive(Clone, Debug, PartialEq)]
pub struct MetricTree {
    labels: Vec<String>,
    edges: Vec<TreeEdge>,
    adjacency: Vec<Vec<(usize, usize)>>,
    node_dist: Vec<Vec<f64>>,
    // pred[s][x]: (previous node, edge) on the path s -> x
    pred: Vec<Vec<(usize, usize)>>,
}

impl MetricTree {
    pub fn new(labels: Vec<String>, edges: Vec<TreeEdge>) -> Result<Self> {
        let n = labels.len();
        if n == 0 {
            return Err(Error::InvalidInput("a tree needs at least one node".into()));
        }
        if edges.len() + 1 != n {
            return Err(Error::InvalidInput(format!(
                "{} edges for {n} nodes; a tree has n - 1",
                edges.len()
            )));
        }
        let mut adjacency = vec![Vec::new(); n];
        for (k, e) in edges.iter().enumerate() {
            if e.a >= n || e.b >= n {
                return Err(Error::InvalidInput(format!("edge {k} references a missing node")));
            }
            if e.a == e.b {
                return Err(Error::InvalidInput(format!("edge {k} is a loop")));
            }
            if !(e.length > 0.0 && e.length.is_finite()) {
                return Err(Error::InvalidInput(format!("edge {k} has length {}", e.length)));
            }
            adjacency[e.a].push((e.b, k));
            adjacency[e.b].push((e.a, k));
        }
        let mut node_dist = vec![vec![f64::INFINITY; n]; n];
        let mut pred = vec![vec![(usize::MAX, usize::MAX); n]; n];
        for s in 0..n {
            node_dist[s][s] = 0.0;
            let mut queue = VecDeque::from([s]);
            let mut seen = vec![false; n];
            seen[s] = true;
            while let Some(x) = queue.pop_front() {
                for &(y, k) in &adjacency[x] {
                    if !seen[y] {
                        seen[y] = true;
                        node_dist[s][y] = node_dist[s][x] + edges[k].length;
                        pred[s][y] = (x, k);
                        queue.push_back(y);
                    }
                }
            }
            if !seen.iter().all(|&b| b) {
                return Err(Error::InvalidInput("tree is not connected".into()));
            }
        }
        Ok(MetricTree {
            labels,
            edges,
            adjacency,
            node_dist,
            pred,
        })
    }

    pub fn unlabelled(n: usize, edges: Vec<TreeEdge>) -> Result<Self> {
        MetricTree::new((0..n).map(|i| i.to_string()).collect(), edges)
    }

    pub fn node_count(&self) -> usize {
        self.labels.len()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn edges(&self) -> &[TreeEdge] {
        &self.edges
    }

    pub fn edge(&self, k: usize) -> &TreeEdge {
        &self.edges[k]
    }

    /// Incident `(neighbour, edge)` pairs of a node.
    pub fn neighbours(&self, node: usize) -> &[(usize, usize)] {
        &self.adjacency[node]
    }

    pub fn node_distance(&self, x: usize, y: usize) -> f64 {
        self.node_dist[x][y]
    }

    pub fn total_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).sum()
    }

    pub fn min_edge_length(&self) -> f64 {
        self.edges.iter().map(|e| e.length).fold(f64::INFINITY, f64::min)
    }

    /// Canonical location at `offset` along edge `edge`.
    pub fn location(&self, edge: usize, offset: f64) -> Result<TreeLocation> {
        let e = self
            .edges
            .get(edge)
            .ok_or_else(|| Error::InvalidLocation(format!("edge {edge} does not exist")))?;
        if !(0.0..=e.length).contains(&offset) {
            return Err(Error::InvalidLocation(format!(
                "offset {offset} outside [0, {}] on edge {edge}",
                e.length
            )));
        }
        Ok(if offset == 0.0 {
            TreeLocation::Node(e.a)
        } else if offset == e.length {
            TreeLocation::Node(e.b)
        } else {
            TreeLocation::Edge { edge, offset }
        })
    }

    /// Validates a location and returns its canonical form.
    pub fn normalize(&self, loc: TreeLocation) -> Result<TreeLocation> {
        match loc {
            TreeLocation::Node(x) if x < self.node_count() => Ok(loc),
            TreeLocation::Node(x) => Err(Error::InvalidLocation(format!("node {x} does not exist"))),
            TreeLocation::Edge { edge, offset } => self.location(edge, offset),
        }
    }

    /// Endpoints reachable from a location with the distance to each.
    fn exits(&self, loc: TreeLocation) -> [(usize, f64); 2] {
        match loc {
            TreeLocation::Node(x) => [(x, 0.0), (x, 0.0)],
            TreeLocation::Edge { edge, offset } => {
                let e = &self.edges[edge];
                [(e.a, offset), (e.b, e.length - offset)]
            }
        }
    }

    fn node_path(&self, from: usize, to: usize) -> Vec<(usize, usize)> {
        // (node, edge used to reach it), excluding `from`
        let mut path = Vec::new();
        let mut x = to;
        while x != from {
            let (p, k) = self.pred[from][x];
            path.push((x, k));
            x = p;
        }
        path.reverse();
        path
    }

    fn offset_of(&self, edge: usize, node: usize) -> f64 {
        if self.edges[edge].a == node {
            0.0
        } else {
            self.edges[edge].length
        }
    }

    /// The unique path from `u` to `v` as legs `(edge, start offset, end offset)`.
    fn legs(&self, u: TreeLocation, v: TreeLocation) -> Vec<(usize, f64, f64)> {
        if let (TreeLocation::Edge { edge: e1, offset: t1 }, TreeLocation::Edge { edge: e2, offset: t2 }) = (u, v) {
            if e1 == e2 {
                return vec![(e1, t1, t2)];
            }
        }
        let mut best = (f64::INFINITY, 0, 0);
        for &(p, du) in &self.exits(u) {
            for &(q, dv) in &self.exits(v) {
                let d = du + self.node_dist[p][q] + dv;
                if d < best.0 {
                    best = (d, p, q);
                }
            }
        }
        let (_, p, q) = best;
        let mut legs = Vec::new();
        if let TreeLocation::Edge { edge, offset } = u {
            legs.push((edge, offset, self.offset_of(edge, p)));
        }
        let mut x = p;
        for (y, k) in self.node_path(p, q) {
            legs.push((k, self.offset_of(k, x), self.offset_of(k, y)));
            x = y;
        }
        if let TreeLocation::Edge { edge, offset } = v {
            legs.push((edge, self.offset_of(edge, q), offset));
        }
        legs
    }

    /// The finite metric space on the node set.
    pub fn node_metric(&self) -> FiniteMetricSpace {
        FiniteMetricSpace::new(self.labels.clone(), self.node_dist.clone())
            .expect("tree path metric satisfies the metric axioms")
    }

    /// Nodes plus interior points splitting every edge into pieces of length at most `spacing`.
    pub fn lattice(&self, spacing: f64) -> Vec<TreeLocation> {
        let mut out: Vec<TreeLocation> = (0..self.node_count()).map(TreeLocation::Node).collect();
        for (k, e) in self.edges.iter().enumerate() {
            let pieces = (e.length / spacing).ceil().max(1.0) as usize;
            for j in 1..pieces {
                let t = e.length * (j as f64 / pieces as f64);
                if let Ok(loc) = self.location(k, t) {
                    out.push(loc);
                }
            }
        }
        out
    }

    /// All points at distance exactly `radius` from `u`, one per branch long enough to reach it.
    pub fn sphere(&self, u: TreeLocation, radius: f64) -> Vec<TreeLocation> {
        let mut out = Vec::new();
        match u {
            TreeLocation::Node(x) => self.sphere_from_node(x, None, radius, &mut out),
            TreeLocation::Edge { edge, offset } => {
                let e = self.edges[edge];
                if radius < offset {
                    out.push(TreeLocation::Edge {
                        edge,
                        offset: offset - radius,
                    });
                } else {
                    self.sphere_from_node(e.a, Some(edge), radius - offset, &mut out);
                }
                let rest = e.length - offset;
                if radius < rest {
                    out.push(TreeLocation::Edge {
                        edge,
                        offset: offset + radius,
                    });
                } else {
                    self.sphere_from_node(e.b, Some(edge), radius - rest, &mut out);
                }
            }
        }
        out
    }

    fn sphere_from_node(&self, x: usize, came_by: Option<usize>, radius: f64, out: &mut Vec<TreeLocation>) {
        if radius == 0.0 {
            out.push(TreeLocation::Node(x));
            return;
        }
        for &(y, k) in &self.adjacency[x] {
            if Some(k) == came_by {
                continue;
            }
            let len = self.edges[k].length;
            if radius < len {
                let t = if self.edges[k].a == x { radius } else { len - radius };
                out.push(TreeLocation::Edge { edge: k, offset: t });
            } else {
                self.sphere_from_node(y, Some(k), radius - len, out);
            }
        }
    }
}

/// Length of the unique path between two locations.
pub fn tree_distance(t: &MetricTree, u: TreeLocation, v: TreeLocation) -> Result<f64> {
    let u = t.normalize(u)?;
    let v = t.normalize(v)?;
    Ok(distance_unchecked(t, u, v))
}

pub(crate) fn distance_unchecked(t: &MetricTree, u: TreeLocation, v: TreeLocation) -> f64 {
    if let (TreeLocation::Edge { edge: e1, offset: t1 }, TreeLocation::Edge { edge: e2, offset: t2 }) = (u, v) {
        if e1 == e2 {
            return (t1 - t2).abs();
        }
    }
    let mut best = f64::INFINITY;
    for &(p, du) in &t.exits(u) {
        for &(q, dv) in &t.exits(v) {
            best = best.min(du + t.node_dist[p][q] + dv);
        }
    }
    best
}

/// The point at fraction `s` along the geodesic from `u` to `v`.
pub fn tree_geodesic(t: &MetricTree, u: TreeLocation, v: TreeLocation, s: f64) -> Result<TreeLocation> {
    if !(0.0..=1.0).contains(&s) {
        return Err(Error::OutOfRange {
            name: "s",
            detail: format!("{s} not in [0, 1]"),
        });
    }
    let u = t.normalize(u)?;
    let v = t.normalize(v)?;
    Ok(geodesic_unchecked(t, u, v, s))
}

pub(crate) fn geodesic_unchecked(t: &MetricTree, u: TreeLocation, v: TreeLocation, s: f64) -> TreeLocation {
    if s == 0.0 || u == v {
        return u;
    }
    if s == 1.0 {
        return v;
    }
    let legs = t.legs(u, v);
    let total: f64 = legs.iter().map(|&(_, a, b)| (b - a).abs()).sum();
    let target = s * total;
    let mut covered = 0.0;
    for (i, &(edge, a, b)) in legs.iter().enumerate() {
        let len = (b - a).abs();
        if target <= covered + len || i + 1 == legs.len() {
            let step = (target - covered).clamp(0.0, len);
            let offset = if b >= a { a + step } else { a - step };
            let offset = offset.clamp(0.0, t.edges[edge].length);
            return t.location(edge, offset).expect("offset clamped to the edge");
        }
        covered += len;
    }
    v
}

/// A nonnegative combination of distance functions `v -> sum c_i d(v, a_i)`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DistanceCombination {
    terms: Vec<(f64, TreeLocation)>,
}

impl DistanceCombination {
    pub fn new(tree: &MetricTree, terms: Vec<(f64, TreeLocation)>) -> Result<Self> {
        if terms.is_empty() {
            return Err(Error::InvalidInput("a distance combination needs at least one term".into()));
        }
        let terms = terms
            .into_iter()
            .map(|(c, a)| {
                if !(c >= 0.0 && c.is_finite()) {
                    return Err(Error::OutOfRange {
                        name: "coefficient",
                        detail: format!("{c} must be nonnegative"),
                    });
                }
                Ok((c, tree.normalize(a)?))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(DistanceCombination { terms })
    }

    /// `coef * d(., anchor)`.
    pub fn single(tree: &MetricTree, coef: f64, anchor: TreeLocation) -> Result<Self> {
        DistanceCombination::new(tree, vec![(coef, anchor)])
    }

    pub fn terms(&self) -> &[(f64, TreeLocation)] {
        &self.terms
    }

    /// Sum of the coefficients; a Lipschitz bound for the combination.
    pub fn coefficient_sum(&self) -> f64 {
        self.terms.iter().map(|(c, _)| c).sum()
    }

    pub fn eval(&self, tree: &MetricTree, at: TreeLocation) -> f64 {
        self.terms
            .iter()
            .map(|&(c, a)| c * distance_unchecked(tree, at, a))
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn star() -> MetricTree {
        let edges = (1..4).map(|k| TreeEdge { a: 0, b: k, length: 1.0 }).collect();
        MetricTree::unlabelled(4, edges).unwrap()
    }

    fn path3() -> MetricTree {
        MetricTree::unlabelled(
            3,
            vec![TreeEdge { a: 0, b: 1, length: 1.0 }, TreeEdge { a: 1, b: 2, length: 1.0 }],
        )
        .unwrap()
    }

    #[test]
    fn distance_examples() {
        let t = star();
        let leaf = TreeLocation::Node(1);
        assert_eq!(tree_distance(&t, leaf, leaf).unwrap(), 0.0);
        assert_eq!(tree_distance(&t, TreeLocation::Node(1), TreeLocation::Node(2)).unwrap(), 2.0);
        let a = t.location(0, 0.2).unwrap();
        let b = t.location(0, 0.7).unwrap();
        assert!((tree_distance(&t, a, b).unwrap() - 0.5).abs() < 1e-15);
    }

    #[test]
    fn interior_points_on_different_edges() {
        let t = star();
        let a = t.location(0, 0.25).unwrap();
        let b = t.location(2, 0.5).unwrap();
        assert_eq!(tree_distance(&t, a, b).unwrap(), 0.75);
    }

    #[test]
    fn geodesic_examples() {
        let t = path3();
        let (a, c) = (TreeLocation::Node(0), TreeLocation::Node(2));
        assert_eq!(tree_geodesic(&t, a, c, 0.0).unwrap(), a);
        assert_eq!(tree_geodesic(&t, a, c, 1.0).unwrap(), c);
        assert_eq!(tree_geodesic(&t, a, c, 0.5).unwrap(), TreeLocation::Node(1));
        let q = tree_geodesic(&t, a, c, 0.25).unwrap();
        assert_eq!(q, TreeLocation::Edge { edge: 0, offset: 0.5 });
        assert_eq!(tree_distance(&t, q, a).unwrap(), 0.25 * 2.0);
        assert!(tree_geodesic(&t, a, c, 1.5).is_err());
    }

    #[test]
    fn endpoint_offsets_canonicalize() {
        let t = path3();
        assert_eq!(t.location(1, 0.0).unwrap(), TreeLocation::Node(1));
        assert_eq!(t.location(1, 1.0).unwrap(), TreeLocation::Node(2));
        assert!(t.location(1, 1.5).is_err());
        assert!(t.normalize(TreeLocation::Node(9)).is_err());
    }

    #[test]
    fn rejects_cycles_and_bad_lengths() {
        let e = |a, b| TreeEdge { a, b, length: 1.0 };
        assert!(MetricTree::unlabelled(3, vec![e(0, 1), e(1, 0)]).is_err());
        assert!(MetricTree::unlabelled(3, vec![e(0, 1)]).is_err());
        assert!(MetricTree::unlabelled(2, vec![TreeEdge { a: 0, b: 1, length: 0.0 }]).is_err());
    }

    #[test]
    fn sphere_branches_through_nodes() {
        let t = star();
        let s = t.sphere(TreeLocation::Node(1), 1.5);
        assert_eq!(s.len(), 2);
        for p in s {
            assert!((tree_distance(&t, p, TreeLocation::Node(1)).unwrap() - 1.5).abs() < 1e-15);
        }
    }

    #[test]
    fn lattice_spacing() {
        let t = path3();
        assert_eq!(t.lattice(0.25).len(), 3 + 2 * 3);
    }

    #[test]
    fn location_json() {
        let l: TreeLocation = serde_json::from_str(r#"{"edge": 2, "offset": 0.5}"#).unwrap();
        assert_eq!(l, TreeLocation::Edge { edge: 2, offset: 0.5 });
        assert_eq!(serde_json::to_string(&TreeLocation::Node(3)).unwrap(), r#"{"node":3}"#);
    }

    #[test]
    fn combination_rejects_negative_coefficients() {
        let t = path3();
        assert!(DistanceCombination::new(&t, vec![(-1.0, TreeLocation::Node(0))]).is_err());
        assert!(DistanceCombination::new(&t, vec![]).is_err());
        let c = DistanceCombination::new(&t, vec![(1.0, TreeLocation::Node(0)), (2.0, TreeLocation::Node(2))]).unwrap();
        assert_eq!(c.eval(&t, TreeLocation::Node(1)), 3.0);
    }
}
