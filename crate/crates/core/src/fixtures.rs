//! Seeded random instances and sampled named fixtures.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::Result;
use crate::funcspace::{
    sample_to_cloud, Fixture, FiniteMetricSpace, MetricTree, PointCloudFunction, SamplingSpec, TreeEdge, TreeLocation,
};

/// The generator used everywhere a seed is accepted.
pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

/// `n` distinct points in `[-1, 1]^dim` with values in `[0, 10]`; base is the first minimizer.
pub fn random_cloud<R: Rng>(rng: &mut R, dim: usize, n: usize) -> Result<PointCloudFunction> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(-1.0..=1.0)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    let values: Vec<f64> = (0..n).map(|_| rng.gen_range(0.0..=10.0)).collect();
    let base = (0..n).fold(0, |b, i| if values[i] < values[b] { i } else { b });
    PointCloudFunction::new(dim, points, values.into_iter().map(Into::into).collect(), base)
}

/// A cloud with dimension in 1..=3 and 10..=60 points.
pub fn random_cloud_seeded(seed: u64) -> Result<PointCloudFunction> {
    let mut r = rng(seed);
    let dim = r.gen_range(1..=3);
    let n = r.gen_range(10..=60);
    random_cloud(&mut r, dim, n)
}

/// A tree on `n` nodes where node `k` hangs off a uniformly chosen earlier node.
pub fn random_tree<R: Rng>(rng: &mut R, n: usize) -> Result<MetricTree> {
    let edges = (1..n)
        .map(|k| TreeEdge {
            a: rng.gen_range(0..k),
            b: k,
            length: rng.gen_range(0.2..2.0),
        })
        .collect();
    MetricTree::unlabelled(n, edges)
}

/// A node with probability 1/4, otherwise a uniform interior point of a uniform edge.
pub fn random_location<R: Rng>(rng: &mut R, tree: &MetricTree) -> TreeLocation {
    if rng.gen_bool(0.25) {
        return TreeLocation::Node(rng.gen_range(0..tree.node_count()));
    }
    let k = rng.gen_range(0..tree.edges().len());
    let len = tree.edge(k).length;
    tree.location(k, rng.gen_range(0.0..len)).expect("offset within edge")
}

/// Euclidean distances between `n` distinct random points of `[0, 1]^dim`.
pub fn random_metric_space<R: Rng>(rng: &mut R, n: usize, dim: usize) -> Result<FiniteMetricSpace> {
    let mut points: Vec<Vec<f64>> = Vec::with_capacity(n);
    while points.len() < n {
        let p: Vec<f64> = (0..dim).map(|_| rng.gen_range(0.0..1.0)).collect();
        if !points.contains(&p) {
            points.push(p);
        }
    }
    FiniteMetricSpace::from_points(&points)
}

/// `k` anchor indices out of `n` with values that admit an `L`-Lipschitz extension.
///
/// Raw values in `[-scale, scale]` are replaced by their lower `L`-envelope
/// over the anchors, which is `L`-Lipschitz on the anchor set.
pub fn lipschitz_anchor_values<R: Rng>(
    rng: &mut R,
    n: usize,
    k: usize,
    constant: f64,
    scale: f64,
    dist: impl Fn(usize, usize) -> f64,
) -> (Vec<usize>, Vec<f64>) {
    let mut idx: Vec<usize> = (0..n).collect();
    idx.shuffle(rng);
    idx.truncate(k.clamp(1, n));
    let raw: Vec<f64> = idx.iter().map(|_| rng.gen_range(-scale..=scale)).collect();
    let values = idx
        .iter()
        .map(|&a| {
            idx.iter()
                .zip(&raw)
                .map(|(&b, &g)| g + constant * dist(a, b))
                .fold(f64::INFINITY, f64::min)
        })
        .collect();
    (idx, values)
}

/// A named fixture sampled on the cube `center +- half_width` at step `h`, based at its center.
pub fn fixture_cloud(fixture: &Fixture, half_width: f64, h: f64) -> Result<PointCloudFunction> {
    fixture.validate()?;
    let c = fixture.center().to_vec();
    let bounds = c.iter().map(|&x| (x - half_width, x + half_width)).collect();
    sample_to_cloud(fixture, &SamplingSpec::with_step(bounds, h, c)?)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sharpness::sharpness_modulus;

    #[test]
    fn clouds_are_reproducible() {
        let a = random_cloud_seeded(7).unwrap();
        let b = random_cloud_seeded(7).unwrap();
        assert_eq!(a.points(), b.points());
        assert_eq!(a.values(), b.values());
        assert!((10..=60).contains(&a.len()));
    }

    #[test]
    fn anchor_values_are_lipschitz() {
        let mut r = rng(3);
        let s = random_metric_space(&mut r, 20, 2).unwrap();
        let (idx, vals) = lipschitz_anchor_values(&mut r, 20, 6, 0.5, 3.0, |a, b| s.dist(a, b));
        for i in 0..idx.len() {
            for j in 0..idx.len() {
                assert!((vals[i] - vals[j]).abs() <= 0.5 * s.dist(idx[i], idx[j]) + 1e-12);
            }
        }
    }

    #[test]
    fn tent_fixture_modulus() {
        let f = fixture_cloud(&Fixture::Tent { center: vec![0.0] }, 2.0, 0.5).unwrap();
        let (m, _) = sharpness_modulus(&f).unwrap();
        assert!((m - 0.5 / 1.5).abs() < 1e-12);
    }
}
