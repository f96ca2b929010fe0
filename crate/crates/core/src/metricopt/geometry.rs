//! Comparison-triangle and geodesic-convexity checks.

use serde::Serialize;

use super::functional::TreeField;
use crate::error::{Error, Result};
use crate::funcspace::{FiniteMetricSpace, MetricTree, TreeLocation};
use crate::funcspace::{distance_unchecked, geodesic_unchecked};
use crate::tolerance;

/// Supplies distances and points along geodesics.
pub trait GeodesicOracle {
    type Point: Copy + std::fmt::Debug + PartialEq + Serialize;

    fn distance(&self, a: Self::Point, b: Self::Point) -> f64;

    /// Candidate points for `sigma(s)` on a geodesic from `a` to `b`, and
    /// the worst endpoint-identity residual among them.
    fn geodesic_points(&self, a: Self::Point, b: Self::Point, s: f64) -> (Vec<Self::Point>, f64);

    /// True when `geodesic_points` is exact.
    fn exact(&self) -> bool;
}

impl GeodesicOracle for MetricTree {
    type Point = TreeLocation;

    fn distance(&self, a: TreeLocation, b: TreeLocation) -> f64 {
        distance_unchecked(self, a, b)
    }

    fn geodesic_points(&self, a: TreeLocation, b: TreeLocation, s: f64) -> (Vec<TreeLocation>, f64) {
        (vec![geodesic_unchecked(self, a, b, s)], 0.0)
    }

    fn exact(&self) -> bool {
        true
    }
}

/// Approximate geodesics on a finite metric space: `sigma(s)` is any point
/// `m` minimizing `|d(a, m) - s D| + |d(m, b) - (1 - s) D|`.
#[derive(Clone, Debug)]
pub struct MidpointOracle<'a> {
    space: &'a FiniteMetricSpace,
}

impl<'a> MidpointOracle<'a> {
    pub fn new(space: &'a FiniteMetricSpace) -> Self {
        MidpointOracle { space }
    }
}

impl GeodesicOracle for MidpointOracle<'_> {
    type Point = usize;

    fn distance(&self, a: usize, b: usize) -> f64 {
        self.space.dist(a, b)
    }

    fn geodesic_points(&self, a: usize, b: usize, s: f64) -> (Vec<usize>, f64) {
        let total = self.space.dist(a, b);
        let residual = |m: usize| (self.space.dist(a, m) - s * total).abs() + (self.space.dist(m, b) - (1.0 - s) * total).abs();
        let best = (0..self.space.len()).map(residual).fold(f64::INFINITY, f64::min);
        let pts = (0..self.space.len())
            .filter(|&m| residual(m) <= best + tolerance::GEODESIC)
            .collect();
        (pts, best)
    }

    fn exact(&self) -> bool {
        false
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cat0Witness<P> {
    pub u: P,
    pub v: P,
    pub w: P,
    pub s: f64,
    pub sigma: P,
    pub lhs: f64,
    pub rhs: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cat0Report<P> {
    pub ok: bool,
    pub worst_violation: f64,
    pub witness: Option<Cat0Witness<P>>,
    /// Quadruples evaluated.
    pub samples: usize,
    /// Quadruples left out because no candidate met the geodesic identities exactly.
    pub skipped_inexact: usize,
    /// Set when the oracle is not exact.
    pub approximate: bool,
    pub tolerance: f64,
}

/// Comparison-inequality excess
/// `d(sigma(s), u)^2 - [(1-s) d(v,u)^2 + s d(w,u)^2 - s(1-s) d(v,w)^2]`
/// over sampled `(u, v, w, s)`.
///
/// With several candidate points for `sigma(s)` the smallest excess is used.
/// Quadruples whose best candidate misses the geodesic identities by more
/// than [`tolerance::GEODESIC`] are skipped and counted.
pub fn cat0_check<O: GeodesicOracle>(oracle: &O, quadruples: &[(O::Point, O::Point, O::Point, f64)], tol: f64) -> Cat0Report<O::Point> {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    let mut skipped = 0;
    for &(u, v, w, s) in quadruples {
        let (cands, residual) = oracle.geodesic_points(v, w, s);
        if residual > tolerance::GEODESIC {
            skipped += 1;
            continue;
        }
        let (dvu, dwu, dvw) = (oracle.distance(v, u), oracle.distance(w, u), oracle.distance(v, w));
        let rhs = (1.0 - s) * dvu * dvu + s * dwu * dwu - s * (1.0 - s) * dvw * dvw;
        let Some((lhs, sigma)) = cands
            .iter()
            .map(|&m| (oracle.distance(m, u).powi(2), m))
            .min_by(|a, b| a.0.total_cmp(&b.0))
        else {
            skipped += 1;
            continue;
        };
        let excess = lhs - rhs;
        if excess > worst {
            worst = excess;
            witness = Some(Cat0Witness { u, v, w, s, sigma, lhs, rhs });
        }
    }
    let worst_violation = worst.max(0.0);
    Cat0Report {
        ok: worst_violation <= tol,
        worst_violation,
        witness: witness.filter(|_| worst_violation > tol),
        samples: quadruples.len() - skipped,
        skipped_inexact: skipped,
        approximate: !oracle.exact(),
        tolerance: tol,
    }
}

/// Like [`cat0_check`] but refuses oracles that are not exact.
pub fn cat0_check_exact<O: GeodesicOracle>(
    oracle: &O,
    quadruples: &[(O::Point, O::Point, O::Point, f64)],
    tol: f64,
) -> Result<Cat0Report<O::Point>> {
    if !oracle.exact() {
        return Err(Error::NoGeodesicOracle("only approximate geodesics are available".into()));
    }
    Ok(cat0_check(oracle, quadruples, tol))
}

/// Circle of circumference 4 sampled every 0.5, as a finite metric space.
///
/// This is the unit-edge 4-cycle with its edge midpoints added, which is
/// enough for midpoints to exist at the configurations that break the
/// comparison inequality.
pub fn four_cycle() -> FiniteMetricSpace {
    let n = 8;
    let matrix = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| {
                    let k = (i as isize - j as isize).unsigned_abs();
                    0.5 * k.min(n - k) as f64
                })
                .collect()
        })
        .collect();
    FiniteMetricSpace::from_matrix(matrix).expect("cycle metric")
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityWitness {
    pub u: TreeLocation,
    pub v: TreeLocation,
    pub s: f64,
    pub sigma: TreeLocation,
    pub value: f64,
    pub chord: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ConvexityReport {
    pub ok: bool,
    pub worst_violation: f64,
    pub witness: Option<ConvexityWitness>,
    pub samples: usize,
    pub tolerance: f64,
}

/// Checks `phi(sigma(s)) <= (1-s) phi(u) + s phi(v)` along tree geodesics.
pub fn geodesic_convexity_check(
    tree: &MetricTree,
    phi: &dyn TreeField,
    pairs: &[(TreeLocation, TreeLocation)],
    s_grid: &[f64],
    tol: f64,
) -> Result<ConvexityReport> {
    let mut worst = f64::NEG_INFINITY;
    let mut witness = None;
    for &(u, v) in pairs {
        let u = tree.normalize(u)?;
        let v = tree.normalize(v)?;
        let (pu, pv) = (phi.eval(tree, u), phi.eval(tree, v));
        for &s in s_grid {
            if !(0.0..=1.0).contains(&s) {
                return Err(Error::OutOfRange {
                    name: "s",
                    detail: format!("{s} not in [0, 1]"),
                });
            }
            let sigma = geodesic_unchecked(tree, u, v, s);
            let value = phi.eval(tree, sigma);
            let chord = (1.0 - s) * pu + s * pv;
            if value - chord > worst {
                worst = value - chord;
                witness = Some(ConvexityWitness { u, v, s, sigma, value, chord });
            }
        }
    }
    let worst_violation = worst.max(0.0);
    Ok(ConvexityReport {
        ok: worst_violation <= tol,
        worst_violation,
        witness: witness.filter(|_| worst_violation > tol),
        samples: pairs.len() * s_grid.len(),
        tolerance: tol,
    })
}
