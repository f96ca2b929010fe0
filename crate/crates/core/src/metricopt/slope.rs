//! Slopes and sharpness moduli on finite metric spaces and metric trees.

use serde::Serialize;

use super::functional::{FiniteFunctional, MetricFunctional, MetricPoint, TreeField, TreeFunctional};
use crate::error::{Error, Result};
use crate::funcspace::TreeLocation;
use crate::sharpness::{modulus_over, slope_infimum_over, slope_over};

/// Directional samples per branch when probing the continuum around a point.
pub const DIRECTIONAL_SAMPLES: usize = 8;

/// Largest `gamma` with `J(u) >= J(ref) + gamma d(u, ref)` on the whole space, and its witness.
pub fn global_modulus(j: &FiniteFunctional) -> Result<(f64, usize)> {
    let s = j.space();
    modulus_over(j.len(), j.reference(), |i| j.value(i), |a, b| s.dist(a, b))
}

/// Global metric slope at point `i`.
pub fn global_slope(j: &FiniteFunctional, i: usize) -> Result<f64> {
    if i >= j.len() {
        return Err(Error::InvalidInput(format!("index {i} out of range")));
    }
    let s = j.space();
    slope_over(j.len(), i, |k| j.value(k), |a, b| s.dist(a, b))
}

/// Infimum of global slopes over the finite non-reference points.
pub fn slope_infimum(j: &FiniteFunctional) -> Result<f64> {
    let s = j.space();
    slope_infimum_over(j.len(), j.reference(), |k| j.value(k), |a, b| s.dist(a, b))
}

/// Radius-`h` slope on a finite space: sup of `max(J(u) - J(v), 0) / d(u, v)` over `0 < d(u, v) <= h`.
pub fn finite_slope_h(j: &FiniteFunctional, u: usize, h: f64) -> Result<f64> {
    let ju = j.value(u).finite().ok_or(Error::InfiniteValue(u))?;
    let s = j.space();
    let mut sup = 0.0f64;
    for v in 0..j.len() {
        let d = s.dist(u, v);
        if v == u || d > h {
            continue;
        }
        if let Some(jv) = j.value(v).finite() {
            sup = sup.max((ju - jv).max(0.0) / d);
        }
    }
    Ok(sup)
}

/// Radius-`h` slope on a tree.
///
/// Candidates are the points at distances `h k / K` (`K` =
/// [`DIRECTIONAL_SAMPLES`]) along every branch leaving `u`, plus the
/// reference point, the functional's kinks and the tree nodes within `h`.
pub fn tree_slope_h(j: &TreeFunctional, u: TreeLocation, h: f64) -> Result<f64> {
    field_slope_h(j.tree(), j.form(), u, h, &extra_candidates(j))
}

fn extra_candidates(j: &TreeFunctional) -> Vec<TreeLocation> {
    let mut c = vec![j.reference()];
    c.extend(j.form().kinks());
    c.extend((0..j.tree().node_count()).map(TreeLocation::Node));
    c
}

pub(crate) fn field_slope_h(
    tree: &crate::funcspace::MetricTree,
    field: &dyn TreeField,
    u: TreeLocation,
    h: f64,
    extra: &[TreeLocation],
) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange {
            name: "h",
            detail: format!("{h} must be positive"),
        });
    }
    let u = tree.normalize(u)?;
    let ju = field.eval(tree, u);
    let mut sup = 0.0f64;
    let mut consider = |v: TreeLocation| {
        let d = crate::funcspace::tree_distance(tree, u, v).expect("valid location");
        if d > 0.0 && d <= h {
            sup = sup.max((ju - field.eval(tree, v)).max(0.0) / d);
        }
    };
    for k in 1..=DIRECTIONAL_SAMPLES {
        let r = h * (k as f64 / DIRECTIONAL_SAMPLES as f64);
        for v in tree.sphere(u, r) {
            consider(v);
        }
    }
    for &v in extra {
        consider(v);
    }
    Ok(sup)
}

/// Radius-`h` slope at `u`; 0 when no other point lies within `h`.
pub fn local_slope_h(j: &MetricFunctional, u: MetricPoint, h: f64) -> Result<f64> {
    if !(h > 0.0) {
        return Err(Error::OutOfRange {
            name: "h",
            detail: format!("{h} must be positive"),
        });
    }
    match (j, u) {
        (MetricFunctional::Finite(j), MetricPoint::Index(i)) => {
            if i >= j.len() {
                return Err(Error::InvalidInput(format!("index {i} out of range")));
            }
            finite_slope_h(j, i, h)
        }
        (MetricFunctional::Tree(j), MetricPoint::Location(l)) => tree_slope_h(j, l, h),
        _ => Err(Error::InvalidInput("point kind does not match the functional".into())),
    }
}

/// Local sharpness modulus over a closed ball.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LocalSharpness {
    pub gamma: f64,
    pub witness: MetricPoint,
    pub delta: f64,
    pub closed_ball: bool,
    pub samples: usize,
}

/// `inf (J(u) - J(ref)) / d(u, ref)` over sampled `u` in the closed ball `B(ref, delta)`, `u != ref`.
///
/// The reference must minimize `J` over all samples.
pub fn local_sharpness(j: &MetricFunctional, delta: f64) -> Result<LocalSharpness> {
    if !(delta > 0.0) {
        return Err(Error::OutOfRange {
            name: "delta",
            detail: format!("{delta} must be positive"),
        });
    }
    match j {
        MetricFunctional::Finite(j) => {
            let r = j.reference();
            let jr = j.value(r).to_f64();
            if j.values().iter().any(|v| v.to_f64() < jr) {
                return Err(Error::Precondition(format!("reference {r} is not a minimizer")));
            }
            let ball: Vec<usize> = j.space().ball(r, delta).into_iter().filter(|&u| u != r).collect();
            let mut best: Option<(f64, usize)> = None;
            for &u in &ball {
                let ratio = (j.value(u).to_f64() - jr) / j.space().dist(u, r);
                if best.is_none_or(|(g, _)| ratio < g) {
                    best = Some((ratio, u));
                }
            }
            let (gamma, w) = best.ok_or(Error::EmptyBall(delta))?;
            Ok(LocalSharpness {
                gamma,
                witness: MetricPoint::Index(w),
                delta,
                closed_ball: true,
                samples: ball.len(),
            })
        }
        MetricFunctional::Tree(j) => tree_local_sharpness(j, delta, &j.samples()),
    }
}

pub(crate) fn tree_local_sharpness(j: &TreeFunctional, delta: f64, samples: &[TreeLocation]) -> Result<LocalSharpness> {
    let r = j.reference();
    let jr = j.eval(r);
    let values: Vec<f64> = samples.iter().map(|&u| j.eval(u)).collect();
    if values.iter().any(|&v| v < jr) {
        return Err(Error::Precondition("reference is not a minimizer over the samples".into()));
    }
    let mut best: Option<(f64, TreeLocation)> = None;
    let mut count = 0;
    for (&u, &ju) in samples.iter().zip(&values) {
        let d = j.dist(u, r);
        if d == 0.0 || d > delta {
            continue;
        }
        count += 1;
        let ratio = (ju - jr) / d;
        if best.is_none_or(|(g, _)| ratio < g) {
            best = Some((ratio, u));
        }
    }
    let (gamma, w) = best.ok_or(Error::EmptyBall(delta))?;
    Ok(LocalSharpness {
        gamma,
        witness: MetricPoint::Location(w),
        delta,
        closed_ball: true,
        samples: count,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::ExtReal;
    use crate::funcspace::{DistanceCombination, FiniteMetricSpace, MetricTree, TreeEdge};
    use crate::metricopt::functional::TreeForm;

    fn path_space(step: f64, n: usize, f: impl Fn(f64) -> f64) -> FiniteFunctional {
        let pts: Vec<Vec<f64>> = (0..n).map(|i| vec![i as f64 * step]).collect();
        let vals: Vec<f64> = pts.iter().map(|p| f(p[0])).collect();
        FiniteFunctional::from_finite(FiniteMetricSpace::from_points(&pts).unwrap(), &vals, 0).unwrap()
    }

    fn star_cone(gamma: f64) -> TreeFunctional {
        let edges = vec![
            TreeEdge { a: 0, b: 1, length: 1.0 },
            TreeEdge { a: 0, b: 2, length: 1.5 },
            TreeEdge { a: 2, b: 3, length: 0.7 },
        ];
        let t = MetricTree::unlabelled(4, edges).unwrap();
        let c = DistanceCombination::single(&t, gamma, TreeLocation::Node(0)).unwrap();
        TreeFunctional::new(t, TreeForm::Combination(c), TreeLocation::Node(0), 0.1).unwrap()
    }

    #[test]
    fn slope_vanishes_at_local_minimum() {
        let j = path_space(0.1, 11, |x| (x - 0.5).abs());
        assert_eq!(finite_slope_h(&j, 5, 0.25).unwrap(), 0.0);
    }

    #[test]
    fn isolated_point_has_zero_slope() {
        let j = path_space(0.1, 11, |x| x);
        assert_eq!(finite_slope_h(&j, 5, 0.05).unwrap(), 0.0);
    }

    #[test]
    fn distance_cone_slope_is_gamma() {
        let j = star_cone(1.7);
        for &(e, t) in &[(0usize, 0.4), (1, 1.2), (2, 0.3)] {
            let u = j.tree().location(e, t).unwrap();
            for &h in &[0.05, 0.2, 1.0] {
                let s = tree_slope_h(&j, u, h).unwrap();
                assert!((s - 1.7).abs() < 1e-12, "slope {s} at {u:?}, h={h}");
            }
        }
    }

    #[test]
    fn tent_like_path_local_sharpness() {
        let j = MetricFunctional::Finite(path_space(0.2, 11, |r| if r <= 1.0 { r } else { 2.0 - r }));
        let s = local_sharpness(&j, 1.0).unwrap();
        assert!((s.gamma - 1.0).abs() < 1e-12);
        let s = local_sharpness(&j, 1.8).unwrap();
        // brute force over the nodes in the ball
        let brute = (1..=9)
            .map(|i| {
                let r = i as f64 * 0.2;
                (if r <= 1.0 { r } else { 2.0 - r }) / r
            })
            .fold(f64::INFINITY, f64::min);
        assert!((s.gamma - brute).abs() < 1e-12);
        assert!((s.gamma - 0.2 / 1.8).abs() < 1e-9);
    }

    #[test]
    fn local_but_not_global_sharpness() {
        // second global minimum at distance 3, outside the ball of radius 1
        let pts: Vec<Vec<f64>> = (0..7).map(|i| vec![i as f64 * 0.5]).collect();
        let vals = [0.0, 0.5, 1.0, 1.0, 0.8, 0.4, 0.0];
        let j = FiniteFunctional::from_finite(FiniteMetricSpace::from_points(&pts).unwrap(), &vals, 0).unwrap();
        assert!(global_modulus(&j).unwrap().0 <= 0.0);
        let s = local_sharpness(&MetricFunctional::Finite(j), 1.0).unwrap();
        assert!(s.gamma > 0.0);
    }

    #[test]
    fn empty_ball_is_an_error() {
        let j = MetricFunctional::Finite(path_space(1.0, 3, |x| x));
        assert_eq!(local_sharpness(&j, 0.5), Err(Error::EmptyBall(0.5)));
    }

    #[test]
    fn non_minimizer_reference_is_rejected() {
        let pts = vec![vec![0.0], vec![1.0]];
        let j = FiniteFunctional::new(
            FiniteMetricSpace::from_points(&pts).unwrap(),
            vec![ExtReal::Finite(1.0), ExtReal::ZERO],
            0,
        )
        .unwrap();
        assert!(matches!(local_sharpness(&MetricFunctional::Finite(j), 2.0), Err(Error::Precondition(_))));
    }

    #[test]
    fn global_modulus_equals_slope_infimum() {
        let j = path_space(0.3, 8, |x| x * (1.0 + 0.3 * (5.0 * x).sin()));
        let (m, _) = global_modulus(&j).unwrap();
        assert!(m > 0.0);
        assert!((m - slope_infimum(&j).unwrap()).abs() < 1e-9);
    }

    #[test]
    fn mismatched_point_kind() {
        let j = MetricFunctional::Finite(path_space(1.0, 3, |x| x));
        assert!(local_slope_h(&j, MetricPoint::Location(TreeLocation::Node(0)), 1.0).is_err());
    }
}
