//! Refinement study of the slope characterization of sharp local minimizers on trees.

use serde::Serialize;

use super::functional::{MetricPoint, TreeField, TreeFunctional};
use super::geometry::{geodesic_convexity_check, ConvexityReport};
use super::slope::{tree_local_sharpness, tree_slope_h, DIRECTIONAL_SAMPLES};
use crate::error::{Error, Result};
use crate::funcspace::TreeLocation;
use crate::tolerance;

/// Geodesic parameters used for the convexity precondition.
const CONVEXITY_GRID: [f64; 9] = [0.0, 0.125, 0.25, 0.375, 0.5, 0.625, 0.75, 0.875, 1.0];

/// Cap on the number of point pairs used for the convexity precondition.
const CONVEXITY_PAIRS: usize = 4000;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Level {
    pub h: f64,
    /// Sampled points of the punctured ball.
    pub samples: usize,
    pub local_sharpness: f64,
    pub sharpness_witness: MetricPoint,
    pub min_slope: f64,
    pub slope_witness: TreeLocation,
    /// Discretization allowance `curvature * h / K`.
    pub tol: f64,
    pub sharp: bool,
    pub slope_ok: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Prop2Report {
    pub delta: f64,
    pub gamma: f64,
    pub closed_ball: bool,
    pub convexity: ConvexityReport,
    pub levels: Vec<Prop2Level>,
    /// Sharpness implies the slope bound at every level, and the two agree at the finest level.
    pub equivalence_holds: bool,
}

fn ball_points(j: &TreeFunctional, spacing: f64, delta: f64) -> Vec<TreeLocation> {
    let r = j.reference();
    let mut pts: Vec<TreeLocation> = j
        .tree()
        .lattice(spacing)
        .into_iter()
        .chain(j.form().kinks())
        .filter(|&u| j.dist(u, r) <= delta)
        .collect();
    pts.dedup();
    if !pts.contains(&r) {
        pts.push(r);
    }
    pts
}

/// Compares the local sharpness modulus on `B(ref, delta)` with the h-slopes
/// of `J` over the punctured ball, for each `h` in `h_sequence`.
///
/// `J` must be geodesically convex on the ball; this is checked on sampled
/// pairs first.
pub fn prop2_check(j: &TreeFunctional, delta: f64, gamma: f64, h_sequence: &[f64]) -> Result<Prop2Report> {
    if !(delta > 0.0 && gamma > 0.0) {
        return Err(Error::OutOfRange {
            name: "delta/gamma",
            detail: format!("delta = {delta}, gamma = {gamma}; both must be positive"),
        });
    }
    if h_sequence.is_empty() || h_sequence.iter().any(|&h| !(h > 0.0)) {
        return Err(Error::InvalidInput("h sequence must be nonempty and positive".into()));
    }
    if h_sequence.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::InvalidInput("h sequence must be strictly decreasing".into()));
    }

    let coarse = ball_points(j, h_sequence[0], delta);
    let mut pairs = Vec::new();
    'outer: for (a, &u) in coarse.iter().enumerate() {
        for &v in &coarse[a + 1..] {
            if pairs.len() == CONVEXITY_PAIRS {
                break 'outer;
            }
            pairs.push((u, v));
        }
    }
    let convexity = geodesic_convexity_check(j.tree(), j.form(), &pairs, &CONVEXITY_GRID, tolerance::EXACT)?;
    if !convexity.ok {
        return Err(Error::Precondition(format!(
            "functional is not geodesically convex on the ball (violation {})",
            convexity.worst_violation
        )));
    }

    let r = j.reference();
    let curvature = j.form().curvature_bound();
    let mut levels = Vec::with_capacity(h_sequence.len());
    for &h in h_sequence {
        let pts = ball_points(j, h, delta);
        let ls = tree_local_sharpness(j, delta, &pts)?;
        let mut min_slope: Option<(f64, TreeLocation)> = None;
        for &u in pts.iter().filter(|&&u| u != r) {
            let s = tree_slope_h(j, u, h)?;
            if min_slope.is_none_or(|(m, _)| s < m) {
                min_slope = Some((s, u));
            }
        }
        let (min_slope, slope_witness) = min_slope.ok_or(Error::EmptyBall(delta))?;
        let tol = curvature * h / DIRECTIONAL_SAMPLES as f64;
        levels.push(Prop2Level {
            h,
            samples: ls.samples,
            local_sharpness: ls.gamma,
            sharpness_witness: ls.witness,
            min_slope,
            slope_witness,
            tol,
            sharp: ls.gamma >= gamma - tolerance::EXACT,
            slope_ok: min_slope >= gamma - tol - tolerance::EXACT,
        });
    }
    let forward = levels.iter().all(|l| !l.sharp || l.slope_ok);
    let finest = levels.last().expect("nonempty schedule");
    let equivalence_holds = forward && finest.sharp == finest.slope_ok;
    Ok(Prop2Report {
        delta,
        gamma,
        closed_ball: true,
        convexity,
        levels,
        equivalence_holds,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{DistanceCombination, MetricTree, TreeEdge};
    use crate::metricopt::functional::TreeForm;

    fn tree() -> MetricTree {
        let edges = vec![
            TreeEdge { a: 0, b: 1, length: 1.0 },
            TreeEdge { a: 1, b: 2, length: 0.8 },
            TreeEdge { a: 1, b: 3, length: 1.3 },
            TreeEdge { a: 3, b: 4, length: 0.6 },
        ];
        MetricTree::unlabelled(5, edges).unwrap()
    }

    const HS: [f64; 4] = [0.2, 0.1, 0.05, 0.025];

    #[test]
    fn scaled_distance_is_sharp_with_matching_slopes() {
        let t = tree();
        let c = DistanceCombination::single(&t, 2.0, TreeLocation::Node(1)).unwrap();
        let j = TreeFunctional::new(t, TreeForm::Combination(c), TreeLocation::Node(1), 0.1).unwrap();
        let r = prop2_check(&j, 1.0, 2.0, &HS).unwrap();
        assert!(r.equivalence_holds);
        for l in &r.levels {
            assert_eq!(l.local_sharpness, 2.0);
            assert!(l.min_slope >= 2.0 - 1e-9);
        }
    }

    #[test]
    fn squared_distance_is_not_sharp() {
        let t = tree();
        let form = TreeForm::SquaredDistance { anchor: TreeLocation::Node(1), coef: 1.0 };
        let j = TreeFunctional::new(t, form, TreeLocation::Node(1), 0.1).unwrap();
        let r = prop2_check(&j, 0.5, 0.5, &HS).unwrap();
        assert!(r.equivalence_holds);
        let last = r.levels.last().unwrap();
        assert!(!last.sharp && !last.slope_ok);
        for w in r.levels.windows(2) {
            assert!(w[1].local_sharpness < w[0].local_sharpness);
            assert!(w[1].min_slope < w[0].min_slope);
        }
    }

    #[test]
    fn two_minimizers_pass_per_ball() {
        let t = tree();
        let form = TreeForm::NearestAnchor {
            anchors: vec![TreeLocation::Node(0), TreeLocation::Node(4)],
            coef: 1.5,
        };
        let j = TreeFunctional::new(t.clone(), form.clone(), TreeLocation::Node(0), 0.1).unwrap();
        assert!(prop2_check(&j, 0.9, 1.5, &HS).unwrap().equivalence_holds);
        let j = TreeFunctional::new(t, form, TreeLocation::Node(4), 0.1).unwrap();
        assert!(prop2_check(&j, 0.9, 1.5, &HS).unwrap().equivalence_holds);
    }

    #[test]
    fn nonconvex_functional_is_rejected() {
        let t = tree();
        let form = TreeForm::NearestAnchor {
            anchors: vec![TreeLocation::Node(0), TreeLocation::Node(2)],
            coef: 1.0,
        };
        let j = TreeFunctional::new(t, form, TreeLocation::Node(0), 0.1).unwrap();
        assert!(matches!(prop2_check(&j, 3.0, 0.5, &HS), Err(Error::Precondition(_))));
    }
}
