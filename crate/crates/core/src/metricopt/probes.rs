//! Lipschitz and distance-combination perturbation probes.

use serde::Serialize;

use super::functional::{FiniteFunctional, TreeFunctional};
use super::slope::field_slope_h;
use crate::error::{Error, Result};
use crate::funcspace::{DistanceCombination, FiniteMetricSpace, TreeLocation};
use crate::tolerance::{self, LIPSCHITZ_SLACK};

/// Levels `min_edge / 2^k`, `k = 1..=COR2_LEVELS`, used to estimate a slope at a point.
pub const COR2_LEVELS: u32 = 12;

/// `zeta(x) = min_i (g_i + L d(x, a_i))` on the points of a finite metric space.
pub fn mcshane_on_metric(space: &FiniteMetricSpace, anchors: &[usize], values: &[f64], constant: f64) -> Result<Vec<f64>> {
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::OutOfRange {
            name: "L",
            detail: format!("{constant} must be positive"),
        });
    }
    if anchors.is_empty() || anchors.len() != values.len() {
        return Err(Error::InvalidInput(format!(
            "{} anchors for {} values",
            anchors.len(),
            values.len()
        )));
    }
    if let Some(&a) = anchors.iter().find(|&&a| a >= space.len()) {
        return Err(Error::InvalidInput(format!("anchor {a} out of range")));
    }
    let mut required = 0.0f64;
    for i in 0..anchors.len() {
        for j in 0..i {
            let d = space.dist(anchors[i], anchors[j]);
            if d == 0.0 {
                if values[i] != values[j] {
                    return Err(Error::ConflictingAnchors(i));
                }
                continue;
            }
            required = required.max((values[i] - values[j]).abs() / d);
        }
    }
    if required > constant * (1.0 + LIPSCHITZ_SLACK) {
        return Err(Error::InfeasibleConstant { required, given: constant });
    }
    Ok((0..space.len())
        .map(|x| {
            anchors
                .iter()
                .zip(values)
                .map(|(&a, &g)| g + constant * space.dist(x, a))
                .fold(f64::INFINITY, f64::min)
        })
        .collect())
}

/// Smallest Lipschitz constant of `zeta` over the space (pairwise exhaustive).
pub fn lipschitz_constant(space: &FiniteMetricSpace, zeta: &[f64]) -> f64 {
    let mut l = 0.0f64;
    for i in 0..zeta.len() {
        for j in 0..i {
            l = l.max((zeta[i] - zeta[j]).abs() / space.dist(i, j));
        }
    }
    l
}

fn argmin_in_ball(values: &[f64], in_ball: impl Fn(usize) -> bool) -> Vec<usize> {
    let min = values.iter().copied().fold(f64::INFINITY, f64::min);
    (0..values.len()).filter(|&i| values[i] == min && in_ball(i)).collect()
}

/// Minimizers of `J + zeta` over the whole space that lie in the closed ball `B(ref, delta)`.
///
/// `zeta` must be `L`-Lipschitz; this is verified pairwise first.
pub fn thm2_probe(j: &FiniteFunctional, zeta: &[f64], constant: f64, delta: f64) -> Result<Vec<usize>> {
    if zeta.len() != j.len() {
        return Err(Error::InvalidInput(format!("{} perturbation values for {} points", zeta.len(), j.len())));
    }
    let measured = lipschitz_constant(j.space(), zeta);
    if measured > constant * (1.0 + LIPSCHITZ_SLACK) {
        return Err(Error::InfeasibleConstant {
            required: measured,
            given: constant,
        });
    }
    let total: Vec<f64> = (0..j.len())
        .map(|i| j.value(i).finite().map_or(f64::INFINITY, |v| v + zeta[i]))
        .collect();
    let r = j.reference();
    Ok(argmin_in_ball(&total, |i| j.space().dist(i, r) <= delta))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Cor2Outcome {
    /// Nodes minimizing `J + phi` that lie in the closed ball.
    pub argmin_in_ball: Vec<usize>,
    /// h-slope of `phi` at the reference at the finest level.
    pub slope_estimate: f64,
    /// `(h, slope)` for each level.
    pub slope_levels: Vec<(f64, f64)>,
    /// Whether `slope_estimate < gamma`.
    pub precondition_met: bool,
}

/// Minimizers of `J + phi` over the tree's node set inside `B(ref, delta)`.
///
/// Requires the estimated slope of `phi` at the reference to be below `gamma`.
pub fn cor2_probe(j: &TreeFunctional, phi: &DistanceCombination, delta: f64, gamma: f64) -> Result<Cor2Outcome> {
    let out = cor2_report(j, phi, delta, gamma)?;
    if !out.precondition_met {
        return Err(Error::Precondition(format!(
            "slope estimate {} of the perturbation is not below gamma = {gamma}",
            out.slope_estimate
        )));
    }
    Ok(out)
}

/// As [`cor2_probe`], but reports instead of failing when the slope bound does not hold.
pub fn cor2_report(j: &TreeFunctional, phi: &DistanceCombination, delta: f64, gamma: f64) -> Result<Cor2Outcome> {
    let TreeLocation::Node(r) = j.reference() else {
        return Err(Error::Precondition("reference must be a node".into()));
    };
    let tree = j.tree();
    let phi = DistanceCombination::new(tree, phi.terms().to_vec())?;
    let mut slope_levels = Vec::new();
    let mut h = tree.min_edge_length();
    for _ in 0..COR2_LEVELS {
        h /= 2.0;
        slope_levels.push((h, field_slope_h(tree, &phi, j.reference(), h, &[])?));
    }
    let slope_estimate = slope_levels.last().map_or(0.0, |&(_, s)| s);
    let total: Vec<f64> = (0..tree.node_count())
        .map(|x| {
            let at = TreeLocation::Node(x);
            j.eval(at) + phi.eval(tree, at)
        })
        .collect();
    Ok(Cor2Outcome {
        argmin_in_ball: argmin_in_ball(&total, |x| tree.node_distance(x, r) <= delta),
        slope_estimate,
        slope_levels,
        precondition_met: slope_estimate < gamma - tolerance::EXACT,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{MetricTree, TreeEdge};
    use crate::metricopt::functional::TreeForm;

    fn line(n: usize) -> FiniteMetricSpace {
        FiniteMetricSpace::from_points(&(0..n).map(|i| vec![i as f64]).collect::<Vec<_>>()).unwrap()
    }

    fn star() -> MetricTree {
        let edges = (1..4).map(|k| TreeEdge { a: 0, b: k, length: 1.0 }).collect();
        MetricTree::unlabelled(4, edges).unwrap()
    }

    #[test]
    fn mcshane_interpolates_and_is_lipschitz() {
        let s = line(5);
        let z = mcshane_on_metric(&s, &[0, 4], &[0.0, 1.0], 0.5).unwrap();
        assert_eq!(z, vec![0.0, 0.5, 1.0, 1.5, 1.0]);
        assert!(lipschitz_constant(&s, &z) <= 0.5);
        assert!(matches!(
            mcshane_on_metric(&s, &[0, 1], &[0.0, 1.0], 0.5),
            Err(Error::InfeasibleConstant { .. })
        ));
    }

    #[test]
    fn zero_perturbation_keeps_unique_minimizer() {
        let j = FiniteFunctional::from_finite(line(4), &[0.0, 1.0, 2.0, 3.0], 0).unwrap();
        assert_eq!(thm2_probe(&j, &[0.0; 4], 0.1, 10.0).unwrap(), vec![0]);
    }

    #[test]
    fn thm2_rejects_understated_constant() {
        let j = FiniteFunctional::from_finite(line(3), &[0.0, 1.0, 2.0], 0).unwrap();
        assert!(thm2_probe(&j, &[0.0, 1.0, 0.0], 0.5, 1.0).is_err());
    }

    #[test]
    fn cor2_small_combination_keeps_reference() {
        let t = star();
        let cone = DistanceCombination::single(&t, 1.0, TreeLocation::Node(1)).unwrap();
        let j = TreeFunctional::new(t.clone(), TreeForm::Combination(cone), TreeLocation::Node(1), 0.1).unwrap();
        let phi = DistanceCombination::new(&t, vec![(0.3, TreeLocation::Node(2)), (0.4, TreeLocation::Node(3))]).unwrap();
        let out = cor2_probe(&j, &phi, 5.0, 1.0).unwrap();
        assert_eq!(out.argmin_in_ball, vec![1]);
        assert!((out.slope_estimate - 0.7).abs() < 1e-12);
        let big = DistanceCombination::single(&t, 1.5, TreeLocation::Node(2)).unwrap();
        assert!(matches!(cor2_probe(&j, &big, 5.0, 1.0), Err(Error::Precondition(_))));
        let moved = cor2_report(&j, &big, 5.0, 1.0).unwrap();
        assert!(!moved.precondition_met);
        assert_eq!(moved.argmin_in_ball, vec![2]);
    }
}
