use serde::Serialize;

use super::functional::FiniteFunctional;
use crate::error::{Error, Result};

/// Output of the constructive variational-principle iteration.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct EkelandResult {
    pub output: usize,
    pub input: usize,
    pub epsilon: f64,
    pub lambda: f64,
    /// Visited points, starting with `input` and ending with `output`.
    pub trace: Vec<usize>,
}

/// `y` is admissible from `x` when `J(y) + eta d(x, y) <= J(x)`.
pub(crate) fn admissible(jx: f64, jy: f64, d: f64, eta: f64) -> bool {
    jy + eta * d <= jx
}

/// From an `epsilon`-minimizer `x0`, finds `x` with `J(x) <= J(x0)`, `d(x0, x) <= lambda`
/// and `x` the unique minimizer of `J + (epsilon / lambda) d(., x)`.
///
/// Each step moves to the point of smallest `J` (smallest index on ties)
/// among those admissible from the current point, stopping when only the
/// current point is admissible. `J` strictly decreases, so the walk ends on
/// a finite space.
pub fn ekeland(j: &FiniteFunctional, x0: usize, epsilon: f64, lambda: f64) -> Result<EkelandResult> {
    if !(epsilon > 0.0 && lambda > 0.0) {
        return Err(Error::OutOfRange {
            name: "epsilon/lambda",
            detail: format!("epsilon = {epsilon}, lambda = {lambda}; both must be positive"),
        });
    }
    if x0 >= j.len() {
        return Err(Error::InvalidInput(format!("start {x0} out of range")));
    }
    let j0 = j.value(x0).finite().ok_or(Error::InfiniteValue(x0))?;
    let inf = j.infimum();
    if j0 > inf + epsilon {
        return Err(Error::Precondition(format!(
            "J(x0) = {j0} exceeds inf J + epsilon = {}",
            inf + epsilon
        )));
    }
    let eta = epsilon / lambda;
    let space = j.space();
    let mut x = x0;
    let mut trace = vec![x0];
    loop {
        let jx = j.value(x).to_f64();
        let mut next: Option<(f64, usize)> = None;
        for y in (0..j.len()).filter(|&y| y != x) {
            let Some(jy) = j.value(y).finite() else { continue };
            if admissible(jx, jy, space.dist(x, y), eta) && next.is_none_or(|(best, _)| jy < best) {
                next = Some((jy, y));
            }
        }
        match next {
            Some((_, y)) => {
                x = y;
                trace.push(y);
            }
            None => break,
        }
    }
    Ok(EkelandResult {
        output: x,
        input: x0,
        epsilon,
        lambda,
        trace,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::FiniteMetricSpace;

    fn line(values: &[f64]) -> FiniteFunctional {
        let pts: Vec<Vec<f64>> = (0..values.len()).map(|i| vec![i as f64]).collect();
        FiniteFunctional::from_finite(FiniteMetricSpace::from_points(&pts).unwrap(), values, 0).unwrap()
    }

    #[test]
    fn fixed_point_when_already_minimal() {
        let j = line(&[0.0, 1.0, 2.0]);
        let r = ekeland(&j, 0, 0.5, 1.0).unwrap();
        assert_eq!(r.output, 0);
        assert_eq!(r.trace, vec![0]);
    }

    #[test]
    fn moves_to_the_true_minimum() {
        let j = line(&[0.0, 0.1, 5.0]);
        let r = ekeland(&j, 1, 0.1, 1.0).unwrap();
        assert_eq!(r.output, 0);
        assert!(j.space().dist(1, 0) <= 1.0);
        // unique minimizer of J + 0.1 d(., 0)
        let g: Vec<f64> = (0..3).map(|v| j.value(v).to_f64() + 0.1 * j.space().dist(v, 0)).collect();
        assert!(g[1] > g[0] && g[2] > g[0]);
    }

    #[test]
    fn precondition_is_checked() {
        let j = line(&[0.0, 1.0, 2.0]);
        assert!(matches!(ekeland(&j, 2, 0.5, 1.0), Err(Error::Precondition(_))));
        assert!(ekeland(&j, 0, 0.0, 1.0).is_err());
    }
}
