use serde::{Deserialize, Serialize};

use super::vector::{dist, dot, sub};
use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::tolerance;

/// A closed-form function `R^d -> R ∪ {+inf}`.
pub trait ScalarField {
    fn dim(&self) -> usize;
    fn eval(&self, x: &[f64]) -> ExtReal;
}

fn check_dim(d: usize) -> Result<()> {
    if (1..=3).contains(&d) {
        Ok(())
    } else {
        Err(Error::OutOfRange {
            name: "dimension",
            detail: format!("{d} not in 1..=3"),
        })
    }
}

/// Parameters of a planar cone: aperture `alpha`, lean angle `beta`, vertex `p`, lean direction `v`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConeParams {
    alpha: f64,
    beta: f64,
    p: [f64; 2],
    v: [f64; 2],
}

impl ConeParams {
    pub fn new(alpha: f64, beta: f64, p: [f64; 2], v: [f64; 2]) -> Result<Self> {
        use std::f64::consts::{FRAC_PI_2, PI};
        if !(alpha > 0.0 && alpha < PI) {
            return Err(Error::OutOfRange {
                name: "alpha",
                detail: format!("{alpha} not in (0, pi)"),
            });
        }
        if !(beta > 0.0 && beta < FRAC_PI_2) {
            return Err(Error::OutOfRange {
                name: "beta",
                detail: format!("{beta} not in (0, pi/2)"),
            });
        }
        let len = (v[0] * v[0] + v[1] * v[1]).sqrt();
        if (len - 1.0).abs() > tolerance::UNIT_NORM {
            return Err(Error::OutOfRange {
                name: "v",
                detail: format!("|v| = {len}, expected 1"),
            });
        }
        Ok(ConeParams { alpha, beta, p, v })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn vertex(&self) -> [f64; 2] {
        self.p
    }

    pub fn direction(&self) -> [f64; 2] {
        self.v
    }
}

/// `cot(alpha/2) |x - p| + (tan(beta) - cot(alpha/2)) <v, x - p>`.
pub fn eval_cone(c: &ConeParams, x: [f64; 2]) -> f64 {
    let cot_half = 1.0 / (c.alpha / 2.0).tan();
    let w = sub(&x, &c.p);
    let r = (w[0] * w[0] + w[1] * w[1]).sqrt();
    cot_half * r + (c.beta.tan() - cot_half) * dot(&c.v, &w)
}

impl ScalarField for ConeParams {
    fn dim(&self) -> usize {
        2
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        ExtReal::Finite(eval_cone(self, [x[0], x[1]]))
    }
}

/// `1 - |1 - |x - c||` inside the open ball of radius 2 around `c`, `+inf` outside.
#[derive(Clone, Debug, PartialEq)]
pub struct Tent {
    center: Vec<f64>,
}

pub fn make_tent(center: &[f64]) -> Result<Tent> {
    check_dim(center.len())?;
    Ok(Tent {
        center: center.to_vec(),
    })
}

impl ScalarField for Tent {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        let r = dist(x, &self.center);
        if r < 2.0 {
            ExtReal::Finite(1.0 - (1.0 - r).abs())
        } else {
            ExtReal::PosInf
        }
    }
}

/// `gamma |x - c|`.
#[derive(Clone, Debug, PartialEq)]
pub struct NormCone {
    center: Vec<f64>,
    gamma: f64,
}

pub fn make_norm_cone(center: &[f64], gamma: f64) -> Result<NormCone> {
    check_dim(center.len())?;
    if !(gamma > 0.0 && gamma.is_finite()) {
        return Err(Error::OutOfRange {
            name: "gamma",
            detail: format!("{gamma} must be positive"),
        });
    }
    Ok(NormCone {
        center: center.to_vec(),
        gamma,
    })
}

impl ScalarField for NormCone {
    fn dim(&self) -> usize {
        self.center.len()
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        ExtReal::Finite(self.gamma * dist(x, &self.center))
    }
}

/// Wraps a closure as a [`ScalarField`].
pub struct FnField<F> {
    dim: usize,
    f: F,
}

impl<F: Fn(&[f64]) -> ExtReal> FnField<F> {
    pub fn new(dim: usize, f: F) -> Self {
        FnField { dim, f }
    }
}

impl<F: Fn(&[f64]) -> ExtReal> ScalarField for FnField<F> {
    fn dim(&self) -> usize {
        self.dim
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        (self.f)(x)
    }
}

/// Named closed-form fixtures, all centered at `center`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "fixture", rename_all = "snake_case")]
pub enum Fixture {
    Tent { center: Vec<f64> },
    NormCone { center: Vec<f64>, gamma: f64 },
    /// `|x - c|^2`
    Quadratic { center: Vec<f64> },
    /// `(|x - c|^2 - 1)^2`
    DoubleWell { center: Vec<f64> },
    /// `|x - c| + sin^2(3 |x - c|)`
    AbsSin2 { center: Vec<f64> },
}

impl Fixture {
    pub fn center(&self) -> &[f64] {
        match self {
            Fixture::Tent { center }
            | Fixture::NormCone { center, .. }
            | Fixture::Quadratic { center }
            | Fixture::DoubleWell { center }
            | Fixture::AbsSin2 { center } => center,
        }
    }

    pub fn validate(&self) -> Result<()> {
        check_dim(self.center().len())?;
        if let Fixture::NormCone { center, gamma } = self {
            make_norm_cone(center, *gamma)?;
        }
        Ok(())
    }
}

impl ScalarField for Fixture {
    fn dim(&self) -> usize {
        self.center().len()
    }

    fn eval(&self, x: &[f64]) -> ExtReal {
        let r = dist(x, self.center());
        match self {
            Fixture::Tent { center } => Tent {
                center: center.clone(),
            }
            .eval(x),
            Fixture::NormCone { gamma, .. } => ExtReal::Finite(gamma * r),
            Fixture::Quadratic { .. } => ExtReal::Finite(r * r),
            Fixture::DoubleWell { .. } => ExtReal::Finite((r * r - 1.0).powi(2)),
            Fixture::AbsSin2 { .. } => ExtReal::Finite(r + (3.0 * r).sin().powi(2)),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{FRAC_PI_2, FRAC_PI_3, FRAC_PI_4, FRAC_PI_6};

    #[test]
    fn right_cone_collapses_to_norm() {
        let c = ConeParams::new(FRAC_PI_2, FRAC_PI_4, [0.0, 0.0], [1.0, 0.0]).unwrap();
        assert!((eval_cone(&c, [3.0, 4.0]) - 5.0).abs() < 1e-12);
    }

    #[test]
    fn cone_vanishes_at_vertex() {
        let c = ConeParams::new(1.1, 0.3, [0.4, -2.0], [0.6, 0.8]).unwrap();
        assert_eq!(eval_cone(&c, [0.4, -2.0]), 0.0);
    }

    #[test]
    fn leaning_cone_by_substitution() {
        // cot(pi/6) * 1 + (tan(pi/6) - cot(pi/6)) * 1 = tan(pi/6)
        let c = ConeParams::new(FRAC_PI_3, FRAC_PI_6, [1.0, 0.0], [0.0, 1.0]).unwrap();
        let independent = {
            let cot = 1.0 / (FRAC_PI_3 / 2.0).tan();
            cot * 1.0 + (FRAC_PI_6.tan() - cot) * 1.0
        };
        let got = eval_cone(&c, [1.0, 1.0]);
        assert!((got - 0.577_350_269_189_625_8).abs() < 1e-12);
        assert!((got - independent).abs() < 1e-12);
    }

    #[test]
    fn cone_params_reject_bad_angles() {
        assert!(ConeParams::new(0.0, 0.3, [0.0; 2], [1.0, 0.0]).is_err());
        assert!(ConeParams::new(1.0, FRAC_PI_2, [0.0; 2], [1.0, 0.0]).is_err());
        assert!(ConeParams::new(1.0, 0.3, [0.0; 2], [1.0, 0.1]).is_err());
    }

    #[test]
    fn tent_values() {
        let t = make_tent(&[0.0, 0.0]).unwrap();
        assert_eq!(t.eval(&[0.0, 0.0]), ExtReal::Finite(0.0));
        assert_eq!(t.eval(&[0.6, 0.8]), ExtReal::Finite(1.0));
        assert_eq!(t.eval(&[2.5, 0.0]), ExtReal::PosInf);
        assert_eq!(t.eval(&[2.0, 0.0]), ExtReal::PosInf);
    }

    #[test]
    fn norm_cone_values() {
        let c = make_norm_cone(&[0.0, 0.0], 1.0).unwrap();
        assert_eq!(c.eval(&[0.0, 0.0]), ExtReal::Finite(0.0));
        let c = make_norm_cone(&[0.0, 0.0], 2.0).unwrap();
        assert_eq!(c.eval(&[3.0, 4.0]), ExtReal::Finite(10.0));
        let c = make_norm_cone(&[1.0, 1.0], 0.5).unwrap();
        assert_eq!(c.eval(&[1.0, 2.0]), ExtReal::Finite(0.5));
        assert!(make_norm_cone(&[0.0], 0.0).is_err());
        assert!(make_norm_cone(&[0.0], -1.0).is_err());
    }

    #[test]
    fn fixture_json_is_tagged() {
        let f: Fixture = serde_json::from_str(r#"{"fixture":"norm_cone","center":[0.0],"gamma":2.0}"#).unwrap();
        assert_eq!(f.eval(&[1.5]), ExtReal::Finite(3.0));
    }
}
