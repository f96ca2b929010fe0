use serde::{Deserialize, Serialize};

use super::cloud::PointCloudFunction;
use super::field::ScalarField;
use super::grid::{node_coord, GridFunction};
use crate::error::{Error, Result};

/// Box sampling of a closed-form function with a distinguished base point.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SamplingSpec {
    pub bounds: Vec<(f64, f64)>,
    pub resolution: Vec<usize>,
    pub base: Vec<f64>,
}

impl SamplingSpec {
    /// Per-axis resolution chosen so the grid step is `h` (rounded to the nearest node count).
    pub fn with_step(bounds: Vec<(f64, f64)>, h: f64, base: Vec<f64>) -> Result<Self> {
        if !(h > 0.0) {
            return Err(Error::OutOfRange {
                name: "step",
                detail: format!("{h} must be positive"),
            });
        }
        let resolution = bounds
            .iter()
            .map(|&(lo, hi)| ((hi - lo) / h).round() as usize + 1)
            .collect();
        Ok(SamplingSpec {
            bounds,
            resolution,
            base,
        })
    }

    fn nearest_node(&self) -> Result<Vec<usize>> {
        if self.base.len() != self.bounds.len() || self.resolution.len() != self.bounds.len() {
            return Err(Error::InvalidInput("sampling spec dimensions disagree".into()));
        }
        self.bounds
            .iter()
            .zip(&self.resolution)
            .zip(&self.base)
            .enumerate()
            .map(|(k, ((&(lo, hi), &n), &x))| {
                if n < 2 {
                    return Err(Error::InvalidInput(format!("axis {k}: resolution {n} < 2")));
                }
                if x < lo || x > hi {
                    return Err(Error::InvalidInput(format!("axis {k}: base {x} outside [{lo}, {hi}]")));
                }
                let t = (x - lo) / (hi - lo) * (n - 1) as f64;
                Ok((t.round() as usize).min(n - 1))
            })
            .collect()
    }
}

/// Samples `field` on the spec's grid. Returns the grid and the node nearest the base point.
pub fn sample_to_grid(field: &dyn ScalarField, spec: &SamplingSpec) -> Result<(GridFunction, usize)> {
    if field.dim() != spec.bounds.len() {
        return Err(Error::InvalidInput(format!(
            "field has dimension {}, spec has {}",
            field.dim(),
            spec.bounds.len()
        )));
    }
    let snap = spec.nearest_node()?;
    let total: usize = spec.resolution.iter().product();
    let mut values = Vec::with_capacity(total);
    let mut idx = vec![0usize; spec.bounds.len()];
    for _ in 0..total {
        let x: Vec<f64> = idx
            .iter()
            .enumerate()
            .map(|(k, &j)| node_coord(spec.bounds[k], spec.resolution[k], j))
            .collect();
        values.push(field.eval(&x));
        for k in (0..idx.len()).rev() {
            idx[k] += 1;
            if idx[k] < spec.resolution[k] {
                break;
            }
            idx[k] = 0;
        }
    }
    let grid = GridFunction::new(spec.bounds.clone(), spec.resolution.clone(), values)?;
    let base = grid.ravel(&snap);
    Ok((grid, base))
}

/// Samples `field` on the spec's grid as a point cloud whose base node sits exactly at the base point.
pub fn sample_to_cloud(field: &dyn ScalarField, spec: &SamplingSpec) -> Result<PointCloudFunction> {
    let (grid, base) = sample_to_grid(field, spec).map_err(|e| match e {
        Error::AllInfinite => Error::InvalidInput("no finite values in the sample".into()),
        other => other,
    })?;
    let mut points: Vec<Vec<f64>> = (0..grid.len()).map(|i| grid.node(i)).collect();
    points[base] = spec.base.clone();
    let mut values = grid.values().to_vec();
    values[base] = field.eval(&spec.base);
    PointCloudFunction::new(grid.dim(), points, values, base)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extended::ExtReal;
    use crate::funcspace::field::{make_norm_cone, make_tent, FnField};

    fn finite(v: &[ExtReal]) -> Vec<f64> {
        v.iter().map(|x| x.to_f64()).collect()
    }

    #[test]
    fn norm_cone_1d() {
        let cone = make_norm_cone(&[0.0], 1.0).unwrap();
        let spec = SamplingSpec {
            bounds: vec![(-1.0, 1.0)],
            resolution: vec![5],
            base: vec![0.0],
        };
        let c = sample_to_cloud(&cone, &spec).unwrap();
        assert_eq!(finite(c.values()), vec![1.0, 0.5, 0.0, 0.5, 1.0]);
        assert_eq!(c.base_index(), 2);
    }

    #[test]
    fn tent_boundary_nodes_are_infinite() {
        let tent = make_tent(&[0.0]).unwrap();
        let spec = SamplingSpec {
            bounds: vec![(-2.0, 2.0)],
            resolution: vec![9],
            base: vec![0.0],
        };
        let c = sample_to_cloud(&tent, &spec).unwrap();
        // direct evaluation at -2, -1.5, ..., 2
        let expected: Vec<ExtReal> = (0..9)
            .map(|j| {
                let r = (-2.0 + 0.5 * j as f64).abs();
                if r < 2.0 {
                    ExtReal::Finite(1.0 - (1.0 - r).abs())
                } else {
                    ExtReal::PosInf
                }
            })
            .collect();
        assert_eq!(c.values(), &expected[..]);
        assert_eq!(c.value(0), ExtReal::PosInf);
        assert_eq!(c.value(8), ExtReal::PosInf);
    }

    #[test]
    fn quadratic_three_nodes() {
        let q = FnField::new(1, |x: &[f64]| ExtReal::Finite(x[0] * x[0]));
        let spec = SamplingSpec {
            bounds: vec![(-1.0, 1.0)],
            resolution: vec![3],
            base: vec![0.0],
        };
        let c = sample_to_cloud(&q, &spec).unwrap();
        assert_eq!(finite(c.values()), vec![1.0, 0.0, 1.0]);
    }

    #[test]
    fn base_is_snapped_exactly() {
        let q = FnField::new(1, |x: &[f64]| ExtReal::Finite(x[0].abs()));
        let spec = SamplingSpec {
            bounds: vec![(-1.0, 1.0)],
            resolution: vec![4],
            base: vec![0.1],
        };
        let c = sample_to_cloud(&q, &spec).unwrap();
        assert_eq!(c.base_point(), &[0.1]);
        assert_eq!(c.base_value(), 0.1);
    }

    #[test]
    fn all_infinite_is_an_error() {
        let q = FnField::new(1, |_: &[f64]| ExtReal::PosInf);
        let spec = SamplingSpec {
            bounds: vec![(-1.0, 1.0)],
            resolution: vec![3],
            base: vec![0.0],
        };
        assert!(sample_to_cloud(&q, &spec).is_err());
    }

    #[test]
    fn step_rounds_to_node_count() {
        let s = SamplingSpec::with_step(vec![(-2.0, 2.0)], 0.25, vec![0.0]).unwrap();
        assert_eq!(s.resolution, vec![17]);
    }
}
