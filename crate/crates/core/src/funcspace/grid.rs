use super::cloud::PointCloudFunction;
use crate::error::{Error, Result};
use crate::extended::ExtReal;

/// Values on a regular box grid in `d <= 3` dimensions, row-major (last axis fastest).
#[derive(Clone, Debug, PartialEq)]
pub struct GridFunction {
    bounds: Vec<(f64, f64)>,
    resolution: Vec<usize>,
    values: Vec<ExtReal>,
}

impl GridFunction {
    pub fn new(bounds: Vec<(f64, f64)>, resolution: Vec<usize>, values: Vec<ExtReal>) -> Result<Self> {
        let d = bounds.len();
        if !(1..=3).contains(&d) {
            return Err(Error::OutOfRange {
                name: "dimension",
                detail: format!("{d} not in 1..=3"),
            });
        }
        if resolution.len() != d {
            return Err(Error::InvalidInput(format!(
                "{} resolutions for {d} axes",
                resolution.len()
            )));
        }
        for (k, (&(lo, hi), &n)) in bounds.iter().zip(&resolution).enumerate() {
            if !(lo.is_finite() && hi.is_finite() && lo < hi) {
                return Err(Error::InvalidInput(format!("axis {k}: bounds [{lo}, {hi}] not increasing")));
            }
            if n < 2 {
                return Err(Error::InvalidInput(format!("axis {k}: resolution {n} < 2")));
            }
        }
        let total: usize = resolution.iter().product();
        if values.len() != total {
            return Err(Error::InvalidInput(format!(
                "value table has {} entries, expected {total}",
                values.len()
            )));
        }
        if !values.iter().any(|v| v.is_finite()) {
            return Err(Error::AllInfinite);
        }
        Ok(GridFunction {
            bounds,
            resolution,
            values,
        })
    }

    pub fn dim(&self) -> usize {
        self.bounds.len()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }

    pub fn bounds(&self) -> &[(f64, f64)] {
        &self.bounds
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, i: usize) -> ExtReal {
        self.values[i]
    }

    pub fn step(&self, axis: usize) -> f64 {
        let (lo, hi) = self.bounds[axis];
        (hi - lo) / (self.resolution[axis] - 1) as f64
    }

    pub fn max_step(&self) -> f64 {
        (0..self.dim()).map(|k| self.step(k)).fold(0.0, f64::max)
    }

    /// Node coordinates along one axis.
    pub fn axis_nodes(&self, axis: usize) -> Vec<f64> {
        axis_nodes(self.bounds[axis], self.resolution[axis])
    }

    pub fn unravel(&self, mut i: usize) -> Vec<usize> {
        let mut idx = vec![0; self.dim()];
        for k in (0..self.dim()).rev() {
            idx[k] = i % self.resolution[k];
            i /= self.resolution[k];
        }
        idx
    }

    pub fn ravel(&self, idx: &[usize]) -> usize {
        idx.iter().zip(&self.resolution).fold(0, |acc, (&i, &n)| acc * n + i)
    }

    pub fn node(&self, i: usize) -> Vec<f64> {
        self.unravel(i)
            .iter()
            .enumerate()
            .map(|(k, &j)| node_coord(self.bounds[k], self.resolution[k], j))
            .collect()
    }

    /// First node with the smallest finite value.
    pub fn argmin(&self) -> usize {
        let mut best = 0;
        for (i, v) in self.values.iter().enumerate() {
            if *v < self.values[best] {
                best = i;
            }
        }
        best
    }

    pub fn with_values(&self, values: Vec<ExtReal>) -> Result<Self> {
        GridFunction::new(self.bounds.clone(), self.resolution.clone(), values)
    }

    /// The grid nodes as a point cloud with reference node `base`.
    pub fn to_cloud(&self, base: usize) -> Result<PointCloudFunction> {
        let points = (0..self.len()).map(|i| self.node(i)).collect();
        PointCloudFunction::new(self.dim(), points, self.values.clone(), base)
    }
}

pub(crate) fn node_coord((lo, hi): (f64, f64), n: usize, j: usize) -> f64 {
    if j + 1 == n {
        hi
    } else {
        lo + (hi - lo) * (j as f64 / (n - 1) as f64)
    }
}

pub(crate) fn axis_nodes(bounds: (f64, f64), n: usize) -> Vec<f64> {
    (0..n).map(|j| node_coord(bounds, n, j)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn row_major_layout() {
        let g = GridFunction::new(vec![(0.0, 1.0), (0.0, 2.0)], vec![2, 3], vec![ExtReal::ZERO; 6]).unwrap();
        assert_eq!(g.unravel(4), vec![1, 1]);
        assert_eq!(g.ravel(&[1, 2]), 5);
        assert_eq!(g.node(5), vec![1.0, 2.0]);
        assert_eq!(g.node(1), vec![0.0, 1.0]);
    }

    #[test]
    fn symmetric_axis_contains_zero_exactly() {
        assert_eq!(axis_nodes((-2.0, 2.0), 401)[200], 0.0);
        assert_eq!(axis_nodes((-1.0, 1.0), 5), vec![-1.0, -0.5, 0.0, 0.5, 1.0]);
    }

    #[test]
    fn rejects_bad_grids() {
        assert!(GridFunction::new(vec![(1.0, 0.0)], vec![2], vec![ExtReal::ZERO; 2]).is_err());
        assert!(GridFunction::new(vec![(0.0, 1.0)], vec![1], vec![ExtReal::ZERO]).is_err());
        assert!(GridFunction::new(vec![(0.0, 1.0)], vec![3], vec![ExtReal::ZERO; 2]).is_err());
        assert_eq!(
            GridFunction::new(vec![(0.0, 1.0)], vec![2], vec![ExtReal::PosInf; 2]),
            Err(Error::AllInfinite)
        );
    }
}
