use super::vector::dist;
use crate::error::{Error, Result};
use crate::extended::ExtReal;

/// A function sampled on a finite set of distinct points in `R^d`, with a reference point.
#[derive(Clone, Debug, PartialEq)]
pub struct PointCloudFunction {
    dim: usize,
    points: Vec<Vec<f64>>,
    values: Vec<ExtReal>,
    base: usize,
}

impl PointCloudFunction {
    pub fn new(dim: usize, points: Vec<Vec<f64>>, values: Vec<ExtReal>, base: usize) -> Result<Self> {
        if !(1..=3).contains(&dim) {
            return Err(Error::OutOfRange {
                name: "dimension",
                detail: format!("{dim} not in 1..=3"),
            });
        }
        if points.len() != values.len() {
            return Err(Error::InvalidInput(format!(
                "{} points but {} values",
                points.len(),
                values.len()
            )));
        }
        if points.len() < 2 {
            return Err(Error::InvalidInput("a cloud needs at least 2 points".into()));
        }
        if base >= points.len() {
            return Err(Error::InvalidInput(format!("base index {base} out of range")));
        }
        for (i, p) in points.iter().enumerate() {
            if p.len() != dim {
                return Err(Error::InvalidInput(format!(
                    "point {i} has {} coordinates, expected {dim}",
                    p.len()
                )));
            }
            if p.iter().any(|x| !x.is_finite()) {
                return Err(Error::InvalidInput(format!("point {i} has a non-finite coordinate")));
            }
        }
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if points[i] == points[j] {
                    return Err(Error::InvalidInput(format!("points {i} and {j} coincide")));
                }
            }
        }
        if !values[base].is_finite() {
            return Err(Error::InfiniteValue(base));
        }
        Ok(PointCloudFunction {
            dim,
            points,
            values,
            base,
        })
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[Vec<f64>] {
        &self.points
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.points[i]
    }

    pub fn values(&self) -> &[ExtReal] {
        &self.values
    }

    pub fn value(&self, i: usize) -> ExtReal {
        self.values[i]
    }

    pub fn base_index(&self) -> usize {
        self.base
    }

    pub fn base_point(&self) -> &[f64] {
        &self.points[self.base]
    }

    pub fn base_value(&self) -> f64 {
        self.values[self.base].to_f64()
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        dist(&self.points[i], &self.points[j])
    }

    /// Same points and base with a different value vector.
    pub fn with_values(&self, values: Vec<ExtReal>) -> Result<Self> {
        PointCloudFunction::new(self.dim, self.points.clone(), values, self.base)
    }

    /// Same points and values with a different reference point.
    pub fn with_base(&self, base: usize) -> Result<Self> {
        PointCloudFunction::new(self.dim, self.points.clone(), self.values.clone(), base)
    }

    /// Indices of the smallest finite value (ties all returned, ascending).
    pub fn argmin(&self) -> Vec<usize> {
        let best = self
            .values
            .iter()
            .filter_map(|v| v.finite())
            .fold(f64::INFINITY, f64::min);
        (0..self.len()).filter(|&i| self.values[i] == ExtReal::Finite(best)).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fin(v: &[f64]) -> Vec<ExtReal> {
        v.iter().map(|&x| ExtReal::Finite(x)).collect()
    }

    #[test]
    fn rejects_duplicates_and_infinite_base() {
        let pts = vec![vec![0.0], vec![0.0]];
        assert!(PointCloudFunction::new(1, pts, fin(&[0.0, 1.0]), 0).is_err());
        let pts = vec![vec![0.0], vec![1.0]];
        let vals = vec![ExtReal::PosInf, ExtReal::Finite(1.0)];
        assert_eq!(PointCloudFunction::new(1, pts, vals, 0), Err(Error::InfiniteValue(0)));
    }

    #[test]
    fn rejects_shape_mismatch() {
        assert!(PointCloudFunction::new(1, vec![vec![0.0]], fin(&[0.0]), 0).is_err());
        assert!(PointCloudFunction::new(2, vec![vec![0.0], vec![1.0]], fin(&[0.0, 1.0]), 0).is_err());
        assert!(PointCloudFunction::new(1, vec![vec![0.0], vec![1.0]], fin(&[0.0]), 0).is_err());
        assert!(PointCloudFunction::new(4, vec![vec![0.0; 4], vec![1.0; 4]], fin(&[0.0, 1.0]), 0).is_err());
    }

    #[test]
    fn argmin_reports_ties() {
        let c = PointCloudFunction::new(1, vec![vec![0.0], vec![1.0], vec![2.0]], fin(&[1.0, 0.0, 0.0]), 0).unwrap();
        assert_eq!(c.argmin(), vec![1, 2]);
    }
}
