use serde::Serialize;

use super::vector::dist;
use crate::error::{Error, Result};

/// A violated metric axiom with its witness indices.
#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(tag = "axiom", rename_all = "snake_case")]
pub enum MetricViolation {
    NonFinite { i: usize, j: usize },
    Diagonal { i: usize, value: f64 },
    Symmetry { i: usize, j: usize },
    Positivity { i: usize, j: usize, value: f64 },
    /// `d(from, to) > d(from, via) + d(via, to)`
    Triangle { from: usize, via: usize, to: usize, excess: f64 },
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct MetricValidation {
    pub violations: Vec<MetricViolation>,
}

impl MetricValidation {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

/// Checks every metric axiom on a square matrix, listing each violation.
///
/// Symmetry and the triangle inequality are tested with a relative slack of
/// `1e-12 * max|d|` so that path-sum round-off is not reported.
pub fn validate_metric(matrix: &[Vec<f64>]) -> Result<MetricValidation> {
    let n = matrix.len();
    if matrix.iter().any(|row| row.len() != n) {
        return Err(Error::InvalidInput("distance matrix is not square".into()));
    }
    let scale = matrix
        .iter()
        .flatten()
        .filter(|x| x.is_finite())
        .fold(0.0f64, |m, x| m.max(x.abs()));
    let slack = 1e-12 * scale.max(1.0);
    let mut out = MetricValidation::default();
    let mut finite = true;
    for i in 0..n {
        for j in 0..n {
            if !matrix[i][j].is_finite() {
                out.violations.push(MetricViolation::NonFinite { i, j });
                finite = false;
            }
        }
    }
    if !finite {
        return Ok(out);
    }
    for i in 0..n {
        if matrix[i][i] != 0.0 {
            out.violations.push(MetricViolation::Diagonal { i, value: matrix[i][i] });
        }
        for j in i + 1..n {
            if (matrix[i][j] - matrix[j][i]).abs() > slack {
                out.violations.push(MetricViolation::Symmetry { i, j });
            }
        }
        for j in 0..n {
            if i != j && matrix[i][j] <= 0.0 {
                out.violations.push(MetricViolation::Positivity { i, j, value: matrix[i][j] });
            }
        }
    }
    for from in 0..n {
        for to in 0..n {
            if from == to {
                continue;
            }
            for via in 0..n {
                if via == from || via == to {
                    continue;
                }
                let excess = matrix[from][to] - (matrix[from][via] + matrix[via][to]);
                if excess > slack {
                    out.violations.push(MetricViolation::Triangle { from, via, to, excess });
                }
            }
        }
    }
    Ok(out)
}

/// A finite metric space given by its distance matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct FiniteMetricSpace {
    labels: Vec<String>,
    matrix: Vec<Vec<f64>>,
}

impl FiniteMetricSpace {
    pub fn new(labels: Vec<String>, matrix: Vec<Vec<f64>>) -> Result<Self> {
        if labels.len() != matrix.len() {
            return Err(Error::InvalidInput(format!(
                "{} labels for a {}x{} matrix",
                labels.len(),
                matrix.len(),
                matrix.len()
            )));
        }
        if matrix.is_empty() {
            return Err(Error::InvalidInput("empty metric space".into()));
        }
        let report = validate_metric(&matrix)?;
        if let Some(v) = report.violations.first() {
            return Err(Error::InvalidMetric(format!(
                "{} violation(s), first: {v:?}",
                report.violations.len()
            )));
        }
        Ok(FiniteMetricSpace { labels, matrix })
    }

    /// Unlabelled space; labels default to the indices.
    pub fn from_matrix(matrix: Vec<Vec<f64>>) -> Result<Self> {
        let labels = (0..matrix.len()).map(|i| i.to_string()).collect();
        FiniteMetricSpace::new(labels, matrix)
    }

    /// Euclidean distances between points.
    pub fn from_points(points: &[Vec<f64>]) -> Result<Self> {
        let matrix = points
            .iter()
            .map(|p| points.iter().map(|q| dist(p, q)).collect())
            .collect();
        FiniteMetricSpace::from_matrix(matrix)
    }

    pub fn len(&self) -> usize {
        self.matrix.len()
    }

    pub fn is_empty(&self) -> bool {
        self.matrix.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn matrix(&self) -> &[Vec<f64>] {
        &self.matrix
    }

    pub fn dist(&self, i: usize, j: usize) -> f64 {
        self.matrix[i][j]
    }

    /// Indices in the closed ball `B(center, radius)`.
    pub fn ball(&self, center: usize, radius: f64) -> Vec<usize> {
        (0..self.len()).filter(|&j| self.matrix[center][j] <= radius).collect()
    }
}
