//! JSON file schemas for clouds, grids, metric spaces and trees.

use serde::{Deserialize, Serialize};

use super::cloud::PointCloudFunction;
use super::grid::GridFunction;
use super::metric::FiniteMetricSpace;
use super::tree::{MetricTree, TreeEdge};
use crate::error::{Error, Result};
use crate::extended::ExtReal;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CloudFile {
    pub dimension: usize,
    pub points: Vec<Vec<f64>>,
    pub values: Vec<ExtReal>,
    pub base_index: usize,
}

impl CloudFile {
    pub fn into_cloud(self) -> Result<PointCloudFunction> {
        PointCloudFunction::new(self.dimension, self.points, self.values, self.base_index)
    }
}

impl From<&PointCloudFunction> for CloudFile {
    fn from(c: &PointCloudFunction) -> Self {
        CloudFile {
            dimension: c.dim(),
            points: c.points().to_vec(),
            values: c.values().to_vec(),
            base_index: c.base_index(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridFile {
    pub dimension: usize,
    pub bounds: Vec<[f64; 2]>,
    pub resolution: Vec<usize>,
    pub values: Vec<ExtReal>,
}

impl GridFile {
    pub fn into_grid(self) -> Result<GridFunction> {
        if self.bounds.len() != self.dimension {
            return Err(Error::InvalidInput(format!(
                "dimension {} but {} bounds",
                self.dimension,
                self.bounds.len()
            )));
        }
        GridFunction::new(
            self.bounds.iter().map(|b| (b[0], b[1])).collect(),
            self.resolution,
            self.values,
        )
    }
}

impl From<&GridFunction> for GridFile {
    fn from(g: &GridFunction) -> Self {
        GridFile {
            dimension: g.dim(),
            bounds: g.bounds().iter().map(|&(lo, hi)| [lo, hi]).collect(),
            resolution: g.resolution().to_vec(),
            values: g.values().to_vec(),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MetricFile {
    pub labels: Vec<String>,
    pub matrix: Vec<Vec<f64>>,
}

impl MetricFile {
    pub fn into_space(self) -> Result<FiniteMetricSpace> {
        FiniteMetricSpace::new(self.labels, self.matrix)
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeEdgeFile {
    pub pair: [usize; 2],
    pub length: f64,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TreeFile {
    pub nodes: Vec<String>,
    pub edges: Vec<TreeEdgeFile>,
}

impl TreeFile {
    pub fn into_tree(self) -> Result<MetricTree> {
        let edges = self
            .edges
            .iter()
            .map(|e| TreeEdge {
                a: e.pair[0],
                b: e.pair[1],
                length: e.length,
            })
            .collect();
        MetricTree::new(self.nodes, edges)
    }
}

impl From<&MetricTree> for TreeFile {
    fn from(t: &MetricTree) -> Self {
        TreeFile {
            nodes: t.labels().to_vec(),
            edges: t
                .edges()
                .iter()
                .map(|e| TreeEdgeFile {
                    pair: [e.a, e.b],
                    length: e.length,
                })
                .collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cloud_file_with_inf() {
        let json = r#"{"dimension":1,"points":[[0.0],[1.0],[2.0]],"values":[0,1.5,"inf"],"base_index":0}"#;
        let f: CloudFile = serde_json::from_str(json).unwrap();
        let c = f.into_cloud().unwrap();
        assert_eq!(c.value(2), ExtReal::PosInf);
        let back = serde_json::to_string(&CloudFile::from(&c)).unwrap();
        assert_eq!(back, r#"{"dimension":1,"points":[[0.0],[1.0],[2.0]],"values":[0.0,1.5,"inf"],"base_index":0}"#);
    }

    #[test]
    fn grid_file_roundtrip() {
        let json = r#"{"dimension":1,"bounds":[[-1.0,1.0]],"resolution":[3],"values":[1.0,0.0,1.0]}"#;
        let g: GridFile = serde_json::from_str(json).unwrap();
        let grid = g.clone().into_grid().unwrap();
        assert_eq!(GridFile::from(&grid), g);
    }

    #[test]
    fn tree_file() {
        let json = r#"{"nodes":["a","b","c"],"edges":[{"pair":[0,1],"length":1.0},{"pair":[1,2],"length":2.0}]}"#;
        let t: TreeFile = serde_json::from_str(json).unwrap();
        let tree = t.into_tree().unwrap();
        assert_eq!(tree.node_distance(0, 2), 3.0);
    }

    #[test]
    fn unknown_fields_are_rejected() {
        let json = r#"{"labels":["a"],"matrix":[[0.0]],"extra":1}"#;
        assert!(serde_json::from_str::<MetricFile>(json).is_err());
    }
}
