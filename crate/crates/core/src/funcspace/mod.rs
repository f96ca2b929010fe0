//! Functions, spaces and named fixtures.

mod cloud;
mod field;
mod grid;
pub(crate) use grid::axis_nodes;
pub(crate) use tree::{distance_unchecked, geodesic_unchecked};
mod io;
mod metric;
mod sample;
mod tree;
pub mod vector;

pub use cloud::PointCloudFunction;
pub use field::{eval_cone, make_norm_cone, make_tent, ConeParams, Fixture, FnField, NormCone, ScalarField, Tent};
pub use grid::GridFunction;
pub use io::{CloudFile, GridFile, MetricFile, TreeEdgeFile, TreeFile};
pub use metric::{validate_metric, FiniteMetricSpace, MetricValidation, MetricViolation};
pub use sample::{sample_to_cloud, sample_to_grid, SamplingSpec};
pub use tree::{tree_distance, tree_geodesic, DistanceCombination, MetricTree, TreeEdge, TreeLocation};
