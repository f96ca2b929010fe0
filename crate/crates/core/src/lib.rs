//! Sharp minimizers on point clouds, grids, finite metric spaces and metric trees.
//!
//! ```
//! use sharpmin_core::{fixtures, sharpness, Fixture};
//!
//! let f = fixtures::fixture_cloud(&Fixture::NormCone { center: vec![0.0, 0.0], gamma: 1.5 }, 1.0, 0.25).unwrap();
//! let report = sharpness::verify_default(&f).unwrap();
//! assert!((report.modulus - 1.5).abs() < 1e-12);
//! ```

pub mod error;
pub mod extended;
pub mod fixtures;
pub mod funcspace;
pub mod legendre;
pub mod metricopt;
pub mod sharpness;
pub mod tolerance;

pub use error::{Error, Result};
pub use extended::ExtReal;
pub use funcspace::{
    ConeParams, DistanceCombination, Fixture, FiniteMetricSpace, GridFunction, MetricTree, PointCloudFunction,
    ScalarField, TreeEdge, TreeLocation,
};
pub use legendre::{BiconjugateReport, DualGrid};
pub use metricopt::{EkelandResult, MetricFunctional, MetricPoint};
pub use sharpness::{SharpnessReport, TiltVector};
pub use tolerance::Tolerances;
