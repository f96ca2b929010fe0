//! Sharp local minimality on finite metric spaces and metric trees.

mod ekeland;
mod functional;
mod geometry;
mod probes;
mod prop2;
mod slope;

pub use ekeland::{ekeland, EkelandResult};
pub use functional::{FiniteFunctional, MetricFunctional, MetricPoint, Negated, TreeField, TreeForm, TreeFunctional};
pub use geometry::{
    cat0_check, cat0_check_exact, four_cycle, geodesic_convexity_check, Cat0Report, Cat0Witness, ConvexityReport,
    ConvexityWitness, GeodesicOracle, MidpointOracle,
};
pub use probes::{cor2_probe, cor2_report, lipschitz_constant, mcshane_on_metric, thm2_probe, Cor2Outcome, COR2_LEVELS};
pub use prop2::{prop2_check, Prop2Level, Prop2Report};
pub use slope::{
    finite_slope_h, global_modulus, global_slope, local_sharpness, local_slope_h, slope_infimum, tree_slope_h,
    LocalSharpness, DIRECTIONAL_SAMPLES,
};
