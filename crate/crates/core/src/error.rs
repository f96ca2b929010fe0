use thiserror::Error;

/// Errors raised by the analysis routines.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("parameter `{name}` out of range: {detail}")]
    OutOfRange { name: &'static str, detail: String },

    #[error("degenerate cloud: no finite value other than the base point")]
    DegenerateCloud,

    #[error("value at index {0} is +inf")]
    InfiniteValue(usize),

    #[error("all values are +inf")]
    AllInfinite,

    #[error("undefined extended-real arithmetic: inf - inf")]
    InfMinusInf,

    #[error("infeasible constant: L = {given} but anchors require at least {required}")]
    InfeasibleConstant { required: f64, given: f64 },

    #[error("duplicate anchor {0} with conflicting values")]
    ConflictingAnchors(usize),

    #[error("dual range too small on axis {axis}: need L >= {required}, got {given}")]
    DualRangeTooSmall { axis: usize, required: f64, given: f64 },

    #[error("characterizations disagree: modulus {modulus}, slope infimum {slope_infimum}, tilt radius {tilt_radius}")]
    Disagreement {
        modulus: f64,
        slope_infimum: f64,
        tilt_radius: f64,
    },

    #[error("precondition failed: {0}")]
    Precondition(String),

    #[error("invalid tree location: {0}")]
    InvalidLocation(String),

    #[error("metric axioms violated: {0}")]
    InvalidMetric(String),

    #[error("no sample points in the punctured ball of radius {0}")]
    EmptyBall(f64),

    #[error("no geodesic oracle: {0}")]
    NoGeodesicOracle(String),
}

pub type Result<T> = std::result::Result<T, Error>;
