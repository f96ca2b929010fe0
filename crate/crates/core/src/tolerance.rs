//! Default tolerances shared by every check.

/// Exact-path comparisons (quantities that are equal in exact arithmetic).
pub const EXACT: f64 = 1e-9;

/// Geodesic identities on metric trees.
pub const GEODESIC: f64 = 1e-12;

/// Unit-vector check for cone directions.
pub const UNIT_NORM: f64 = 1e-12;

/// Multiplier applied to the grid step for discretized claims.
pub const GRID_FACTOR: f64 = 5.0;

/// Relative slack when checking a claimed Lipschitz constant.
pub const LIPSCHITZ_SLACK: f64 = 1e-12;

/// Tolerance table, overridable per run.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Tolerances {
    pub exact: f64,
    pub geodesic: f64,
    pub grid_factor: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Tolerances {
            exact: EXACT,
            geodesic: GEODESIC,
            grid_factor: GRID_FACTOR,
        }
    }
}

impl Tolerances {
    /// Tolerance for a claim discretized at grid step `h`.
    pub fn grid(&self, h: f64) -> f64 {
        self.grid_factor * h
    }
}
