mod analyze;
mod mesh;
mod metric;
mod probe;
mod transform;

pub use analyze::analyze;
pub use mesh::mesh;
pub use metric::metric;
pub use probe::probe;
pub use transform::transform;

use sharpmin_core::funcspace::{sample_to_cloud, sample_to_grid, SamplingSpec};
use sharpmin_core::{GridFunction, PointCloudFunction, Tolerances};

use crate::args::Common;
use crate::error::{CliError, CliResult};
use crate::input::{EuclideanInput, FixtureFile};

/// What a subcommand reports back to the dispatcher.
pub struct Outcome {
    pub passed: bool,
    pub summary: String,
}

pub(crate) fn tolerances(c: &Common) -> CliResult<Tolerances> {
    let mut t = Tolerances::default();
    if let Some(tol) = c.tol {
        if !(tol > 0.0 && tol.is_finite()) {
            return Err(CliError::Guard(format!("--tol must be positive, got {tol}")));
        }
        t.exact = tol;
    }
    Ok(t)
}

pub(crate) fn check_schedule(name: &str, s: &[f64]) -> CliResult<()> {
    if s.iter().any(|&h| !(h > 0.0 && h.is_finite())) {
        return Err(CliError::Guard(format!("{name} values must be positive")));
    }
    if s.windows(2).any(|w| w[1] >= w[0]) {
        return Err(CliError::Guard(format!("{name} must be strictly decreasing")));
    }
    Ok(())
}

pub(crate) fn fixture_spec(f: &FixtureFile, step: f64) -> CliResult<SamplingSpec> {
    Ok(SamplingSpec::with_step(f.bounds(), step, f.fixture.center().to_vec())?)
}

/// The input as a cloud based at its first minimizer (grids) or fixture center.
pub(crate) fn to_cloud(input: &EuclideanInput) -> CliResult<PointCloudFunction> {
    Ok(match input {
        EuclideanInput::Cloud(c) => c.clone(),
        EuclideanInput::Grid(g) => g.to_cloud(g.argmin())?,
        EuclideanInput::Fixture(f) => sample_to_cloud(&f.fixture, &fixture_spec(f, f.step)?)?,
    })
}

/// The input as a grid and its base node.
pub(crate) fn to_grid(input: &EuclideanInput) -> CliResult<(GridFunction, usize)> {
    match input {
        EuclideanInput::Cloud(_) => Err(CliError::Usage("this command needs a grid or fixture input".into())),
        EuclideanInput::Grid(g) => Ok((g.clone(), g.argmin())),
        EuclideanInput::Fixture(f) => Ok(sample_to_grid(&f.fixture, &fixture_spec(f, f.step)?)?),
    }
}
