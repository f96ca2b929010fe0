use serde_json::json;
use sharpmin_core::funcspace::GridFile;
use sharpmin_core::legendre::{
    biconjugate_refinement, convex_envelope_1d, envelope_tolerance, transform as lft, verify_biconjugate_sharpness_with,
};
use sharpmin_core::{DualGrid, GridFunction};

use super::{check_schedule, to_grid, tolerances, Outcome};
use crate::args::TransformArgs;
use crate::error::{CliError, CliResult};
use crate::input::{load_euclidean, EuclideanInput};
use crate::output::{report, Output};

fn dual_grid(f: &GridFunction, args: &TransformArgs) -> CliResult<DualGrid> {
    let d = f.dim();
    let n = match args.dual_resolution {
        Some(n) if n < 2 => return Err(CliError::Guard("--dual-resolution must be at least 2".into())),
        Some(n) => n,
        None => 2 * f.resolution().iter().max().copied().unwrap_or(2) + 1,
    };
    if args.dual_range.is_empty() {
        return Ok(DualGrid::auto(f, n));
    }
    let ranges = match args.dual_range.len() {
        1 => vec![args.dual_range[0]; d],
        k if k == d => args.dual_range.clone(),
        k => return Err(CliError::Usage(format!("--dual-range has {k} values for a {d}-dimensional grid"))),
    };
    Ok(DualGrid::for_function(f, ranges, vec![n; d])?)
}

fn max_gap(a: &GridFunction, b: &GridFunction) -> f64 {
    a.values()
        .iter()
        .zip(b.values())
        .filter(|(x, y)| x.is_finite() && y.is_finite())
        .map(|(x, y)| (x.to_f64() - y.to_f64()).abs())
        .fold(0.0, f64::max)
}

pub fn transform(args: &TransformArgs) -> CliResult<Outcome> {
    let tol = tolerances(&args.common)?;
    let input = load_euclidean(&args.common.input)?;
    let (f, base) = to_grid(&input)?;
    let dual = dual_grid(&f, args)?;
    let out = Output::new(&args.common.out)?;

    let tr = lft(&f, &dual)?;
    out.json("conjugate.json", &GridFile::from(&tr.conjugate))?;
    out.json("biconjugate.json", &GridFile::from(&tr.biconjugate))?;
    let sharp = verify_biconjugate_sharpness_with(&f, base, &dual, &tol)?;

    let envelope = if f.dim() == 1 {
        let env = convex_envelope_1d(&f)?;
        out.json("envelope.json", &GridFile::from(&env))?;
        let gap = max_gap(&env, &tr.biconjugate);
        let allowed = envelope_tolerance(&f);
        Some(json!({ "max_difference": gap, "tolerance": allowed, "ok": gap <= allowed }))
    } else {
        None
    };
    let envelope_ok = envelope.as_ref().is_none_or(|e| e["ok"] == json!(true));

    let refinement = if args.refine.is_empty() {
        None
    } else {
        check_schedule("--refine", &args.refine)?;
        let EuclideanInput::Fixture(fx) = &input else {
            return Err(CliError::Usage("--refine needs a fixture input".into()));
        };
        let levels = biconjugate_refinement(&fx.fixture, &fx.bounds(), fx.fixture.center(), &args.refine)?;
        let within: Vec<bool> = levels.iter().map(|l| l.difference <= tol.grid(l.step)).collect();
        let decreasing = levels.windows(2).all(|w| w[1].difference <= w[0].difference);
        Some(json!({ "levels": levels, "within_grid_tolerance": within, "differences_nonincreasing": decreasing }))
    };
    let refinement_ok = refinement
        .as_ref()
        .is_none_or(|r| r["within_grid_tolerance"].as_array().is_some_and(|a| a.iter().all(|b| b == &json!(true))));

    let passed = sharp.passed && envelope_ok && refinement_ok;
    let summary = format!(
        "m(f) {} m(f**) {} fenchel-young {} passed {passed}",
        sharp.modulus, sharp.modulus_biconjugate, tr.fenchel_young_violation
    );
    out.json(
        "report.json",
        &report(
            "transform",
            passed,
            json!({
                "dual_ranges": dual.ranges(),
                "dual_resolution": dual.resolution(),
                "max_input_minus_biconjugate": max_gap(&f, &tr.biconjugate),
                "biconjugate": sharp,
                "envelope": envelope,
                "refinement": refinement,
            }),
        ),
    )?;
    Ok(Outcome { passed, summary })
}
