use serde_json::{json, Value};
use sharpmin_core::funcspace::sample_to_cloud;
use sharpmin_core::sharpness::verify_characterizations;
use sharpmin_core::{Error, PointCloudFunction};

use super::{check_schedule, fixture_spec, to_cloud, tolerances, Outcome};
use crate::args::AnalyzeArgs;
use crate::error::{CliError, CliResult};
use crate::input::{load_euclidean, EuclideanInput};
use crate::output::{report, Output};

fn characterize(f: &PointCloudFunction, tol: f64) -> CliResult<(bool, Value)> {
    match verify_characterizations(f, tol) {
        Ok(r) => Ok((
            true,
            json!({
                "points": f.len(),
                "base_index": f.base_index(),
                "modulus": r.modulus,
                "slope_infimum": r.slope_infimum,
                "tilt_radius": r.tilt_radius,
                "agreement": true,
                "sharp": r.is_sharp(),
                "witness": r.witness,
                "witness_point": f.point(r.witness),
                "slopes": r.slopes,
            }),
        )),
        Err(Error::Disagreement {
            modulus,
            slope_infimum,
            tilt_radius,
        }) => Ok((
            false,
            json!({
                "points": f.len(),
                "base_index": f.base_index(),
                "modulus": modulus,
                "slope_infimum": slope_infimum,
                "tilt_radius": tilt_radius,
                "agreement": false,
            }),
        )),
        Err(e) => Err(CliError::Core(e)),
    }
}

pub fn analyze(args: &AnalyzeArgs) -> CliResult<Outcome> {
    let tol = tolerances(&args.common)?.exact;
    let input = load_euclidean(&args.common.input)?;
    let out = Output::new(&args.common.out)?;
    if args.refine.is_empty() {
        let (ok, body) = characterize(&to_cloud(&input)?, tol)?;
        let summary = format!("modulus {} agreement {ok}", body["modulus"]);
        out.json("report.json", &report("analyze", ok, json!({ "tolerance": tol, "analysis": body })))?;
        return Ok(Outcome { passed: ok, summary });
    }
    check_schedule("--refine", &args.refine)?;
    let EuclideanInput::Fixture(fx) = &input else {
        return Err(CliError::Usage("--refine needs a fixture input".into()));
    };
    let mut levels = Vec::new();
    let mut moduli = Vec::new();
    let mut all_ok = true;
    for &h in &args.refine {
        let cloud = sample_to_cloud(&fx.fixture, &fixture_spec(fx, h)?)?;
        let (ok, mut body) = characterize(&cloud, tol)?;
        all_ok &= ok;
        moduli.push(body["modulus"].as_f64().unwrap_or(f64::NAN));
        if let Value::Object(m) = &mut body {
            m.remove("slopes");
            m.insert("step".into(), json!(h));
        }
        levels.push(body);
    }
    let decreasing = moduli.windows(2).all(|w| w[1] < w[0]);
    let constant = moduli.windows(2).all(|w| w[1] == w[0]);
    let summary = format!("moduli {moduli:?} agreement {all_ok}");
    out.json(
        "report.json",
        &report(
            "analyze",
            all_ok,
            json!({
                "tolerance": tol,
                "fixture": fx.fixture,
                "refinement": levels,
                "moduli_strictly_decreasing": decreasing,
                "moduli_constant": constant,
            }),
        ),
    )?;
    Ok(Outcome { passed: all_ok, summary })
}
