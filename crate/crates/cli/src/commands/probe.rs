use serde_json::{json, Value};
use sharpmin_core::funcspace::vector::dist;
use sharpmin_core::metricopt::{
    cor2_report, lipschitz_constant, local_sharpness, mcshane_on_metric, thm2_probe, FiniteFunctional, MetricFunctional,
    TreeFunctional,
};
use sharpmin_core::sharpness::{
    lipschitz_probe, mcshane_extend, sharpness_modulus, tilt_probe, Perturbation, ScaledDistance, TiltVector,
};
use sharpmin_core::PointCloudFunction;

use super::{to_cloud, tolerances, Outcome};
use crate::args::ProbeArgs;
use crate::error::{CliError, CliResult};
use crate::input::{combination, load, load_functional, read_json, Anchors, AnyInput, PerturbationFile};
use crate::output::{report, Output};

#[derive(Clone, Copy, PartialEq, Eq)]
enum Prediction {
    Invariant,
    Moved,
    None,
}

/// Verdict text and whether the observation is consistent with the prediction.
fn verdict(prediction: Prediction, invariant: bool) -> (String, bool) {
    let observed = if invariant { "invariant" } else { "moved" };
    match prediction {
        Prediction::Invariant => (format!("{observed} ({})", if invariant { "predicted" } else { "unexpected" }), invariant),
        Prediction::Moved => (format!("{observed} ({})", if invariant { "unexpected" } else { "predicted" }), !invariant),
        Prediction::None => (format!("{observed} (no prediction)"), true),
    }
}

fn finish(out: &Output, kind: &str, prediction: Prediction, invariant: bool, mut body: Value) -> CliResult<Outcome> {
    let (text, passed) = verdict(prediction, invariant);
    if let Value::Object(m) = &mut body {
        m.insert("kind".into(), json!(kind));
        m.insert("verdict".into(), json!(text));
    }
    out.json("report.json", &report("probe", passed, body))?;
    Ok(Outcome {
        passed,
        summary: format!("{kind}: {text}"),
    })
}

fn probe_cloud(args: &ProbeArgs, f: &PointCloudFunction, out: &Output) -> CliResult<Outcome> {
    let tol = tolerances(&args.common)?.exact;
    let (m, witness) = sharpness_modulus(f)?;
    let base = f.base_index();
    let given = [!args.tilt.is_empty(), args.tilt_witness.is_some(), args.perturbation.is_some()];
    if given.iter().filter(|&&b| b).count() != 1 {
        return Err(CliError::Usage("give exactly one of --tilt, --tilt-witness, --perturbation".into()));
    }
    let common = json!({ "modulus": m, "witness": witness, "base_index": base });
    if let Some(path) = &args.perturbation {
        let zeta: Box<dyn Perturbation> = match read_json::<PerturbationFile>(path)? {
            PerturbationFile::Mcshane {
                anchors: Anchors::Points(a),
                values,
                constant,
            } => Box::new(mcshane_extend(a, values, constant)?),
            PerturbationFile::ScaledDistance { center, coef } => Box::new(ScaledDistance { center, coef }),
            _ => return Err(CliError::Usage("Euclidean probes take mcshane (point anchors) or scaled_distance".into())),
        };
        let l = zeta.lipschitz_bound();
        let argmin = lipschitz_probe(f, zeta.as_ref())?;
        let prediction = if l < m { Prediction::Invariant } else { Prediction::None };
        let invariant = argmin == vec![base];
        let mut body = common;
        body["lipschitz_constant"] = json!(l);
        body["argmin"] = json!(argmin);
        return finish(out, "lipschitz", prediction, invariant, body);
    }
    let xi = if let Some(mag) = args.tilt_witness {
        TiltVector::toward(f.base_point(), f.point(witness), mag)?
    } else {
        if args.tilt.len() != f.dim() {
            return Err(CliError::Usage(format!("--tilt needs {} components", f.dim())));
        }
        TiltVector::new(args.tilt.clone())?
    };
    let argmin = tilt_probe(f, &xi)?;
    let norm = xi.norm();
    let toward = TiltVector::toward(f.base_point(), f.point(witness), norm)
        .map(|w| dist(w.components(), xi.components()) <= tol)
        .unwrap_or(false);
    let prediction = if m > 0.0 && norm < m {
        Prediction::Invariant
    } else if m > 0.0 && norm > m && toward {
        Prediction::Moved
    } else {
        Prediction::None
    };
    let mut body = common;
    body["tilt"] = json!(xi.components());
    body["tilt_norm"] = json!(norm);
    body["toward_witness"] = json!(toward);
    body["argmin"] = json!(argmin);
    finish(out, "tilt", prediction, argmin == vec![base], body)
}

fn probe_finite(j: &FiniteFunctional, zeta: &[f64], l: f64, delta: f64, gamma: Option<f64>, out: &Output) -> CliResult<Outcome> {
    let gamma = match gamma {
        Some(g) => g,
        None => local_sharpness(&MetricFunctional::Finite(j.clone()), delta)?.gamma,
    };
    let hit = thm2_probe(j, zeta, l, delta)?;
    let r = j.reference();
    let invariant = hit.iter().all(|&i| i == r);
    let prediction = if l < gamma { Prediction::Invariant } else { Prediction::None };
    finish(
        out,
        "lipschitz",
        prediction,
        invariant,
        json!({
            "reference": r,
            "delta": delta,
            "gamma": gamma,
            "lipschitz_constant": l,
            "measured_lipschitz_constant": lipschitz_constant(j.space(), zeta),
            "argmin_in_ball": hit,
            "closed_ball": true,
        }),
    )
}

fn probe_tree(j: &TreeFunctional, p: &PerturbationFile, delta: f64, gamma: Option<f64>, out: &Output) -> CliResult<Outcome> {
    match p {
        PerturbationFile::Combination(terms) => {
            let phi = combination(j.tree(), terms)?;
            let gamma = match gamma {
                Some(g) => g,
                None => local_sharpness(&MetricFunctional::Tree(j.clone()), delta)?.gamma,
            };
            let r = cor2_report(j, &phi, delta, gamma)?;
            let reference = match j.reference() {
                sharpmin_core::TreeLocation::Node(x) => x,
                _ => unreachable!("checked by cor2_report"),
            };
            let invariant = r.argmin_in_ball.iter().all(|&x| x == reference);
            let prediction = if r.precondition_met { Prediction::Invariant } else { Prediction::None };
            finish(
                out,
                "distance_combination",
                prediction,
                invariant,
                json!({
                    "reference": reference,
                    "delta": delta,
                    "gamma": gamma,
                    "coefficient_sum": phi.coefficient_sum(),
                    "slope_estimate": r.slope_estimate,
                    "slope_levels": r.slope_levels,
                    "slope_below_gamma": r.precondition_met,
                    "argmin_in_ball": r.argmin_in_ball,
                    "closed_ball": true,
                }),
            )
        }
        _ => {
            let fin = j.on_nodes()?;
            probe_metric(&fin, p, delta, gamma, out)
        }
    }
}

fn probe_metric(j: &FiniteFunctional, p: &PerturbationFile, delta: f64, gamma: Option<f64>, out: &Output) -> CliResult<Outcome> {
    let PerturbationFile::Mcshane {
        anchors: Anchors::Indices(a),
        values,
        constant,
    } = p
    else {
        return Err(CliError::Usage("metric-space probes take mcshane perturbations with index anchors".into()));
    };
    let zeta = mcshane_on_metric(j.space(), a, values, *constant)?;
    probe_finite(j, &zeta, *constant, delta, gamma, out)
}

pub fn probe(args: &ProbeArgs) -> CliResult<Outcome> {
    let input = load(&args.common.input)?;
    let out = Output::new(&args.common.out)?;
    match input {
        AnyInput::Euclidean(e) => probe_cloud(args, &to_cloud(&e)?, &out),
        AnyInput::Space(space) => {
            let fpath = args
                .functional
                .as_ref()
                .ok_or_else(|| CliError::Usage("metric and tree probes need --functional".into()))?;
            let ppath = args
                .perturbation
                .as_ref()
                .ok_or_else(|| CliError::Usage("metric and tree probes need --perturbation".into()))?;
            let j = load_functional(fpath, &space)?;
            let p: PerturbationFile = read_json(ppath)?;
            let delta = args.delta.unwrap_or(f64::INFINITY);
            match (&j, &space) {
                (MetricFunctional::Tree(t), _) => probe_tree(t, &p, delta, args.gamma, &out),
                (MetricFunctional::Finite(f), _) => {
                    probe_metric(f, &p, delta, args.gamma, &out)
                }
            }
        }
    }
}
