use rand::Rng;
use serde_json::{json, Value};
use sharpmin_core::fixtures::{lipschitz_anchor_values, random_location, rng};
use sharpmin_core::funcspace::validate_metric;
use sharpmin_core::metricopt::{
    cat0_check, ekeland, geodesic_convexity_check, global_modulus, local_sharpness, mcshane_on_metric, prop2_check,
    thm2_probe, FiniteFunctional, MetricFunctional, MidpointOracle,
};
use sharpmin_core::TreeLocation;

use super::{check_schedule, tolerances, Outcome};
use crate::args::{Check, MetricArgs};
use crate::error::{CliError, CliResult};
use crate::input::{load, load_functional, AnyInput, SpaceInput};
use crate::output::{report, Output};

const S_GRID: [f64; 11] = [0.0, 0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9, 1.0];

/// Exhaustive triples on finite spaces up to this many, random sampling beyond.
const EXHAUSTIVE_TRIPLES: usize = 20_000;

fn finite(j: &MetricFunctional) -> CliResult<FiniteFunctional> {
    match j {
        MetricFunctional::Finite(f) => Ok(f.clone()),
        MetricFunctional::Tree(t) => Ok(t.on_nodes()?),
    }
}

fn need<'a>(j: &'a Option<MetricFunctional>, what: &str) -> CliResult<&'a MetricFunctional> {
    j.as_ref().ok_or_else(|| CliError::Usage(format!("{what} needs --functional")))
}

fn run_ekeland(j: &FiniteFunctional, spec: &[f64]) -> CliResult<(bool, Value)> {
    let [eps, lambda, start] = spec else {
        return Err(CliError::Usage("--ekeland takes eps,lambda,start".into()));
    };
    if start.fract() != 0.0 || *start < 0.0 {
        return Err(CliError::Usage(format!("--ekeland start must be an index, got {start}")));
    }
    let r = ekeland(j, *start as usize, *eps, *lambda)?;
    let (x, x0) = (r.output, r.input);
    let jv = |i: usize| j.value(i).to_f64();
    let descent = jv(x) <= jv(x0);
    let near = j.space().dist(x0, x) <= *lambda;
    let unique = (0..j.len())
        .filter(|&v| v != x && j.value(v).is_finite())
        .all(|v| jv(v) + eps / lambda * j.space().dist(v, x) > jv(x));
    let ok = descent && near && unique;
    Ok((
        ok,
        json!({
            "result": r,
            "value_decreased": descent,
            "within_lambda": near,
            "unique_perturbed_minimizer": unique,
        }),
    ))
}

pub fn metric(args: &MetricArgs) -> CliResult<Outcome> {
    let tol = tolerances(&args.common)?.exact;
    let space = match load(&args.common.input)? {
        AnyInput::Space(s) => s,
        AnyInput::Euclidean(_) => return Err(CliError::Usage("metric needs a metric or tree file".into())),
    };
    let j = args.functional.as_ref().map(|p| load_functional(p, &space)).transpose()?;
    let out = Output::new(&args.common.out)?;
    let delta = args.delta.unwrap_or(f64::INFINITY);
    if !(delta > 0.0) {
        return Err(CliError::Guard("--delta must be positive".into()));
    }
    let mut r = rng(args.common.seed);
    let mut passed = true;
    let mut body = json!({ "delta": args.delta, "closed_ball": true, "seed": args.common.seed });

    body["space"] = match &space {
        SpaceInput::Metric(s) => json!({
            "kind": "metric",
            "points": s.len(),
            "metric_valid": validate_metric(s.matrix())?.is_valid(),
        }),
        SpaceInput::Tree(t) => json!({
            "kind": "tree",
            "nodes": t.node_count(),
            "total_length": t.total_length(),
        }),
    };

    if let Some(j) = &j {
        let ls = local_sharpness(j, delta)?;
        body["local_sharpness"] = json!(ls);
        if let MetricFunctional::Finite(f) = j {
            body["global_modulus"] = json!(global_modulus(f)?.0);
        }
        if let Some(g) = args.gamma {
            let sharp = ls.gamma >= g - tol;
            body["sharp_with_gamma"] = json!(sharp);
        }
    }

    if !args.ekeland.is_empty() {
        let (ok, e) = run_ekeland(&finite(need(&j, "--ekeland")?)?, &args.ekeland)?;
        passed &= ok;
        body["ekeland"] = e;
    }

    if let Some(check) = args.check {
        let result = match check {
            Check::Cat0 => match &space {
                SpaceInput::Tree(t) => {
                    let quads: Vec<_> = (0..args.samples)
                        .map(|_| {
                            (
                                random_location(&mut r, t),
                                random_location(&mut r, t),
                                random_location(&mut r, t),
                                r.gen_range(0.0..=1.0),
                            )
                        })
                        .collect();
                    let rep = cat0_check(t, &quads, tol);
                    passed &= rep.ok;
                    json!(rep)
                }
                SpaceInput::Metric(s) => {
                    let n = s.len();
                    let quads: Vec<(usize, usize, usize, f64)> = if n * n * n <= EXHAUSTIVE_TRIPLES {
                        let mut q = Vec::new();
                        for u in 0..n {
                            for v in 0..n {
                                for w in 0..n {
                                    for s in [0.25, 0.5, 0.75] {
                                        q.push((u, v, w, s));
                                    }
                                }
                            }
                        }
                        q
                    } else {
                        (0..args.samples)
                            .map(|_| (r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0..n), r.gen_range(0.0..=1.0)))
                            .collect()
                    };
                    let rep = cat0_check(&MidpointOracle::new(s), &quads, tol);
                    passed &= rep.ok;
                    json!(rep)
                }
            },
            Check::Gconv => {
                let MetricFunctional::Tree(t) = need(&j, "gconv")? else {
                    return Err(CliError::Usage("gconv needs a closed-form tree functional".into()));
                };
                let pairs: Vec<(TreeLocation, TreeLocation)> = (0..args.samples)
                    .map(|_| (random_location(&mut r, t.tree()), random_location(&mut r, t.tree())))
                    .collect();
                let rep = geodesic_convexity_check(t.tree(), t.form(), &pairs, &S_GRID, tol)?;
                passed &= rep.ok;
                json!(rep)
            }
            Check::Prop2 => {
                let MetricFunctional::Tree(t) = need(&j, "prop2")? else {
                    return Err(CliError::Usage("prop2 needs a closed-form tree functional".into()));
                };
                let gamma = args.gamma.ok_or_else(|| CliError::Usage("prop2 needs --gamma".into()))?;
                let Some(delta) = args.delta else {
                    return Err(CliError::Usage("prop2 needs --delta".into()));
                };
                let schedule = if args.refine.is_empty() {
                    let e = t.tree().min_edge_length();
                    vec![e / 2.0, e / 4.0, e / 8.0, e / 16.0]
                } else {
                    check_schedule("--refine", &args.refine)?;
                    args.refine.clone()
                };
                let rep = prop2_check(t, delta, gamma, &schedule)?;
                passed &= rep.equivalence_holds;
                json!(rep)
            }
            Check::Thm2 => {
                let f = finite(need(&j, "thm2")?)?;
                let gamma = local_sharpness(&MetricFunctional::Finite(f.clone()), delta)?.gamma;
                if gamma <= 0.0 {
                    return Err(CliError::Guard(format!(
                        "reference is not a sharp local minimizer on the ball (modulus {gamma})"
                    )));
                }
                let l = 0.9 * gamma;
                let n = f.len();
                let mut failures = Vec::new();
                for k in 0..args.samples {
                    let (anchors, g) = lipschitz_anchor_values(&mut r, n, 1 + k % 5, l, 1.0, |a, b| f.space().dist(a, b));
                    let zeta = mcshane_on_metric(f.space(), &anchors, &g, l)?;
                    let hit = thm2_probe(&f, &zeta, l, delta)?;
                    if hit.iter().any(|&i| i != f.reference()) {
                        failures.push(json!({ "sample": k, "argmin_in_ball": hit }));
                    }
                }
                passed &= failures.is_empty();
                json!({
                    "gamma": gamma,
                    "lipschitz_constant": l,
                    "perturbations": args.samples,
                    "failures": failures,
                })
            }
        };
        body["check"] = json!({ "name": format!("{check:?}").to_lowercase(), "result": result });
    }

    let summary = format!("metric passed {passed}");
    out.json("report.json", &report("metric", passed, body))?;
    Ok(Outcome { passed, summary })
}
