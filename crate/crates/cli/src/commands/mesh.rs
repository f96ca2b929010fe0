use serde_json::json;
use sharpmin_core::funcspace::vector::{dist, dot};
use sharpmin_core::sharpness::sharpness_modulus;
use sharpmin_core::GridFunction;

use super::{to_grid, Outcome};
use crate::args::MeshArgs;
use crate::error::{CliError, CliResult};
use crate::input::load_euclidean;
use crate::output::{report, Mesh, Output};

/// Triangulates a 2D grid, dropping nodes where `z` is `None`.
fn surface(g: &GridFunction, z: impl Fn(usize) -> Option<f64>) -> Mesh {
    let (nx, ny) = (g.resolution()[0], g.resolution()[1]);
    let mut id = vec![None; g.len()];
    let mut mesh = Mesh::default();
    for (i, slot) in id.iter_mut().enumerate() {
        if let Some(h) = z(i) {
            let p = g.node(i);
            *slot = Some(mesh.vertices.len());
            mesh.vertices.push([p[0], p[1], h]);
        }
    }
    for a in 0..nx - 1 {
        for b in 0..ny - 1 {
            let c = |da: usize, db: usize| id[g.ravel(&[a + da, b + db])];
            let (p00, p10, p01, p11) = (c(0, 0), c(1, 0), c(0, 1), c(1, 1));
            for tri in [[p00, p10, p11], [p00, p11, p01]] {
                if let [Some(x), Some(y), Some(w)] = tri {
                    mesh.faces.push([x, y, w]);
                }
            }
        }
    }
    mesh
}

pub fn mesh(args: &MeshArgs) -> CliResult<Outcome> {
    let input = load_euclidean(&args.common.input)?;
    let (g, base) = to_grid(&input)?;
    if g.dim() != 2 {
        return Err(CliError::Usage(format!("mesh export needs a 2D grid, got dimension {}", g.dim())));
    }
    if !args.tilt.is_empty() && args.tilt.len() != 2 {
        return Err(CliError::Usage("--tilt needs two components".into()));
    }
    let out = Output::new(&args.common.out)?;
    let value = |i: usize| g.value(i).finite();
    out.text("surface.mesh", &surface(&g, value).render("surface"))?;

    let (m, witness) = sharpness_modulus(&g.to_cloud(base)?)?;
    let xb = g.node(base);
    let fb = g.value(base).to_f64();
    let mut passed = true;

    let tilt = if args.tilt.is_empty() {
        None
    } else {
        let tilted = |i: usize| value(i).map(|v| v - dot(&args.tilt, &g.node(i)));
        out.text("tilted.mesh", &surface(&g, tilted).render("tilted"))?;
        let vals: Vec<Option<f64>> = (0..g.len()).map(tilted).collect();
        let min = vals.iter().flatten().copied().fold(f64::INFINITY, f64::min);
        let argmin: Vec<usize> = (0..g.len()).filter(|&i| vals[i] == Some(min)).collect();
        let norm = dot(&args.tilt, &args.tilt).sqrt();
        let predicted = m > 0.0 && norm < m;
        let kept = argmin == vec![base];
        passed &= !predicted || kept;
        Some(json!({
            "vector": args.tilt,
            "norm": norm,
            "argmin": argmin,
            "minimized_at_base": kept,
            "invariance_predicted": predicted,
        }))
    };

    let cone = if args.no_cone {
        None
    } else {
        let cone_z = |i: usize| value(i).map(|_| fb + m * dist(&g.node(i), &xb));
        out.text("cone.mesh", &surface(&g, cone_z).render("cone"))?;
        let mut excess = f64::NEG_INFINITY;
        let mut gap = 0.0f64;
        for i in 0..g.len() {
            if let (Some(f), Some(c)) = (value(i), cone_z(i)) {
                excess = excess.max(c - f);
                gap = gap.max((f - c).abs());
            }
        }
        let below = excess <= 1e-9;
        passed &= below;
        Some(json!({
            "modulus": m,
            "max_cone_minus_surface": excess,
            "max_abs_gap": gap,
            "cone_below_surface": below,
        }))
    };

    let summary = format!("modulus {m} witness {witness} passed {passed}");
    out.json(
        "report.json",
        &report(
            "mesh",
            passed,
            json!({
                "base_index": base,
                "base_point": xb,
                "modulus": m,
                "witness": witness,
                "vertices": g.values().iter().filter(|v| v.is_finite()).count(),
                "tilt": tilt,
                "cone": cone,
                "format": "v x y z / f i j k, 1-based vertex indices, lines starting with # are comments",
            }),
        ),
    )?;
    Ok(Outcome { passed, summary })
}
