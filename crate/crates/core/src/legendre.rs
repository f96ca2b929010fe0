//! Discrete Legendre–Fenchel transforms on box grids.
//!
//! [`conjugate`] factorizes the supremum axis by axis (the dot product
//! separates over box grids) and solves each one-dimensional pass in linear
//! time by marching the lower convex hull of the fibre against the sorted
//! dual nodes. [`conjugate_brute`] keeps the quadratic double loop as an
//! oracle, and [`convex_envelope_1d`] computes the envelope directly from a
//! gift-wrapping hull without going through the dual grid.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::funcspace::{axis_nodes, sample_to_grid, GridFunction, SamplingSpec, ScalarField};
use crate::sharpness::sharpness_modulus;
use crate::tolerance::{self, Tolerances};

/// Symmetric box `[-L_i, L_i]` of dual variables with a node count per axis.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct DualGrid {
    ranges: Vec<f64>,
    resolution: Vec<usize>,
}

impl DualGrid {
    pub fn new(ranges: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        if ranges.is_empty() || ranges.len() > 3 || ranges.len() != resolution.len() {
            return Err(Error::InvalidInput("dual grid needs 1..=3 axes with one resolution each".into()));
        }
        for (k, (&l, &n)) in ranges.iter().zip(&resolution).enumerate() {
            if !(l > 0.0 && l.is_finite()) {
                return Err(Error::OutOfRange {
                    name: "dual range",
                    detail: format!("axis {k}: L = {l} must be positive"),
                });
            }
            if n < 2 {
                return Err(Error::OutOfRange {
                    name: "dual resolution",
                    detail: format!("axis {k}: {n} < 2"),
                });
            }
        }
        Ok(DualGrid { ranges, resolution })
    }

    /// Dual grid for `f`, refusing ranges smaller than the steepest difference quotient of `f`.
    pub fn for_function(f: &GridFunction, ranges: Vec<f64>, resolution: Vec<usize>) -> Result<Self> {
        if ranges.len() != f.dim() {
            return Err(Error::InvalidInput(format!(
                "{} dual ranges for a {}-dimensional grid",
                ranges.len(),
                f.dim()
            )));
        }
        let required = slope_bounds(f);
        for (axis, (&given, &req)) in ranges.iter().zip(&required).enumerate() {
            if given < req {
                return Err(Error::DualRangeTooSmall {
                    axis,
                    required: req,
                    given,
                });
            }
        }
        DualGrid::new(ranges, resolution)
    }

    /// Ranges equal to the slope bounds of `f`, with `resolution` nodes per axis.
    ///
    /// Even resolutions are bumped by one so that `xi = 0` is a node.
    pub fn auto(f: &GridFunction, resolution: usize) -> Self {
        let n = if resolution % 2 == 0 { resolution + 1 } else { resolution.max(3) };
        let ranges = slope_bounds(f).into_iter().map(|b| if b > 0.0 { b } else { 1.0 }).collect();
        DualGrid {
            ranges,
            resolution: vec![n; f.dim()],
        }
    }

    pub fn ranges(&self) -> &[f64] {
        &self.ranges
    }

    pub fn resolution(&self) -> &[usize] {
        &self.resolution
    }

    pub fn bounds(&self) -> Vec<(f64, f64)> {
        self.ranges.iter().map(|&l| (-l, l)).collect()
    }

    fn axes(&self) -> Vec<Vec<f64>> {
        self.ranges
            .iter()
            .zip(&self.resolution)
            .map(|(&l, &n)| axis_nodes((-l, l), n))
            .collect()
    }
}

/// Largest `|f(x_{i+1}) - f(x_i)| / h` between finite neighbours, per axis.
pub fn slope_bounds(f: &GridFunction) -> Vec<f64> {
    let mut out = vec![0.0f64; f.dim()];
    for i in 0..f.len() {
        let Some(fi) = f.value(i).finite() else { continue };
        let idx = f.unravel(i);
        for k in 0..f.dim() {
            if idx[k] + 1 >= f.resolution()[k] {
                continue;
            }
            let mut next = idx.clone();
            next[k] += 1;
            if let Some(fj) = f.value(f.ravel(&next)).finite() {
                out[k] = out[k].max((fj - fi).abs() / f.step(k));
            }
        }
    }
    out
}

fn primal_axes(f: &GridFunction) -> Vec<Vec<f64>> {
    (0..f.dim()).map(|k| f.axis_nodes(k)).collect()
}

fn to_costs(values: &[ExtReal]) -> Vec<f64> {
    values.iter().map(|v| v.to_f64()).collect()
}

/// Lower convex hull of `(x_i, y_i)` over finite `y_i`, by monotone chain. `xs` ascending.
fn lower_hull(xs: &[f64], ys: &[f64]) -> Vec<(f64, f64)> {
    let mut hull: Vec<(f64, f64)> = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        if !y.is_finite() {
            continue;
        }
        while hull.len() >= 2 {
            let (x0, y0) = hull[hull.len() - 2];
            let (x1, y1) = hull[hull.len() - 1];
            if (x1 - x0) * (y - y0) - (y1 - y0) * (x - x0) <= 0.0 {
                hull.pop();
            } else {
                break;
            }
        }
        hull.push((x, y));
    }
    hull
}

/// `out[j] = max_i slopes[j] * xs[i] - cost[i]`, skipping `+inf` costs; `-inf` if all are skipped.
fn lft_1d(xs: &[f64], cost: &[f64], slopes: &[f64], out: &mut [f64]) {
    let hull = lower_hull(xs, cost);
    if hull.is_empty() {
        out.fill(f64::NEG_INFINITY);
        return;
    }
    let mut k = 0;
    for (o, &s) in out.iter_mut().zip(slopes) {
        while k + 1 < hull.len() && s * hull[k + 1].0 - hull[k + 1].1 >= s * hull[k].0 - hull[k].1 {
            k += 1;
        }
        *o = s * hull[k].0 - hull[k].1;
    }
}

/// `G(y) = max_x <y, x> - cost(x)` over a box grid, one axis at a time.
fn lft_factorized(cost: &[f64], src: &[Vec<f64>], dst: &[Vec<f64>]) -> Vec<f64> {
    let d = src.len();
    let mut shape: Vec<usize> = src.iter().map(Vec::len).collect();
    let mut cur = cost.to_vec();
    for k in 0..d {
        let n = shape[k];
        let m = dst[k].len();
        let outer: usize = shape[..k].iter().product();
        let inner: usize = shape[k + 1..].iter().product();
        let mut next = vec![0.0; outer * m * inner];
        let mut fibre = vec![0.0; n];
        let mut out = vec![0.0; m];
        for o in 0..outer {
            for i in 0..inner {
                for j in 0..n {
                    fibre[j] = cur[(o * n + j) * inner + i];
                }
                lft_1d(&src[k], &fibre, &dst[k], &mut out);
                for j in 0..m {
                    next[(o * m + j) * inner + i] = out[j];
                }
            }
        }
        shape[k] = m;
        // the next axis maximizes <y_k, x_k> + G, i.e. transforms the cost -G
        cur = if k + 1 < d { next.iter().map(|g| -g).collect() } else { next };
    }
    cur
}

fn lft_brute(cost: &[f64], src: &[Vec<f64>], dst: &[Vec<f64>]) -> Vec<f64> {
    let src_pts = grid_points(src);
    let dst_pts = grid_points(dst);
    dst_pts
        .iter()
        .map(|y| {
            src_pts
                .iter()
                .zip(cost)
                .filter(|(_, c)| c.is_finite())
                .map(|(x, c)| y.iter().zip(x).map(|(a, b)| a * b).sum::<f64>() - c)
                .fold(f64::NEG_INFINITY, f64::max)
        })
        .collect()
}

fn grid_points(axes: &[Vec<f64>]) -> Vec<Vec<f64>> {
    let mut pts = vec![Vec::new()];
    for axis in axes {
        pts = pts
            .into_iter()
            .flat_map(|p| {
                axis.iter().map(move |&x| {
                    let mut q = p.clone();
                    q.push(x);
                    q
                })
            })
            .collect();
    }
    pts
}

fn finite_grid(bounds: Vec<(f64, f64)>, resolution: Vec<usize>, values: Vec<f64>) -> Result<GridFunction> {
    let values = values
        .into_iter()
        .map(|v| {
            if v.is_finite() {
                Ok(ExtReal::Finite(v))
            } else {
                Err(Error::Precondition("transform produced a non-finite value; check the dual grid".into()))
            }
        })
        .collect::<Result<Vec<_>>>()?;
    GridFunction::new(bounds, resolution, values)
}

fn check_dims(f: &GridFunction, dual: &DualGrid) -> Result<()> {
    if f.dim() != dual.ranges.len() {
        return Err(Error::InvalidInput(format!(
            "grid has dimension {}, dual grid has {}",
            f.dim(),
            dual.ranges.len()
        )));
    }
    if !f.values().iter().any(|v| v.is_finite()) {
        return Err(Error::AllInfinite);
    }
    Ok(())
}

/// `f*(xi) = max_x <xi, x> - f(x)` on the dual grid.
pub fn conjugate(f: &GridFunction, dual: &DualGrid) -> Result<GridFunction> {
    check_dims(f, dual)?;
    let g = lft_factorized(&to_costs(f.values()), &primal_axes(f), &dual.axes());
    finite_grid(dual.bounds(), dual.resolution.clone(), g)
}

/// Quadratic-time reference for [`conjugate`].
pub fn conjugate_brute(f: &GridFunction, dual: &DualGrid) -> Result<GridFunction> {
    check_dims(f, dual)?;
    let g = lft_brute(&to_costs(f.values()), &primal_axes(f), &dual.axes());
    finite_grid(dual.bounds(), dual.resolution.clone(), g)
}

fn dom_box(f: &GridFunction) -> Vec<(usize, usize)> {
    let mut b = vec![(usize::MAX, 0usize); f.dim()];
    for i in (0..f.len()).filter(|&i| f.value(i).is_finite()) {
        for (k, j) in f.unravel(i).into_iter().enumerate() {
            b[k] = (b[k].0.min(j), b[k].1.max(j));
        }
    }
    b
}

fn biconjugate_from(f: &GridFunction, conj: &GridFunction, dual: &DualGrid) -> Result<GridFunction> {
    let back = lft_factorized(&to_costs(conj.values()), &dual.axes(), &primal_axes(f));
    let mut g = finite_grid(f.bounds().to_vec(), f.resolution().to_vec(), back)?.values().to_vec();
    // nodes outside the bounding box of dom f lie outside dom f**
    let dom = dom_box(f);
    for (i, v) in g.iter_mut().enumerate() {
        if f.unravel(i).iter().zip(&dom).any(|(&j, &(lo, hi))| j < lo || j > hi) {
            *v = ExtReal::PosInf;
        }
    }
    f.with_values(g)
}

/// `f**` on the primal grid.
pub fn biconjugate(f: &GridFunction, dual: &DualGrid) -> Result<GridFunction> {
    let conj = conjugate(f, dual)?;
    biconjugate_from(f, &conj, dual)
}

/// Largest `<xi, x> - f(x) - f*(xi)` over all node pairs (0 if none is positive).
pub fn fenchel_young_violation(f: &GridFunction, conj: &GridFunction) -> f64 {
    let xs: Vec<Vec<f64>> = (0..f.len()).map(|i| f.node(i)).collect();
    let ys: Vec<Vec<f64>> = (0..conj.len()).map(|i| conj.node(i)).collect();
    let mut worst = 0.0f64;
    for (x, fx) in xs.iter().zip(f.values()) {
        let Some(fx) = fx.finite() else { continue };
        for (y, fy) in ys.iter().zip(conj.values()) {
            let dot: f64 = x.iter().zip(y).map(|(a, b)| a * b).sum();
            worst = worst.max(dot - fx - fy.to_f64());
        }
    }
    worst
}

/// Conjugate, biconjugate and the Fenchel–Young diagnostic.
#[derive(Clone, Debug, PartialEq)]
pub struct TransformResult {
    pub conjugate: GridFunction,
    pub biconjugate: GridFunction,
    pub fenchel_young_violation: f64,
}

pub fn transform(f: &GridFunction, dual: &DualGrid) -> Result<TransformResult> {
    let conj = conjugate(f, dual)?;
    let bi = biconjugate_from(f, &conj, dual)?;
    let fy = fenchel_young_violation(f, &conj);
    Ok(TransformResult {
        conjugate: conj,
        biconjugate: bi,
        fenchel_young_violation: fy,
    })
}

/// Lower convex envelope of a 1-D grid function by gift wrapping.
///
/// Nodes left of the first or right of the last finite value stay `+inf`.
pub fn convex_envelope_1d(f: &GridFunction) -> Result<GridFunction> {
    if f.dim() != 1 {
        return Err(Error::InvalidInput("convex_envelope_1d needs a 1-D grid".into()));
    }
    let xs = f.axis_nodes(0);
    let pts: Vec<usize> = (0..f.len()).filter(|&i| f.value(i).is_finite()).collect();
    if pts.len() < 2 {
        return Err(Error::InvalidInput("need at least 2 finite values".into()));
    }
    let y = |i: usize| f.value(i).to_f64();
    let mut vertices = vec![pts[0]];
    let mut cur = 0;
    while cur + 1 < pts.len() {
        let i = pts[cur];
        let mut best = cur + 1;
        let mut best_slope = (y(pts[best]) - y(i)) / (xs[pts[best]] - xs[i]);
        for c in cur + 2..pts.len() {
            let s = (y(pts[c]) - y(i)) / (xs[pts[c]] - xs[i]);
            if s <= best_slope {
                best = c;
                best_slope = s;
            }
        }
        vertices.push(pts[best]);
        cur = best;
    }
    let mut out = vec![ExtReal::PosInf; f.len()];
    for w in vertices.windows(2) {
        let (a, b) = (w[0], w[1]);
        for (j, o) in out.iter_mut().enumerate().take(b + 1).skip(a) {
            let t = (xs[j] - xs[a]) / (xs[b] - xs[a]);
            *o = ExtReal::Finite(y(a) + t * (y(b) - y(a)));
        }
    }
    for &v in &vertices {
        out[v] = ExtReal::Finite(y(v));
    }
    f.with_values(out)
}

/// Largest violation of `g(x_i) <= (g(x_{i-1}) + g(x_{i+1})) / 2` along axis-parallel triples.
pub fn midpoint_convexity_violation(g: &GridFunction) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..g.len() {
        let Some(mid) = g.value(i).finite() else { continue };
        let idx = g.unravel(i);
        for k in 0..g.dim() {
            if idx[k] == 0 || idx[k] + 1 >= g.resolution()[k] {
                continue;
            }
            let mut lo = idx.clone();
            lo[k] -= 1;
            let mut hi = idx.clone();
            hi[k] += 1;
            let (Some(a), Some(b)) = (g.value(g.ravel(&lo)).finite(), g.value(g.ravel(&hi)).finite()) else {
                continue;
            };
            worst = worst.max(mid - 0.5 * (a + b));
        }
    }
    worst
}

/// Comparison of sharpness before and after biconjugation.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BiconjugateReport {
    pub base: usize,
    pub modulus: f64,
    pub modulus_biconjugate: f64,
    pub modulus_difference: f64,
    pub tolerance: f64,
    pub value_at_base: f64,
    pub biconjugate_at_base: f64,
    pub base_minimizes_biconjugate: bool,
    pub biconjugate_below: bool,
    pub fenchel_young_violation: f64,
    pub passed: bool,
}

/// Checks that sharpness at the base node survives biconjugation.
///
/// The base must minimize `f` on the grid. The moduli are compared within
/// `grid_factor * h` (largest grid step); value preservation at the base and
/// minimality for `f**` are checked to the exact-path tolerance.
pub fn verify_biconjugate_sharpness(f: &GridFunction, base: usize, dual: &DualGrid) -> Result<BiconjugateReport> {
    verify_biconjugate_sharpness_with(f, base, dual, &Tolerances::default())
}

pub fn verify_biconjugate_sharpness_with(
    f: &GridFunction,
    base: usize,
    dual: &DualGrid,
    tol: &Tolerances,
) -> Result<BiconjugateReport> {
    if base >= f.len() {
        return Err(Error::InvalidInput(format!("base node {base} out of range")));
    }
    let fb = f.value(base);
    if !fb.is_finite() || f.values().iter().any(|v| *v < fb) {
        return Err(Error::Precondition(format!("base node {base} is not an argmin of f")));
    }
    let tr = transform(f, dual)?;
    let bi = &tr.biconjugate;
    let fb = fb.to_f64();
    let bb = bi.value(base).to_f64();
    let min_bi = bi.values().iter().map(|v| v.to_f64()).fold(f64::INFINITY, f64::min);
    let below = f
        .values()
        .iter()
        .zip(bi.values())
        .all(|(a, b)| b.to_f64() <= a.to_f64() + tol.exact);
    let (m, _) = sharpness_modulus(&f.to_cloud(base)?)?;
    let (mb, _) = sharpness_modulus(&bi.to_cloud(base)?)?;
    let tolerance = tol.grid(f.max_step());
    let base_min = bb <= min_bi + tol.exact;
    let passed = (m - mb).abs() <= tolerance
        && (bb - fb).abs() <= tol.exact
        && base_min
        && below
        && tr.fenchel_young_violation <= tol.exact;
    Ok(BiconjugateReport {
        base,
        modulus: m,
        modulus_biconjugate: mb,
        modulus_difference: (m - mb).abs(),
        tolerance,
        value_at_base: fb,
        biconjugate_at_base: bb,
        base_minimizes_biconjugate: base_min,
        biconjugate_below: below,
        fenchel_young_violation: tr.fenchel_young_violation,
        passed,
    })
}

/// One level of a grid refinement study.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RefinementLevel {
    pub step: f64,
    pub modulus: f64,
    pub modulus_biconjugate: f64,
    pub difference: f64,
}

/// Samples `field` at each step (base node snapped to `base`) and compares `m(f)` with `m(f**)`.
pub fn biconjugate_refinement(
    field: &dyn ScalarField,
    bounds: &[(f64, f64)],
    base: &[f64],
    steps: &[f64],
) -> Result<Vec<RefinementLevel>> {
    steps
        .iter()
        .map(|&h| {
            let spec = SamplingSpec::with_step(bounds.to_vec(), h, base.to_vec())?;
            let (grid, b) = sample_to_grid(field, &spec)?;
            let n = *grid.resolution().iter().max().expect("nonempty");
            let dual = DualGrid::auto(&grid, 2 * n);
            let r = verify_biconjugate_sharpness(&grid, b, &dual)?;
            Ok(RefinementLevel {
                step: h,
                modulus: r.modulus,
                modulus_biconjugate: r.modulus_biconjugate,
                difference: r.modulus_difference,
            })
        })
        .collect()
}

/// Default tolerance for comparing a discrete biconjugate to the hull oracle.
pub fn envelope_tolerance(f: &GridFunction) -> f64 {
    let s = slope_bounds(f).into_iter().fold(0.0, f64::max);
    (2.0 * f.max_step() * s).max(1e-6).max(tolerance::EXACT)
}
