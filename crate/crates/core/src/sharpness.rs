//! Global sharp-minimizer analysis on Euclidean point clouds.
//!
//! Three independent routes to the same number are provided: the growth
//! modulus ([`sharpness_modulus`]), the infimum of global slopes
//! ([`slope_infimum`]) and the tilt-invariance radius ([`tilt_radius`]). On
//! a finite cloud whose base point is a minimizer the three coincide exactly;
//! [`verify_characterizations`] runs all of them and reports agreement.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::extended::ExtReal;
use crate::funcspace::vector::{dist, dot, norm, sub};
use crate::funcspace::PointCloudFunction;
use crate::tolerance;

/// Smallest growth ratio `(f(x) - f(base)) / d(x, base)` over finite non-base points.
pub(crate) fn modulus_over(
    n: usize,
    base: usize,
    value: impl Fn(usize) -> ExtReal,
    dist: impl Fn(usize, usize) -> f64,
) -> Result<(f64, usize)> {
    let fb = value(base).finite().ok_or(Error::InfiniteValue(base))?;
    let mut best: Option<(f64, usize)> = None;
    for i in (0..n).filter(|&i| i != base) {
        let Some(fi) = value(i).finite() else { continue };
        let ratio = (fi - fb) / dist(i, base);
        if best.is_none_or(|(m, _)| ratio < m) {
            best = Some((ratio, i));
        }
    }
    best.ok_or(Error::DegenerateCloud)
}

/// `sup_y max(f(x_i) - f(y), 0) / d(x_i, y)`; `+inf` neighbours contribute 0.
pub(crate) fn slope_over(
    n: usize,
    i: usize,
    value: impl Fn(usize) -> ExtReal,
    dist: impl Fn(usize, usize) -> f64,
) -> Result<f64> {
    let fi = value(i).finite().ok_or(Error::InfiniteValue(i))?;
    let mut sup = 0.0f64;
    for j in (0..n).filter(|&j| j != i) {
        if let Some(fj) = value(j).finite() {
            sup = sup.max((fi - fj).max(0.0) / dist(i, j));
        }
    }
    Ok(sup)
}

pub(crate) fn slope_infimum_over(
    n: usize,
    base: usize,
    value: impl Fn(usize) -> ExtReal + Copy,
    dist: impl Fn(usize, usize) -> f64 + Copy,
) -> Result<f64> {
    value(base).finite().ok_or(Error::InfiniteValue(base))?;
    let mut inf: Option<f64> = None;
    for i in (0..n).filter(|&i| i != base && value(i).is_finite()) {
        let s = slope_over(n, i, value, dist)?;
        inf = Some(inf.map_or(s, |m| m.min(s)));
    }
    inf.ok_or(Error::DegenerateCloud)
}

/// Largest `gamma` with `f(x) >= f(base) + gamma |x - base|` on the cloud, and the point attaining it.
///
/// Points valued `+inf` satisfy the growth bound for every `gamma` and are
/// skipped. A non-positive result means the base point is not the unique
/// minimizer.
pub fn sharpness_modulus(f: &PointCloudFunction) -> Result<(f64, usize)> {
    modulus_over(f.len(), f.base_index(), |i| f.value(i), |i, j| f.dist(i, j))
}

/// Global slope at point `i`.
pub fn global_slope(f: &PointCloudFunction, i: usize) -> Result<f64> {
    if i >= f.len() {
        return Err(Error::InvalidInput(format!("index {i} out of range")));
    }
    slope_over(f.len(), i, |k| f.value(k), |a, b| f.dist(a, b))
}

/// Infimum of the global slope over the finite non-base points.
pub fn slope_infimum(f: &PointCloudFunction) -> Result<f64> {
    slope_infimum_over(f.len(), f.base_index(), |k| f.value(k), |a, b| f.dist(a, b))
}

/// Supremum of `r` such that every tilt `|xi| < r` keeps the base point the unique minimizer.
///
/// For each point the separating functional is the unit vector `u` pointing
/// from the base to the point; the tilt `r u` is the most damaging one of
/// norm `r` there, so the point constrains `r` to at most
/// `(f(x) - f(base)) / <u, x - base>`. Returns 0 when the base is not the
/// unique minimizer.
pub fn tilt_radius(f: &PointCloudFunction) -> Result<f64> {
    let xb = f.base_point();
    let fb = f.base_value();
    let mut radius: Option<f64> = None;
    for (i, x) in f.points().iter().enumerate() {
        if i == f.base_index() {
            continue;
        }
        let Some(fx) = f.value(i).finite() else { continue };
        let w = sub(x, xb);
        let len = norm(&w);
        let u: Vec<f64> = w.iter().map(|c| c / len).collect();
        let support = dot(&u, &w);
        let r = (fx - fb) / support;
        radius = Some(radius.map_or(r, |m| m.min(r)));
    }
    radius.map(|r| r.max(0.0)).ok_or(Error::DegenerateCloud)
}

/// A dual vector `xi` identified with `R^d`, norm cached.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct TiltVector {
    components: Vec<f64>,
    norm: f64,
}

impl TiltVector {
    pub fn new(components: Vec<f64>) -> Result<Self> {
        if components.iter().any(|c| !c.is_finite()) {
            return Err(Error::InvalidInput("tilt vector must be finite".into()));
        }
        let norm = norm(&components);
        Ok(TiltVector { components, norm })
    }

    pub fn zero(dim: usize) -> Self {
        TiltVector {
            components: vec![0.0; dim],
            norm: 0.0,
        }
    }

    /// `magnitude` times the unit vector from `from` to `to`.
    pub fn toward(from: &[f64], to: &[f64], magnitude: f64) -> Result<Self> {
        let w = sub(to, from);
        let len = norm(&w);
        if len == 0.0 {
            return Err(Error::InvalidInput("tilt direction is the zero vector".into()));
        }
        TiltVector::new(w.iter().map(|c| magnitude * c / len).collect())
    }

    pub fn components(&self) -> &[f64] {
        &self.components
    }

    pub fn norm(&self) -> f64 {
        self.norm
    }
}

fn argmin_of(n: usize, total: impl Fn(usize) -> Option<f64>) -> Result<Vec<usize>> {
    let vals: Vec<Option<f64>> = (0..n).map(total).collect();
    let best = vals
        .iter()
        .flatten()
        .copied()
        .fold(None, |m: Option<f64>, v| Some(m.map_or(v, |m| m.min(v))))
        .ok_or(Error::AllInfinite)?;
    Ok((0..n).filter(|&i| vals[i] == Some(best)).collect())
}

/// Exact argmin set of `f - <xi, .>` over the cloud, ascending.
pub fn tilt_probe(f: &PointCloudFunction, xi: &TiltVector) -> Result<Vec<usize>> {
    if xi.components.len() != f.dim() {
        return Err(Error::InvalidInput(format!(
            "tilt has dimension {}, cloud has {}",
            xi.components.len(),
            f.dim()
        )));
    }
    argmin_of(f.len(), |i| {
        f.value(i).finite().map(|v| v - dot(&xi.components, f.point(i)))
    })
}

/// A real-valued Lipschitz perturbation of `R^d`.
pub trait Perturbation {
    fn eval(&self, x: &[f64]) -> f64;
    /// An upper bound on the Lipschitz constant.
    fn lipschitz_bound(&self) -> f64;
}

/// The lower McShane extension `x -> min_i (g_i + L |x - a_i|)`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct LipschitzFunctionSpec {
    anchors: Vec<Vec<f64>>,
    values: Vec<f64>,
    constant: f64,
}

impl LipschitzFunctionSpec {
    pub fn anchors(&self) -> &[Vec<f64>] {
        &self.anchors
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn constant(&self) -> f64 {
        self.constant
    }
}

impl Perturbation for LipschitzFunctionSpec {
    fn eval(&self, x: &[f64]) -> f64 {
        self.anchors
            .iter()
            .zip(&self.values)
            .map(|(a, g)| g + self.constant * dist(x, a))
            .fold(f64::INFINITY, f64::min)
    }

    fn lipschitz_bound(&self) -> f64 {
        self.constant
    }
}

/// `x -> coef * |x - center|` for any real `coef`; Lipschitz with constant `|coef|`.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct ScaledDistance {
    pub center: Vec<f64>,
    pub coef: f64,
}

impl Perturbation for ScaledDistance {
    fn eval(&self, x: &[f64]) -> f64 {
        self.coef * dist(x, &self.center)
    }

    fn lipschitz_bound(&self) -> f64 {
        self.coef.abs()
    }
}

/// Lipschitz extension through the given anchor values with constant `constant`.
pub fn mcshane_extend(anchors: Vec<Vec<f64>>, values: Vec<f64>, constant: f64) -> Result<LipschitzFunctionSpec> {
    if anchors.is_empty() || anchors.len() != values.len() {
        return Err(Error::InvalidInput("need matching, nonempty anchors and values".into()));
    }
    if !(constant > 0.0 && constant.is_finite()) {
        return Err(Error::OutOfRange {
            name: "L",
            detail: format!("{constant} must be positive"),
        });
    }
    let mut required = 0.0f64;
    for i in 0..anchors.len() {
        for j in i + 1..anchors.len() {
            let d = dist(&anchors[i], &anchors[j]);
            let dv = (values[i] - values[j]).abs();
            if d == 0.0 {
                if dv != 0.0 {
                    return Err(Error::ConflictingAnchors(j));
                }
                continue;
            }
            required = required.max(dv / d);
        }
    }
    if required > constant * (1.0 + tolerance::LIPSCHITZ_SLACK) {
        return Err(Error::InfeasibleConstant {
            required,
            given: constant,
        });
    }
    Ok(LipschitzFunctionSpec {
        anchors,
        values,
        constant,
    })
}

/// Exact argmin set of `f + zeta` over the cloud, ascending.
pub fn lipschitz_probe(f: &PointCloudFunction, zeta: &dyn Perturbation) -> Result<Vec<usize>> {
    argmin_of(f.len(), |i| f.value(i).finite().map(|v| v + zeta.eval(f.point(i))))
}

/// Outcome of running all three characterizations on one cloud.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SharpnessReport {
    pub modulus: f64,
    pub slope_infimum: f64,
    pub tilt_radius: f64,
    pub agreement: bool,
    pub witness: usize,
    /// Global slope per point; `None` where the value is `+inf`.
    pub slopes: Vec<Option<f64>>,
    pub tolerance: f64,
}

impl SharpnessReport {
    pub fn is_sharp(&self) -> bool {
        self.modulus > 0.0
    }
}

/// Runs modulus, slope infimum and tilt radius and checks pairwise agreement within `tol`.
///
/// When the modulus is negative the base point is not a minimizer; slopes and
/// tilt radius are then both 0, so the comparison uses `max(modulus, 0)`.
pub fn verify_characterizations(f: &PointCloudFunction, tol: f64) -> Result<SharpnessReport> {
    let (modulus, witness) = sharpness_modulus(f)?;
    let slope_inf = slope_infimum(f)?;
    let radius = tilt_radius(f)?;
    let m = modulus.max(0.0);
    let agreement = (m - slope_inf).abs() <= tol && (m - radius).abs() <= tol && (slope_inf - radius).abs() <= tol;
    if !agreement {
        return Err(Error::Disagreement {
            modulus,
            slope_infimum: slope_inf,
            tilt_radius: radius,
        });
    }
    let slopes = (0..f.len())
        .map(|i| {
            if f.value(i).is_finite() {
                global_slope(f, i).map(Some)
            } else {
                Ok(None)
            }
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(SharpnessReport {
        modulus,
        slope_infimum: slope_inf,
        tilt_radius: radius,
        agreement,
        witness,
        slopes,
        tolerance: tol,
    })
}

/// `verify_characterizations` with the default exact-path tolerance.
pub fn verify_default(f: &PointCloudFunction) -> Result<SharpnessReport> {
    verify_characterizations(f, tolerance::EXACT)
}

/// Smallest slack `f(x) - (f(base) + gamma |x - base|)` over finite non-base points, and where it occurs.
pub fn cone_gap(f: &PointCloudFunction, gamma: f64) -> Result<(f64, usize)> {
    if !(gamma > 0.0) {
        return Err(Error::OutOfRange {
            name: "gamma",
            detail: format!("{gamma} must be positive"),
        });
    }
    let base = f.base_index();
    let fb = f.base_value();
    let mut best: Option<(f64, usize)> = None;
    for i in (0..f.len()).filter(|&i| i != base) {
        let Some(fi) = f.value(i).finite() else { continue };
        let gap = fi - (fb + gamma * f.dist(i, base));
        if best.is_none_or(|(g, _)| gap < g) {
            best = Some((gap, i));
        }
    }
    best.ok_or(Error::DegenerateCloud)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::funcspace::{make_norm_cone, make_tent, sample_to_cloud, FnField, SamplingSpec};

    fn line(values: &[f64]) -> PointCloudFunction {
        let n = values.len();
        let pts = (0..n).map(|i| vec![i as f64]).collect();
        PointCloudFunction::new(1, pts, values.iter().map(|&v| ExtReal::Finite(v)).collect(), 0).unwrap()
    }

    fn grid1(field: &dyn crate::funcspace::ScalarField, lo: f64, hi: f64, n: usize) -> PointCloudFunction {
        sample_to_cloud(
            field,
            &SamplingSpec {
                bounds: vec![(lo, hi)],
                resolution: vec![n],
                base: vec![0.0],
            },
        )
        .unwrap()
    }

    // Brute-force ratio minimum, written independently of `modulus_over`.
    fn brute_modulus(f: &PointCloudFunction) -> f64 {
        let b = f.base_index();
        f.points()
            .iter()
            .enumerate()
            .filter(|(i, _)| *i != b && f.value(*i).is_finite())
            .map(|(i, p)| (f.value(i).to_f64() - f.base_value()) / dist(p, f.base_point()))
            .fold(f64::INFINITY, f64::min)
    }

    #[test]
    fn norm_cone_modulus_is_gamma() {
        let cone = make_norm_cone(&[0.0], 2.0).unwrap();
        let c = grid1(&cone, -1.0, 1.0, 7);
        let (m, w) = sharpness_modulus(&c).unwrap();
        assert!((m - 2.0).abs() < 1e-15);
        assert_ne!(w, c.base_index());
        assert!((tilt_radius(&c).unwrap() - 2.0).abs() < 1e-15);
    }

    #[test]
    fn quadratic_five_nodes() {
        let q = FnField::new(1, |x: &[f64]| ExtReal::Finite(x[0] * x[0]));
        let c = grid1(&q, -1.0, 1.0, 5);
        let (m, w) = sharpness_modulus(&c).unwrap();
        assert_eq!(m, brute_modulus(&c));
        assert_eq!(m, 0.5);
        assert_eq!(w, 1);
        assert_eq!(tilt_radius(&c).unwrap(), m);
    }

    #[test]
    fn tent_modulus_matches_closed_form() {
        let tent = make_tent(&[0.0]).unwrap();
        for &h in &[0.5, 0.25, 0.125] {
            let n = (4.0 / h) as usize + 1;
            let c = grid1(&tent, -2.0, 2.0, n);
            let (m, w) = sharpness_modulus(&c).unwrap();
            assert!((m - h / (2.0 - h)).abs() < 1e-12);
            assert!((m - brute_modulus(&c)).abs() < 1e-15);
            assert!((c.point(w)[0].abs() - (2.0 - h)).abs() < 1e-12);
            assert!((slope_infimum(&c).unwrap() - m).abs() < 1e-12);
        }
    }

    #[test]
    fn degenerate_cloud() {
        let pts = vec![vec![0.0], vec![1.0]];
        let c = PointCloudFunction::new(1, pts, vec![ExtReal::ZERO, ExtReal::PosInf], 0).unwrap();
        assert_eq!(sharpness_modulus(&c), Err(Error::DegenerateCloud));
        assert_eq!(tilt_radius(&c), Err(Error::DegenerateCloud));
        assert_eq!(slope_infimum(&c), Err(Error::DegenerateCloud));
        assert_eq!(global_slope(&c, 1), Err(Error::InfiniteValue(1)));
    }

    #[test]
    fn slope_examples() {
        let cone = make_norm_cone(&[0.0], 1.0).unwrap();
        let c = grid1(&cone, -1.0, 1.0, 5);
        assert_eq!(global_slope(&c, c.base_index()).unwrap(), 0.0);
        for i in (0..5).filter(|&i| i != 2) {
            assert!((global_slope(&c, i).unwrap() - 1.0).abs() < 1e-15);
        }
        let two = PointCloudFunction::new(1, vec![vec![0.0], vec![2.0]], vec![ExtReal::ZERO, ExtReal::Finite(5.0)], 0).unwrap();
        assert_eq!(global_slope(&two, 1).unwrap(), 2.5);
    }

    #[test]
    fn non_minimizer_base() {
        let c = line(&[1.0, 0.0, 2.0]);
        let (m, _) = sharpness_modulus(&c).unwrap();
        assert_eq!(m, -1.0);
        assert_eq!(tilt_radius(&c).unwrap(), 0.0);
        assert_eq!(slope_infimum(&c).unwrap(), 0.0);
        let r = verify_characterizations(&c, 1e-9).unwrap();
        assert!(!r.is_sharp());
    }

    #[test]
    fn tilt_probe_examples() {
        let cone = make_norm_cone(&[0.0], 1.0).unwrap();
        let c = grid1(&cone, -1.0, 1.0, 5);
        assert_eq!(tilt_probe(&c, &TiltVector::zero(1)).unwrap(), vec![2]);
        assert_eq!(tilt_probe(&c, &TiltVector::new(vec![0.5]).unwrap()).unwrap(), vec![2]);
        assert_eq!(tilt_probe(&c, &TiltVector::new(vec![1.5]).unwrap()).unwrap(), vec![4]);
    }

    #[test]
    fn mcshane_examples() {
        let z = mcshane_extend(vec![vec![0.0]], vec![1.0], 3.0).unwrap();
        assert_eq!(z.eval(&[2.0]), 7.0);
        let z = mcshane_extend(vec![vec![0.0], vec![1.0]], vec![0.0, 1.0], 1.0).unwrap();
        assert_eq!(z.eval(&[0.5]), 0.5);
        assert_eq!(
            mcshane_extend(vec![vec![0.0], vec![1.0]], vec![0.0, 3.0], 1.0),
            Err(Error::InfeasibleConstant { required: 3.0, given: 1.0 })
        );
        assert_eq!(
            mcshane_extend(vec![vec![0.0], vec![0.0]], vec![0.0, 1.0], 1.0),
            Err(Error::ConflictingAnchors(1))
        );
    }

    #[test]
    fn lipschitz_probe_zero_perturbation() {
        let c = line(&[0.0, 1.0, 0.5]);
        let zero = mcshane_extend(vec![vec![0.0]], vec![0.0], 0.0001).unwrap();
        // a tiny slope cannot move a strict minimizer
        assert_eq!(lipschitz_probe(&c, &zero).unwrap(), c.argmin());
        let far = ScaledDistance { center: vec![2.0], coef: -1.5 };
        assert_eq!(lipschitz_probe(&c, &far).unwrap(), vec![0]);
    }

    #[test]
    fn cone_gap_signs() {
        let q = FnField::new(1, |x: &[f64]| ExtReal::Finite(x[0] * x[0]));
        let c = grid1(&q, -1.0, 1.0, 5);
        let (m, w) = sharpness_modulus(&c).unwrap();
        let (gap, at) = cone_gap(&c, m).unwrap();
        assert!(gap.abs() < 1e-15);
        assert_eq!(at, w);
        assert!(cone_gap(&c, 0.5 * m).unwrap().0 > 0.0);
        assert!(cone_gap(&c, 2.0 * m).unwrap().0 < 0.0);
    }

    #[test]
    fn verify_cone_and_tent() {
        let cone = make_norm_cone(&[0.0, 0.0], 1.0).unwrap();
        let c = sample_to_cloud(
            &cone,
            &SamplingSpec {
                bounds: vec![(-1.0, 1.0), (-1.0, 1.0)],
                resolution: vec![5, 5],
                base: vec![0.0, 0.0],
            },
        )
        .unwrap();
        let r = verify_default(&c).unwrap();
        assert!(r.agreement);
        for v in [r.modulus, r.slope_infimum, r.tilt_radius] {
            assert!((v - 1.0).abs() < 1e-12);
        }
        let tent = make_tent(&[0.0]).unwrap();
        let c = grid1(&tent, -2.0, 2.0, 17);
        let r = verify_default(&c).unwrap();
        assert!((r.modulus - 0.25 / 1.75).abs() < 1e-12);
        assert_eq!(r.slopes[0], None);
    }
}
