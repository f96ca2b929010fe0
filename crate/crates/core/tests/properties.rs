use proptest::prelude::*;
use rand::Rng;
use sharpmin_core::fixtures::{self, rng};
use sharpmin_core::funcspace::{tree_distance, tree_geodesic, validate_metric, DistanceCombination, TreeLocation};
use sharpmin_core::legendre::{self, DualGrid};
use sharpmin_core::metricopt::{self, ekeland, geodesic_convexity_check, FiniteFunctional, MetricFunctional};
use sharpmin_core::sharpness::{self, TiltVector};
use sharpmin_core::{ExtReal, GridFunction};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn tree_distance_is_a_metric(seed in any::<u64>(), n in 2usize..12) {
        let mut r = rng(seed);
        let t = fixtures::random_tree(&mut r, n).unwrap();
        let locs: Vec<TreeLocation> = (0..8).map(|_| fixtures::random_location(&mut r, &t)).collect();
        let mut uniq: Vec<TreeLocation> = Vec::new();
        for l in locs {
            if !uniq.contains(&l) {
                uniq.push(l);
            }
        }
        let m: Vec<Vec<f64>> = uniq
            .iter()
            .map(|&a| uniq.iter().map(|&b| tree_distance(&t, a, b).unwrap()).collect())
            .collect();
        prop_assert!(validate_metric(&m).unwrap().is_valid());
    }

    #[test]
    fn geodesics_have_constant_speed(seed in any::<u64>(), s in 0.0f64..=1.0, s2 in 0.0f64..=1.0) {
        let mut r = rng(seed);
        let t = fixtures::random_tree(&mut r, 10).unwrap();
        let u = fixtures::random_location(&mut r, &t);
        let v = fixtures::random_location(&mut r, &t);
        let d = tree_distance(&t, u, v).unwrap();
        let a = tree_geodesic(&t, u, v, s).unwrap();
        let b = tree_geodesic(&t, u, v, s2).unwrap();
        prop_assert!((tree_distance(&t, a, b).unwrap() - (s - s2).abs() * d).abs() <= 1e-12);
        prop_assert!((tree_distance(&t, a, u).unwrap() - s * d).abs() <= 1e-12);
    }

    #[test]
    fn three_characterizations_agree(seed in any::<u64>()) {
        let f = fixtures::random_cloud_seeded(seed).unwrap();
        let (m, _) = sharpness::sharpness_modulus(&f).unwrap();
        let s = sharpness::slope_infimum(&f).unwrap();
        let t = sharpness::tilt_radius(&f).unwrap();
        prop_assert!((m - s).abs() <= 1e-9 && (m - t).abs() <= 1e-9);
    }

    #[test]
    fn small_tilts_keep_the_minimizer(seed in any::<u64>(), frac in 0.0f64..0.99) {
        let f = fixtures::random_cloud_seeded(seed).unwrap();
        let (m, _) = sharpness::sharpness_modulus(&f).unwrap();
        prop_assume!(m > 0.0);
        let mut r = rng(seed ^ 0x5eed);
        let dir: Vec<f64> = (0..f.dim()).map(|_| r.gen_range(-1.0..1.0)).collect();
        let len = dir.iter().map(|c| c * c).sum::<f64>().sqrt();
        prop_assume!(len > 1e-6);
        let xi = TiltVector::new(dir.iter().map(|c| frac * m * c / len).collect()).unwrap();
        prop_assert_eq!(sharpness::tilt_probe(&f, &xi).unwrap(), vec![f.base_index()]);
    }

    #[test]
    fn fenchel_young_holds(seed in any::<u64>(), n in 3usize..40) {
        let mut r = rng(seed);
        let values: Vec<ExtReal> = (0..n).map(|_| ExtReal::Finite(r.gen_range(-2.0..2.0))).collect();
        let f = GridFunction::new(vec![(-1.0, 1.0)], vec![n], values).unwrap();
        let c = legendre::conjugate(&f, &DualGrid::auto(&f, 2 * n)).unwrap();
        prop_assert!(legendre::fenchel_young_violation(&f, &c) <= 1e-9);
    }

    #[test]
    fn ekeland_postconditions(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(2..=50);
        let space = fixtures::random_metric_space(&mut r, n, 3).unwrap();
        let values: Vec<f64> = (0..n).map(|_| r.gen_range(0.0..10.0)).collect();
        let j = FiniteFunctional::from_finite(space, &values, 0).unwrap();
        let x0 = r.gen_range(0..n);
        let eps = values[x0] - j.infimum() + r.gen_range(0.01..1.0);
        let lambda = r.gen_range(0.05..2.0);
        let out = ekeland(&j, x0, eps, lambda).unwrap();
        let x = out.output;
        prop_assert!(values[x] <= values[x0]);
        prop_assert!(j.space().dist(x0, x) <= lambda);
        for v in (0..n).filter(|&v| v != x) {
            prop_assert!(values[v] + eps / lambda * j.space().dist(v, x) > values[x]);
        }
    }

    #[test]
    fn finite_modulus_equals_slope_infimum(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(3..30);
        let space = fixtures::random_metric_space(&mut r, n, 2).unwrap();
        let mut values: Vec<f64> = (0..n).map(|_| r.gen_range(0.1..10.0)).collect();
        values[0] = 0.0;
        let j = FiniteFunctional::from_finite(space, &values, 0).unwrap();
        let (m, _) = metricopt::global_modulus(&j).unwrap();
        prop_assert!((m - metricopt::slope_infimum(&j).unwrap()).abs() <= 1e-9);
    }

    #[test]
    fn distance_functions_are_geodesically_convex(seed in any::<u64>()) {
        let mut r = rng(seed);
        let t = fixtures::random_tree(&mut r, 9).unwrap();
        let a = fixtures::random_location(&mut r, &t);
        let phi = DistanceCombination::single(&t, 1.0, a).unwrap();
        let pairs: Vec<_> = (0..10)
            .map(|_| (fixtures::random_location(&mut r, &t), fixtures::random_location(&mut r, &t)))
            .collect();
        let grid: Vec<f64> = (0..=10).map(|k| k as f64 / 10.0).collect();
        prop_assert!(geodesic_convexity_check(&t, &phi, &pairs, &grid, 1e-9).unwrap().ok);
    }

    #[test]
    fn thm2_forward_direction(seed in any::<u64>()) {
        let mut r = rng(seed);
        let n = r.gen_range(3..30);
        let space = fixtures::random_metric_space(&mut r, n, 2).unwrap();
        let mut values: Vec<f64> = (1..n).map(|i| 2.0 * space.dist(0, i)).collect();
        values.insert(0, 0.0);
        let j = FiniteFunctional::from_finite(space.clone(), &values, 0).unwrap();
        let delta = r.gen_range(0.1..1.5);
        let gamma = match metricopt::local_sharpness(&MetricFunctional::Finite(j.clone()), delta) {
            Ok(ls) => ls.gamma,
            Err(_) => return Ok(()),
        };
        let l = gamma * r.gen_range(0.05..0.99);
        let (anchors, g) = fixtures::lipschitz_anchor_values(&mut r, n, 4, l, 1.0, |a, b| space.dist(a, b));
        let zeta = metricopt::mcshane_on_metric(&space, &anchors, &g, l).unwrap();
        let hit = metricopt::thm2_probe(&j, &zeta, l, delta).unwrap();
        prop_assert!(hit.iter().all(|&i| i == 0));
    }
}
