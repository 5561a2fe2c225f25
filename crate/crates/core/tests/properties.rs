//! Cross-cutting invariants: method agreement on randomized smooth
//! profiles, bounds of the functional, and property tests of the metric and
//! envelope primitives.

use proptest::prelude::*;
use rand::Rng;
use rand::SeedableRng;
use rand_pcg::Pcg64;

use resist_core::curve::{Piece, Profile};
use resist_core::metric::{GeodesicPoint, Metric};
use resist_core::optimizer;
use resist_core::resistance;

/// A smooth random profile, affine plus a sine in the transformed
/// coordinate. Amplitudes are chosen so every metric stays inside its
/// phi-range.
fn random_smooth_profile(metric: &Metric, rng: &mut Pcg64) -> (Profile, f64) {
    let (u0, a_max, b_max) = match metric.id() {
        "sphere" => (0.0, 0.8, 0.3),
        "plane" => (1.0, 0.8, 0.3),
        _ => (1.0, 0.3, 0.15),
    };
    let span = rng.gen_range(0.4..1.5);
    let a = rng.gen_range(-a_max..a_max);
    let b = rng.gen_range(0.0..b_max);
    let c = rng.gen_range(0.5..4.0);
    let d = rng.gen_range(0.0..std::f64::consts::TAU);
    let y0 = metric.phi(u0).unwrap();

    let m1 = metric.clone();
    let u = move |v: f64| m1.phi_inverse(y0 + a * v + b * (c * v + d).sin()).unwrap();
    let m2 = metric.clone();
    let u_du = u.clone();
    let du = move |v: f64| {
        let yp = a + b * c * (c * v + d).cos();
        yp * m2.warp(u_du(v)).unwrap()
    };
    let m3 = metric.clone();
    let u_d2u = u.clone();
    let d2u = move |v: f64| {
        let yp = a + b * c * (c * v + d).cos();
        let ypp = -b * c * c * (c * v + d).sin();
        let w = u_d2u(v);
        let f = m3.warp(w).unwrap();
        ypp * f + yp * yp * m3.warp_prime(w).unwrap() * f
    };
    let profile = Profile::new(metric.clone(), vec![Piece::new((0.0, span), u, du, d2u)])
        .expect("amplitudes keep the profile inside the domain");
    (profile, span)
}

#[test]
fn methods_agree_on_random_smooth_profiles() {
    let mut rng = Pcg64::seed_from_u64(7777);
    for m in [Metric::sphere(), Metric::plane(), Metric::hyperbolic()] {
        let mut worst_gt: f64 = 0.0;
        let mut worst_gp: f64 = 0.0;
        for _ in 0..50 {
            let (p, span) = random_smooth_profile(&m, &mut rng);
            let g = resistance::graph(&p).unwrap();
            let t = resistance::transformed(&p).unwrap();
            let r = resistance::parametric(&p.to_parametric()).unwrap();
            worst_gt = worst_gt.max((g.value - t.value).abs());
            worst_gp = worst_gp.max((g.value - r.value).abs());
            assert!(g.value >= 0.0 && g.value <= span + 1e-12);
        }
        assert!(worst_gt < 1e-8, "{}: graph vs transformed {worst_gt:.2e}", m.id());
        assert!(worst_gp < 1e-8, "{}: graph vs parametric {worst_gp:.2e}", m.id());
    }
}

#[test]
fn amplitude_bound_is_attained_only_by_parallels() {
    let m = Metric::hyperbolic();
    let par = Profile::parallel(&m, 1.0, (0.0, 1.2)).unwrap();
    let r = resistance::graph(&par).unwrap();
    assert!((r.value - 1.2).abs() < 1e-12);
    // any profile with u' > 0 somewhere sits strictly below the bound
    let a = GeodesicPoint::new(1.0, 0.0);
    let p = Profile::from_phi_slopes(&m, a, &[(0.0, 0.5), (0.4, 0.3), (0.0, 0.4)]).unwrap();
    let r = resistance::graph(&p).unwrap();
    assert!(r.value < 1.2 - 1e-4);
}

#[test]
fn oracle_tracks_classifier_across_regimes() {
    // small DP instances bracket the classifier value from above
    for (delta_v, big_l) in [(1.0, 0.5), (0.5, 0.8), (0.9, 0.9)] {
        let bound = optimizer::jensen_lower_bound(delta_v, big_l).unwrap();
        let bf = optimizer::brute_force_min(delta_v, big_l, 48, 48, 4.0).unwrap();
        assert!(bf >= bound - 1e-12);
        assert!(bf - bound < 0.05, "gap {} at ({delta_v}, {big_l})", bf - bound);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn phi_inverse_round_trips_on_space_forms(u in -1.4f64..1.4, pick in 0u8..3) {
        let (m, u) = match pick {
            0 => (Metric::sphere(), u),
            1 => (Metric::plane(), u.abs().max(0.05)),
            _ => (Metric::hyperbolic(), u.abs().max(0.05)),
        };
        let y = m.phi(u).unwrap();
        let back = m.phi_inverse(y).unwrap();
        prop_assert!((back - u).abs() < 1e-11);
    }

    #[test]
    fn amplitude_is_monotone_and_antisymmetric(
        a in 0.1f64..3.0,
        b in 0.1f64..3.0,
        pick in 0u8..3,
    ) {
        let m = match pick {
            0 => Metric::sphere(),
            1 => Metric::plane(),
            _ => Metric::hyperbolic(),
        };
        let (a, b) = if m.id() == "sphere" { (a - 1.55, b - 1.55) } else { (a, b) };
        let fwd = m.amplitude(a, b).unwrap();
        let bwd = m.amplitude(b, a).unwrap();
        prop_assert!((fwd + bwd).abs() < 1e-12);
        if a < b {
            prop_assert!(fwd > 0.0);
        }
    }

    #[test]
    fn envelope_stays_below_g_and_convex(p in 0.0f64..6.0, q in 0.0f64..6.0) {
        let g = |x: f64| 1.0 / (1.0 + x * x);
        let env_p = optimizer::convex_envelope(p).unwrap();
        prop_assert!(env_p <= g(p) + 1e-15);
        // midpoint convexity
        let mid = optimizer::convex_envelope(0.5 * (p + q)).unwrap();
        let avg = 0.5 * (env_p + optimizer::convex_envelope(q).unwrap());
        prop_assert!(mid <= avg + 1e-12);
    }

    #[test]
    fn density_is_bounded_by_full_reversal(
        u in 0.2f64..3.0,
        du in -3.0f64..3.0,
        dv in -3.0f64..3.0,
    ) {
        prop_assume!(du != 0.0 || dv != 0.0);
        let m = Metric::plane();
        let d = resistance::density(&m, u, (du, dv)).unwrap();
        prop_assert!((0.0..=2.0 + 1e-12).contains(&d));
    }

    #[test]
    fn monotone_profiles_sit_between_bound_and_amplitude(
        s1 in 0.0f64..1.5,
        s2 in 0.0f64..1.5,
        s3 in 0.0f64..1.5,
        w in 0.2f64..0.6,
    ) {
        let m = Metric::plane();
        let a = GeodesicPoint::new(1.0, 0.0);
        let p = Profile::from_phi_slopes(&m, a, &[(s1, w), (s2, w), (s3, w)]).unwrap();
        let delta_v = 3.0 * w;
        let big_l = (s1 + s2 + s3) * w;
        let bound = optimizer::jensen_lower_bound(delta_v, big_l).unwrap();
        let r = resistance::graph(&p).unwrap();
        prop_assert!(r.value >= bound - 1e-10);
        prop_assert!(r.value <= delta_v + 1e-12);
    }
}
