//! Property tests over randomly drawn parameters.

use morse_wigner::classical::{energy_ratio, orbit_from_point, trajectory, Orbit, TrajectoryClass};
use morse_wigner::spectrum::{eigenvalue, laguerre_poly, MorseParams, PhasePoint};
use morse_wigner::wigner::{knu_oracle, wdf, ComplexOrder};
use proptest::prelude::*;

fn laguerre_recurrence(n: usize, alpha: f64, x: f64) -> f64 {
    let mut l0 = 1.0;
    if n == 0 {
        return l0;
    }
    let mut l1 = 1.0 + alpha - x;
    for k in 1..n {
        let kf = k as f64;
        let l2 = ((2.0 * kf + 1.0 + alpha - x) * l1 - (kf + alpha) * l0) / (kf + 1.0);
        l0 = l1;
        l1 = l2;
    }
    l1
}

proptest! {
    #[test]
    fn scaled_coordinates_round_trip(
        lambda in 0.51f64..60.0,
        q in -40.0f64..40.0,
        p in -40.0f64..40.0,
    ) {
        let params = MorseParams::new(lambda).unwrap();
        let pt = PhasePoint::new(q, p);
        let (qs, ps) = pt.to_scaled(&params);
        let back = PhasePoint::from_scaled(&params, qs, ps);
        prop_assert!((back.q - q).abs() <= 8.0 * f64::EPSILON * q.abs().max(1.0));
        prop_assert!((back.p - p).abs() <= 8.0 * f64::EPSILON * p.abs().max(1.0));
    }

    #[test]
    fn eigenvalues_sit_strictly_inside_the_well(lambda in 0.51f64..80.0) {
        let params = MorseParams::new(lambda).unwrap();
        let mut prev = 0.0;
        for n in 0..params.num_levels() {
            let lev = eigenvalue(&params, n).unwrap();
            prop_assert!(lev.eps_n > 0.0 && lev.eps_n < 1.0);
            prop_assert!(lev.eps_n > prev);
            prop_assert!((lev.e_n - lev.eps_n * lambda / 2.0).abs() < 1e-14 * lev.e_n.max(1.0));
            prev = lev.eps_n;
        }
    }

    #[test]
    fn energy_is_conserved_along_analytic_orbits(
        eps in 1e-6f64..0.995,
        theta0 in -10.0f64..10.0,
        frac in 0.0f64..1.0,
        lambda in 0.6f64..20.0,
    ) {
        let params = MorseParams::new(lambda).unwrap();
        let orbit = Orbit::new(eps, theta0).unwrap();
        let pt = trajectory(&orbit, &params, theta0 + frac * orbit.period_theta);
        prop_assert!((energy_ratio(pt, &params) - eps).abs() < 1e-12);
    }

    #[test]
    fn bound_points_round_trip_through_their_orbit(
        eps in 1e-4f64..0.99,
        frac in 0.0f64..1.0,
        lambda in 0.6f64..20.0,
    ) {
        let params = MorseParams::new(lambda).unwrap();
        let orbit = Orbit::new(eps, 0.0).unwrap();
        let pt = trajectory(&orbit, &params, frac * orbit.period_theta);
        match orbit_from_point(pt, &params) {
            TrajectoryClass::Bound(found) => {
                let back = trajectory(&found, &params, 0.0);
                prop_assert!((back.q - pt.q).abs() < 1e-10);
                prop_assert!((back.p - pt.p).abs() < 1e-10);
            }
            TrajectoryClass::Unbound { eps } => {
                return Err(TestCaseError::fail(format!("bound point marked open ({eps})")));
            }
        }
    }

    #[test]
    fn laguerre_sum_matches_the_recurrence(
        n in 0usize..9,
        s in 0.05f64..12.0,
        xi in 0.0f64..40.0,
    ) {
        let direct = laguerre_poly(n, s, xi);
        let rec = laguerre_recurrence(n, 2.0 * s, xi);
        // both routes lose digits to alternating-sum cancellation at large ξ
        let scale = rec.abs().max(1.0) * (1.0 + xi).powi(n as i32 / 2);
        prop_assert!((direct - rec).abs() <= 1e-9 * scale,
            "n={n} s={s} xi={xi}: {direct} vs {rec}");
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    // heavier cases: each one costs a handful of K_ν evaluations

    #[test]
    fn wdf_is_even_in_momentum(
        lambda in 0.6f64..12.0,
        q in -1.5f64..3.0,
        p in 0.01f64..6.0,
    ) {
        let params = MorseParams::new(lambda).unwrap();
        let n = params.num_levels() - 1;
        let a = wdf(&params, n, PhasePoint::new(q, p)).unwrap().rho;
        let b = wdf(&params, n, PhasePoint::new(q, -p)).unwrap().rho;
        prop_assert_eq!(a, b);
    }

    #[test]
    fn oracle_respects_the_order_symmetries(
        n in -3i32..=3,
        k in 0.02f64..3.0,
        xi in 0.1f64..8.0,
    ) {
        let a = knu_oracle(ComplexOrder::new(n, k), xi).unwrap();
        let b = knu_oracle(ComplexOrder::new(-n, k), xi).unwrap();
        let c = knu_oracle(ComplexOrder::new(n, -k), xi).unwrap();
        prop_assert!((a - b).abs() < 1e-10);
        prop_assert!((a - c).abs() < 1e-10);
    }
}
