use std::sync::OnceLock;

use locstate_core::diffraction::{compare_patterns, product_density, screen_density};
use locstate_core::freestate::{default_grid, fraunhofer_reference, FreeLocationState, InfiniteCutoff};
use locstate_core::numerics::{complex_erf, fresnel_cs, gauss_legendre, hermite_function};
use locstate_core::{
    density_profile, evaluate_limit, project_coefficients, uniform_grid, ComplexValue, Eigenbasis,
    OscillatorBasis, OscillatorLocationState, PhysicalConstants, ScreenGeometry, SlitSpec,
};
use proptest::prelude::*;

fn oscillator() -> &'static OscillatorLocationState {
    static STATE: OnceLock<OscillatorLocationState> = OnceLock::new();
    STATE.get_or_init(|| {
        let basis = OscillatorBasis::unit_frequency(PhysicalConstants::default(), 120).unwrap();
        let slit = SlitSpec::new(2.0, 6.0, PhysicalConstants::default()).unwrap();
        project_coefficients(&basis, &slit).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn erf_symmetries(re in -8.0f64..8.0, im in -8.0f64..8.0) {
        let z = ComplexValue::new(re, im);
        let e = complex_erf(z).unwrap();
        prop_assert_eq!(complex_erf(-z).unwrap(), -e);
        prop_assert_eq!(complex_erf(z.conj()).unwrap(), e.conj());
    }

    #[test]
    fn fresnel_is_odd_and_bounded(u in -50.0f64..50.0) {
        let (c, s) = fresnel_cs(u).unwrap();
        let (cm, sm) = fresnel_cs(-u).unwrap();
        prop_assert_eq!((c, s), (-cm, -sm));
        prop_assert!(c.abs() < 0.78 && s.abs() < 0.72);
    }

    #[test]
    fn gauss_legendre_weights_sum_to_two(order in 1usize..400) {
        let rule = gauss_legendre(order).unwrap();
        let total: f64 = rule.weights.iter().sum();
        prop_assert!((total - 2.0).abs() < 1e-14 * order as f64);
        prop_assert!(rule.nodes.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(rule.weights.iter().all(|w| *w > 0.0));
    }

    #[test]
    fn hermite_parity(n in 0usize..300, x in 0.0f64..25.0) {
        let p = hermite_function(n, x).unwrap();
        let m = hermite_function(n, -x).unwrap();
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        prop_assert_eq!(m, sign * p);
    }

    #[test]
    fn limit_parity_and_time_reversal(y in -1.0f64..1.0, t in 1e-6f64..1e-1, a in 0.01f64..1.0) {
        let slit = SlitSpec::centered(a).unwrap();
        let p = evaluate_limit(&slit, y, t).unwrap();
        let m = evaluate_limit(&slit, -y, t).unwrap();
        prop_assert!((p - m).norm() <= 1e-13 * p.norm().max(1.0));
        let back = evaluate_limit(&slit, y, -t).unwrap();
        prop_assert!((back - p.conj()).norm() <= 1e-14 * p.norm().max(1.0));
    }

    #[test]
    fn truncated_time_reversal(y in -0.5f64..0.5, t in 1e-6f64..1e-2, km in 10.0f64..5e4) {
        let state = FreeLocationState::new(SlitSpec::centered(0.1).unwrap(), km).unwrap();
        let f = state.evaluate_truncated(y, t).unwrap();
        let b = state.evaluate_truncated(y, -t).unwrap();
        prop_assert!((b - f.conj()).norm() < 1e-10);
    }

    #[test]
    fn fraunhofer_reference_bounded(alpha in -1e3f64..1e3, a in 0.01f64..5.0) {
        let slit = SlitSpec::centered(a).unwrap();
        let v = fraunhofer_reference(&slit, alpha);
        prop_assert!(v >= 0.0 && v <= a / (2.0 * std::f64::consts::PI) * (1.0 + 1e-15));
    }

    #[test]
    fn symmetric_grids_mirror_exactly(half in 1e-3f64..1e3, points in 2usize..5000) {
        let g = uniform_grid(-half, half, points).unwrap();
        for i in 0..points {
            prop_assert_eq!(g[i], -g[points - 1 - i]);
        }
    }

    #[test]
    fn oscillator_revival_mirror_conjugation(y in -12.0f64..12.0, t in -7.0f64..7.0) {
        let s = oscillator();
        let d = s.evolve(y, t).unwrap();
        let revived = s.evolve(y, t + 2.0 * std::f64::consts::PI).unwrap();
        let mirrored = s.evolve(-y, t + std::f64::consts::PI).unwrap();
        prop_assert!((d.norm_sqr() - revived.norm_sqr()).abs() < 1e-9);
        prop_assert!((d.norm_sqr() - mirrored.norm_sqr()).abs() < 1e-9);
        prop_assert!((s.evolve(y, -t).unwrap() - d.conj()).norm() < 1e-10);
    }

    #[test]
    fn energies_increase(n in 0usize..5000, omega in 1e-3f64..1e3) {
        let b = OscillatorBasis::new(PhysicalConstants::default(), omega, 5000).unwrap();
        prop_assert!(b.energy_over_hbar(n + 1) > b.energy_over_hbar(n));
        prop_assert!((b.sigma() * b.sigma() * b.omega() - 1.0).abs() < 1e-12);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(12))]

    #[test]
    fn screen_pattern_depends_only_on_time_of_flight(d in 0.1f64..10.0, kx in 100.0f64..1e5, shift in -4i32..4) {
        let c = PhysicalConstants::default();
        let slit = SlitSpec::centered(0.1).unwrap();
        let scale = 2f64.powi(shift);
        let near = ScreenGeometry::new(d, kx, c).unwrap();
        let far = ScreenGeometry::new(d * scale, kx * scale, c).unwrap();
        prop_assert_eq!(near.time_of_flight(), far.time_of_flight());
        let grid = uniform_grid(-1.0, 1.0, 101).unwrap();
        prop_assert_eq!(product_density(&slit, &near, &grid).unwrap(), product_density(&slit, &far, &grid).unwrap());
    }

    #[test]
    fn distances_are_symmetric(t1 in 1e-4f64..1e-2, t2 in 1e-4f64..1e-2) {
        let slit = SlitSpec::centered(0.1).unwrap();
        let grid = default_grid(&slit, 1e-2);
        let a = screen_density(&InfiniteCutoff(slit), t1, &grid).unwrap();
        let b = screen_density(&InfiniteCutoff(slit), t2, &grid).unwrap();
        let ab = compare_patterns(&a, &b, 0.1).unwrap();
        let ba = compare_patterns(&b, &a, 0.1).unwrap();
        prop_assert_eq!(ab.l2_distance, ba.l2_distance);
        prop_assert_eq!(ab.linf_distance, ba.linf_distance);
        prop_assert!(ab.l2_distance >= 0.0 && ab.linf_distance >= 0.0);
    }
}

#[test]
fn profiles_do_not_depend_on_thread_count() {
    let slit = SlitSpec::centered(0.1).unwrap();
    let state = FreeLocationState::new(slit, 3e3).unwrap();
    let grid = default_grid(&slit, 1e-3);
    let run = |threads: usize| {
        let pool = rayon::ThreadPoolBuilder::new().num_threads(threads).build().unwrap();
        pool.install(|| {
            (
                density_profile(&state, &grid, 1e-3, true).unwrap(),
                density_profile(oscillator(), &grid, 0.7, true).unwrap(),
            )
        })
    };
    assert_eq!(run(1), run(4));
}
