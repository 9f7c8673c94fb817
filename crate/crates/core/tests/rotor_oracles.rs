use std::f64::consts::PI;

use proptest::prelude::*;
use topogauge_core::field::{GaugeConfig, WYGauge};
use topogauge_core::rotor::{
    dense_rotor_diag, exact_energies, exact_spectrum, large_delta_minus, large_delta_plus,
    vortex_potential, wy_rotor_spectrum, Branch, RotorBasis,
};

fn cfg(delta: f64, theta: f64) -> GaugeConfig {
    GaugeConfig { delta, theta, m_max: 60, ..GaugeConfig::default() }
}

#[test]
fn closed_form_matches_dense_diagonalization() {
    for delta in [0.1, 1.0, 10.0] {
        for theta in [0.0, PI / 4.0, PI / 2.0] {
            let c = cfg(delta, theta);
            let mut exact = exact_spectrum(&c).unwrap().sorted_energies();
            exact.sort_by(f64::total_cmp);
            let ceiling = (-10..=10)
                .map(|m| exact_energies(&c, m).1)
                .fold(f64::NEG_INFINITY, f64::max);
            let k = exact.iter().filter(|e| **e <= ceiling + 1e-9).count();
            let (_, dense) =
                dense_rotor_diag(1.0, &RotorBasis::new(48), &vortex_potential(delta, theta), k, 1e-11).unwrap();
            for (e, d) in exact.iter().zip(dense.iter()) {
                let rel = (e - d.energy).abs() / e.abs().max(1.0);
                assert!(rel < 1e-10, "delta {delta} theta {theta}: {e} vs {}", d.energy);
            }
        }
    }
}

#[test]
fn dense_states_carry_sharp_total_angular_momentum() {
    let (_, levels) =
        dense_rotor_diag(1.0, &RotorBasis::new(32), &vortex_potential(1.3, 0.7), 20, 1e-10).unwrap();
    for l in levels {
        assert!(l.j_variance < 1e-10, "variance {}", l.j_variance);
    }
}

#[test]
fn expansion_error_falls_as_inverse_square() {
    let theta = PI / 4.0;
    let deltas = [10.0, 20.0, 40.0, 80.0, 160.0];
    let err = |d: f64| {
        let c = cfg(d, theta);
        let (lo, hi) = exact_energies(&c, 2);
        (lo - large_delta_minus(&c, 2)).abs().max((hi - large_delta_plus(&c, 2)).abs())
    };
    let ratios: Vec<f64> = deltas.windows(2).map(|w| (err(w[1]) / err(w[0])).log2()).collect();
    for r in ratios {
        assert!((r + 2.0).abs() < 0.1, "local slope {r}");
    }
}

#[test]
fn tube_outside_track_gives_free_levels() {
    let free = wy_rotor_spectrum(&WYGauge { alpha: 0.0, x0: 0.0 }, 1.0, 1.0, 10).unwrap();
    let shifted = wy_rotor_spectrum(&WYGauge { alpha: 0.4, x0: 1.5 }, 1.0, 1.0, 10).unwrap();
    assert_eq!(free.sorted_energies(), shifted.sorted_energies());
}

proptest! {
    #[test]
    fn spectral_flow(alpha in -2.0..2.0f64, m in -5i64..5, delta in 0.0..5.0f64) {
        let a = wy_rotor_spectrum(&WYGauge { alpha, x0: 0.0 }, delta, 1.0, 8).unwrap();
        let b = wy_rotor_spectrum(&WYGauge { alpha: alpha + 1.0, x0: 0.0 }, delta, 1.0, 8).unwrap();
        let ea = a.get(m, Branch::Minus).unwrap();
        let eb = b.get(m + 1, Branch::Minus).unwrap();
        prop_assert!((ea - eb).abs() < 1e-12);
    }

    #[test]
    fn branches_are_ordered(delta in 0.0..20.0f64, theta in 0.0..PI, m in -10i64..10) {
        let (lo, hi) = exact_energies(&cfg(delta, theta), m);
        prop_assert!(lo <= hi);
    }
}
