use std::f64::consts::PI;

use proptest::prelude::*;
use topogauge_core::fringe::{fit_beta, model_intensity, FitOptions, HuygensModel};

fn circ(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

fn screen() -> Vec<f64> {
    (-160..=160).map(|v| v as f64).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(16))]
    #[test]
    fn phase_is_identifiable(beta in 0.0..(2.0 * PI), k in 1.42..1.63f64) {
        let m = HuygensModel { k, distance: 210.0, half_separation: 24.0, amplitude: 1.0, beta };
        let y = screen();
        let p: Vec<f64> = y.iter().map(|&v| model_intensity(&m, v) * (-(v / 90.0).powi(2)).exp()).collect();
        let opts = FitOptions { k_scan: Some((1.4, 1.65, 26)), ..FitOptions::new(1.5, 210.0, 24.0) };
        let fit = fit_beta(&y, &p, &opts).unwrap();
        prop_assert!(circ(fit.beta, beta) < 0.05, "{} vs {}", fit.beta, beta);
    }
}

#[test]
fn half_fringe_shift_swaps_extrema() {
    let m0 = HuygensModel { k: 1.5, distance: 210.0, half_separation: 24.0, amplitude: 1.0, beta: 0.0 };
    let m1 = HuygensModel { beta: PI, ..m0 };
    let fringe = PI * 210.0 / (1.5 * 24.0);
    assert!(model_intensity(&m1, 0.0) < 1e-20);
    for y in [fringe, -fringe] {
        assert!(model_intensity(&m1, y) < 2e-2 * model_intensity(&m0, y));
    }
    for y in [0.5 * fringe, -0.5 * fringe] {
        assert!(model_intensity(&m0, y) < 2e-2 * model_intensity(&m1, y));
    }
}

#[test]
fn flat_profiles_are_rejected() {
    let y = screen();
    assert!(fit_beta(&y, &vec![0.0; y.len()], &FitOptions::new(1.5, 210.0, 24.0)).is_err());
    assert!(fit_beta(&y[..5], &[1.0; 5], &FitOptions::new(1.5, 210.0, 24.0)).is_err());
}
