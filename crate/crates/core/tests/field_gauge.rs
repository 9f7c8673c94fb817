use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use topogauge_core::field::{
    adiabatic_spinors, gauge_function_inside, gauge_function_outside, zeeman_matrix,
    GaugeConfig, VortexField,
};
use topogauge_core::spin::eig2;
use topogauge_core::wilson::{path_ordered_exp, ConnectionField, PathSpec};

#[test]
fn zeeman_levels_are_position_independent() {
    let f = VortexField::from_gap(1.7, 0.9, [0.3, -0.2]);
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(11);
    for _ in 0..10_000 {
        let r = [rng.gen_range(-50.0..50.0), rng.gen_range(-50.0..50.0)];
        let e = eig2(&zeeman_matrix(&f, r).unwrap()).unwrap();
        assert!((e.values[0] + 1.7).abs() < 1e-12 && (e.values[1] - 1.7).abs() < 1e-12);
    }
}

#[test]
fn singular_center_is_rejected() {
    let f = VortexField::from_gap(1.0, 0.5, [0.0, 0.0]);
    assert!(zeeman_matrix(&f, [0.0, 0.0]).is_err());
}

proptest! {
    #[test]
    fn ground_spinor_is_lower_eigenvector(theta in 0.01..3.1f64, phi in -PI..PI, r in 0.1..10.0f64) {
        let f = VortexField::from_gap(2.0, theta, [0.0, 0.0]);
        let p = [r * phi.cos(), r * phi.sin()];
        let z = zeeman_matrix(&f, p).unwrap();
        let [g, x] = adiabatic_spinors(&f, p).unwrap();
        let zg = z.apply(g);
        let zx = z.apply(x);
        for k in 0..2 {
            prop_assert!((zg[k] + g[k] * 2.0).norm() < 1e-12);
            prop_assert!((zx[k] - x[k] * 2.0).norm() < 1e-12);
        }
        prop_assert!(g[1].im == 0.0 && g[1].re >= 0.0);
    }

    #[test]
    fn gauge_functions_are_single_valued(alpha in 0.0..1.0f64, x0 in 0.0..0.95f64, xo in 1.05..3.0f64) {
        let eps = 1e-9;
        let inside = gauge_function_inside(alpha, x0, 1.0, -PI + eps) - gauge_function_inside(alpha, x0, 1.0, PI);
        let outside = gauge_function_outside(alpha, xo, 1.0, -PI + eps) - gauge_function_outside(alpha, xo, 1.0, PI);
        prop_assert!(inside.abs() < 1e-6 && outside.abs() < 1e-6);
    }

    #[test]
    fn gauge_functions_remove_the_shift(alpha in 0.05..1.0f64, x0 in 0.0..0.9f64, xo in 1.1..3.0f64, phi in -3.0..3.0f64) {
        // α dψ/dφ + dΩ/dφ is α for a tube inside the unit circle and 0 outside,
        // with ψ the polar angle about the tube.
        let h = 1e-5;
        let psi = |x0: f64, p: f64| p.sin().atan2(p.cos() - x0);
        let d = |f: &dyn Fn(f64) -> f64| (f(phi + h) - f(phi - h)) / (2.0 * h);
        let unwrap = |x0: f64| move |p: f64| {
            let a = psi(x0, p);
            let b = psi(x0, phi);
            b + (a - b + PI).rem_euclid(2.0 * PI) - PI
        };
        let inside = alpha * d(&unwrap(x0)) + d(&|p| gauge_function_inside(alpha, x0, 1.0, p));
        let outside = alpha * d(&unwrap(xo)) + d(&|p| gauge_function_outside(alpha, xo, 1.0, p));
        prop_assert!((inside - alpha).abs() < 1e-6, "inside {inside}");
        prop_assert!(outside.abs() < 1e-6, "outside {outside}");
    }
}

#[test]
fn ground_berry_phase_equals_flux_charge() {
    for theta in [0.3, PI / 3.0, PI / 2.0, 2.0] {
        let f = VortexField::from_gap(1.0, theta, [0.0, 0.0]);
        let n = 4000;
        let spinor = |k: usize| {
            let phi = 2.0 * PI * k as f64 / n as f64;
            adiabatic_spinors(&f, [phi.cos(), phi.sin()]).unwrap()[0]
        };
        // Discrete Berry phase −arg Π⟨g_k|g_{k+1}⟩.
        let mut prod = C64::new(1.0, 0.0);
        for k in 0..n {
            let (a, b) = (spinor(k), spinor(k + 1));
            prod *= a[0].conj() * b[0] + a[1].conj() * b[1];
        }
        let berry = -prod.arg();
        let want = 2.0 * PI * f.flux_charge();
        let d = (berry - want).rem_euclid(2.0 * PI);
        assert!(d.min(2.0 * PI - d) < 1e-6, "theta {theta}: {berry} vs {want}");
        let cfg = GaugeConfig { theta, ..GaugeConfig::default() };
        assert!((cfg.adiabatic_alpha() - f.flux_charge()).abs() < 1e-15);
    }
}

#[test]
fn wu_yang_plaquette_not_enclosing_tube_is_identity() {
    let conn = ConnectionField::wu_yang(0.37, 0.4);
    for (c, r) in [([2.0, 0.3], 0.1), ([-1.0, -1.0], 0.3), ([0.4, 1.5], 0.5)] {
        let path = PathSpec::circle(c, r, 1, 64).unwrap();
        let w = path_ordered_exp(&conn, &path, 1e-12).unwrap();
        assert!((w.matrix - DMatrix::<C64>::identity(2, 2)).norm() < 1e-10);
    }
}

#[test]
fn wu_yang_loop_about_shifted_tube_matches_flux() {
    // Checks the sign of the Cartesian components through the loop trace.
    let alpha = 0.23;
    let conn = ConnectionField::wu_yang(alpha, 0.4);
    let w = path_ordered_exp(&conn, &PathSpec::circle([0.0, 0.0], 1.0, 1, 128).unwrap(), 1e-11).unwrap();
    let m = &w.matrix;
    assert!((m[(0, 0)] - C64::from_polar(1.0, 2.0 * PI * alpha)).norm() < 1e-9);
    assert!((m[(1, 1)] - C64::from_polar(1.0, -2.0 * PI * alpha)).norm() < 1e-9);
}
