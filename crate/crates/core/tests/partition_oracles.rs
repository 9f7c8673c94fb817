use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use proptest::prelude::*;
use topogauge_core::field::GaugeConfig;
use topogauge_core::partition::{
    dawson, dawson_complex, ground_energy, ln_reduced_z_direct, lowt_coefficients,
    lowt_z_asymptotic, plateau_grid, poisson_resum, ratio_tilde, theta3, theta3_modular,
    z_exact_model, z_wy_closed, z_wy_spectral, LowTForm, LowTOptions, PartitionSeries,
    PoissonWeight, ThetaArg,
};

proptest! {
    #[test]
    fn theta_modular_identity(a in -1.0..1.0f64, b in 0.05..2.0f64, zr in -2.0..2.0f64, zi in -0.5..0.5f64) {
        let arg = ThetaArg::new(C64::new(zr, zi), C64::new(a, b)).unwrap();
        let lhs = theta3(&arg, 1e-17);
        let rhs = theta3_modular(&arg, 1e-17);
        prop_assert!((lhs - rhs).norm() < 1e-12 * lhs.norm().max(1.0), "{lhs} vs {rhs}");
    }

    #[test]
    fn gauge_relabeling_leaves_partition_unchanged(theta in 0.0..PI, delta in 0.0..5.0f64, beta in 0.2..10.0f64) {
        let c = GaugeConfig { theta, delta, ..GaugeConfig::default() };
        let a = z_exact_model(&c, beta).unwrap().ln();
        let b = z_exact_model(&GaugeConfig { alpha: c.alpha + 1.0, ..c }, beta).unwrap().ln();
        prop_assert!((a - b).abs() < 1e-12);
    }
}

#[test]
fn theta_rejects_lower_half_plane() {
    assert!(ThetaArg::new(C64::new(0.0, 0.0), C64::new(0.3, 0.0)).is_err());
}

#[test]
fn theta_alternating_at_half_period() {
    let arg = ThetaArg::new(C64::new(PI / 2.0, 0.0), C64::new(0.0, 1.0)).unwrap();
    let direct: f64 = (-20i64..=20).map(|m| (-1f64).powi(m as i32) * (-PI * (m * m) as f64).exp()).sum();
    assert!((theta3(&arg, 1e-16).re - direct).abs() < 1e-15);
}

#[test]
fn wy_closed_form_matches_spectral_sum() {
    for alpha in [0.0, 0.25, 0.5] {
        for x0 in [0.0, 1.5] {
            for delta in [0.0, 1.0, 100.0] {
                for beta in [0.1, 1.0, 10.0, 50.0] {
                    let c = z_wy_closed(alpha, x0, delta, 1.0, beta).unwrap();
                    let s = z_wy_spectral(alpha, x0, delta, 1.0, beta).unwrap();
                    assert!((c.ln() - s.ln()).abs() < 1e-8, "{alpha} {x0} {delta} {beta}");
                }
            }
        }
    }
}

#[test]
fn poisson_sides_agree() {
    for beta in [0.1, 1.0, 5.0] {
        for w in [PoissonWeight::One, PoissonWeight::Cos(0.7), PoissonWeight::Cosh(0.3)] {
            let p = poisson_resum(beta, 1.0, w).unwrap();
            assert!((p.direct - p.dual).abs() < 1e-12 * p.direct.abs().max(1.0), "{w:?} {beta}");
        }
    }
}

#[test]
fn dawson_matches_quadrature() {
    for x in [0.3, 1.0, 2.5, 4.0] {
        // D(x) = ∫₀ˣ e^{t²−x²} dt by composite Simpson.
        let n = 20_000;
        let h = x / n as f64;
        let f = |t: f64| (t * t - x * x).exp();
        let mut q = f(0.0) + f(x);
        for k in 1..n {
            q += if k % 2 == 1 { 4.0 } else { 2.0 } * f(k as f64 * h);
        }
        let q = q * h / 3.0;
        assert!((dawson(x) - q).abs() < 1e-12, "x {x}");
        assert!((dawson_complex(C64::new(x, 0.0)).re - q).abs() < 1e-10);
    }
    assert_eq!(dawson(0.0), 0.0);
    assert!((dawson(20.0) - (1.0 / 40.0 + 1.0 / 32000.0 + 3.0 / 2.56e7)).abs() < 1e-9);
}

#[test]
fn low_temperature_form_tracks_direct_sum() {
    let direct = ln_reduced_z_direct(PI / 3.0, 1.0, 50.0).unwrap();
    let asym = lowt_z_asymptotic(PI / 3.0, 1.0, 50.0, LowTOptions::default()).unwrap().ln();
    assert!((direct - asym).abs() < 0.01);
    for opts in [
        LowTOptions { form: LowTForm::Printed, ..LowTOptions::gated_leading() },
        LowTOptions::gated_leading(),
    ] {
        let other = lowt_z_asymptotic(PI / 3.0, 1.0, 50.0, opts).unwrap().ln();
        assert!((direct - other).abs() > 10.0 * (direct - asym).abs());
    }
    for theta in [0.4, 0.8, 1.0] {
        for beta in [50.0, 200.0] {
            let d = ln_reduced_z_direct(theta, 1.0, beta).unwrap();
            let a = lowt_z_asymptotic(theta, 1.0, beta, LowTOptions::default()).unwrap().ln();
            assert!((d - a).abs() < 0.01, "theta {theta} beta {beta}: {d} vs {a}");
        }
    }
    let c = lowt_coefficients(PI / 2.0, 1.0, LowTForm::Derived);
    assert!(c.omega.is_finite());
}

#[test]
fn classical_limit_of_ratio() {
    let c = GaugeConfig { delta: 1.0, alpha: 0.5, theta: PI / 2.0, ..GaugeConfig::default() };
    let r = ratio_tilde(&c, 1e-3).unwrap();
    assert!((r - 1.0).abs() < 1e-2, "{r}");
}

#[test]
fn ground_energy_of_free_rotor_is_zero() {
    let grid = plateau_grid(200.0);
    let s = PartitionSeries::sample(&grid, |b| {
        Ok((0..40).map(|m| (-b * (m * m) as f64 / 2.0).exp() * if m == 0 { 1.0 } else { 2.0 }).sum::<f64>().ln())
    })
    .unwrap();
    assert!(ground_energy(&s).unwrap().abs() < 1e-6);
}
