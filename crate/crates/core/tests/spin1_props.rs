use std::f64::consts::PI;

use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use topogauge_core::partition::{ground_energy, plateau_grid, PartitionSeries};
use topogauge_core::rotor::Branch;
use topogauge_core::spin::{eig3_cardano, exp_i_hermitian3, SpinMatrix2, SpinMatrix3};
use topogauge_core::spin1::{
    distant_level_leading, exact_spectrum_cardano, fig9_comparison, h_matrix, induced_scalar,
    pss_block_energies, pss_spectrum, pss_terms, reduced_partition, reduced_partition_high_t,
    rotated_pss_operators, spin1_generator, total_partition, twolevel_partition, twolevel_spectrum,
    TwoLevelModel, WZModel,
};

proptest! {
    #[test]
    fn generator_is_single_valued(theta in 0.0..PI) {
        let a = spin1_generator(theta);
        let ev = eig3_cardano(&a).unwrap();
        for (e, want) in ev.iter().zip([-1.0, 0.0, 1.0]) {
            prop_assert!((e - want).abs() < 1e-12);
        }
        let u = exp_i_hermitian3(&a, 2.0 * PI).unwrap();
        prop_assert!(u.max_abs_diff(&SpinMatrix3::identity()) < 1e-12);
    }

    #[test]
    fn h_is_hermitian_with_known_trace(theta in 0.0..PI, m in -8i64..8, delta in 0.0..50.0f64) {
        let model = WZModel::new(1.3, delta, theta).unwrap();
        let h = h_matrix(&model, m);
        prop_assert!(h.hermiticity_defect() < 1e-14);
        let mf = m as f64;
        let want = (3.0 * mf * mf + 2.0) / (2.0 * 1.3) + delta + 2.0 * model.e_g;
        prop_assert!((h.trace().re - want).abs() < 1e-12);
    }

    #[test]
    fn pss_degeneracy_is_broken(theta in 0.05..(PI / 2.0 - 0.05)) {
        let (_, e1) = pss_terms(1.0, theta, 0);
        prop_assert!((2.0 * e1 - 2.0 * theta.sin().powi(2) / 4.0).abs() < 1e-14);
        prop_assert!(e1 > 0.0);
    }
}

#[test]
fn induced_scalar_matrix() {
    for theta in [0.2f64, 0.7, 1.1, 1.9, 2.8] {
        let s2 = theta.sin().powi(2) / 4.0;
        let want = SpinMatrix2::hermitian(s2, [-s2, 0.0, 0.0]);
        assert!(induced_scalar(theta, 1.0).max_abs_diff(&want) < 1e-14);
    }
}

#[test]
fn rotated_operators_take_the_split_form() {
    // W = exp(−iσ₂π/4) maps the projected generator and the full potential onto ∓cos θ σ₁
    // and ∓(sin²θ/4I) σ₃; the common sign is fixed by a constant σ₂ gauge.
    for theta in [0.3f64, 0.9, 1.4] {
        let model = WZModel::new(1.0, 100.0, theta).unwrap();
        let (ap, v) = rotated_pss_operators(&model).unwrap();
        let c = theta.cos();
        let s2 = theta.sin().powi(2) / 4.0;
        let x = SpinMatrix2::sigma_x().scale(C64::new(c, 0.0));
        let z = SpinMatrix2::sigma_z().scale(C64::new(s2, 0.0));
        let plus = ap.max_abs_diff(&x) < 1e-14 && v.max_abs_diff(&z) < 1e-14;
        let minus = ap.max_abs_diff(&x.scale(C64::new(-1.0, 0.0))) < 1e-14
            && v.max_abs_diff(&z.scale(C64::new(-1.0, 0.0))) < 1e-14;
        assert!(plus || minus, "{ap:?} {v:?}");
        for m in -3..=3 {
            let (e0, e1) = pss_terms(1.0, theta, m);
            let b = pss_block_energies(&model, m).unwrap();
            assert!((b[0] - (e0 - e1)).abs() < 1e-13 && (b[1] - (e0 + e1)).abs() < 1e-13);
        }
    }
}

#[test]
fn cardano_matches_iterative_solver() {
    let model = WZModel::new(1.0, 100.0, PI / 4.0).unwrap();
    for m in 0..=5 {
        let h = h_matrix(&model, m);
        let mut it: Vec<f64> = Matrix3::from_fn(|r, c| h.0[r][c]).symmetric_eigen().eigenvalues.iter().cloned().collect();
        it.sort_by(f64::total_cmp);
        for (a, b) in eig3_cardano(&h).unwrap().iter().zip(&it) {
            assert!((a - b).abs() < 1e-10 * b.abs().max(1.0));
        }
    }
}

#[test]
fn large_gap_limits_scale_as_inverse_gap() {
    let err = |delta: f64| {
        let model = WZModel::new(1.0, delta, 0.8).unwrap();
        let exact = exact_spectrum_cardano(&model, 4).unwrap();
        let pss = pss_spectrum(&model, 4);
        let mut worst_pss: f64 = 0.0;
        let mut worst_distant: f64 = 0.0;
        for m in -3..=3 {
            for b in [Branch::Minus, Branch::Plus] {
                worst_pss = worst_pss.max((exact.get(m, b).unwrap() - pss.get(m, b).unwrap()).abs());
            }
            let d = exact.get(m, Branch::Distant).unwrap();
            worst_distant = worst_distant.max((d - distant_level_leading(&model, m)).abs());
        }
        (worst_pss, worst_distant)
    };
    let (p1, d1) = err(100.0);
    let (p2, d2) = err(200.0);
    assert!(p1 < 0.05 && d1 < 0.05);
    assert!((p1 / p2 - 2.0).abs() < 0.1, "{p1} {p2}");
    assert!((d1 / d2 - 2.0).abs() < 0.1, "{d1} {d2}");
}

#[test]
fn reduced_partition_regimes() {
    let model = WZModel::new(1.0, 100.0, PI / 3.0).unwrap();
    let direct = reduced_partition(&model, 0.1).unwrap().ln();
    let high = reduced_partition_high_t(&model, 0.1).unwrap().ln();
    assert!((direct - high).abs() < 0.01);
    for beta in [0.5, 1.0, 2.0] {
        let total = total_partition(&model, beta).unwrap().ln();
        let z = reduced_partition(&model, beta).unwrap().ln();
        assert!((total - z).abs() < 0.02 * beta, "beta {beta}: {total} vs {z}");
    }
}

#[test]
fn exact_ground_energy_from_partition_series() {
    let model = WZModel::new(1.0, 100.0, PI / 4.0).unwrap();
    let s = PartitionSeries::sample(&plateau_grid(400.0), |b| Ok(total_partition(&model, b)?.ln())).unwrap();
    let emin = exact_spectrum_cardano(&model, 16).unwrap().min_energy().unwrap();
    assert!((ground_energy(&s).unwrap() - emin).abs() < 1e-6);
}

#[test]
fn pss_ground_energy_tracks_exact() {
    let rows = fig9_comparison(1.0, 100.0, &[0.0, PI / 6.0, PI / 4.0, PI / 2.0]).unwrap();
    for r in rows {
        assert!((r.pss - r.exact).abs() < 5e-3, "{r:?}");
    }
}

#[test]
fn two_level_without_gap_is_shifted_free_rotor() {
    let model = TwoLevelModel { inertia: 1.0, delta: 0.0, theta: 0.9, gamma: 0.3, q: 1 };
    let mut levels = twolevel_spectrum(&model, 12).sorted_energies();
    levels.truncate(10);
    let mut free: Vec<f64> = (-12i64..=12).flat_map(|m| [(m * m) as f64 / 2.0; 2]).collect();
    free.sort_by(f64::total_cmp);
    for (a, b) in levels.iter().zip(&free) {
        assert!((a - b).abs() < 1e-12);
    }
    let beta = 0.7;
    let free_z: f64 = (-60i64..=60).map(|m| 2.0 * (-beta * (m * m) as f64 / 2.0).exp()).sum();
    assert!((twolevel_partition(&model, beta).unwrap().ln() - free_z.ln()).abs() < 1e-12);
}
