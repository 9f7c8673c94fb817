use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use topogauge_core::boson::{
    ab_rotor_levels, build_u, channel_spectrum, connection_closed_form, connection_matrix,
    induced_scalar, FockSpace,
};

fn top_left(m: &DMatrix<C64>, n: usize) -> DMatrix<C64> {
    m.view((0, 0), (n, n)).into_owned()
}

proptest! {
    #[test]
    fn connection_matches_closed_form(phi in 0.0..6.3f64, lambda in 0.0..0.6f64) {
        let s = FockSpace::new(40).unwrap();
        let a = connection_matrix(phi, lambda, &s).unwrap();
        let c = connection_closed_form(phi, lambda, &s);
        prop_assert!((top_left(&a, 20) - top_left(&c, 20)).norm() < 1e-9);
    }
}

#[test]
fn connection_matches_finite_difference() {
    let s = FockSpace::new(30).unwrap();
    let (phi, lambda, h) = (0.8, 0.4, 1e-5);
    let u = build_u(phi, lambda, &s).unwrap();
    let du = (build_u(phi + h, lambda, &s).unwrap() - build_u(phi - h, lambda, &s).unwrap()) / C64::new(2.0 * h, 0.0);
    let fd = u.adjoint() * du * C64::new(0.0, 1.0);
    let a = connection_matrix(phi, lambda, &s).unwrap();
    assert!((top_left(&fd, 20) - top_left(&a, 20)).norm() < 1e-8);
}

#[test]
fn vacuum_maps_to_coherent_state() {
    let s = FockSpace::new(30).unwrap();
    let lambda: f64 = 0.5;
    let u = build_u(0.0, lambda, &s).unwrap();
    let mut fact = 1.0;
    for n in 0..12 {
        if n > 0 {
            fact *= n as f64;
        }
        let poisson = (-lambda * lambda).exp() * lambda.powi(2 * n) / fact;
        assert!((u[(n as usize, 0)].norm_sqr() - poisson).abs() < 1e-12);
    }
}

#[test]
fn ladder_commutator_is_identity_below_cutoff() {
    let s = FockSpace::new(16).unwrap();
    let c = &s.a * &s.a_dagger - &s.a_dagger * &s.a;
    let want = DMatrix::<C64>::identity(16, 16);
    assert!((top_left(&c, 16) - want).norm() < 1e-14);
    assert!((c[(16, 16)].re + 16.0).abs() < 1e-12);
}

#[test]
fn charge_and_induced_scalar() {
    let s = FockSpace::new(24).unwrap();
    for lambda in [0.1, 0.3, 0.5] {
        let a = connection_matrix(1.1, lambda, &s).unwrap();
        assert!((a[(0, 0)].re - lambda * lambda).abs() < 1e-10);
        for (mass, r) in [(1.0, 1.0), (2.0, 0.5)] {
            let want = lambda * lambda / (2.0 * mass * r * r);
            assert!((induced_scalar(lambda, mass, r, &s).unwrap() - want).abs() < 1e-10);
        }
    }
}

#[test]
fn pure_gauge_loop_is_trivial_on_low_block() {
    // P exp(i∮A dφ) for A = iU†∂U is U(0)†U(2π) in exact arithmetic.
    let s = FockSpace::new(40).unwrap();
    let n = 4000;
    let h = 2.0 * std::f64::consts::PI / n as f64;
    let mut w = DMatrix::<C64>::identity(41, 41);
    for k in 0..n {
        let a = connection_matrix((k as f64 + 0.5) * h, 0.4, &s).unwrap();
        let step = topogauge_core::linalg::expm_i_hermitian(&a, h);
        w = step * w;
    }
    let err = (top_left(&w, 20) - DMatrix::<C64>::identity(20, 20)).norm();
    assert!(err < 1e-5, "{err}");
}

#[test]
fn channel_error_falls_as_inverse_gap() {
    let lambda = 0.3;
    let exact = ab_rotor_levels(lambda, 1.0, 6);
    let err = |gap: f64| {
        let e = channel_spectrum(lambda, 1.0, gap, 8, 8).unwrap();
        (0..5).map(|i| (e[i] - exact[i]).abs()).fold(0.0, f64::max)
    };
    let (e1, e2) = (err(100.0), err(200.0));
    assert!(e1 < 0.01);
    assert!((e1 / e2 - 2.0).abs() < 0.2, "{e1} {e2}");
}
