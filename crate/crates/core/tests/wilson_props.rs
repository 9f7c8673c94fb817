use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use topogauge_core::spin::{exp_i_hermitian2, SpinMatrix2};
use topogauge_core::spin1::spin1_generator;
use topogauge_core::wilson::{
    diabatic_w_numeric, gauge_generator, path_ordered_exp, spacetime_line_closed_form,
    spin1_projected_connection, spin1_projected_loop_trace, spin2_to_dmatrix, ConnectionField,
    PathSpec, SpacetimeLoop,
};
use topogauge_core::wilson::exp_i_hermitian;

fn random_unitary(rng: &mut impl Rng, dim: usize) -> DMatrix<C64> {
    let m = DMatrix::from_fn(dim, dim, |_, _| C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)));
    let h = (&m + m.adjoint()) * C64::new(0.5, 0.0);
    exp_i_hermitian(&h, 1.0).unwrap()
}

#[test]
fn numeric_line_matches_closed_form() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
    for _ in 0..6 {
        let p = SpacetimeLoop {
            q: rng.gen_range(1..=2),
            theta: rng.gen_range(0.0..PI),
            gamma: rng.gen_range(0.0..2.0 * PI),
            delta: rng.gen_range(0.1..2.0),
            omega: rng.gen_range(0.5..3.0),
            m: rng.gen_range(1..=2),
        };
        let t = 2.0 * PI * p.m as f64 / p.omega;
        let numeric = diabatic_w_numeric(&p, t, 1e-10).unwrap();
        let closed = spacetime_line_closed_form(&p).unwrap();
        assert!(numeric.max_abs_diff(&closed) < 1e-8, "{p:?}");
    }
}

#[test]
fn trace_is_invariant_under_constant_conjugation() {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
    let p = SpacetimeLoop { q: 1, theta: 0.9, gamma: 0.4, delta: 0.7, omega: 1.1, m: 1 };
    let conn = ConnectionField::diabatic(&p);
    let path = PathSpec::helix(p.omega, 2.0 * PI / p.omega, 64).unwrap();
    let w = path_ordered_exp(&conn, &path, 1e-12).unwrap();
    for _ in 0..5 {
        let v = random_unitary(&mut rng, 2);
        let wv = path_ordered_exp(&conn.conjugated(&v), &path, 1e-12).unwrap();
        assert!((w.trace() - wv.trace()).norm() < 1e-10);
        assert!((&v * &wv.matrix * v.adjoint() - &w.matrix).norm() < 1e-9);
    }
}

#[test]
fn composition_of_segments() {
    let p = SpacetimeLoop { q: 1, theta: 0.6, gamma: 0.0, delta: 0.8, omega: 1.4, m: 1 };
    let conn = ConnectionField::diabatic(&p);
    let om = p.omega;
    let seg = |a: f64, b: f64| {
        PathSpec::line(move |t| [(om * t).cos(), (om * t).sin(), t], a, b, 64).unwrap()
    };
    let whole = path_ordered_exp(&conn, &seg(0.0, 3.0), 1e-12).unwrap().matrix;
    let first = path_ordered_exp(&conn, &seg(0.0, 1.2), 1e-12).unwrap().matrix;
    let second = path_ordered_exp(&conn, &seg(1.2, 3.0), 1e-12).unwrap().matrix;
    assert!((whole - second * first).norm() < 1e-9);
}

#[test]
fn wu_yang_loop_survives_deformation() {
    let conn = ConnectionField::wu_yang(0.31, 0.2);
    let circle = path_ordered_exp(&conn, &PathSpec::circle([0.0, 0.0], 1.0, 1, 128).unwrap(), 1e-10).unwrap();
    let wobbly = PathSpec::closed(
        |s| {
            let r = 1.0 + 0.3 * (3.0 * s).sin() + 0.1 * (5.0 * s).cos();
            [0.1 + r * s.cos(), 0.05 + 0.8 * r * s.sin(), 0.0]
        },
        2.0 * PI,
        256,
    )
    .unwrap();
    let w = path_ordered_exp(&conn, &wobbly, 1e-10).unwrap();
    assert!((w.matrix - circle.matrix).norm() < 1e-6);
}

#[test]
fn pure_gauge_loops_are_trivial() {
    for (q, theta, gamma) in [(1, 0.7, 0.2), (2, 1.9, 1.0), (3, 0.3, 2.5)] {
        let g = spin2_to_dmatrix(&gauge_generator(q, theta, gamma));
        let w = path_ordered_exp(&ConnectionField::vortex(g, [0.0, 0.0]), &PathSpec::circle([0.0, 0.0], 1.0, 1, 128).unwrap(), 1e-10)
            .unwrap();
        assert!((w.matrix - DMatrix::<C64>::identity(2, 2)).norm() < 1e-8);
    }
    let a = spin1_generator(0.8);
    let g = DMatrix::from_fn(3, 3, |r, c| a.0[r][c]);
    let w = path_ordered_exp(&ConnectionField::vortex(g, [0.0, 0.0]), &PathSpec::circle([0.0, 0.0], 1.0, 1, 128).unwrap(), 1e-10)
        .unwrap();
    assert!((w.matrix - DMatrix::<C64>::identity(3, 3)).norm() < 1e-8);
}

#[test]
fn projected_spin1_loop_trace() {
    for (theta, turns) in [(0.4, 1), (1.0, 2), (1.3, 1)] {
        let path = PathSpec::circle([0.0, 0.0], 1.0, turns, 128).unwrap();
        assert_eq!(path.winding(), turns);
        let w = path_ordered_exp(&spin1_projected_connection(theta), &path, 1e-10).unwrap();
        assert!((w.trace().re - spin1_projected_loop_trace(theta, turns)).abs() < 1e-8);
    }
}

proptest! {
    #[test]
    fn integer_generator_exponentiates_to_identity(q in -4i64..=4, theta in 0.0..PI, gamma in 0.0..(2.0 * PI)) {
        let u = exp_i_hermitian2(&gauge_generator(q, theta, gamma), 2.0 * PI).unwrap();
        prop_assert!(u.max_abs_diff(&SpinMatrix2::identity()) < 1e-12);
    }
}
