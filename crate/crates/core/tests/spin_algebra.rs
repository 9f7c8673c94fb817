use nalgebra::Matrix3;
use num_complex::Complex64 as C64;
use proptest::prelude::*;
use topogauge_core::spin::{
    eig2, eig3_cardano, eigh3, exp_i_hermitian2, exp_i_hermitian3, SpinMatrix2, SpinMatrix3,
};

fn herm3(d: [f64; 3], off: [f64; 6]) -> SpinMatrix3 {
    let a = C64::new(off[0], off[1]);
    let b = C64::new(off[2], off[3]);
    let c = C64::new(off[4], off[5]);
    SpinMatrix3::new([
        [C64::new(d[0], 0.0), a, b],
        [a.conj(), C64::new(d[1], 0.0), c],
        [b.conj(), c.conj(), C64::new(d[2], 0.0)],
    ])
}

fn pauli(v: [f64; 3]) -> SpinMatrix2 {
    SpinMatrix2::hermitian(0.0, v)
}

fn coord() -> impl Strategy<Value = f64> {
    -3.0..3.0f64
}

proptest! {
    #[test]
    fn exp2_inverse_and_det(a0 in coord(), v in [coord(), coord(), coord()], s in -4.0..4.0f64) {
        let m = SpinMatrix2::hermitian(a0, v);
        let u = exp_i_hermitian2(&m, s).unwrap();
        let back = exp_i_hermitian2(&m, -s).unwrap();
        prop_assert!((u * back).max_abs_diff(&SpinMatrix2::identity()) < 1e-12);
        let want = C64::new(0.0, s * m.trace().re).exp();
        prop_assert!((u.det() - want).norm() < 1e-12);
    }

    #[test]
    fn exp3_inverse_and_det(d in [coord(), coord(), coord()], off in [coord(), coord(), coord(), coord(), coord(), coord()], s in -2.0..2.0f64) {
        let m = herm3(d, off);
        let u = exp_i_hermitian3(&m, s).unwrap();
        let back = exp_i_hermitian3(&m, -s).unwrap();
        prop_assert!((u * back).max_abs_diff(&SpinMatrix3::identity()) < 1e-12);
        let want = C64::new(0.0, s * m.trace().re).exp();
        prop_assert!((u.det() - want).norm() < 1e-12);
    }

    #[test]
    fn pauli_product_identity(a in [coord(), coord(), coord()], b in [coord(), coord(), coord()]) {
        let dot = a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
        let cross = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
        let lhs = pauli(a) * pauli(b);
        let rhs = SpinMatrix2::identity().scale(C64::new(dot, 0.0)) + pauli(cross).scale(C64::new(0.0, 1.0));
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-14);
    }

    #[test]
    fn eig2_reconstructs(a0 in coord(), v in [coord(), coord(), coord()]) {
        let m = SpinMatrix2::hermitian(a0, v);
        let e = eig2(&m).unwrap();
        for k in 0..2 {
            let mv = m.apply(e.vectors[k]);
            for r in 0..2 {
                prop_assert!((mv[r] - e.vectors[k][r] * e.values[k]).norm() < 1e-12);
            }
        }
    }
}

#[test]
fn cardano_matches_iterative_on_random_matrices() {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
    for _ in 0..1000 {
        let d = [rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0), rng.gen_range(-3.0..3.0)];
        let mut off = [0.0; 6];
        for x in off.iter_mut() {
            *x = rng.gen_range(-3.0..3.0);
        }
        let m = herm3(d, off);
        let cardano = eig3_cardano(&m).unwrap();
        let dense = Matrix3::from_fn(|r, c| m.0[r][c]);
        let mut iterative: Vec<f64> = dense.symmetric_eigen().eigenvalues.iter().cloned().collect();
        iterative.sort_by(f64::total_cmp);
        let scale = iterative.iter().fold(1.0f64, |a, v| a.max(v.abs()));
        for (c, i) in cardano.iter().zip(&iterative) {
            assert!((c - i).abs() < 1e-10 * scale, "{cardano:?} vs {iterative:?}");
        }
        let full = eigh3(&m).unwrap();
        for (c, i) in full.values.iter().zip(&iterative) {
            assert!((c - i).abs() < 1e-10 * scale);
        }
    }
}

#[test]
fn cardano_triple_root() {
    let e = eig3_cardano(&SpinMatrix3::diag([2.5, 2.5, 2.5])).unwrap();
    assert!(e.iter().all(|v| (v - 2.5).abs() < 1e-14));
}
