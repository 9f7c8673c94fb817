//! Dense Hermitian helpers on top of nalgebra, used where matrices exceed 3×3.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

/// Eigenvalues (ascending) and matching eigenvectors (columns) of a Hermitian matrix.
pub fn hermitian_eigen(h: &DMatrix<C64>) -> (Vec<f64>, DMatrix<C64>) {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let scale = sym.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let imag = sym.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    // Imaginary parts at round-off level: the real solver is several times faster.
    if imag <= 1e-13 * scale {
        return real_symmetric_eigen(&sym.map(|z| z.re));
    }
    let eig = nalgebra::SymmetricEigen::new(sym);
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = DMatrix::<C64>::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    (values, vectors)
}

/// Eigenvalues only, unsorted.
pub fn hermitian_eigenvalues(h: &DMatrix<C64>) -> Vec<f64> {
    let sym = (h + h.adjoint()) * C64::new(0.5, 0.0);
    let scale = sym.iter().map(|z| z.norm()).fold(0.0, f64::max);
    let imag = sym.iter().map(|z| z.im.abs()).fold(0.0, f64::max);
    if imag <= 1e-13 * scale {
        sym.map(|z| z.re).symmetric_eigenvalues().iter().copied().collect()
    } else {
        sym.symmetric_eigenvalues().iter().copied().collect()
    }
}

fn real_symmetric_eigen(m: &DMatrix<f64>) -> (Vec<f64>, DMatrix<C64>) {
    let eig = nalgebra::SymmetricEigen::new(m.clone());
    let n = eig.eigenvalues.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let values = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let vectors = DMatrix::from_fn(n, n, |r, c| C64::new(eig.eigenvectors[(r, order[c])], 0.0));
    (values, vectors)
}

/// exp(i·s·H) for Hermitian H.
pub fn expm_i_hermitian(h: &DMatrix<C64>, s: f64) -> DMatrix<C64> {
    let (values, vectors) = hermitian_eigen(h);
    let n = values.len();
    let mut scaled = vectors.clone();
    for (k, lam) in values.iter().enumerate() {
        let ph = C64::from_polar(1.0, s * lam);
        for r in 0..n {
            scaled[(r, k)] *= ph;
        }
    }
    scaled * vectors.adjoint()
}
