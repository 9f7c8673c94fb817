//! A rotor coupled to one quantized boson mode through
//! U = exp(−iφN) exp(−iλ(a + a†)) exp(iφN), and the emergent flux tube.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::{expm_i_hermitian, hermitian_eigen};

/// Fock space truncated at n_max quanta.
#[derive(Clone, Debug, PartialEq)]
pub struct FockSpace {
    pub n_max: usize,
    pub a: DMatrix<C64>,
    pub a_dagger: DMatrix<C64>,
}

impl FockSpace {
    pub fn new(n_max: usize) -> Result<Self> {
        if n_max == 0 {
            return Err(invalid("n_max", "must be at least 1"));
        }
        let d = n_max + 1;
        let a = DMatrix::from_fn(d, d, |i, j| {
            if j == i + 1 {
                C64::new((j as f64).sqrt(), 0.0)
            } else {
                C64::new(0.0, 0.0)
            }
        });
        let a_dagger = a.adjoint();
        Ok(Self { n_max, a, a_dagger })
    }

    pub fn dim(&self) -> usize {
        self.n_max + 1
    }

    pub fn number(&self) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_fn(self.dim(), |i, _| C64::new(i as f64, 0.0)))
    }

    fn phase_diag(&self, phi: f64) -> DMatrix<C64> {
        DMatrix::from_diagonal(&nalgebra::DVector::from_fn(self.dim(), |i, _| {
            C64::from_polar(1.0, -phi * i as f64)
        }))
    }
}

/// Largest tolerated ‖U†U − 𝟙‖ before truncation is blamed.
const UNITARITY_TOL: f64 = 1e-10;

/// U(φ) = exp(−iφN) exp(−iλ(a + a†)) exp(iφN).
pub fn build_u(phi: f64, lambda: f64, space: &FockSpace) -> Result<DMatrix<C64>> {
    let x = &space.a + &space.a_dagger;
    let d = space.phase_diag(phi);
    let u = &d * expm_i_hermitian(&x, -lambda) * d.adjoint();
    let defect = (u.adjoint() * &u - DMatrix::<C64>::identity(space.dim(), space.dim())).norm();
    if defect > UNITARITY_TOL {
        return Err(Error::Truncation(format!(
            "U deviates from unitarity by {defect:e}; increase n_max"
        )));
    }
    Ok(u)
}

/// r·A_φ = iU†∂_φU, evaluated as U†[N, U] = U†NU − N.
pub fn connection_matrix(phi: f64, lambda: f64, space: &FockSpace) -> Result<DMatrix<C64>> {
    let u = build_u(phi, lambda, space)?;
    let n = space.number();
    Ok(u.adjoint() * &n * &u - n)
}

/// Closed form iλ(a e^{iφ} − a† e^{−iφ}) + λ² on the truncated space.
pub fn connection_closed_form(phi: f64, lambda: f64, space: &FockSpace) -> DMatrix<C64> {
    let e = C64::from_polar(1.0, phi);
    let i = C64::new(0.0, lambda);
    &space.a * (i * e) - &space.a_dagger * (i * e.conj())
        + DMatrix::<C64>::identity(space.dim(), space.dim()) * C64::new(lambda * lambda, 0.0)
}

/// (1/2m) Σ_{n≥1} |A_{0n}|² with A = connection/r: the vacuum self-energy λ²/(2mr²).
pub fn induced_scalar(lambda: f64, mass: f64, r: f64, space: &FockSpace) -> Result<f64> {
    if !(mass > 0.0) || !(r > 0.0) {
        return Err(invalid("mass, r", "must be positive"));
    }
    let a = connection_matrix(0.0, lambda, space)?;
    let s: f64 = (1..space.dim()).map(|n| a[(0, n)].norm_sqr()).sum();
    Ok(s / (2.0 * mass * r * r))
}

/// Levels of H = (p − A(φ))²/2I + gap·N on rotor modes |k| ≤ k_max and n ≤ n_max.
pub fn channel_spectrum(
    lambda: f64,
    inertia: f64,
    gap: f64,
    k_max: i64,
    n_max: usize,
) -> Result<Vec<f64>> {
    let space = FockSpace::new(n_max)?;
    let nd = space.dim();
    let nk = (2 * k_max + 1) as usize;
    let dim = nk * nd;
    let idx = |k: i64, n: usize| (k + k_max) as usize * nd + n;
    // D = p − A in the product basis e^{ikφ}|n⟩; e^{±iφ} shifts k by ±1.
    let mut d = DMatrix::<C64>::zeros(dim, dim);
    for k in -k_max..=k_max {
        for n in 0..nd {
            d[(idx(k, n), idx(k, n))] = C64::new(k as f64 - lambda * lambda, 0.0);
            // −iλ a e^{iφ}: |k, n⟩ → √n |k+1, n−1⟩
            if n > 0 && k < k_max {
                d[(idx(k + 1, n - 1), idx(k, n))] += C64::new(0.0, -lambda * (n as f64).sqrt());
            }
            // +iλ a† e^{−iφ}: |k, n⟩ → √(n+1) |k−1, n+1⟩
            if n + 1 < nd && k > -k_max {
                d[(idx(k - 1, n + 1), idx(k, n))] += C64::new(0.0, lambda * ((n + 1) as f64).sqrt());
            }
        }
    }
    let mut h = &d * &d / C64::new(2.0 * inertia, 0.0);
    for k in -k_max..=k_max {
        for n in 0..nd {
            h[(idx(k, n), idx(k, n))] += C64::new(gap * n as f64, 0.0);
        }
    }
    Ok(hermitian_eigen(&h).0)
}

/// Effective flux-tube levels (m − λ²)²/2I + λ²/2I for |m| ≤ m_max, ascending.
pub fn ab_rotor_levels(lambda: f64, inertia: f64, m_max: i64) -> Vec<f64> {
    let l2 = lambda * lambda;
    let mut e: Vec<f64> = (-m_max..=m_max)
        .map(|m| ((m as f64 - l2).powi(2) + l2) / (2.0 * inertia))
        .collect();
    e.sort_by(f64::total_cmp);
    e
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_coupling() {
        let s = FockSpace::new(8).unwrap();
        let u = build_u(0.7, 0.0, &s).unwrap();
        assert!((u - DMatrix::<C64>::identity(9, 9)).norm() < 1e-14);
        assert!(connection_matrix(0.7, 0.0, &s).unwrap().norm() < 1e-12);
        assert!(induced_scalar(0.0, 1.0, 1.0, &s).unwrap() < 1e-24);
    }

    #[test]
    fn single_valued() {
        let s = FockSpace::new(20).unwrap();
        let a = build_u(0.0, 0.4, &s).unwrap();
        let b = build_u(2.0 * std::f64::consts::PI, 0.4, &s).unwrap();
        assert!((a - b).norm() < 1e-12);
    }

    #[test]
    fn vacuum_elements() {
        let s = FockSpace::new(24).unwrap();
        let a = connection_matrix(0.3, 0.3, &s).unwrap();
        assert!((a[(0, 0)].re - 0.09).abs() < 1e-12);
        assert!((a[(0, 1)].norm() - 0.3).abs() < 1e-12);
        assert!((induced_scalar(0.3, 1.0, 1.0, &s).unwrap() - 0.045).abs() < 1e-12);
    }
}
