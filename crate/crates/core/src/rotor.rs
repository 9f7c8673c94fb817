//! Spectra of a spin-1/2 planar rotor in vortex fields: closed forms,
//! adiabatic and Wu-Yang approximations, and a dense Fourier-basis solver.

use std::f64::consts::PI;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::field::{shifted_vortex_angle, GaugeConfig, WYGauge};
use crate::linalg::{hermitian_eigen, hermitian_eigenvalues};
use crate::spin::{eig2, SpinMatrix2};

/// Which level of a two- or three-level multiplet an energy belongs to.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Branch {
    Minus,
    Plus,
    Distant,
}

impl Branch {
    pub fn as_str(&self) -> &'static str {
        match self {
            Branch::Minus => "minus",
            Branch::Plus => "plus",
            Branch::Distant => "distant",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Level {
    pub m: i64,
    pub branch: Branch,
    pub energy: f64,
}

/// Energies labelled by angular quantum number and branch, sorted by (m, branch).
#[derive(Clone, Debug, Default, PartialEq)]
pub struct SpectrumTable {
    pub levels: Vec<Level>,
}

impl SpectrumTable {
    pub fn from_levels(mut levels: Vec<Level>) -> Self {
        levels.sort_by(|a, b| (a.m, a.branch).cmp(&(b.m, b.branch)));
        Self { levels }
    }

    pub fn get(&self, m: i64, branch: Branch) -> Option<f64> {
        self.levels
            .iter()
            .find(|l| l.m == m && l.branch == branch)
            .map(|l| l.energy)
    }

    /// All energies in ascending order.
    pub fn sorted_energies(&self) -> Vec<f64> {
        let mut e: Vec<f64> = self.levels.iter().map(|l| l.energy).collect();
        e.sort_by(f64::total_cmp);
        e
    }

    pub fn lowest(&self, n: usize) -> Vec<f64> {
        let mut e = self.sorted_energies();
        e.truncate(n);
        e
    }

    pub fn min_energy(&self) -> Option<f64> {
        self.levels.iter().map(|l| l.energy).min_by(f64::total_cmp)
    }
}

/// Truncation and quadrature settings for the dense Fourier-basis solver.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RotorBasis {
    pub m_max: usize,
    pub quadrature_n: usize,
}

impl RotorBasis {
    pub fn new(m_max: usize) -> Self {
        Self {
            m_max,
            quadrature_n: 8 * m_max,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.m_max < 8 {
            return Err(invalid("m_max", "dense basis needs m_max >= 8"));
        }
        if self.quadrature_n < 8 * self.m_max {
            return Err(invalid("quadrature_n", "must be at least 8*m_max"));
        }
        Ok(())
    }
}

fn check_inertia(inertia: f64) -> Result<()> {
    if inertia > 0.0 && inertia.is_finite() {
        Ok(())
    } else {
        Err(invalid("inertia", "must be positive and finite"))
    }
}

/// The 2×2 block acting on (c₁, c₂) for ψ = (e^{i(m−1)φ}c₁, e^{imφ}c₂).
pub fn reduced_block(cfg: &GaugeConfig, m: i64) -> SpinMatrix2 {
    let i2 = 2.0 * cfg.inertia;
    let mf = m as f64;
    let shift = (1.0 - 2.0 * mf) / (2.0 * i2);
    SpinMatrix2::hermitian(
        mf * mf / i2 + shift,
        [
            0.0,
            cfg.delta * cfg.theta.sin(),
            shift + cfg.delta * cfg.theta.cos(),
        ],
    )
}

/// Closed-form E±(m) for the uniform vortex field.
pub fn exact_energies(cfg: &GaugeConfig, m: i64) -> (f64, f64) {
    let i = cfg.inertia;
    let mf = m as f64;
    let s = 1.0 - 2.0 * mf;
    let center = mf * mf / (2.0 * i) + s / (4.0 * i);
    let root = (s * s / (16.0 * i * i) + s * cfg.delta * cfg.theta.cos() / (2.0 * i)
        + cfg.delta * cfg.delta)
        .max(0.0)
        .sqrt();
    (center - root, center + root)
}

/// Closed-form spectrum for |m| ≤ cfg.m_max.
pub fn exact_spectrum(cfg: &GaugeConfig) -> Result<SpectrumTable> {
    check_inertia(cfg.inertia)?;
    let k = cfg.m_max as i64;
    let mut levels = Vec::with_capacity(2 * (2 * k as usize + 1));
    for m in -k..=k {
        let (lo, hi) = exact_energies(cfg, m);
        levels.push(Level { m, branch: Branch::Minus, energy: lo });
        levels.push(Level { m, branch: Branch::Plus, energy: hi });
    }
    Ok(SpectrumTable::from_levels(levels))
}

/// Eigen-spinor coefficients (c₁, c₂) of the closed-form solution for (m, branch).
pub fn exact_eigenvector(cfg: &GaugeConfig, m: i64, branch: Branch) -> Result<[C64; 2]> {
    let e = eig2(&reduced_block(cfg, m))?;
    Ok(match branch {
        Branch::Minus => e.vectors[0],
        _ => e.vectors[1],
    })
}

/// Uniform-field potential as a function of the rotor angle.
pub fn vortex_potential(delta: f64, theta: f64) -> impl Fn(f64) -> SpinMatrix2 {
    move |phi: f64| {
        let s = delta * theta.sin();
        SpinMatrix2::hermitian(0.0, [-s * phi.sin(), s * phi.cos(), delta * theta.cos()])
    }
}

/// Potential of a purely azimuthal vortex centered at (x0, 0), on the unit circle.
pub fn shifted_vortex_potential(delta: f64, x0: f64) -> impl Fn(f64) -> SpinMatrix2 {
    move |phi: f64| {
        let om = shifted_vortex_angle(x0, phi);
        SpinMatrix2::hermitian(0.0, [-delta * om.sin(), delta * om.cos(), 0.0])
    }
}

/// One eigenpair of the dense solver with a few diagnostic expectation values.
#[derive(Clone, Debug)]
pub struct DenseLevel {
    pub energy: f64,
    /// ⟨J⟩ with J = −i∂φ + σ₃/2.
    pub j_mean: f64,
    /// ⟨J²⟩ − ⟨J⟩².
    pub j_variance: f64,
    /// Expectation value of the potential.
    pub v_mean: f64,
}

/// Kinetic-plus-potential matrix H and potential matrix V in the spin ⊗ Fourier basis.
fn dense_hamiltonian(
    inertia: f64,
    basis: &RotorBasis,
    potential: &dyn Fn(f64) -> SpinMatrix2,
) -> Result<(DMatrix<C64>, DMatrix<C64>)> {
    check_inertia(inertia)?;
    let kmax = basis.m_max as i64;
    let nk = 2 * basis.m_max + 1;
    let n = 2 * nk;
    let nq = basis.quadrature_n.max(4 * basis.m_max + 2);

    // Harmonics V_d = (1/N) Σ_j e^{−i d φ_j} V(φ_j) for |d| ≤ 2 m_max.
    let dmax = 2 * kmax;
    let samples: Vec<SpinMatrix2> = (0..nq)
        .map(|j| potential(2.0 * PI * j as f64 / nq as f64))
        .collect();
    let mut harmonics = vec![[[C64::new(0.0, 0.0); 2]; 2]; (2 * dmax + 1) as usize];
    for d in -dmax..=dmax {
        let mut acc = [[C64::new(0.0, 0.0); 2]; 2];
        for (j, v) in samples.iter().enumerate() {
            let ang = -2.0 * PI * ((d * j as i64).rem_euclid(nq as i64)) as f64 / nq as f64;
            let ph = C64::from_polar(1.0, ang);
            for r in 0..2 {
                for c in 0..2 {
                    acc[r][c] += ph * v.0[r][c];
                }
            }
        }
        for row in acc.iter_mut() {
            for x in row.iter_mut() {
                *x /= nq as f64;
            }
        }
        harmonics[(d + dmax) as usize] = acc;
    }

    let idx = |s: usize, k: i64| s * nk + (k + kmax) as usize;
    let mut h = DMatrix::<C64>::zeros(n, n);
    let mut v = DMatrix::<C64>::zeros(n, n);
    for s in 0..2 {
        for k in -kmax..=kmax {
            let row = idx(s, k);
            h[(row, row)] += C64::new((k * k) as f64 / (2.0 * inertia), 0.0);
            for sp in 0..2 {
                for kp in -kmax..=kmax {
                    let val = harmonics[(k - kp + dmax) as usize][s][sp];
                    h[(row, idx(sp, kp))] += val;
                    v[(row, idx(sp, kp))] = val;
                }
            }
        }
    }
    Ok((h, v))
}

/// Eigenpairs of H with ⟨J⟩, Var J and ⟨V⟩ for the lowest `keep` states.
fn annotated_levels(basis: &RotorBasis, h: &DMatrix<C64>, v: &DMatrix<C64>, keep: usize) -> Vec<DenseLevel> {
    let kmax = basis.m_max as i64;
    let nk = 2 * basis.m_max + 1;
    let idx = |s: usize, k: i64| s * nk + (k + kmax) as usize;
    let (values, vectors) = hermitian_eigen(h);
    values
        .iter()
        .take(keep)
        .enumerate()
        .map(|(col, energy)| {
            let c = vectors.column(col);
            let mut jm = 0.0;
            let mut j2 = 0.0;
            for s in 0..2 {
                let sz = if s == 0 { 0.5 } else { -0.5 };
                for k in -kmax..=kmax {
                    let p = c[idx(s, k)].norm_sqr();
                    let j = k as f64 + sz;
                    jm += p * j;
                    j2 += p * j * j;
                }
            }
            let vc = v * c;
            let v_mean = c.iter().zip(vc.iter()).map(|(a, b)| (a.conj() * b).re).sum();
            DenseLevel {
                energy: *energy,
                j_mean: jm,
                j_variance: (j2 - jm * jm).max(0.0),
                v_mean,
            }
        })
        .collect()
}

/// Lowest levels of H = −∂²/2I + V(φ) in the spin ⊗ Fourier basis |k| ≤ m_max.
pub fn dense_levels(
    inertia: f64,
    basis: &RotorBasis,
    potential: &dyn Fn(f64) -> SpinMatrix2,
) -> Result<Vec<DenseLevel>> {
    let (h, v) = dense_hamiltonian(inertia, basis, potential)?;
    Ok(annotated_levels(basis, &h, &v, h.nrows()))
}

/// Ascending eigenvalues only.
fn dense_energies(
    inertia: f64,
    basis: &RotorBasis,
    potential: &dyn Fn(f64) -> SpinMatrix2,
) -> Result<Vec<f64>> {
    let (h, _) = dense_hamiltonian(inertia, basis, potential)?;
    let mut e = hermitian_eigenvalues(&h);
    e.sort_by(f64::total_cmp);
    Ok(e)
}

/// Dense spectrum of the lowest `n_levels` states with a truncation check.
///
/// The calculation is repeated with m_max + 8 and fails with
/// [`Error::Truncation`] if any reported level moves by more than `tol`
/// relative to max(1, |E|). Labels come from ⟨J⟩: m = round(⟨J⟩ + 1/2), and
/// within each m the lower state is `Minus`.
pub fn dense_rotor_diag(
    inertia: f64,
    basis: &RotorBasis,
    potential: &dyn Fn(f64) -> SpinMatrix2,
    n_levels: usize,
    tol: f64,
) -> Result<(SpectrumTable, Vec<DenseLevel>)> {
    basis.validate()?;
    let (h, v) = dense_hamiltonian(inertia, basis, potential)?;
    let n = n_levels.min(h.nrows());
    let levels = annotated_levels(basis, &h, &v, n);
    let bigger = RotorBasis {
        m_max: basis.m_max + 8,
        quadrature_n: basis.quadrature_n + 64,
    };
    let check = dense_energies(inertia, &bigger, potential)?;
    for k in 0..n {
        let shift = (levels[k].energy - check[k]).abs();
        if shift > tol * levels[k].energy.abs().max(1.0) {
            return Err(Error::Truncation(format!(
                "level {k} moved by {shift:e} when m_max grew from {} to {}",
                basis.m_max, bigger.m_max
            )));
        }
    }
    let kept = levels;
    let mut table = Vec::with_capacity(n);
    let mut seen: std::collections::HashMap<i64, usize> = std::collections::HashMap::new();
    for l in &kept {
        let m = (l.j_mean + 0.5).round() as i64;
        let count = seen.entry(m).or_insert(0);
        let branch = match *count {
            0 => Branch::Minus,
            1 => Branch::Plus,
            _ => Branch::Distant,
        };
        *count += 1;
        table.push(Level { m, branch, energy: l.energy });
    }
    Ok((SpectrumTable::from_levels(table), kept))
}

/// Ground and excited levels from projecting onto the adiabatic states and
/// dropping off-diagonal couplings.
pub fn adiabatic_projection_spectrum(cfg: &GaugeConfig) -> Result<SpectrumTable> {
    check_inertia(cfg.inertia)?;
    let i = cfg.inertia;
    let alpha = cfg.adiabatic_alpha();
    let c = cfg.theta.cos();
    let k = cfg.m_max as i64;
    let mut levels = Vec::new();
    for m in -k..=k {
        let mf = m as f64;
        let ground = (mf - alpha).powi(2) / (2.0 * i) + alpha * (1.0 - alpha) / (2.0 * i) - cfg.delta;
        let excited =
            mf * mf / (2.0 * i) - mf * (1.0 + c) / (2.0 * i) + (1.0 + c) / (4.0 * i) + cfg.delta;
        levels.push(Level { m, branch: Branch::Minus, energy: ground });
        levels.push(Level { m, branch: Branch::Plus, energy: excited });
    }
    Ok(SpectrumTable::from_levels(levels))
}

/// First-order large-gap expansion of E+(m).
pub fn large_delta_plus(cfg: &GaugeConfig, m: i64) -> f64 {
    let (i, d) = (cfg.inertia, cfg.delta);
    let s2 = cfg.theta.sin().powi(2);
    let c = cfg.theta.cos();
    let mf = m as f64;
    mf * mf * (1.0 / (2.0 * i) + s2 / (8.0 * i * i * d))
        - mf * ((1.0 + c) / (2.0 * i) + s2 / (8.0 * i * i * d))
        + d
        + (1.0 + c) / (4.0 * i)
        + s2 / (32.0 * i * i * d)
}

/// First-order large-gap expansion of E−(m).
pub fn large_delta_minus(cfg: &GaugeConfig, m: i64) -> f64 {
    let (i, d) = (cfg.inertia, cfg.delta);
    let s2 = cfg.theta.sin().powi(2);
    let c = cfg.theta.cos();
    let mf = m as f64;
    mf * mf * (1.0 / (2.0 * i) - s2 / (8.0 * i * i * d))
        - mf * ((1.0 - c) / (2.0 * i) - s2 / (8.0 * i * i * d))
        - d
        + (1.0 - c) / (4.0 * i)
        - s2 / (32.0 * i * i * d)
}

/// Rotor minimally coupled to a Wu-Yang tube at (x0, 0) with scalar potential −σ₃Δ.
///
/// Inside the track (x0 < 1) the levels are (m ± α)²/2I ± Δ; outside the
/// tube is a pure gauge and the free-rotor levels m²/2I ± Δ remain.
pub fn wy_rotor_spectrum(g: &WYGauge, delta: f64, inertia: f64, m_max: usize) -> Result<SpectrumTable> {
    check_inertia(inertia)?;
    if (g.x0 - 1.0).abs() < 1e-12 {
        return Err(invalid("x0", "tube on the rotor track has no defined phase"));
    }
    let alpha = if g.x0 < 1.0 { g.alpha } else { 0.0 };
    let k = m_max as i64;
    let mut levels = Vec::new();
    for m in -k..=k {
        let mf = m as f64;
        levels.push(Level {
            m,
            branch: Branch::Minus,
            energy: (mf - alpha).powi(2) / (2.0 * inertia) - delta,
        });
        levels.push(Level {
            m,
            branch: Branch::Plus,
            energy: (mf + alpha).powi(2) / (2.0 * inertia) + delta,
        });
    }
    Ok(SpectrumTable::from_levels(levels))
}

/// Free-rotor levels m²/2I ± Δ.
pub fn free_rotor_spectrum(delta: f64, inertia: f64, m_max: usize) -> Result<SpectrumTable> {
    wy_rotor_spectrum(&WYGauge { alpha: 0.0, x0: 2.0 }, delta, inertia, m_max)
}

/// Dense spectrum for the azimuthal vortex centered at (x0, 0) seen from the unit circle.
///
/// Levels carry an ordinal `m` (0, 1, … in energy order within each branch) and
/// the branch is the sign of ⟨V⟩; J is not conserved once x0 ≠ 0.
pub fn shifted_vortex_spectrum(
    x0: f64,
    delta: f64,
    inertia: f64,
    basis: &RotorBasis,
    n_levels: usize,
) -> Result<SpectrumTable> {
    if !(x0 >= 0.0) {
        return Err(invalid("x0", "must be non-negative"));
    }
    if (x0 - 1.0).abs() < 1e-12 {
        return Err(invalid("x0", "vortex on the rotor track"));
    }
    basis.validate()?;
    let pot = shifted_vortex_potential(delta, x0);
    let (h, v) = dense_hamiltonian(inertia, basis, &pot)?;
    let n = n_levels.min(h.nrows());
    let levels = annotated_levels(basis, &h, &v, n);
    let bigger = RotorBasis {
        m_max: basis.m_max + 8,
        quadrature_n: basis.quadrature_n + 64,
    };
    let check = dense_energies(inertia, &bigger, &pot)?;
    let mut worst: f64 = 0.0;
    for k in 0..n {
        worst = worst.max((levels[k].energy - check[k]).abs());
    }
    if worst > 1e-6 * delta.abs().max(1.0) {
        return Err(Error::Truncation(format!(
            "shifted-vortex levels moved by {worst:e} at x0 = {x0}"
        )));
    }
    let mut counts = [0i64; 2];
    let table = levels
        .iter()
        .take(n)
        .map(|l| {
            let b = if l.v_mean < 0.0 { 0 } else { 1 };
            let m = counts[b];
            counts[b] += 1;
            Level {
                m,
                branch: if b == 0 { Branch::Minus } else { Branch::Plus },
                energy: l.energy,
            }
        })
        .collect();
    Ok(SpectrumTable::from_levels(table))
}

/// x0 grid for the phase-transition sweep: `n` points over [0, x_max] with the
/// point that would land on x0 = 1 moved half a step outward.
pub fn fig7_grid(n: usize, x_max: f64) -> Vec<f64> {
    if n < 2 {
        return vec![0.0];
    }
    let h = x_max / (n - 1) as f64;
    (0..n)
        .map(|i| {
            let x = i as f64 * h;
            if (x - 1.0).abs() < 0.25 * h {
                1.0 + 0.5 * h
            } else {
                x
            }
        })
        .collect()
}

/// One x0 sample of the phase-transition sweep.
#[derive(Clone, Debug)]
pub struct Fig7Row {
    pub x0: f64,
    pub dense: Vec<f64>,
    pub wy: Vec<f64>,
    pub free: Vec<f64>,
}

/// Lowest `n_levels` dense, Wu-Yang (α = 1/2) and free-rotor energies for every x0.
pub fn fig7_sweep(
    delta: f64,
    inertia: f64,
    xs: &[f64],
    basis: &RotorBasis,
    n_levels: usize,
) -> Result<Vec<Fig7Row>> {
    let m_ref = n_levels + 2;
    let free = free_rotor_spectrum(delta, inertia, m_ref)?.lowest(n_levels);
    xs.iter()
        .map(|&x0| {
            let dense = shifted_vortex_spectrum(x0, delta, inertia, basis, n_levels)?.lowest(n_levels);
            let wy = wy_rotor_spectrum(&WYGauge { alpha: 0.5, x0 }, delta, inertia, m_ref)?
                .lowest(n_levels);
            Ok(Fig7Row { x0, dense, wy, free: free.clone() })
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(delta: f64, theta: f64) -> GaugeConfig {
        GaugeConfig { delta, theta, m_max: 10, ..GaugeConfig::default() }
    }

    #[test]
    fn free_limit() {
        let (lo, hi) = exact_energies(&cfg(0.0, 0.3), 1);
        assert!(lo.abs() < 1e-15 && (hi - 0.5).abs() < 1e-15);
    }

    #[test]
    fn quoted_pair() {
        let (lo, hi) = exact_energies(&cfg(1.0, PI / 2.0), 0);
        assert!((hi - (0.25 + 17f64.sqrt() / 4.0)).abs() < 1e-14);
        assert!((lo - (0.25 - 17f64.sqrt() / 4.0)).abs() < 1e-14);
    }

    #[test]
    fn adiabatic_ground_at_right_angle() {
        let t = adiabatic_projection_spectrum(&cfg(3.0, PI / 2.0)).unwrap();
        assert!((t.get(0, Branch::Minus).unwrap() - (0.25 - 3.0)).abs() < 1e-14);
    }

    #[test]
    fn wy_spectrum_rejects_track() {
        assert!(wy_rotor_spectrum(&WYGauge { alpha: 0.5, x0: 1.0 }, 1.0, 1.0, 4).is_err());
        let t = wy_rotor_spectrum(&WYGauge { alpha: 0.5, x0: 0.0 }, 0.0, 1.0, 4).unwrap();
        let e = t.lowest(4);
        for (a, b) in e.iter().zip([0.125, 0.125, 0.125, 0.125]) {
            assert!((a - b).abs() < 1e-15);
        }
    }

    #[test]
    fn fig7_grid_avoids_track() {
        let g = fig7_grid(64, 1.8);
        assert_eq!(g.len(), 64);
        assert!(g.iter().all(|x| (x - 1.0).abs() > 1e-3));
    }
}
