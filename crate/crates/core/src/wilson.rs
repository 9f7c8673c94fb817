//! Path-ordered Wilson lines of matrix-valued space-time gauge potentials.

use std::f64::consts::PI;
use std::sync::Arc;

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::linalg::expm_i_hermitian;
use crate::spin::{exp_i_hermitian2, exp_i_hermitian3, eig2, SpinMatrix2, SpinMatrix3};

/// Space-time point (x, y, t).
pub type Event = [f64; 3];

type SpatialFn = dyn Fn(Event) -> [DMatrix<C64>; 2] + Send + Sync;
type TemporalFn = dyn Fn(Event) -> DMatrix<C64> + Send + Sync;

/// Matrix-valued potential (A_x, A_y) and A₀ on the plane.
#[derive(Clone)]
pub struct ConnectionField {
    pub dim: usize,
    spatial: Arc<SpatialFn>,
    temporal: Arc<TemporalFn>,
}

impl std::fmt::Debug for ConnectionField {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ConnectionField").field("dim", &self.dim).finish_non_exhaustive()
    }
}

pub fn spin2_to_dmatrix(m: &SpinMatrix2) -> DMatrix<C64> {
    DMatrix::from_fn(2, 2, |i, j| m.0[i][j])
}

pub fn dmatrix_to_spin2(m: &DMatrix<C64>) -> SpinMatrix2 {
    SpinMatrix2([[m[(0, 0)], m[(0, 1)]], [m[(1, 0)], m[(1, 1)]]])
}

fn spin3_to_dmatrix(m: &SpinMatrix3) -> DMatrix<C64> {
    DMatrix::from_fn(3, 3, |i, j| m.0[i][j])
}

fn dmatrix_to_spin3(m: &DMatrix<C64>) -> SpinMatrix3 {
    let mut out = SpinMatrix3::zero();
    for i in 0..3 {
        for j in 0..3 {
            out.0[i][j] = m[(i, j)];
        }
    }
    out
}

/// exp(i s H) for Hermitian H, using closed forms for 2×2 and 3×3.
pub fn exp_i_hermitian(h: &DMatrix<C64>, s: f64) -> Result<DMatrix<C64>> {
    match h.nrows() {
        2 => Ok(spin2_to_dmatrix(&exp_i_hermitian2(&dmatrix_to_spin2(h), s)?)),
        3 => Ok(spin3_to_dmatrix(&exp_i_hermitian3(&dmatrix_to_spin3(h), s)?)),
        _ => {
            let defect = (h - h.adjoint()).norm();
            if defect > 1e-10 * h.norm().max(1.0) {
                return Err(Error::NotHermitian { deviation: defect });
            }
            Ok(expm_i_hermitian(h, s))
        }
    }
}

impl ConnectionField {
    pub fn new<S, T>(dim: usize, spatial: S, temporal: T) -> Self
    where
        S: Fn(Event) -> [DMatrix<C64>; 2] + Send + Sync + 'static,
        T: Fn(Event) -> DMatrix<C64> + Send + Sync + 'static,
    {
        Self { dim, spatial: Arc::new(spatial), temporal: Arc::new(temporal) }
    }

    pub fn zero(dim: usize) -> Self {
        Self::new(
            dim,
            move |_| [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)],
            move |_| DMatrix::zeros(dim, dim),
        )
    }

    /// Constant matrix times the vortex one-form φ̂/ρ about (x0, y0).
    pub fn vortex(generator: DMatrix<C64>, center: [f64; 2]) -> Self {
        let dim = generator.nrows();
        Self::new(
            dim,
            move |e| {
                let dx = e[0] - center[0];
                let dy = e[1] - center[1];
                let r2 = dx * dx + dy * dy;
                [
                    &generator * C64::new(-dy / r2, 0.0),
                    &generator * C64::new(dx / r2, 0.0),
                ]
            },
            move |_| DMatrix::zeros(dim, dim),
        )
    }

    /// Wu-Yang flux tube σ₃ α φ̂/ρ at (x0, 0).
    pub fn wu_yang(alpha: f64, x0: f64) -> Self {
        Self::vortex(spin2_to_dmatrix(&SpinMatrix2::sigma_z().scale(C64::new(alpha, 0.0))), [x0, 0.0])
    }

    /// Time-independent A₀ and no spatial part.
    pub fn temporal_only<T>(dim: usize, temporal: T) -> Self
    where
        T: Fn(Event) -> DMatrix<C64> + Send + Sync + 'static,
    {
        Self::new(dim, move |_| [DMatrix::zeros(dim, dim), DMatrix::zeros(dim, dim)], temporal)
    }

    /// Diabatic-frame potential A₀(φ) = e^{−i𝐚φ} 𝚫 e^{i𝐚φ}, with φ the polar angle.
    pub fn diabatic(p: &SpacetimeLoop) -> Self {
        let a = gauge_generator(p.q, p.theta, p.gamma);
        let d = delta_matrix(p.delta);
        Self::temporal_only(2, move |e| {
            let phi = e[1].atan2(e[0]);
            let u = exp_i_hermitian2(&a, phi).expect("generator is Hermitian");
            spin2_to_dmatrix(&(u.dagger() * d * u))
        })
    }

    /// Same field seen through a constant unitary: A_μ → V† A_μ V.
    pub fn conjugated(&self, v: &DMatrix<C64>) -> Self {
        let vd = v.adjoint();
        let v1 = v.clone();
        let vd1 = vd.clone();
        let v2 = v.clone();
        let s = Arc::clone(&self.spatial);
        let t = Arc::clone(&self.temporal);
        Self::new(
            self.dim,
            move |e| {
                let [ax, ay] = s(e);
                [&vd1 * ax * &v1, &vd1 * ay * &v1]
            },
            move |e| &vd * t(e) * &v2,
        )
    }

    /// dz^μ A_μ for a displacement `dz` at event `e`.
    fn one_form(&self, e: Event, dz: [f64; 3]) -> DMatrix<C64> {
        let [ax, ay] = (self.spatial)(e);
        let a0 = (self.temporal)(e);
        ax * C64::new(dz[0], 0.0) + ay * C64::new(dz[1], 0.0) + a0 * C64::new(dz[2], 0.0)
    }
}

type Sampler = dyn Fn(f64) -> Event + Send + Sync;

/// Parametrized space-time curve τ ↦ (x, y, t) on [tau_min, tau_max].
#[derive(Clone)]
pub struct PathSpec {
    sampler: Arc<Sampler>,
    pub tau_min: f64,
    pub tau_max: f64,
    pub n_steps: usize,
    winding: i64,
}

impl std::fmt::Debug for PathSpec {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PathSpec")
            .field("tau_min", &self.tau_min)
            .field("tau_max", &self.tau_max)
            .field("n_steps", &self.n_steps)
            .field("winding", &self.winding)
            .finish()
    }
}

/// Spatial closure tolerance for loops.
const CLOSURE_TOL: f64 = 1e-12;

impl PathSpec {
    /// Open path; the time coordinate must be nondecreasing.
    pub fn line<F>(sampler: F, tau_min: f64, tau_max: f64, n_steps: usize) -> Result<Self>
    where
        F: Fn(f64) -> Event + Send + Sync + 'static,
    {
        if !(tau_max > tau_min) {
            return Err(invalid("tau_max", "must exceed tau_min"));
        }
        if n_steps == 0 {
            return Err(invalid("n_steps", "must be positive"));
        }
        let sampler: Arc<Sampler> = Arc::new(sampler);
        let probe = 16 * n_steps.max(64);
        let mut prev = sampler(tau_min);
        let mut turn = 0.0;
        for k in 1..=probe {
            let e = sampler(tau_min + (tau_max - tau_min) * k as f64 / probe as f64);
            if e[2] < prev[2] - 1e-12 {
                return Err(invalid("sampler", "time coordinate decreases along the path"));
            }
            let mut d = e[1].atan2(e[0]) - prev[1].atan2(prev[0]);
            if d > PI {
                d -= 2.0 * PI;
            } else if d < -PI {
                d += 2.0 * PI;
            }
            turn += d;
            prev = e;
        }
        let winding = (turn / (2.0 * PI)).round() as i64;
        Ok(Self { sampler, tau_min, tau_max, n_steps, winding })
    }

    /// Path whose spatial projection returns to its start.
    pub fn closed<F>(sampler: F, tau_max: f64, n_steps: usize) -> Result<Self>
    where
        F: Fn(f64) -> Event + Send + Sync + 'static,
    {
        let p = Self::line(sampler, 0.0, tau_max, n_steps)?;
        let a = p.at(p.tau_min);
        let b = p.at(p.tau_max);
        if (a[0] - b[0]).abs() > CLOSURE_TOL || (a[1] - b[1]).abs() > CLOSURE_TOL {
            return Err(invalid("sampler", "spatial projection is not closed"));
        }
        Ok(p)
    }

    /// Circle of `radius` about `center`, traversed `turns` times at t = 0.
    pub fn circle(center: [f64; 2], radius: f64, turns: i64, n_steps: usize) -> Result<Self> {
        if turns < 1 {
            return Err(invalid("turns", "must be positive"));
        }
        Self::closed(
            move |s| [center[0] + radius * s.cos(), center[1] + radius * s.sin(), 0.0],
            2.0 * PI * turns as f64,
            n_steps,
        )
    }

    /// Unit-circle helix φ = ωt traversed for t ∈ [0, t_end].
    pub fn helix(omega: f64, t_end: f64, n_steps: usize) -> Result<Self> {
        Self::line(move |t| [(omega * t).cos(), (omega * t).sin(), t], 0.0, t_end, n_steps)
    }

    pub fn at(&self, tau: f64) -> Event {
        (self.sampler)(tau)
    }

    /// Net number of turns about the origin, from unwrapped polar angle.
    pub fn winding(&self) -> i64 {
        self.winding
    }
}

/// Result of a refined path-ordered exponential.
#[derive(Clone, Debug)]
pub struct WilsonLine {
    pub matrix: DMatrix<C64>,
    pub n_steps: usize,
    /// Frobenius change between the last two extrapolated estimates.
    pub refinement_change: f64,
}

impl WilsonLine {
    pub fn trace(&self) -> C64 {
        self.matrix.trace()
    }
}

fn midpoint_product(conn: &ConnectionField, path: &PathSpec, n: usize) -> Result<DMatrix<C64>> {
    let h = (path.tau_max - path.tau_min) / n as f64;
    let mut w = DMatrix::<C64>::identity(conn.dim, conn.dim);
    let mut prev = path.at(path.tau_min);
    for k in 0..n {
        let t1 = if k + 1 == n { path.tau_max } else { path.tau_min + (k + 1) as f64 * h };
        let next = path.at(t1);
        let mid = path.at(path.tau_min + (k as f64 + 0.5) * h);
        let dz = [next[0] - prev[0], next[1] - prev[1], next[2] - prev[2]];
        let step = exp_i_hermitian(&conn.one_form(mid, dz), 1.0)?;
        w = step * w;
        prev = next;
    }
    Ok(w)
}

/// Largest number of segments tried before giving up.
const MAX_STEPS: usize = 1 << 22;

/// P exp(i ∫ dz^μ A_μ) with later segments multiplied on the left.
///
/// Midpoint products are refined by step doubling; consecutive Richardson
/// estimates (4W₂ₙ − Wₙ)/3 must agree to `tol` in Frobenius norm.
pub fn path_ordered_exp(conn: &ConnectionField, path: &PathSpec, tol: f64) -> Result<WilsonLine> {
    let mut n = path.n_steps;
    let mut coarse = midpoint_product(conn, path, n)?;
    let mut last: Option<DMatrix<C64>> = None;
    loop {
        if 2 * n > MAX_STEPS {
            return Err(Error::NonConvergence(format!(
                "path-ordered exponential not converged at {n} steps"
            )));
        }
        let fine = midpoint_product(conn, path, 2 * n)?;
        let extrap = (&fine * C64::new(4.0, 0.0) - &coarse) / C64::new(3.0, 0.0);
        n *= 2;
        if let Some(prev) = &last {
            let change = (&extrap - prev).norm();
            if change < tol {
                return Ok(WilsonLine { matrix: extrap, n_steps: n, refinement_change: change });
            }
        }
        last = Some(extrap);
        coarse = fine;
    }
}

/// Parameters of the space-time Wilson line around the vortex.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SpacetimeLoop {
    pub q: i64,
    pub theta: f64,
    pub gamma: f64,
    pub delta: f64,
    pub omega: f64,
    pub m: i64,
}

/// 𝐚 = q (cos θ σ₃ + sin θ (cos γ σ₁ − sin γ σ₂)); eigenvalues ±q.
pub fn gauge_generator(q: i64, theta: f64, gamma: f64) -> SpinMatrix2 {
    let qf = q as f64;
    SpinMatrix2::hermitian(
        0.0,
        [qf * theta.sin() * gamma.cos(), -qf * theta.sin() * gamma.sin(), qf * theta.cos()],
    )
}

/// 𝚫 = −Δσ₃.
pub fn delta_matrix(delta: f64) -> SpinMatrix2 {
    SpinMatrix2::hermitian(0.0, [0.0, 0.0, -delta])
}

/// Ω = √(Δ² + q²ω² − 2Δqω cos θ)/|ω|.
pub fn effective_omega(p: &SpacetimeLoop) -> f64 {
    let q = p.q as f64;
    (p.delta * p.delta + q * q * p.omega * p.omega - 2.0 * p.delta * q * p.omega * p.theta.cos())
        .max(0.0)
        .sqrt()
        / p.omega.abs()
}

fn check_omega(p: &SpacetimeLoop) -> Result<()> {
    if p.omega == 0.0 || !p.omega.is_finite() {
        return Err(invalid("omega", "must be nonzero and finite"));
    }
    Ok(())
}

/// exp(2πi m (𝐚 + 𝚫/ω)).
pub fn spacetime_line_closed_form(p: &SpacetimeLoop) -> Result<SpinMatrix2> {
    check_omega(p)?;
    let h = gauge_generator(p.q, p.theta, p.gamma)
        + delta_matrix(p.delta).scale(C64::new(1.0 / p.omega, 0.0));
    exp_i_hermitian2(&h, 2.0 * PI * p.m as f64)
}

/// W(t) = exp(−i𝐚ωt)·exp(iωt(𝐚 + 𝚫/ω)); `p.m` is ignored.
pub fn diabatic_w_of_t(p: &SpacetimeLoop, t: f64) -> Result<SpinMatrix2> {
    let a = gauge_generator(p.q, p.theta, p.gamma);
    let h = a.scale(C64::new(p.omega, 0.0)) + delta_matrix(p.delta);
    Ok(exp_i_hermitian2(&a, -p.omega * t)? * exp_i_hermitian2(&h, t)?)
}

/// W(t) by refined product integration of Ẇ = i e^{−i𝐚ωt} 𝚫 e^{i𝐚ωt} W.
pub fn diabatic_w_numeric(p: &SpacetimeLoop, t: f64, tol: f64) -> Result<SpinMatrix2> {
    if t == 0.0 {
        return Ok(SpinMatrix2::identity());
    }
    let conn = ConnectionField::diabatic(p);
    let n0 = ((t.abs() * (p.delta.abs() + p.omega.abs() * p.q.unsigned_abs() as f64)) as usize).max(16);
    let path = PathSpec::helix(p.omega, t, n0)?;
    let w = path_ordered_exp(&conn, &path, tol)?;
    Ok(dmatrix_to_spin2(&w.matrix))
}

/// Adiabatic limit exp(−2πimΔ/ω σ₃)·exp(2πimq cos θ σ₃).
pub fn adiabatic_product(p: &SpacetimeLoop) -> Result<SpinMatrix2> {
    check_omega(p)?;
    let m = p.m as f64;
    let sz = SpinMatrix2::sigma_z();
    Ok(exp_i_hermitian2(&sz, -2.0 * PI * m * p.delta / p.omega)?
        * exp_i_hermitian2(&sz, 2.0 * PI * m * p.q as f64 * p.theta.cos())?)
}

/// Eigenvalues (ascending) of 𝐚 + 𝚫/ω: the effective flux charges ±Ω.
pub fn effective_flux_charges(p: &SpacetimeLoop) -> Result<(f64, f64)> {
    check_omega(p)?;
    let h = gauge_generator(p.q, p.theta, p.gamma)
        + delta_matrix(p.delta).scale(C64::new(1.0 / p.omega, 0.0));
    let e = eig2(&h)?;
    Ok((e.values[0], e.values[1]))
}

/// Angular frequency near `omega_guess` at which Ω has fractional part `frac`.
///
/// Ω(ω) decreases monotonically for ω ≪ Δ, so the nearest such ω is found by
/// bisection on the branch Ω = ⌊Ω(ω_guess)⌋ + frac.
pub fn lock_omega(base: &SpacetimeLoop, omega_guess: f64, frac: f64) -> Result<f64> {
    let om = |w: f64| effective_omega(&SpacetimeLoop { omega: w, ..*base });
    let target = om(omega_guess).floor() + frac;
    let (mut lo, mut hi) = (0.5 * omega_guess, 2.0 * omega_guess);
    let f = |w: f64| om(w) - target;
    if f(lo) * f(hi) > 0.0 {
        return Err(Error::NonConvergence("no bracket for phase-locked omega".into()));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo) * f(mid) <= 0.0 {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    Ok(0.5 * (lo + hi))
}

/// Tr P exp(i∮ cos θ σ₁ φ̂/ρ · dr) for winding m: 2 cos(2πm cos θ).
pub fn spin1_projected_loop_trace(theta: f64, m: i64) -> f64 {
    2.0 * (2.0 * PI * m as f64 * theta.cos()).cos()
}

/// Projected spin-1 connection cos θ σ₁ φ̂/ρ about the origin.
pub fn spin1_projected_connection(theta: f64) -> ConnectionField {
    ConnectionField::vortex(
        spin2_to_dmatrix(&SpinMatrix2::sigma_x().scale(C64::new(theta.cos(), 0.0))),
        [0.0, 0.0],
    )
}

/// |(1/τ)∫₀^τ e^{−2iΔt} dt| = |sin Δτ|/(Δτ): the surviving weight of an
/// off-diagonal coupling rotating at frequency 2Δ.
pub fn rotating_offdiagonal_average(delta: f64, tau: f64) -> Result<f64> {
    if !(delta > 0.0) || !(tau > 0.0) {
        return Err(invalid("delta, tau", "must be positive"));
    }
    let x = delta * tau;
    let integral = (C64::new(0.0, -2.0 * x).exp() - 1.0) / C64::new(0.0, -2.0 * x);
    Ok(integral.norm())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn zero_connection_is_identity() {
        let path = PathSpec::circle([0.0, 0.0], 1.0, 1, 32).unwrap();
        let w = path_ordered_exp(&ConnectionField::zero(2), &path, 1e-10).unwrap();
        assert!((w.matrix - DMatrix::<C64>::identity(2, 2)).norm() < 1e-14);
    }

    #[test]
    fn wu_yang_loop_trace() {
        let path = PathSpec::circle([0.0, 0.0], 1.0, 1, 64).unwrap();
        assert_eq!(path.winding(), 1);
        let w = path_ordered_exp(&ConnectionField::wu_yang(0.3, 0.0), &path, 1e-10).unwrap();
        assert!((w.trace().re - 2.0 * (2.0 * PI * 0.3).cos()).abs() < 1e-8);
    }

    #[test]
    fn flux_charges_examples() {
        let p = SpacetimeLoop { q: 1, theta: 0.0, gamma: 0.0, delta: 1.0, omega: 1.0, m: 1 };
        let (a, b) = effective_flux_charges(&p).unwrap();
        assert!(a.abs() < 1e-15 && b.abs() < 1e-15);
        let p = SpacetimeLoop { theta: PI / 3.0, delta: 2.0, ..p };
        let (a, b) = effective_flux_charges(&p).unwrap();
        assert!((b - 3f64.sqrt()).abs() < 1e-12 && (a + 3f64.sqrt()).abs() < 1e-12);
        assert!((effective_omega(&p) - 3f64.sqrt()).abs() < 1e-12);
    }

    #[test]
    fn pure_gauge_limit() {
        let p = SpacetimeLoop { q: 2, theta: 0.7, gamma: 0.3, delta: 0.0, omega: 1.3, m: 3 };
        let w = spacetime_line_closed_form(&p).unwrap();
        assert!(w.max_abs_diff(&SpinMatrix2::identity()) < 1e-12);
    }

    #[test]
    fn offdiagonal_average() {
        assert!(rotating_offdiagonal_average(1.0, PI).unwrap() < 1e-15);
        assert!(rotating_offdiagonal_average(1.0, 100.0).unwrap() <= 0.01);
        assert!((rotating_offdiagonal_average(1.0, 1e-8).unwrap() - 1.0).abs() < 1e-12);
    }
}
