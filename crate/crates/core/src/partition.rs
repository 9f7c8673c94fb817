//! Partition functions of rotor models, Jacobi theta functions, Poisson
//! resummation and the Dawson integral.
//!
//! Partition functions overflow easily (cosh βΔ with βΔ in the thousands), so
//! they are carried as natural logarithms in [`LogScalar`].

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::field::GaugeConfig;
use crate::rotor::exact_energies;

/// A positive quantity stored by its natural logarithm.
#[derive(Clone, Copy, Debug, PartialEq, PartialOrd)]
pub struct LogScalar(f64);

impl LogScalar {
    pub fn from_ln(ln: f64) -> Self {
        Self(ln)
    }

    pub fn from_value(v: f64) -> Result<Self> {
        if v > 0.0 {
            Ok(Self(v.ln()))
        } else {
            Err(invalid("value", format!("{v} is not positive")))
        }
    }

    pub fn ln(self) -> f64 {
        self.0
    }

    /// The plain value; may be infinite when the logarithm exceeds ~709.
    pub fn value(self) -> f64 {
        self.0.exp()
    }

    /// self / other without forming either value.
    pub fn ratio(self, other: LogScalar) -> f64 {
        (self.0 - other.0).exp()
    }
}

/// ln cosh x without overflow.
pub fn ln_cosh(x: f64) -> f64 {
    let a = x.abs();
    a + (-2.0 * a).exp().ln_1p() - std::f64::consts::LN_2
}

/// Running log-sum-exp accumulator.
#[derive(Clone, Copy, Debug)]
struct LnAcc {
    max: f64,
    scaled: f64,
}

impl LnAcc {
    fn new() -> Self {
        Self { max: f64::NEG_INFINITY, scaled: 0.0 }
    }

    fn add(&mut self, ln_term: f64) {
        if ln_term == f64::NEG_INFINITY {
            return;
        }
        if ln_term > self.max {
            self.scaled = self.scaled * (self.max - ln_term).exp() + 1.0;
            self.max = ln_term;
        } else {
            self.scaled += (ln_term - self.max).exp();
        }
    }

    fn ln(&self) -> f64 {
        self.max + self.scaled.ln()
    }
}

/// Relative tail tolerance for infinite mode sums.
const TAIL_TOL: f64 = 1e-16;
/// Upper limit on |m| for adaptive sums.
const MAX_MODES: i64 = 10_000_000;

/// ln Σ_m Σ_b exp(−β E_b(m)).
///
/// Modes are added outward from m = 0 in both directions. A direction stops
/// once its terms decrease and the geometric majorant of the remaining tail,
/// t/(1 − r) with r the last term ratio, falls below `TAIL_TOL` of the total.
pub fn ln_mode_sum<F>(beta: f64, levels: F) -> Result<f64>
where
    F: Fn(i64) -> Vec<f64>,
{
    let ln_terms = |m: i64| -> f64 {
        let mut acc = LnAcc::new();
        for e in levels(m) {
            acc.add(-beta * e);
        }
        acc.ln()
    };
    let mut total = LnAcc::new();
    total.add(ln_terms(0));
    for dir in [1i64, -1] {
        let mut prev = ln_terms(0);
        let mut m = dir;
        loop {
            if m.abs() > MAX_MODES {
                return Err(Error::Truncation(format!(
                    "mode sum not converged after {MAX_MODES} modes"
                )));
            }
            let t = ln_terms(m);
            total.add(t);
            let ln_ratio = t - prev;
            if ln_ratio < 0.0 {
                let ln_tail = t - (-ln_ratio.exp()).ln_1p();
                if ln_tail < total.ln() + TAIL_TOL.ln() {
                    break;
                }
            }
            prev = t;
            m += dir;
        }
    }
    Ok(total.ln())
}

/// Argument pair (z, u) of θ₃ with Im u > 0.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ThetaArg {
    pub z: C64,
    pub u: C64,
}

impl ThetaArg {
    pub fn new(z: C64, u: C64) -> Result<Self> {
        if !(u.im > 0.0) {
            return Err(invalid("u", "theta series needs Im(u) > 0"));
        }
        Ok(Self { z, u })
    }
}

/// θ₃(z, u) = Σ_m exp(iπm²u + 2imz).
///
/// Terms are added symmetrically around the largest one until a term drops
/// below `tol`·|sum| (or 50 e-folds below the peak when the sum cancels).
pub fn theta3(arg: &ThetaArg, tol: f64) -> C64 {
    let ThetaArg { z, u } = *arg;
    let term = |m: f64| (C64::new(0.0, PI * m * m) * u + C64::new(0.0, 2.0 * m) * z).exp();
    let center = (-z.im / (PI * u.im)).round();
    let peak = term(center);
    let floor = peak.norm() * (-50f64).exp();
    let mut sum = peak;
    let mut d = 1.0;
    loop {
        let a = term(center + d);
        let b = term(center - d);
        sum += a + b;
        let biggest = a.norm().max(b.norm());
        if biggest < tol * sum.norm() || biggest < floor {
            break;
        }
        d += 1.0;
    }
    sum
}

/// Right-hand side of the modular transformation,
/// (−iu)^{−1/2} exp(−iz²/(πu)) θ₃(−z/u, −1/u).
pub fn theta3_modular(arg: &ThetaArg, tol: f64) -> C64 {
    let ThetaArg { z, u } = *arg;
    let dual = ThetaArg { z: -z / u, u: -1.0 / u };
    let pref = (C64::new(0.0, -1.0) * u).sqrt().inv();
    let gauss = (C64::new(0.0, -1.0) * z * z / (PI * u)).exp();
    pref * gauss * theta3(&dual, tol)
}

/// ln Σ_m exp(−a m²) cos(2π m c) for a > 0.
///
/// For a < 1 the dual form √(π/a) Σ_k exp(−π²(k − c)²/a) is used, which is a
/// sum of positive terms and stays accurate in log space for any a.
pub fn ln_gauss_cos_sum(a: f64, c: f64) -> Result<f64> {
    if !(a > 0.0) {
        return Err(invalid("a", "Gaussian width must be positive"));
    }
    if a >= 1.0 {
        let mut s = 1.0;
        let mut m = 1.0;
        loop {
            let t = 2.0 * (-a * m * m).exp();
            s += t * (2.0 * PI * m * c).cos();
            if t < 1e-18 {
                break;
            }
            m += 1.0;
        }
        if s <= 0.0 {
            return Err(Error::NonConvergence(format!(
                "direct Gaussian-cosine sum not positive at a={a}, c={c}"
            )));
        }
        return Ok(s.ln());
    }
    let cf = c - c.round();
    let mut acc = LnAcc::new();
    let width = (a / (PI * PI)).sqrt();
    let kmax = (cf.abs() + 10.0 * width + 2.0).ceil() as i64;
    for k in -kmax..=kmax {
        let d = k as f64 - cf;
        acc.add(-PI * PI * d * d / a);
    }
    Ok(0.5 * (PI / a).ln() + acc.ln())
}

/// Σ_m exp(−2π²m²I/β) cos(2πmα): the topological ratio r(β).
pub fn wy_ratio(alpha: f64, x0: f64, inertia: f64, beta: f64) -> Result<f64> {
    let eff = if x0 < 1.0 { alpha } else { 0.0 };
    Ok(ln_gauss_cos_sum(2.0 * PI * PI * inertia / beta, eff)?.exp())
}

fn check_beta_inertia(beta: f64, inertia: f64) -> Result<()> {
    if !(beta > 0.0) || !beta.is_finite() {
        return Err(invalid("beta", "must be positive and finite"));
    }
    if !(inertia > 0.0) || !inertia.is_finite() {
        return Err(invalid("inertia", "must be positive and finite"));
    }
    Ok(())
}

/// ln of the dynamical factor 2·√(2πI/β)·cosh(βΔ).
pub fn ln_z0(delta: f64, inertia: f64, beta: f64) -> f64 {
    std::f64::consts::LN_2 + 0.5 * (2.0 * PI * inertia / beta).ln() + ln_cosh(beta * delta)
}

/// Wu-Yang rotor partition function as dynamical factor × topological sum.
pub fn z_wy_closed(alpha: f64, x0: f64, delta: f64, inertia: f64, beta: f64) -> Result<LogScalar> {
    check_beta_inertia(beta, inertia)?;
    let eff = if x0 < 1.0 { alpha } else { 0.0 };
    let ln_r = ln_gauss_cos_sum(2.0 * PI * PI * inertia / beta, eff)?;
    Ok(LogScalar(ln_z0(delta, inertia, beta) + ln_r))
}

/// Wu-Yang rotor partition function by direct summation over its spectrum.
pub fn z_wy_spectral(alpha: f64, x0: f64, delta: f64, inertia: f64, beta: f64) -> Result<LogScalar> {
    check_beta_inertia(beta, inertia)?;
    if (x0 - 1.0).abs() < 1e-12 {
        return Err(invalid("x0", "tube on the rotor track"));
    }
    let eff = if x0 < 1.0 { alpha } else { 0.0 };
    let ln = ln_mode_sum(beta, |m| {
        let mf = m as f64;
        vec![
            (mf + eff).powi(2) / (2.0 * inertia) + delta,
            (mf - eff).powi(2) / (2.0 * inertia) - delta,
        ]
    })?;
    Ok(LogScalar(ln))
}

/// Σ_m [exp(−βE₊(m)) + exp(−βE₋(m))] for the uniform vortex rotor.
pub fn z_exact_model(cfg: &GaugeConfig, beta: f64) -> Result<LogScalar> {
    check_beta_inertia(beta, cfg.inertia)?;
    let ln = ln_mode_sum(beta, |m| {
        let (lo, hi) = exact_energies(cfg, m);
        vec![lo, hi]
    })?;
    Ok(LogScalar(ln))
}

/// Dynamical factor including the induced scalar counter term α(1−α)/2I,
/// with α = (1 − cos θ)/2.
pub fn ln_z0_tilde(cfg: &GaugeConfig, beta: f64) -> f64 {
    let alpha = cfg.adiabatic_alpha();
    ln_z0(cfg.delta, cfg.inertia, beta) - beta * (alpha - alpha * alpha) / (2.0 * cfg.inertia)
}

/// r̃(β) = 𝒵 / 𝒵̃₀.
pub fn ratio_tilde(cfg: &GaugeConfig, beta: f64) -> Result<f64> {
    let z = z_exact_model(cfg, beta)?;
    Ok((z.ln() - ln_z0_tilde(cfg, beta)).exp())
}

/// Doubled free-rotor partition function 2Σ exp(−βm²/2I) over the same 𝒵̃₀.
pub fn free_rotor_ratio_tilde(cfg: &GaugeConfig, beta: f64) -> Result<f64> {
    check_beta_inertia(beta, cfg.inertia)?;
    let i = cfg.inertia;
    let ln = ln_mode_sum(beta, |m| {
        let e = (m * m) as f64 / (2.0 * i);
        vec![e, e]
    })?;
    let free = GaugeConfig { delta: 0.0, ..*cfg };
    Ok((ln - ln_z0_tilde(&free, beta)).exp())
}

/// Weight multiplying the Gaussian in a Poisson pair.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum PoissonWeight {
    One,
    Cos(f64),
    Cosh(f64),
}

/// Both sides of Σ_m exp(−βm²/2I) f(m) = √(2πI/β) Σ_k ĝ(k).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PoissonPair {
    pub direct: f64,
    pub dual: f64,
}

/// Evaluates a Gaussian-times-weight sum directly and in its Poisson-dual form.
pub fn poisson_resum(beta: f64, inertia: f64, weight: PoissonWeight) -> Result<PoissonPair> {
    check_beta_inertia(beta, inertia)?;
    let c = beta / (2.0 * inertia);
    let f = |m: f64| match weight {
        PoissonWeight::One => 1.0,
        PoissonWeight::Cos(a) => (a * m).cos(),
        PoissonWeight::Cosh(b) => (b * m).cosh(),
    };
    // Direct side: terms peak near |m| = b/(2c) for the cosh weight.
    let peak = match weight {
        PoissonWeight::Cosh(b) => (b.abs() / (2.0 * c)).ceil(),
        _ => 0.0,
    };
    let mut direct = f(0.0);
    let mut m = 1.0;
    loop {
        let t = (-c * m * m).exp() * (f(m) + f(-m));
        direct += t;
        if m > peak && t.abs() < 1e-18 * direct.abs().max(1e-300) {
            break;
        }
        if m > 1e7 {
            return Err(Error::NonConvergence("direct Poisson side".into()));
        }
        m += 1.0;
    }
    let pref = (2.0 * PI * inertia / beta).sqrt();
    let dual_term = |k: f64| -> f64 {
        match weight {
            PoissonWeight::One => (-2.0 * PI * PI * k * k * inertia / beta).exp(),
            PoissonWeight::Cos(a) => {
                let s = 2.0 * PI * k + a;
                (-inertia * s * s / (2.0 * beta)).exp()
            }
            PoissonWeight::Cosh(b) => {
                (inertia * b * b / (2.0 * beta) - 2.0 * PI * PI * k * k * inertia / beta).exp()
                    * (2.0 * PI * k * b * inertia / beta).cos()
            }
        }
    };
    let kc = match weight {
        PoissonWeight::Cos(a) => -(a / (2.0 * PI)).round(),
        _ => 0.0,
    };
    let mut dual = dual_term(kc);
    let mut d = 1.0;
    loop {
        let t = dual_term(kc + d) + dual_term(kc - d);
        dual += t;
        if t.abs() < 1e-18 * dual.abs().max(1e-300) && d > 2.0 {
            break;
        }
        if d > 1e7 {
            return Err(Error::NonConvergence("dual Poisson side".into()));
        }
        d += 1.0;
    }
    Ok(PoissonPair { direct, dual: pref * dual })
}

/// Dawson integral F(x) = e^{−x²} ∫₀ˣ e^{t²} dt on the real line.
///
/// Maclaurin series for |x| < 1, Rybicki's exponentially convergent sum otherwise.
pub fn dawson(x: f64) -> f64 {
    if x.abs() < 1.0 {
        let x2 = x * x;
        let mut term = x;
        let mut sum = x;
        let mut n = 0.0;
        loop {
            n += 1.0;
            term *= -2.0 * x2 / (2.0 * n + 1.0);
            sum += term;
            if term.abs() <= 1e-17 * sum.abs() {
                break;
            }
        }
        return sum;
    }
    const H: f64 = 0.2;
    const NMAX: usize = 40;
    let xx = x.abs();
    let n0 = 2 * (0.5 * xx / H).round() as i64;
    let xp = xx - n0 as f64 * H;
    let mut e1 = (2.0 * xp * H).exp();
    let e2 = e1 * e1;
    let mut d1 = (n0 + 1) as f64;
    let mut d2 = d1 - 2.0;
    let mut sum = 0.0;
    for i in 0..NMAX {
        let c = (-(((2 * i + 1) as f64) * H).powi(2)).exp();
        sum += c * (e1 / d1 + 1.0 / (d2 * e1));
        d1 += 2.0;
        d2 -= 2.0;
        e1 *= e2;
    }
    x.signum() * (-xp * xp).exp() * sum / PI.sqrt()
}

/// Gauss-Legendre nodes and weights on [−1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let p2 = ((2 * k - 1) as f64 * x * p1 - (k - 1) as f64 * p0) / k as f64;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Radius below which the complex Dawson integral is evaluated by quadrature.
const DAWSON_QUAD_RADIUS: f64 = 7.0;

/// Dawson integral of a complex argument.
///
/// For |ξ| < 7 the representation ξ ∫₀¹ exp(ξ²(s² − 1)) ds is integrated by
/// composite Gauss-Legendre quadrature. Beyond that the asymptotic form
/// 1/(2ξ)·(1 + 1/(2ξ²) + 3/(4ξ⁴) + 15/(8ξ⁶)) ± i(√π/2)e^{−ξ²} is used, with
/// + when Re ξ > −Im ξ and − otherwise.
pub fn dawson_complex(xi: C64) -> C64 {
    if xi.im == 0.0 {
        return C64::new(dawson(xi.re), 0.0);
    }
    if xi.norm() < DAWSON_QUAD_RADIUS {
        let nodes = gauss_legendre(16);
        let panels = 24;
        let z2 = xi * xi;
        let mut acc = C64::new(0.0, 0.0);
        for p in 0..panels {
            let a = p as f64 / panels as f64;
            let b = (p + 1) as f64 / panels as f64;
            let half = 0.5 * (b - a);
            let mid = 0.5 * (a + b);
            for &(x, w) in &nodes {
                let s = mid + half * x;
                acc += w * half * (z2 * (s * s - 1.0)).exp();
            }
        }
        return xi * acc;
    }
    let inv2 = (xi * xi).inv();
    let series = 1.0 + inv2 * (0.5 + inv2 * (0.75 + inv2 * 1.875));
    let sign = if xi.re > -xi.im { 1.0 } else { -1.0 };
    series / (2.0 * xi) + C64::new(0.0, sign * 0.5 * PI.sqrt()) * (-xi * xi).exp()
}

/// Which printed or derived variant of the low-temperature coefficients to use.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LowTForm {
    /// Ω = −sin²θ/4 + √(sin⁴θ/16 + cos²θ) and V = −cos²θ/2I + α₀ + Iα₁²/2.
    Derived,
    /// Ω with sin²θ/16 under the root and V with −cos²θ/I, as printed.
    Printed,
}

/// Coefficients entering the low-temperature form of the reduced partition function.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowTCoefficients {
    pub alpha0: f64,
    pub alpha1: f64,
    pub v: f64,
    pub omega: f64,
}

pub fn lowt_coefficients(theta: f64, inertia: f64, form: LowTForm) -> LowTCoefficients {
    let s2 = theta.sin().powi(2);
    let c2 = theta.cos().powi(2);
    let gap = s2 / (4.0 * inertia);
    let alpha0 = gap;
    let alpha1 = -gap + (gap * gap + c2 / (inertia * inertia)).sqrt();
    match form {
        LowTForm::Derived => LowTCoefficients {
            alpha0,
            alpha1,
            v: -c2 / (2.0 * inertia) + alpha0 + inertia * alpha1 * alpha1 / 2.0,
            omega: -s2 / 4.0 + (s2 * s2 / 16.0 + c2).sqrt(),
        },
        LowTForm::Printed => LowTCoefficients {
            alpha0,
            alpha1,
            v: -c2 / inertia + alpha0 + inertia * alpha1 * alpha1 / 2.0,
            omega: -s2 / 4.0 + (s2 / 16.0 + c2).sqrt(),
        },
    }
}

/// ln of the reduced spin-1 partition function 2Σ exp(−βe₀) cosh(βe₁) by direct summation.
pub fn ln_reduced_z_direct(theta: f64, inertia: f64, beta: f64) -> Result<f64> {
    check_beta_inertia(beta, inertia)?;
    let s2 = theta.sin().powi(2);
    let c2 = theta.cos().powi(2);
    let gap = s2 / (4.0 * inertia);
    ln_mode_sum(beta, |m| {
        let mf = m as f64;
        let e0 = (mf * mf + c2) / (2.0 * inertia);
        let e1 = (gap * gap + mf * mf * c2 / (inertia * inertia)).sqrt();
        vec![e0 - e1, e0 + e1]
    })
}

/// Options for [`lowt_z_asymptotic`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LowTOptions {
    pub form: LowTForm,
    /// Replaces the topological charge Ω (e.g. `Some(0.0)`).
    pub omega_override: Option<f64>,
    /// Keeps only winding numbers with 2π|k| < α₁β.
    pub gated: bool,
    /// Subtracts the non-Gaussian part 2e^{−βcos²θ/2I} sinh(α₀β) coth(α₁β/2) of
    /// the resummed sinh(α₁β|m|) series, which otherwise counts m = 0 twice.
    pub boundary_term: bool,
}

impl Default for LowTOptions {
    fn default() -> Self {
        Self { form: LowTForm::Derived, omega_override: None, gated: false, boundary_term: true }
    }
}

impl LowTOptions {
    /// The winding-gated form without the boundary term.
    pub fn gated_leading() -> Self {
        Self { gated: true, boundary_term: false, ..Self::default() }
    }
}

/// ln(sinh x) for x > 0.
fn ln_sinh(x: f64) -> f64 {
    x + (-(-2.0 * x).exp_m1()).ln() - std::f64::consts::LN_2
}

/// Low-temperature asymptotic ln z ≈ ln[2√(2πI/β) e^{βV} Σ_k e^{−2π²k²I/β} cos(2πkΩ) − B].
///
/// B is the optional boundary term. When the winding gate 2π|k| < α₁β
/// removes terms of non-negligible weight the gated sum is evaluated directly;
/// otherwise the ungated sum is taken in its positive dual form. A vanishing
/// α₁ falls back to direct summation of the reduced spectrum.
pub fn lowt_z_asymptotic(theta: f64, inertia: f64, beta: f64, opts: LowTOptions) -> Result<LogScalar> {
    check_beta_inertia(beta, inertia)?;
    let co = lowt_coefficients(theta, inertia, opts.form);
    if co.alpha1.abs() < 1e-14 {
        return Ok(LogScalar(ln_reduced_z_direct(theta, inertia, beta)?));
    }
    let omega = opts.omega_override.unwrap_or(co.omega);
    let a = 2.0 * PI * PI * inertia / beta;
    let base = std::f64::consts::LN_2 + 0.5 * (2.0 * PI * inertia / beta).ln() + beta * co.v;
    let kgate = co.alpha1 * beta / (2.0 * PI);
    // Terms with |k| beyond the gate weigh at most exp(−a·kgate²).
    if opts.gated && a * kgate * kgate < 40.0 {
        let kmax = kgate.ceil() as i64;
        let mut s = 0.0;
        for k in -kmax..=kmax {
            let kf = k as f64;
            if 2.0 * PI * kf.abs() < co.alpha1 * beta {
                s += (-a * kf * kf).exp() * (2.0 * PI * kf * omega).cos();
            }
        }
        if s <= 0.0 {
            return Err(Error::NonConvergence(format!(
                "gated winding sum not positive at beta={beta}"
            )));
        }
        return with_boundary(base + s.ln(), theta, inertia, beta, &co, opts);
    }
    with_boundary(base + ln_gauss_cos_sum(a, omega)?, theta, inertia, beta, &co, opts)
}

fn with_boundary(
    ln_main: f64,
    theta: f64,
    inertia: f64,
    beta: f64,
    co: &LowTCoefficients,
    opts: LowTOptions,
) -> Result<LogScalar> {
    if !opts.boundary_term || co.alpha0 <= 0.0 {
        return Ok(LogScalar(ln_main));
    }
    let x = 0.5 * co.alpha1 * beta;
    let ln_coth = (-2.0 * x).exp().ln_1p() - (-(-2.0 * x).exp_m1()).ln();
    let ln_b = std::f64::consts::LN_2 - beta * theta.cos().powi(2) / (2.0 * inertia)
        + ln_sinh(co.alpha0 * beta)
        + ln_coth;
    if ln_b >= ln_main {
        return Err(Error::NonConvergence(format!(
            "low-temperature form not positive at beta={beta}"
        )));
    }
    Ok(LogScalar(ln_main + (-(ln_b - ln_main).exp()).ln_1p()))
}

/// ln z sampled on a β grid.
#[derive(Clone, Debug, PartialEq)]
pub struct PartitionSeries {
    pub beta_grid: Vec<f64>,
    pub ln_values: Vec<f64>,
}

impl PartitionSeries {
    pub fn sample<F>(betas: &[f64], f: F) -> Result<Self>
    where
        F: Fn(f64) -> Result<f64>,
    {
        let ln_values = betas.iter().map(|&b| f(b)).collect::<Result<Vec<_>>>()?;
        Ok(Self { beta_grid: betas.to_vec(), ln_values })
    }
}

/// Grid of two stencils β(1 ± 0.01) around β_max/2 and β_max for [`ground_energy`].
pub fn plateau_grid(beta_max: f64) -> Vec<f64> {
    let mut g = Vec::with_capacity(6);
    for b in [0.5 * beta_max, beta_max] {
        g.extend([0.99 * b, b, 1.01 * b]);
    }
    g
}

/// −∂ ln z/∂β at the largest stencil, with a plateau check against the previous one.
///
/// The grid is read as consecutive (β − h, β, β + h) triples, as produced by
/// [`plateau_grid`].
pub fn ground_energy(series: &PartitionSeries) -> Result<f64> {
    let (last, drift) = ground_energy_estimate(series)?;
    if drift > 1e-4 * last.abs().max(1.0) {
        return Err(Error::NonConvergence(format!(
            "no plateau in -d ln z/d beta: {} vs {last}",
            last + drift
        )));
    }
    Ok(last)
}

/// Last −d ln z/dβ stencil and its absolute change from the previous one.
pub fn ground_energy_estimate(series: &PartitionSeries) -> Result<(f64, f64)> {
    let n = series.beta_grid.len();
    if n < 6 || n % 3 != 0 || series.ln_values.len() != n {
        return Err(invalid("series", "needs at least two (β−h, β, β+h) stencils"));
    }
    let est = |t: usize| {
        let b = &series.beta_grid;
        let l = &series.ln_values;
        -(l[3 * t + 2] - l[3 * t]) / (b[3 * t + 2] - b[3 * t])
    };
    let last = est(n / 3 - 1);
    let prev = est(n / 3 - 2);
    Ok((last, (last - prev).abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn theta_at_unit_imaginary() {
        let v = theta3(&ThetaArg::new(C64::new(0.0, 0.0), C64::new(0.0, 1.0)).unwrap(), 1e-14);
        assert!((v.re - 1.086_434_811_213_308).abs() < 1e-12);
        assert!(ThetaArg::new(C64::new(0.0, 0.0), C64::new(1.0, 0.0)).is_err());
    }

    #[test]
    fn wy_ratio_quoted_value() {
        let r = wy_ratio(0.5, 0.0, 1.0, 10.0).unwrap();
        assert!((r - 0.7229).abs() < 1e-4);
    }

    #[test]
    fn dawson_values() {
        assert_eq!(dawson(0.0), 0.0);
        assert!((dawson(1.0) - 0.538_079_506_912_768_4).abs() < 1e-12);
    }

    #[test]
    fn ln_cosh_large() {
        assert!((ln_cosh(5000.0) - (5000.0 - std::f64::consts::LN_2)).abs() < 1e-12);
        assert!((ln_cosh(0.3) - 0.3f64.cosh().ln()).abs() < 1e-15);
    }

    #[test]
    fn ground_energy_two_level() {
        let betas = plateau_grid(40.0);
        let s = PartitionSeries::sample(&betas, |b| Ok(ln_cosh(b * 2.0) + std::f64::consts::LN_2))
            .unwrap();
        assert!((ground_energy(&s).unwrap() + 2.0).abs() < 1e-6);
    }
}
