//! Two-source Huygens model of a double-slit screen pattern and extraction of
//! the relative phase β between the two slit waves.

use std::f64::consts::PI;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Cylindrical waves from slits at ±s, a distance D from the screen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct HuygensModel {
    pub k: f64,
    pub distance: f64,
    pub half_separation: f64,
    pub amplitude: f64,
    pub beta: f64,
}

/// |ψ_R + e^{iβ}ψ_L|² with ψ_{R,L} = A e^{ikr}/√r and r_{R,L} = √(D² + (y ∓ s)²).
pub fn model_intensity(m: &HuygensModel, y: f64) -> f64 {
    m.amplitude * m.amplitude * unit_intensity(m.k, m.distance, m.half_separation, m.beta, y)
}

fn unit_intensity(k: f64, d: f64, s: f64, beta: f64, y: f64) -> f64 {
    let rr = (d * d + (y - s).powi(2)).sqrt();
    let rl = (d * d + (y + s).powi(2)).sqrt();
    let psi = C64::from_polar(1.0 / rr.sqrt(), k * rr) + C64::from_polar(1.0 / rl.sqrt(), k * rl + beta);
    psi.norm_sqr()
}

/// Geometry and search settings for [`fit_beta`].
#[derive(Clone, Debug, PartialEq)]
pub struct FitOptions {
    pub k: f64,
    pub distance: f64,
    pub half_separation: f64,
    /// Degree of the polynomial envelope multiplying the model (0 = constant amplitude).
    pub envelope_degree: usize,
    /// Points of the uniform β scan over [0, 2π).
    pub beta_points: usize,
    /// Optional (k_min, k_max, count) scan replacing the fixed k.
    pub k_scan: Option<(f64, f64, usize)>,
    /// Only samples above this fraction of the peak intensity are fitted.
    pub threshold: f64,
}

impl FitOptions {
    pub fn new(k: f64, distance: f64, half_separation: f64) -> Self {
        Self {
            k,
            distance,
            half_separation,
            envelope_degree: 2,
            beta_points: 720,
            k_scan: None,
            threshold: 0.02,
        }
    }
}

/// Best-fit phase and diagnostics.
#[derive(Clone, Debug, PartialEq)]
pub struct FitResult {
    /// β in [0, 2π).
    pub beta: f64,
    pub k: f64,
    /// Envelope polynomial coefficients in powers of y/y_scale.
    pub envelope: Vec<f64>,
    pub y_scale: f64,
    /// ‖model − data‖₂ / ‖data‖₂ over the fitted window.
    pub relative_residual: f64,
    pub window: (f64, f64),
}

impl FitResult {
    pub fn evaluate(&self, opts: &FitOptions, y: f64) -> f64 {
        let u = y / self.y_scale;
        let env: f64 = self.envelope.iter().rev().fold(0.0, |acc, c| acc * u + c);
        env * unit_intensity(self.k, opts.distance, opts.half_separation, self.beta, y)
    }
}

struct Window {
    y: Vec<f64>,
    data: DVector<f64>,
    scale: f64,
}

fn select_window(y: &[f64], profile: &[f64], threshold: f64) -> Result<Window> {
    if y.len() != profile.len() {
        return Err(Error::FitFailure("coordinate and profile lengths differ".into()));
    }
    let peak = profile.iter().cloned().fold(0.0, f64::max);
    if !(peak > 0.0) || !peak.is_finite() {
        return Err(Error::FitFailure("profile is flat or empty".into()));
    }
    let above: Vec<usize> = (0..profile.len()).filter(|&i| profile[i] > threshold * peak).collect();
    let (lo, hi) = (above[0], *above.last().unwrap_or(&above[0]));
    if hi - lo < 10 {
        return Err(Error::FitFailure("fit window holds fewer than ten samples".into()));
    }
    let ys: Vec<f64> = y[lo..=hi].to_vec();
    let scale = ys.iter().fold(0.0f64, |a, v| a.max(v.abs())).max(1e-300);
    Ok(Window { data: DVector::from_column_slice(&profile[lo..=hi]), y: ys, scale })
}

/// Least-squares envelope for fixed (k, β); returns (sum of squared residuals, coefficients).
fn solve_envelope(w: &Window, opts: &FitOptions, k: f64, beta: f64) -> (f64, Vec<f64>) {
    let cols = opts.envelope_degree + 1;
    let base: Vec<f64> = w
        .y
        .iter()
        .map(|&y| unit_intensity(k, opts.distance, opts.half_separation, beta, y))
        .collect();
    let a = DMatrix::from_fn(w.y.len(), cols, |i, j| base[i] * (w.y[i] / w.scale).powi(j as i32));
    let svd = a.clone().svd(true, true);
    match svd.solve(&w.data, 1e-14) {
        Ok(c) => {
            let r = &a * &c - &w.data;
            (r.norm_squared(), c.iter().cloned().collect())
        }
        Err(_) => (f64::INFINITY, vec![0.0; cols]),
    }
}

/// Fits β (and optionally k) by a global scan followed by golden-section refinement.
pub fn fit_beta(y: &[f64], profile: &[f64], opts: &FitOptions) -> Result<FitResult> {
    let w = select_window(y, profile, opts.threshold)?;
    let ks: Vec<f64> = match opts.k_scan {
        Some((lo, hi, n)) if n > 1 => (0..n).map(|i| lo + (hi - lo) * i as f64 / (n - 1) as f64).collect(),
        _ => vec![opts.k],
    };
    let nb = opts.beta_points.max(8);
    let step = 2.0 * PI / nb as f64;
    let mut best = (f64::INFINITY, 0.0, opts.k);
    for &k in &ks {
        for i in 0..nb {
            let b = i as f64 * step;
            let (r, _) = solve_envelope(&w, opts, k, b);
            if r < best.0 {
                best = (r, b, k);
            }
        }
    }
    let (_, b0, k) = best;
    // Golden-section refinement of β within one scan step.
    let f = |b: f64| solve_envelope(&w, opts, k, b).0;
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut a, mut c) = (b0 - step, b0 + step);
    let mut x1 = c - g * (c - a);
    let mut x2 = a + g * (c - a);
    let (mut f1, mut f2) = (f(x1), f(x2));
    for _ in 0..80 {
        if f1 < f2 {
            c = x2;
            x2 = x1;
            f2 = f1;
            x1 = c - g * (c - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (c - a);
            f2 = f(x2);
        }
    }
    let beta = (0.5 * (a + c)).rem_euclid(2.0 * PI);
    let (r, envelope) = solve_envelope(&w, opts, k, beta);
    if !r.is_finite() || envelope.iter().all(|c| *c == 0.0) {
        return Err(Error::FitFailure("degenerate least-squares system".into()));
    }
    Ok(FitResult {
        beta,
        k,
        envelope,
        y_scale: w.scale,
        relative_residual: r.sqrt() / w.data.norm(),
        window: (w.y[0], *w.y.last().unwrap_or(&w.y[0])),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn central_extrema() {
        let m = HuygensModel { k: 1.5, distance: 200.0, half_separation: 24.0, amplitude: 1.0, beta: 0.0 };
        let r = (200.0f64 * 200.0 + 24.0 * 24.0).sqrt();
        assert!((model_intensity(&m, 0.0) - 4.0 / r).abs() < 1e-15);
        let m = HuygensModel { beta: PI, ..m };
        assert!(model_intensity(&m, 0.0) < 1e-30);
    }

    #[test]
    fn round_trip() {
        let m = HuygensModel { k: 1.5, distance: 210.0, half_separation: 24.0, amplitude: 2.0, beta: 1.0 };
        let y: Vec<f64> = (-150..=150).map(|v| v as f64).collect();
        let p: Vec<f64> = y.iter().map(|&v| model_intensity(&m, v)).collect();
        let fit = fit_beta(&y, &p, &FitOptions::new(1.5, 210.0, 24.0)).unwrap();
        assert!((fit.beta - 1.0).abs() < 1e-6);
        assert!(fit.relative_residual < 1e-8);
    }
}
