//! Vortex magnetic fields, their Zeeman coupling, adiabatic frames and the
//! Wu-Yang flux-tube potential.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::error::{invalid, Error, Result};
use crate::spin::SpinMatrix2;

/// Distances below this count as "at the vortex center".
const CENTER_EPS: f64 = 1e-300;

/// Azimuthal field of constant magnitude around `center` plus a uniform axial field.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct VortexField {
    pub b_rho: f64,
    pub b0: f64,
    pub center: [f64; 2],
    pub mu: f64,
}

impl VortexField {
    pub fn new(b_rho: f64, b0: f64, center: [f64; 2], mu: f64) -> Self {
        Self { b_rho, b0, center, mu }
    }

    /// Field with unit moment whose Zeeman gap is `delta` and mixing angle `theta`.
    pub fn from_gap(delta: f64, theta: f64, center: [f64; 2]) -> Self {
        Self {
            b_rho: delta * theta.sin(),
            b0: delta * theta.cos(),
            center,
            mu: 1.0,
        }
    }

    /// θ = atan2(B_ρ, B₀).
    pub fn mixing_angle(&self) -> f64 {
        self.b_rho.atan2(self.b0)
    }

    /// Half the Zeeman splitting, μ·|B|.
    pub fn gap(&self) -> f64 {
        self.mu.abs() * self.b_rho.hypot(self.b0)
    }

    /// Abelian flux charge (1 − cos θ)/2 seen by the ground adiabatic level.
    pub fn flux_charge(&self) -> f64 {
        0.5 * (1.0 - self.mixing_angle().cos())
    }

    fn offset(&self, r: [f64; 2]) -> Result<(f64, f64, f64)> {
        let dx = r[0] - self.center[0];
        let dy = r[1] - self.center[1];
        let rho = dx.hypot(dy);
        if rho <= CENTER_EPS {
            return Err(Error::SingularPoint { point: r });
        }
        Ok((dx, dy, rho))
    }
}

/// B(r) = B_ρ φ̂ + B₀ ẑ with φ̂ taken about the vortex center.
pub fn field_at(f: &VortexField, r: [f64; 2]) -> Result<[f64; 3]> {
    let (dx, dy, rho) = f.offset(r)?;
    Ok([-f.b_rho * dy / rho, f.b_rho * dx / rho, f.b0])
}

/// μ σ·B(r).
pub fn zeeman_matrix(f: &VortexField, r: [f64; 2]) -> Result<SpinMatrix2> {
    let b = field_at(f, r)?;
    Ok(SpinMatrix2::hermitian(0.0, [f.mu * b[0], f.mu * b[1], f.mu * b[2]]))
}

/// Unit vector along μB, i.e. the direction whose σ-projection is raised in energy.
fn coupling_direction(f: &VortexField, r: [f64; 2]) -> Result<[f64; 3]> {
    let b = field_at(f, r)?;
    let s = f.mu.signum();
    let norm = (b[0] * b[0] + b[1] * b[1] + b[2] * b[2]).sqrt();
    if norm == 0.0 || f.mu == 0.0 {
        return Err(invalid("field", "zero coupling has no adiabatic frame"));
    }
    Ok([s * b[0] / norm, s * b[1] / norm, s * b[2] / norm])
}

/// Ground and excited eigenvectors of the Zeeman matrix at `r`.
///
/// The ground spinor has a real non-negative lower component and the excited
/// spinor a real non-negative upper component, which makes both single-valued
/// functions of position.
pub fn adiabatic_spinors(f: &VortexField, r: [f64; 2]) -> Result<[[C64; 2]; 2]> {
    let [nx, ny, nz] = coupling_direction(f, r)?;
    let ground = if 1.0 + nz > 1e-12 {
        let norm = (2.0 * (1.0 + nz)).sqrt();
        [C64::new(-nx, ny) / norm, C64::new(1.0 + nz, 0.0) / norm]
    } else {
        [C64::new(1.0, 0.0), C64::new(0.0, 0.0)]
    };
    let excited = if 1.0 + nz > 1e-12 {
        let norm = (2.0 * (1.0 + nz)).sqrt();
        [C64::new(1.0 + nz, 0.0) / norm, C64::new(nx, ny) / norm]
    } else {
        [C64::new(0.0, 0.0), C64::new(1.0, 0.0)]
    };
    Ok([ground, excited])
}

/// Predicted two-slit phase π(1 − cos θ), reduced to [0, 2π).
pub fn ab_beta_prediction(theta: f64) -> f64 {
    (PI * (1.0 - theta.cos())).rem_euclid(2.0 * PI)
}

/// Distance between two phases on the circle, in [0, π].
pub fn wrapped_distance(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(2.0 * PI);
    d.min(2.0 * PI - d)
}

/// Wu-Yang flux tube σ₃ α φ̂/ρ located at (x0, 0).
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct WYGauge {
    pub alpha: f64,
    pub x0: f64,
}

/// The two Cartesian components (σ₃A_x, σ₃A_y) of the Wu-Yang potential.
pub fn wy_vector_potential(g: &WYGauge, r: [f64; 2]) -> Result<[SpinMatrix2; 2]> {
    let dx = r[0] - g.x0;
    let dy = r[1];
    let rho2 = dx * dx + dy * dy;
    if rho2.sqrt() <= CENTER_EPS {
        return Err(Error::SingularPoint { point: r });
    }
    let ax = -g.alpha * dy / rho2;
    let ay = g.alpha * dx / rho2;
    let sz = SpinMatrix2::sigma_z();
    Ok([
        sz.scale(C64::new(ax, 0.0)),
        sz.scale(C64::new(ay, 0.0)),
    ])
}

/// Gauge function that maps the shifted tube onto one centered at the origin
/// (valid for x0 < r, single-valued on −π < φ ≤ π).
pub fn gauge_function_inside(alpha: f64, x0: f64, r: f64, phi: f64) -> f64 {
    alpha * phi / 2.0 - alpha * (((r + x0) / (r - x0)) * (phi / 2.0).tan()).atan()
}

/// Gauge function that removes the tube entirely (valid for x0 > r).
pub fn gauge_function_outside(alpha: f64, x0: f64, r: f64, phi: f64) -> f64 {
    -alpha * phi / 2.0 - alpha * (((r + x0) / (r - x0)) * (phi / 2.0).tan()).atan()
}

/// Direction angle of the shifted vortex field on the unit circle, atan2(sin φ, cos φ − x0).
pub fn shifted_vortex_angle(x0: f64, phi: f64) -> f64 {
    phi.sin().atan2(phi.cos() - x0)
}

/// Parameter record shared by the rotor, partition and Wilson-line models.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct GaugeConfig {
    pub inertia: f64,
    pub delta: f64,
    pub theta: f64,
    pub alpha: f64,
    pub q: i64,
    pub gamma: f64,
    pub m_max: usize,
    pub x0: f64,
}

impl Default for GaugeConfig {
    fn default() -> Self {
        Self {
            inertia: 1.0,
            delta: 1.0,
            theta: PI / 2.0,
            alpha: 0.5,
            q: 1,
            gamma: 0.0,
            m_max: 64,
            x0: 0.0,
        }
    }
}

impl GaugeConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.inertia > 0.0) || !self.inertia.is_finite() {
            return Err(invalid("inertia", "must be positive and finite"));
        }
        if self.m_max < 1 {
            return Err(invalid("m_max", "must be at least 1"));
        }
        for (name, v) in [
            ("delta", self.delta),
            ("theta", self.theta),
            ("alpha", self.alpha),
            ("gamma", self.gamma),
            ("x0", self.x0),
        ] {
            if !v.is_finite() {
                return Err(invalid(name, "must be finite"));
            }
        }
        Ok(())
    }

    /// Flux charge (1 − cos θ)/2 implied by the mixing angle.
    pub fn adiabatic_alpha(&self) -> f64 {
        0.5 * (1.0 - self.theta.cos())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::spin::eig2;

    #[test]
    fn field_examples() {
        let f = VortexField::new(1.0, 0.0, [0.0, 0.0], 1.0);
        let b = field_at(&f, [1.0, 0.0]).unwrap();
        assert!((b[0]).abs() < 1e-15 && (b[1] - 1.0).abs() < 1e-15 && b[2] == 0.0);
        let f = VortexField::new(1.0, 1.0, [0.0, 0.0], 1.0);
        let b = field_at(&f, [0.0, 1.0]).unwrap();
        assert!((b[0] + 1.0).abs() < 1e-15 && b[1].abs() < 1e-15 && (b[2] - 1.0).abs() < 1e-15);
        assert!(matches!(
            field_at(&f, [0.0, 0.0]),
            Err(Error::SingularPoint { .. })
        ));
    }

    #[test]
    fn zeeman_gap_is_constant() {
        let f = VortexField::from_gap(1.7, 0.9, [0.3, -0.2]);
        for k in 0..50 {
            let r = [(k as f64 * 0.37).cos() * 2.0, (k as f64 * 0.91).sin() * 3.0];
            let e = eig2(&zeeman_matrix(&f, r).unwrap()).unwrap();
            assert!((e.values[0] + 1.7).abs() < 1e-12);
            assert!((e.values[1] - 1.7).abs() < 1e-12);
        }
    }

    #[test]
    fn ground_spinor_axial_field() {
        let f = VortexField::new(0.0, 2.0, [0.0, 0.0], 1.0);
        let [g, _] = adiabatic_spinors(&f, [1.0, 1.0]).unwrap();
        assert!(g[0].norm() < 1e-15 && (g[1].re - 1.0).abs() < 1e-15);
    }

    #[test]
    fn beta_prediction() {
        assert_eq!(ab_beta_prediction(0.0), 0.0);
        assert!((ab_beta_prediction(PI / 2.0) - PI).abs() < 1e-15);
        assert!((ab_beta_prediction(PI / 3.0) - PI / 2.0).abs() < 1e-15);
    }

    #[test]
    fn wy_potential_on_unit_circle() {
        let g = WYGauge { alpha: 0.3, x0: 0.0 };
        let [ax, ay] = wy_vector_potential(&g, [1.0, 0.0]).unwrap();
        assert!(ax.max_abs_diff(&SpinMatrix2::zero()) < 1e-15);
        assert!(ay.max_abs_diff(&SpinMatrix2::sigma_z().scale(C64::new(0.3, 0.0))) < 1e-15);
    }
}
