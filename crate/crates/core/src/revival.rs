//! Spin-1/2 rotor threaded by a Wu-Yang tube: exact mode propagation,
//! wave-packet revivals, and the effective flux charges of a wire trap.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use rustfft::FftPlanner;

use crate::error::{invalid, Error, Result};

/// Spinor amplitudes c_{m,s} for modes m ∈ [−K, K] and σ₃ = ±1.
#[derive(Clone, Debug, PartialEq)]
pub struct RotorState {
    pub k_max: i64,
    /// Index 0 is spin up (σ₃ = +1), index 1 spin down.
    pub coeffs: [Vec<C64>; 2],
    pub inertia: f64,
    pub alpha: f64,
    pub hbar: f64,
}

impl RotorState {
    /// Gaussian packet of angular width `sigma` centered at `phi0` with mean
    /// momentum `m0`, split between the spins by `spin` amplitudes.
    pub fn gaussian(
        k_max: i64,
        phi0: f64,
        sigma: f64,
        m0: f64,
        spin: [C64; 2],
        inertia: f64,
        alpha: f64,
    ) -> Result<Self> {
        if !(sigma > 0.0) {
            return Err(invalid("sigma", "must be positive"));
        }
        let base: Vec<C64> = (-k_max..=k_max)
            .map(|m| {
                let d = m as f64 - m0;
                C64::from_polar((-0.5 * d * d * sigma * sigma).exp(), -(m as f64) * phi0)
            })
            .collect();
        let spin_norm = (spin[0].norm_sqr() + spin[1].norm_sqr()).sqrt();
        if spin_norm == 0.0 {
            return Err(invalid("spin", "zero spinor"));
        }
        let base_norm = base.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
        let comp = |a: C64| base.iter().map(|c| c * a / (base_norm * spin_norm)).collect();
        Ok(Self { k_max, coeffs: [comp(spin[0]), comp(spin[1])], inertia, alpha, hbar: 1.0 })
    }

    pub fn norm_sqr(&self) -> f64 {
        self.coeffs.iter().flatten().map(|c| c.norm_sqr()).sum()
    }

    fn modes(&self) -> impl Iterator<Item = i64> {
        -self.k_max..=self.k_max
    }

    /// ⟨self_s|other_s⟩ for each spin.
    pub fn spin_overlaps(&self, other: &RotorState) -> [C64; 2] {
        let dot = |a: &[C64], b: &[C64]| a.iter().zip(b).map(|(x, y)| x.conj() * y).sum();
        [dot(&self.coeffs[0], &other.coeffs[0]), dot(&self.coeffs[1], &other.coeffs[1])]
    }

    pub fn overlap(&self, other: &RotorState) -> C64 {
        let [a, b] = self.spin_overlaps(other);
        a + b
    }

    /// Circular centroid arg⟨e^{iφ}⟩ of each spin component.
    pub fn centroids(&self) -> [f64; 2] {
        let c = |v: &[C64]| -> f64 {
            let s: C64 = v.windows(2).map(|w| w[1].conj() * w[0]).sum();
            s.arg()
        };
        [c(&self.coeffs[0]), c(&self.coeffs[1])]
    }

    /// Spin-summed density on `n` equally spaced angles in [0, 2π).
    pub fn density(&self, n: usize) -> Result<Vec<f64>> {
        let len = 2 * self.k_max as usize + 1;
        if n < len {
            return Err(invalid("n", "grid must resolve every mode"));
        }
        let mut planner = FftPlanner::new();
        let fft = planner.plan_fft_inverse(n);
        let mut total = vec![0.0; n];
        for comp in &self.coeffs {
            let mut buf = vec![C64::new(0.0, 0.0); n];
            for (m, c) in self.modes().zip(comp) {
                buf[m.rem_euclid(n as i64) as usize] = *c;
            }
            fft.process(&mut buf);
            for (t, v) in total.iter_mut().zip(&buf) {
                *t += v.norm_sqr() / (2.0 * PI);
            }
        }
        Ok(total)
    }
}

/// Evolves every mode by exp(−iħ(m − ασ₃)²t/2I).
///
/// Phases are reduced modulo 2π in units of the revival period 4πI/ħ so that
/// commensurate times stay exact in binary arithmetic.
pub fn rotor_propagate(state: &RotorState, t: f64) -> RotorState {
    let tau = state.hbar * t / (4.0 * PI * state.inertia);
    let mut out = state.clone();
    for (s, sign) in [(0usize, 1.0), (1usize, -1.0)] {
        for (m, c) in state.modes().zip(out.coeffs[s].iter_mut()) {
            let k = m as f64 - state.alpha * sign;
            let turns = (k * k * tau).rem_euclid(1.0);
            *c *= C64::from_polar(1.0, -2.0 * PI * turns);
        }
    }
    out
}

/// Rational flux charge num/den in lowest terms.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct RationalCharge {
    pub num: i64,
    pub den: i64,
}

impl RationalCharge {
    pub fn new(num: i64, den: i64) -> Result<Self> {
        if den <= 0 {
            return Err(invalid("den", "must be positive"));
        }
        let g = gcd(num.abs(), den);
        Ok(Self { num: num / g.max(1), den: den / g.max(1) })
    }

    pub fn value(self) -> f64 {
        self.num as f64 / self.den as f64
    }

    /// Smallest N with 4πNα ≡ 0 mod 2π: p/2 for even p, p for odd p.
    pub fn revival_index(self) -> i64 {
        if self.num == 0 {
            1
        } else if self.den % 2 == 0 {
            self.den / 2
        } else {
            self.den
        }
    }
}

fn gcd(a: i64, b: i64) -> i64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

/// Outcome of propagating a packet to its first full revival.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct RevivalReport {
    pub n_star: i64,
    pub t_revival: f64,
    /// Angular displacement 4πN*α of each spin component (a multiple of 2π).
    pub displacement: f64,
    /// Winding number of that displacement.
    pub winding: i64,
    /// |⟨ψ₀|ψ(t)⟩|.
    pub fidelity: f64,
    /// arg⟨ψ₀,s|ψ_s(t)⟩ per spin, raw.
    pub raw_phases: [f64; 2],
    /// Per-spin phases after removing the common factor exp(−iħα²t/2I).
    pub spin_phases: [f64; 2],
    /// Wilson-loop argument 2π·winding·α.
    pub wilson_argument: f64,
    /// True when p is odd and N* = p is used.
    pub odd_denominator: bool,
}

fn wrap(x: f64) -> f64 {
    let y = x.rem_euclid(2.0 * PI);
    if y > PI {
        y - 2.0 * PI
    } else {
        y
    }
}

/// Propagates `state` to t = 4πIN*/ħ and measures the revival.
pub fn revival_analysis(state: &RotorState, charge: RationalCharge) -> Result<RevivalReport> {
    if (charge.value() - state.alpha).abs() > 1e-15 {
        return Err(invalid("charge", "does not match the state's flux charge"));
    }
    let n_star = charge.revival_index();
    let t = 4.0 * PI * state.inertia * n_star as f64 / state.hbar;
    let evolved = rotor_propagate(state, t);
    let ov = state.spin_overlaps(&evolved);
    let dynamical = -state.hbar * state.alpha * state.alpha * t / (2.0 * state.inertia);
    let raw = [ov[0].arg(), ov[1].arg()];
    let displacement = 4.0 * PI * n_star as f64 * state.alpha;
    let winding = (displacement / (2.0 * PI)).round() as i64;
    Ok(RevivalReport {
        n_star,
        t_revival: t,
        displacement,
        winding,
        fidelity: state.overlap(&evolved).norm(),
        raw_phases: raw,
        spin_phases: [wrap(raw[0] - dynamical), wrap(raw[1] - dynamical)],
        wilson_argument: 2.0 * PI * winding as f64 * state.alpha,
        odd_denominator: charge.den % 2 == 1,
    })
}

/// Rejects flux charges that are not (close to) rational with a small denominator.
pub fn rational_approximation(alpha: f64, max_den: i64) -> Result<RationalCharge> {
    for den in 1..=max_den {
        let num = (alpha * den as f64).round();
        if (num / den as f64 - alpha).abs() < 1e-14 {
            return RationalCharge::new(num as i64, den);
        }
    }
    Err(Error::NonConvergence(format!(
        "flux charge {alpha} has no denominator ≤ {max_den}; the motion is quasi-periodic"
    )))
}

/// Rotor ion in the field of a straight wire plus a uniform bias.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TrapModel {
    pub b0: f64,
    pub current: f64,
    pub rho0: f64,
    pub charge: f64,
    pub mu0: f64,
    pub c_light: f64,
    pub hbar: f64,
}

impl TrapModel {
    pub fn new(b0: f64, current: f64, rho0: f64, charge: f64) -> Result<Self> {
        if !(rho0 > 0.0) {
            return Err(invalid("rho0", "must be positive"));
        }
        Ok(Self { b0, current, rho0, charge, mu0: 1.0, c_light: 1.0, hbar: 1.0 })
    }

    /// cos θ(ρ₀) = B₀/√(B₀² + (μ₀I/2πρ₀)²), taken as 1 when both fields vanish.
    pub fn cos_theta(&self) -> f64 {
        let b_wire = self.mu0 * self.current / (2.0 * PI * self.rho0);
        let norm = self.b0.hypot(b_wire);
        if norm == 0.0 {
            1.0
        } else {
            self.b0 / norm
        }
    }

    /// Φ = B₀πρ₀².
    pub fn flux(&self) -> f64 {
        self.b0 * PI * self.rho0 * self.rho0
    }

    fn flux_term(&self) -> f64 {
        self.charge * self.flux() / (self.hbar * PI * self.c_light)
    }
}

/// Diagonal charges ((cos θ − 1 + qΦ/ħπc)/2, (1 − cos θ + qΦ/ħπc)/2).
pub fn trap_effective_gauge(model: &TrapModel) -> [f64; 2] {
    let c = model.cos_theta();
    let f = model.flux_term();
    [0.5 * (c - 1.0 + f), 0.5 * (1.0 - c + f)]
}

/// Bias flux Φ at which the upper charge vanishes, cos θ(ρ₀) − 1 + qΦ/ħπc = 0.
///
/// The residual increases monotonically with B₀ ≥ 0 for q > 0, so the root is
/// bracketed by doubling and refined by bisection.
pub fn tune_bias_for_free_upper(model: &TrapModel) -> Result<f64> {
    let residual = |b0: f64| {
        let m = TrapModel { b0, ..*model };
        m.cos_theta() - 1.0 + m.flux_term()
    };
    if model.current == 0.0 {
        return Ok(0.0);
    }
    if !(model.charge > 0.0) {
        return Err(Error::NonConvergence("upper charge cannot vanish for q ≤ 0".into()));
    }
    let mut hi = 1.0;
    let mut steps = 0;
    while residual(hi) < 0.0 {
        hi *= 2.0;
        steps += 1;
        if steps > 2000 {
            return Err(Error::NonConvergence("no sign change in the bias bracket".into()));
        }
    }
    let mut lo = 0.0;
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if residual(mid) < 0.0 {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    let b0 = 0.5 * (lo + hi);
    Ok(TrapModel { b0, ..*model }.flux())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn packet(alpha: f64) -> RotorState {
        RotorState::gaussian(64, 0.4, 0.3, 2.0, [C64::new(0.6, 0.0), C64::new(0.0, 0.8)], 1.0, alpha)
            .unwrap()
    }

    #[test]
    fn free_revival_is_exact() {
        let s = packet(0.0);
        let t = rotor_propagate(&s, 4.0 * PI);
        assert!((s.overlap(&t).norm() - 1.0).abs() < 1e-13);
        assert!((t.norm_sqr() - 1.0).abs() < 1e-13);
    }

    #[test]
    fn revival_indices() {
        assert_eq!(RationalCharge::new(1, 4).unwrap().revival_index(), 2);
        assert_eq!(RationalCharge::new(1, 2).unwrap().revival_index(), 1);
        assert_eq!(RationalCharge::new(1, 3).unwrap().revival_index(), 3);
        assert!(rational_approximation(2f64.sqrt() - 1.0, 64).is_err());
    }

    #[test]
    fn trap_limits() {
        let m = TrapModel::new(1.0, 0.0, 1.0, 0.0).unwrap();
        assert_eq!(trap_effective_gauge(&m), [0.0, 0.0]);
        let m = TrapModel::new(0.0, 1.0, 1.0, 1.0).unwrap();
        let [u, d] = trap_effective_gauge(&m);
        assert!((u + 0.5).abs() < 1e-15 && (d - 0.5).abs() < 1e-15);
        assert_eq!(tune_bias_for_free_upper(&TrapModel::new(0.0, 0.0, 1.0, 1.0).unwrap()).unwrap(), 0.0);
    }
}
