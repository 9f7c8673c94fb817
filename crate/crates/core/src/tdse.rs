//! Split-operator propagation of a two-component wave packet on a periodic
//! 2D grid, with a smooth double-slit barrier and a vortex Zeeman field.

use std::f64::consts::PI;
use std::sync::Arc;

use num_complex::Complex64 as C64;
use rustfft::{Fft, FftPlanner};

use crate::error::{invalid, Error, Result};
use crate::field::{adiabatic_spinors, zeeman_matrix, VortexField};
use crate::spin::{exp_i_hermitian2, SpinMatrix2};

/// Uniform grid with coordinates (i − n/2)·d.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Grid2D {
    pub nx: usize,
    pub ny: usize,
    pub lx: f64,
    pub ly: f64,
    pub dt: f64,
    pub mass: f64,
}

impl Grid2D {
    pub fn new(nx: usize, ny: usize, lx: f64, ly: f64, dt: f64, mass: f64) -> Result<Self> {
        if !nx.is_power_of_two() || !ny.is_power_of_two() {
            return Err(invalid("nx, ny", "must be powers of two"));
        }
        if !(lx > 0.0 && ly > 0.0) {
            return Err(invalid("lx, ly", "must be positive"));
        }
        if !(dt > 0.0) {
            return Err(invalid("dt", "must be positive"));
        }
        if !(mass > 0.0) {
            return Err(invalid("mass", "must be positive"));
        }
        Ok(Self { nx, ny, lx, ly, dt, mass })
    }

    pub fn dx(&self) -> f64 {
        self.lx / self.nx as f64
    }

    pub fn dy(&self) -> f64 {
        self.ly / self.ny as f64
    }

    pub fn x(&self, i: usize) -> f64 {
        (i as f64 - (self.nx / 2) as f64) * self.dx()
    }

    pub fn y(&self, j: usize) -> f64 {
        (j as f64 - (self.ny / 2) as f64) * self.dy()
    }

    pub fn len(&self) -> usize {
        self.nx * self.ny
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Row-major index, y fastest.
    pub fn idx(&self, i: usize, j: usize) -> usize {
        i * self.ny + j
    }

    fn wavenumbers(n: usize, d: f64) -> Vec<f64> {
        (0..n)
            .map(|i| {
                let k = if i < n / 2 { i as f64 } else { i as f64 - n as f64 };
                2.0 * PI * k / (n as f64 * d)
            })
            .collect()
    }

    pub fn kx(&self) -> Vec<f64> {
        Self::wavenumbers(self.nx, self.dx())
    }

    pub fn ky(&self) -> Vec<f64> {
        Self::wavenumbers(self.ny, self.dy())
    }
}

/// Spin-up and spin-down amplitudes on a grid.
#[derive(Clone, Debug, PartialEq)]
pub struct SpinorField2D {
    pub grid: Grid2D,
    pub up: Vec<C64>,
    pub down: Vec<C64>,
    pub t: f64,
}

impl SpinorField2D {
    pub fn norm_sqr(&self) -> f64 {
        let cell = self.grid.dx() * self.grid.dy();
        self.up.iter().chain(&self.down).map(|c| c.norm_sqr()).sum::<f64>() * cell
    }

    pub fn spin_populations(&self) -> [f64; 2] {
        let cell = self.grid.dx() * self.grid.dy();
        [
            self.up.iter().map(|c| c.norm_sqr()).sum::<f64>() * cell,
            self.down.iter().map(|c| c.norm_sqr()).sum::<f64>() * cell,
        ]
    }

    pub fn density(&self) -> Vec<f64> {
        self.up.iter().zip(&self.down).map(|(u, d)| u.norm_sqr() + d.norm_sqr()).collect()
    }

    /// Density-weighted mean and variance of x over cells with x > x_min.
    pub fn x_moments(&self, x_min: f64) -> (f64, f64, f64) {
        let g = &self.grid;
        let (mut w, mut sx, mut sxx) = (0.0, 0.0, 0.0);
        for i in 0..g.nx {
            let x = g.x(i);
            if x <= x_min {
                continue;
            }
            let row: f64 = (0..g.ny)
                .map(|j| {
                    let k = g.idx(i, j);
                    self.up[k].norm_sqr() + self.down[k].norm_sqr()
                })
                .sum();
            w += row;
            sx += row * x;
            sxx += row * x * x;
        }
        if w == 0.0 {
            return (0.0, f64::NAN, f64::NAN);
        }
        let mean = sx / w;
        (w * g.dx() * g.dy(), mean, sxx / w - mean * mean)
    }
}

/// Two slits cut in a smooth repulsive wall.
#[derive(Clone, Debug, PartialEq)]
pub struct SlitBarrier {
    pub x_b: f64,
    /// Half-thickness of the wall profile exp(−((x − x_b)/h)⁸).
    pub half_thickness: f64,
    pub slit_centers: [f64; 2],
    /// Half-width of each opening exp(−((y − s)/w)⁸).
    pub slit_width: f64,
    pub height: f64,
}

impl SlitBarrier {
    pub fn validate(&self, grid: &Grid2D) -> Result<()> {
        if !(self.slit_width > 2.0 * grid.dy()) {
            return Err(invalid("slit_width", "must exceed two transverse grid spacings"));
        }
        let gap = (self.slit_centers[0] - self.slit_centers[1]).abs();
        if gap <= 2.0 * self.slit_width {
            return Err(invalid("slit_centers", "slits overlap"));
        }
        if !(self.half_thickness > 0.0) || !(self.height >= 0.0) {
            return Err(invalid("barrier", "thickness must be positive and height nonnegative"));
        }
        Ok(())
    }

    pub fn potential(&self, x: f64, y: f64) -> f64 {
        let wall = (-((x - self.x_b) / self.half_thickness).powi(8)).exp();
        let open: f64 = self
            .slit_centers
            .iter()
            .map(|s| (-((y - s) / self.slit_width).powi(8)).exp())
            .sum();
        self.height * wall * (1.0 - open).max(0.0)
    }

    /// Half distance between the slits.
    pub fn half_separation(&self) -> f64 {
        0.5 * (self.slit_centers[0] - self.slit_centers[1]).abs()
    }
}

/// Gaussian × local ground adiabatic spinor × exp(iα φ_c), normalized.
///
/// φ_c ∈ [0, 2π) is the polar angle about the vortex center and α its flux
/// charge; the factor makes the mechanical momentum of the packet equal to k₀x̂.
pub fn init_packet(
    grid: &Grid2D,
    field: &VortexField,
    center: [f64; 2],
    sigma: f64,
    k0: f64,
) -> Result<SpinorField2D> {
    if sigma < 3.0 * grid.dx().max(grid.dy()) {
        return Err(invalid("sigma", "packet narrower than three grid cells"));
    }
    let alpha = field.flux_charge();
    let mut up = vec![C64::new(0.0, 0.0); grid.len()];
    let mut down = up.clone();
    for i in 0..grid.nx {
        for j in 0..grid.ny {
            let (x, y) = (grid.x(i), grid.y(j));
            let r2 = (x - center[0]).powi(2) + (y - center[1]).powi(2);
            let phi_c = (y - field.center[1]).atan2(x - field.center[0]).rem_euclid(2.0 * PI);
            let env = C64::from_polar((-r2 / (4.0 * sigma * sigma)).exp(), k0 * x + alpha * phi_c);
            let [g, _] = adiabatic_spinors(field, [x, y])?;
            let k = grid.idx(i, j);
            up[k] = env * g[0];
            down[k] = env * g[1];
        }
    }
    let mut s = SpinorField2D { grid: *grid, up, down, t: 0.0 };
    let n = s.norm_sqr().sqrt();
    for c in s.up.iter_mut().chain(s.down.iter_mut()) {
        *c /= n;
    }
    Ok(s)
}

/// Per-axis absorber profile cos(π/2·(edge − d)/edge)^{1/8} over the
/// outer 10% of the grid, applied once per step.
fn absorber_profile(n: usize, coord: impl Fn(usize) -> f64) -> Vec<f64> {
    let lo = coord(0);
    let hi = coord(n - 1);
    let edge = 0.1 * n as f64 * (coord(1) - lo);
    (0..n)
        .map(|i| {
            let d = (coord(i) - lo).min(hi - coord(i));
            if d < edge {
                (0.5 * PI * (edge - d) / edge).cos().max(0.0).powf(0.125)
            } else {
                1.0
            }
        })
        .collect()
}

/// Precomputed split-operator propagator.
pub struct Stepper {
    grid: Grid2D,
    half_potential: Vec<SpinMatrix2>,
    kinetic: Vec<C64>,
    absorber: Option<(Vec<f64>, Vec<f64>)>,
    fft_x: Arc<dyn Fft<f64>>,
    ifft_x: Arc<dyn Fft<f64>>,
    fft_y: Arc<dyn Fft<f64>>,
    ifft_y: Arc<dyn Fft<f64>>,
    scratch: Vec<C64>,
}

impl std::fmt::Debug for Stepper {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Stepper").field("grid", &self.grid).finish_non_exhaustive()
    }
}

impl Stepper {
    /// `field = None` drops the Zeeman term; `barrier = None` drops the wall.
    pub fn new(
        grid: &Grid2D,
        field: Option<&VortexField>,
        barrier: Option<&SlitBarrier>,
        absorb: bool,
    ) -> Result<Self> {
        if let Some(b) = barrier {
            b.validate(grid)?;
        }
        let mut half_potential = Vec::with_capacity(grid.len());
        for i in 0..grid.nx {
            for j in 0..grid.ny {
                let (x, y) = (grid.x(i), grid.y(j));
                let mut v = match field {
                    Some(f) => zeeman_matrix(f, [x, y])?,
                    None => SpinMatrix2::zero(),
                };
                if let Some(b) = barrier {
                    v = v + SpinMatrix2::identity().scale(C64::new(b.potential(x, y), 0.0));
                }
                half_potential.push(exp_i_hermitian2(&v, -0.5 * grid.dt)?);
            }
        }
        let kx = grid.kx();
        let ky = grid.ky();
        let mut kinetic = Vec::with_capacity(grid.len());
        for a in &kx {
            for b in &ky {
                kinetic.push(C64::from_polar(1.0, -grid.dt * (a * a + b * b) / (2.0 * grid.mass)));
            }
        }
        let absorber = absorb.then(|| {
            (absorber_profile(grid.nx, |i| grid.x(i)), absorber_profile(grid.ny, |j| grid.y(j)))
        });
        let mut planner = FftPlanner::new();
        Ok(Self {
            grid: *grid,
            half_potential,
            kinetic,
            absorber,
            fft_x: planner.plan_fft_forward(grid.nx),
            ifft_x: planner.plan_fft_inverse(grid.nx),
            fft_y: planner.plan_fft_forward(grid.ny),
            ifft_y: planner.plan_fft_inverse(grid.ny),
            scratch: vec![C64::new(0.0, 0.0); grid.nx],
        })
    }

    fn transform(&mut self, data: &mut [C64], forward: bool) {
        let g = self.grid;
        let (fy, fx) = if forward {
            (&self.fft_y, &self.fft_x)
        } else {
            (&self.ifft_y, &self.ifft_x)
        };
        fy.process(data);
        for j in 0..g.ny {
            for i in 0..g.nx {
                self.scratch[i] = data[i * g.ny + j];
            }
            fx.process(&mut self.scratch);
            for i in 0..g.nx {
                data[i * g.ny + j] = self.scratch[i];
            }
        }
    }

    fn apply_potential(&self, s: &mut SpinorField2D) {
        for (k, m) in self.half_potential.iter().enumerate() {
            let [u, d] = m.apply([s.up[k], s.down[k]]);
            s.up[k] = u;
            s.down[k] = d;
        }
    }

    fn apply_kinetic(&mut self, s: &mut SpinorField2D) {
        let scale = 1.0 / self.grid.len() as f64;
        for comp in [&mut s.up, &mut s.down] {
            self.transform(comp, true);
            for (c, k) in comp.iter_mut().zip(&self.kinetic) {
                *c *= k * scale;
            }
            self.transform(comp, false);
        }
    }

    /// One Strang step without the absorber.
    pub fn step_unitary(&mut self, s: &mut SpinorField2D) {
        self.apply_potential(s);
        self.apply_kinetic(s);
        self.apply_potential(s);
        s.t += self.grid.dt;
    }

    /// One Strang step followed by the boundary absorber; fails on non-finite amplitudes.
    pub fn step(&mut self, s: &mut SpinorField2D) -> Result<()> {
        self.step_unitary(s);
        if let Some((ax, ay)) = &self.absorber {
            let g = self.grid;
            for i in 0..g.nx {
                for j in 0..g.ny {
                    let f = ax[i] * ay[j];
                    let k = g.idx(i, j);
                    s.up[k] *= f;
                    s.down[k] *= f;
                }
            }
        }
        if s.up.iter().chain(&s.down).any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::Simulation(format!("non-finite amplitude at t={}", s.t)));
        }
        Ok(())
    }

    /// Kinetic energy ⟨p²/2m⟩.
    pub fn kinetic_energy(&mut self, s: &SpinorField2D) -> f64 {
        let g = self.grid;
        let kx = g.kx();
        let ky = g.ky();
        let mut total = 0.0;
        let mut norm = 0.0;
        for comp in [&s.up, &s.down] {
            let mut buf = comp.clone();
            self.transform(&mut buf, true);
            for i in 0..g.nx {
                for j in 0..g.ny {
                    let p = buf[g.idx(i, j)].norm_sqr();
                    total += p * (kx[i] * kx[i] + ky[j] * ky[j]) / (2.0 * g.mass);
                    norm += p;
                }
            }
        }
        total / norm
    }
}

/// Mean wavevector ⟨k_x⟩, ⟨k_y⟩ from the spectral first moment.
pub fn mean_wavevector(stepper: &mut Stepper, s: &SpinorField2D) -> [f64; 2] {
    let g = s.grid;
    let kx = g.kx();
    let ky = g.ky();
    let (mut ax, mut ay, mut n) = (0.0, 0.0, 0.0);
    for comp in [&s.up, &s.down] {
        let mut buf = comp.clone();
        stepper.transform(&mut buf, true);
        for i in 0..g.nx {
            for j in 0..g.ny {
                let p = buf[g.idx(i, j)].norm_sqr();
                ax += p * kx[i];
                ay += p * ky[j];
                n += p;
            }
        }
    }
    [ax / n, ay / n]
}

/// ⟨V⟩ including Zeeman and barrier terms.
pub fn potential_energy(
    s: &SpinorField2D,
    field: Option<&VortexField>,
    barrier: Option<&SlitBarrier>,
) -> Result<f64> {
    let g = s.grid;
    let mut total = 0.0;
    let mut norm = 0.0;
    for i in 0..g.nx {
        for j in 0..g.ny {
            let (x, y) = (g.x(i), g.y(j));
            let k = g.idx(i, j);
            let v = [s.up[k], s.down[k]];
            let mut e = 0.0;
            if let Some(f) = field {
                let hv = zeeman_matrix(f, [x, y])?.apply(v);
                e += (v[0].conj() * hv[0] + v[1].conj() * hv[1]).re;
            }
            let p = v[0].norm_sqr() + v[1].norm_sqr();
            if let Some(b) = barrier {
                e += b.potential(x, y) * p;
            }
            total += e;
            norm += p;
        }
    }
    Ok(total / norm)
}

/// Full configuration of a two-slit run.
#[derive(Clone, Debug, PartialEq)]
pub struct DoubleSlitConfig {
    pub grid: Grid2D,
    pub theta: f64,
    pub delta: f64,
    /// Transverse position of the vortex on the barrier plane.
    pub vortex_offset: f64,
    pub k0: f64,
    pub sigma: f64,
    pub x0: f64,
    pub barrier: SlitBarrier,
    pub x_screen: f64,
    pub check_every: usize,
    pub t_max: f64,
}

impl DoubleSlitConfig {
    /// 512² grid with unit spacing, slits at ±24 and the screen 210 past the wall.
    pub fn desk_scale(theta: f64) -> Self {
        let grid = Grid2D { nx: 512, ny: 512, lx: 512.0, ly: 512.0, dt: 0.1, mass: 1.0 };
        let k0 = 1.5;
        Self {
            grid,
            theta,
            delta: 1.0,
            vortex_offset: 0.0,
            k0,
            sigma: 20.0,
            x0: -150.0,
            barrier: SlitBarrier {
                x_b: -60.0,
                half_thickness: 3.0,
                slit_centers: [24.0, -24.0],
                slit_width: 4.0,
                height: 60.0 * 0.5 * k0 * k0,
            },
            x_screen: 150.0,
            check_every: 20,
            t_max: 1000.0,
        }
    }

    /// Vortex shifted by half a cell off the grid nodes.
    pub fn field(&self) -> VortexField {
        let h = [0.5 * self.grid.dx(), 0.5 * self.grid.dy()];
        VortexField::from_gap(
            self.delta,
            self.theta,
            [self.barrier.x_b + h[0], self.vortex_offset + h[1]],
        )
    }

    /// Barrier-to-screen distance.
    pub fn screen_distance(&self) -> f64 {
        self.x_screen - self.barrier.x_b
    }
}

/// Spin-summed intensity along the screen line.
#[derive(Clone, Debug, PartialEq)]
pub struct ScreenRecord {
    pub x_screen: f64,
    pub y: Vec<f64>,
    pub profile: Vec<f64>,
    pub t_final: f64,
    pub steps: usize,
}

/// Propagates until the transmitted centroid reaches the screen and records the profile there.
pub fn run_double_slit(cfg: &DoubleSlitConfig) -> Result<ScreenRecord> {
    let field = cfg.field();
    let g = cfg.grid;
    let mut state = init_packet(&g, &field, [cfg.x0, 0.0], cfg.sigma, cfg.k0)?;
    let mut stepper = Stepper::new(&g, Some(&field), Some(&cfg.barrier), true)?;
    let every = cfg.check_every.max(1);
    let mut steps = 0usize;
    loop {
        stepper.step(&mut state)?;
        steps += 1;
        if steps % every == 0 {
            let (_, cx, _) = state.x_moments(cfg.barrier.x_b + 10.0);
            if cx >= cfg.x_screen {
                break;
            }
        }
        if state.t > cfg.t_max {
            return Err(Error::Simulation(format!(
                "packet did not reach the screen by t={}",
                cfg.t_max
            )));
        }
    }
    let is = (0..g.nx)
        .min_by(|&a, &b| (g.x(a) - cfg.x_screen).abs().total_cmp(&(g.x(b) - cfg.x_screen).abs()))
        .unwrap_or(0);
    let y = (0..g.ny).map(|j| g.y(j)).collect();
    let profile = (0..g.ny)
        .map(|j| {
            let k = g.idx(is, j);
            state.up[k].norm_sqr() + state.down[k].norm_sqr()
        })
        .collect();
    Ok(ScreenRecord { x_screen: g.x(is), y, profile, t_final: state.t, steps })
}
