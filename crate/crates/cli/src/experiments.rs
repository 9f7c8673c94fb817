//! One function per experiment: validated config in, tables and plots out.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use topogauge_core::boson::{ab_rotor_levels, channel_spectrum, connection_matrix, induced_scalar, FockSpace};
use topogauge_core::field::{ab_beta_prediction, wrapped_distance, GaugeConfig};
use topogauge_core::fringe::{fit_beta, FitOptions};
use topogauge_core::partition::{
    free_rotor_ratio_tilde, ln_z0, ln_z0_tilde, wy_ratio, z_exact_model, z_wy_closed,
};
use topogauge_core::revival::{
    revival_analysis, rotor_propagate, trap_effective_gauge, tune_bias_for_free_upper, RationalCharge,
    RotorState, TrapModel,
};
use topogauge_core::rotor::{
    dense_rotor_diag, exact_spectrum, fig7_grid, fig7_sweep, vortex_potential, Branch, RotorBasis,
};
use topogauge_core::spin1::{fig9_comparison, twolevel_ln_z0, twolevel_partition, twolevel_topological_sum, TwoLevelModel};
use topogauge_core::tdse::{run_double_slit, DoubleSlitConfig, Grid2D};
use topogauge_core::wilson::{adiabatic_product, effective_omega, spacetime_line_closed_form, SpacetimeLoop};

use crate::artifact::{Artifacts, Table};
use crate::config::{ExperimentConfig, ExperimentKind};
use crate::error::CliError;
use crate::svg::{Plot, Series};

type Res<T> = Result<T, CliError>;

pub fn run(cfg: &ExperimentConfig) -> Res<Artifacts> {
    match cfg.kind() {
        ExperimentKind::DoubleSlit => double_slit(cfg),
        ExperimentKind::RotorSpectrum => rotor_spectrum(cfg),
        ExperimentKind::WyPartition => wy_partition(cfg),
        ExperimentKind::ModelPartition => model_partition(cfg),
        ExperimentKind::Wilson => wilson(cfg),
        ExperimentKind::Spin1Fig9 => spin1_fig9(cfg),
        ExperimentKind::AppendixA => appendix_a(cfg),
        ExperimentKind::Revival => revival(cfg),
        ExperimentKind::TrapTune => trap_tune(cfg),
        ExperimentKind::BosonGauge => boson_gauge(cfg),
    }
}

fn positive(cfg: &ExperimentConfig, section: &str, key: &str, v: f64) -> Res<f64> {
    if v > 0.0 && v.is_finite() {
        Ok(v)
    } else {
        Err(cfg.error_at(section, key, format!("must be positive and finite, got {v}")))
    }
}

fn finite(cfg: &ExperimentConfig, section: &str, key: &str, v: f64) -> Res<f64> {
    if v.is_finite() {
        Ok(v)
    } else {
        Err(cfg.error_at(section, key, "must be finite"))
    }
}

fn at_least(cfg: &ExperimentConfig, section: &str, key: &str, v: usize, min: usize) -> Res<usize> {
    if v >= min {
        Ok(v)
    } else {
        Err(cfg.error_at(section, key, format!("must be at least {min}, got {v}")))
    }
}

fn nonempty(cfg: &ExperimentConfig, key: &str, v: Vec<f64>) -> Res<Vec<f64>> {
    if v.is_empty() {
        return Err(cfg.error_at("physics", key, "must not be empty"));
    }
    for x in &v {
        finite(cfg, "physics", key, *x)?;
    }
    Ok(v)
}

pub fn linspace(a: f64, b: f64, n: usize) -> Vec<f64> {
    if n < 2 {
        return vec![a];
    }
    (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect()
}

fn beta_grid(cfg: &ExperimentConfig, min: f64, max: f64, points: usize) -> Res<Vec<f64>> {
    let g = &cfg.grid;
    let lo = positive(cfg, "grid", "beta_min", g.beta_min.unwrap_or(min))?;
    let hi = positive(cfg, "grid", "beta_max", g.beta_max.unwrap_or(max))?;
    if hi <= lo {
        return Err(cfg.error_at("grid", "beta_max", "must exceed beta_min"));
    }
    let n = at_least(cfg, "grid", "beta_points", g.beta_points.unwrap_or(points), 2)?;
    Ok(linspace(lo, hi, n))
}

fn inertia(cfg: &ExperimentConfig) -> Res<f64> {
    positive(cfg, "physics", "inertia", cfg.physics.inertia.unwrap_or(1.0))
}

/// Fitted and predicted two-slit phase for one screen record.
#[derive(Clone, Debug)]
pub struct FringeSummary {
    pub beta_fit: f64,
    pub beta_predicted: f64,
    pub regime: &'static str,
    pub residual: f64,
    pub k_fit: f64,
}

/// Regime label and predicted phase: zero when the vortex lies outside both
/// slits or when the kinetic energy exceeds 100 × 2Δ.
pub fn predicted_phase(ds: &DoubleSlitConfig) -> (&'static str, f64) {
    let half = ds.barrier.half_separation();
    let energy = 0.5 * ds.k0 * ds.k0 / ds.grid.mass;
    if ds.vortex_offset.abs() > half {
        ("vortex-outside", 0.0)
    } else if energy > 200.0 * ds.delta {
        ("diabatic", 0.0)
    } else {
        ("adiabatic", ab_beta_prediction(ds.theta))
    }
}

pub fn double_slit_config(cfg: &ExperimentConfig) -> Res<DoubleSlitConfig> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let theta = finite(cfg, "physics", "theta", p.theta.unwrap_or(PI / 2.0))?;
    let mut ds = DoubleSlitConfig::desk_scale(theta);
    ds.delta = positive(cfg, "physics", "delta", p.delta.unwrap_or(ds.delta))?;
    ds.vortex_offset = finite(cfg, "physics", "vortex_offset", p.vortex_offset.unwrap_or(0.0))?;
    ds.k0 = positive(cfg, "physics", "k0", p.k0.unwrap_or(ds.k0))?;
    ds.sigma = positive(cfg, "physics", "sigma", p.sigma.unwrap_or(ds.sigma))?;
    let mass = positive(cfg, "physics", "mass", p.mass.unwrap_or(1.0))?;
    let n = g.n.unwrap_or(ds.grid.nx);
    if n < 16 || !n.is_power_of_two() {
        return Err(cfg.error_at("grid", "n", format!("must be a power of two ≥ 16, got {n}")));
    }
    let length = positive(cfg, "grid", "length", g.length.unwrap_or(n as f64))?;
    let dt = positive(cfg, "grid", "dt", g.dt.unwrap_or(ds.grid.dt))?;
    ds.grid = Grid2D::new(n, n, length, length, dt, mass)?;
    let h = length / n as f64;
    let half = 0.5 * length;
    let inside = |key: &str, v: f64| -> Res<f64> {
        let v = finite(cfg, "grid", key, v)?;
        if v.abs() >= half {
            return Err(cfg.error_at("grid", key, format!("must lie inside the box |x| < {half}")));
        }
        Ok(v)
    };
    ds.x0 = inside("x_start", g.x_start.unwrap_or(ds.x0))?;
    ds.barrier.x_b = inside("barrier_x", g.barrier_x.unwrap_or(ds.barrier.x_b))?;
    ds.x_screen = inside("screen_x", g.screen_x.unwrap_or(ds.x_screen))?;
    if !(ds.x0 < ds.barrier.x_b && ds.barrier.x_b < ds.x_screen) {
        return Err(cfg.error_at("grid", "barrier_x", "need x_start < barrier_x < screen_x"));
    }
    ds.barrier.half_thickness =
        positive(cfg, "grid", "barrier_half_thickness", g.barrier_half_thickness.unwrap_or(ds.barrier.half_thickness))?;
    ds.barrier.height = positive(cfg, "grid", "barrier_height", g.barrier_height.unwrap_or(60.0 * 0.5 * ds.k0 * ds.k0))?;
    let s = positive(cfg, "grid", "slit_center", g.slit_center.unwrap_or(ds.barrier.slit_centers[0]))?;
    ds.barrier.slit_centers = [s, -s];
    ds.barrier.slit_width = positive(cfg, "grid", "slit_half_width", g.slit_half_width.unwrap_or(ds.barrier.slit_width))?;
    if ds.barrier.slit_width <= 2.0 * h {
        return Err(cfg.error_at("grid", "slit_half_width", format!("must exceed two grid spacings ({})", 2.0 * h)));
    }
    if 2.0 * s <= 2.0 * ds.barrier.slit_width {
        return Err(cfg.error_at("grid", "slit_center", "slits overlap"));
    }
    if ds.sigma < 3.0 * h {
        return Err(cfg.error_at("physics", "sigma", "packet narrower than three grid cells"));
    }
    ds.t_max = positive(cfg, "grid", "t_max", g.t_max.unwrap_or(ds.t_max))?;
    Ok(ds)
}

/// Screen profile and phase fit for one configuration.
pub fn double_slit_fringe(ds: &DoubleSlitConfig) -> Res<(topogauge_core::tdse::ScreenRecord, FitOptions, topogauge_core::fringe::FitResult, FringeSummary)> {
    let rec = run_double_slit(ds)?;
    let mut opts = FitOptions::new(ds.k0, rec.x_screen - ds.barrier.x_b, ds.barrier.half_separation());
    opts.k_scan = Some((ds.k0 * 1.4 / 1.5, ds.k0 * 1.65 / 1.5, 26));
    let fit = fit_beta(&rec.y, &rec.profile, &opts)?;
    let (regime, beta_predicted) = predicted_phase(ds);
    let summary = FringeSummary {
        beta_fit: fit.beta,
        beta_predicted,
        regime,
        residual: fit.relative_residual,
        k_fit: fit.k,
    };
    Ok((rec, opts, fit, summary))
}

fn double_slit(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let ds = double_slit_config(cfg)?;
    let (rec, opts, fit, sum) = double_slit_fringe(&ds)?;
    let mut art = Artifacts::default();
    let mut screen = Table::new("screen", &[("y", "length"), ("intensity", "1/length^2")]);
    for (y, p) in rec.y.iter().zip(&rec.profile) {
        screen.push(vec![(*y).into(), (*p).into()]);
    }
    let mut fit_t = Table::new("fit", &[("y", "length"), ("data", "1/length^2"), ("model", "1/length^2")]);
    for (y, p) in rec.y.iter().zip(&rec.profile) {
        if *y >= fit.window.0 && *y <= fit.window.1 {
            fit_t.push(vec![(*y).into(), (*p).into(), fit.evaluate(&opts, *y).into()]);
        }
    }
    let err = wrapped_distance(sum.beta_fit, sum.beta_predicted);
    let mut s = Table::new(
        "fit_summary",
        &[
            ("theta", "rad"),
            ("delta", "energy"),
            ("vortex_offset", "length"),
            ("regime", "-"),
            ("beta_fit", "rad"),
            ("beta_predicted", "rad"),
            ("beta_error", "rad"),
            ("residual", "1"),
            ("k_fit", "1/length"),
            ("t_final", "time"),
        ],
    );
    s.push(vec![
        ds.theta.into(),
        ds.delta.into(),
        ds.vortex_offset.into(),
        sum.regime.into(),
        sum.beta_fit.into(),
        sum.beta_predicted.into(),
        err.into(),
        sum.residual.into(),
        sum.k_fit.into(),
        rec.t_final.into(),
    ]);
    if err > 0.2 {
        art.warnings.push(format!("fitted phase {:.4} is {err:.3} rad from the prediction {:.4}", sum.beta_fit, sum.beta_predicted));
    }
    if sum.residual > 0.3 {
        art.warnings.push(format!("fringe model residual {:.3} is large", sum.residual));
    }
    art.plots.push(
        Plot::new("screen", &format!("Screen profile, theta = {:.4}, beta = {:.3}", ds.theta, sum.beta_fit), "y", "intensity")
            .with(Series::new("simulation", rec.y.iter().cloned().zip(rec.profile.iter().cloned()).collect()))
            .with(Series::new("two-source fit", fit_t.rows.iter().map(|r| (num(&r[0]), num(&r[2]))).collect()).dashed()),
    );
    art.tables.extend([screen, fit_t, s]);
    Ok(art)
}

fn num(c: &crate::artifact::Cell) -> f64 {
    match c {
        crate::artifact::Cell::Num(v) => *v,
        crate::artifact::Cell::Int(v) => *v as f64,
        crate::artifact::Cell::Text(_) => f64::NAN,
    }
}

fn rotor_spectrum(cfg: &ExperimentConfig) -> Res<Artifacts> {
    match cfg.variant().unwrap_or("levels") {
        "x0-sweep" => rotor_x0_sweep(cfg),
        _ => rotor_levels(cfg),
    }
}

fn rotor_levels(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let i = inertia(cfg)?;
    let delta = finite(cfg, "physics", "delta", p.delta.unwrap_or(1.0))?;
    let theta = finite(cfg, "physics", "theta", p.theta.unwrap_or(PI / 2.0))?;
    let m_max = at_least(cfg, "grid", "m_max", g.m_max.unwrap_or(10), 1)?;
    let basis_m = at_least(cfg, "grid", "basis_m_max", g.basis_m_max.unwrap_or(48), m_max + 4)?;
    let n_levels = at_least(cfg, "grid", "n_levels", g.n_levels.unwrap_or(2 * m_max), 1)?;
    let gc = GaugeConfig { inertia: i, delta, theta, m_max, ..GaugeConfig::default() };
    let closed = exact_spectrum(&gc)?;
    let mut levels = Table::new("levels", &[("m", "1"), ("branch", "-"), ("E", "energy")]);
    let mut lo_pts = Vec::new();
    let mut hi_pts = Vec::new();
    for m in -(m_max as i64)..=(m_max as i64) {
        for b in [Branch::Minus, Branch::Plus] {
            if let Some(e) = closed.get(m, b) {
                levels.push(vec![m.into(), b.as_str().into(), e.into()]);
                if b == Branch::Minus { lo_pts.push((m as f64, e)) } else { hi_pts.push((m as f64, e)) }
            }
        }
    }
    let (_, dense) = dense_rotor_diag(i, &RotorBasis::new(basis_m), &vortex_potential(delta, theta), n_levels, 1e-10)?;
    let sorted = closed.sorted_energies();
    let mut d = Table::new("dense", &[("index", "1"), ("E_dense", "energy"), ("E_closed", "energy"), ("J_mean", "1")]);
    for (k, l) in dense.iter().enumerate() {
        d.push(vec![(k as i64).into(), l.energy.into(), sorted.get(k).copied().unwrap_or(f64::NAN).into(), l.j_mean.into()]);
    }
    let mut art = Artifacts::default();
    art.plots.push(
        Plot::new("levels", &format!("Rotor levels, delta = {delta}, theta = {theta:.4}"), "m", "E")
            .with(Series::new("minus", lo_pts))
            .with(Series::new("plus", hi_pts)),
    );
    art.tables.extend([levels, d]);
    Ok(art)
}

fn rotor_x0_sweep(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let i = inertia(cfg)?;
    let delta = positive(cfg, "physics", "delta", p.delta.unwrap_or(50.0))?;
    let n = at_least(cfg, "grid", "x0_points", g.x0_points.unwrap_or(37), 2)?;
    let x_max = positive(cfg, "grid", "x0_max", g.x0_max.unwrap_or(1.8))?;
    let n_levels = at_least(cfg, "grid", "n_levels", g.n_levels.unwrap_or(4), 1)?;
    let basis = at_least(cfg, "grid", "basis_m_max", g.basis_m_max.unwrap_or(64), 8)?;
    let rows = fig7_sweep(delta, i, &fig7_grid(n, x_max), &RotorBasis::new(basis), n_levels)?;
    let mut t = Table::new("fig7", &[("x0", "length"), ("level", "1"), ("E_dense", "energy"), ("E_wy", "energy"), ("E_free", "energy")]);
    let mut plot = Plot::new("fig7", &format!("Shifted vortex, delta = {delta}"), "x0", "E");
    for k in 0..n_levels {
        for r in &rows {
            t.push(vec![r.x0.into(), (k as i64).into(), r.dense[k].into(), r.wy[k].into(), r.free[k].into()]);
        }
        plot = plot.with(Series::new(format!("dense {k}"), rows.iter().map(|r| (r.x0, r.dense[k])).collect()));
    }
    plot = plot
        .with(Series::new("WY ground", rows.iter().map(|r| (r.x0, r.wy[0])).collect()).dashed())
        .with(Series::new("free ground", rows.iter().map(|r| (r.x0, r.free[0])).collect()).dashed());
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn wy_partition(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let i = inertia(cfg)?;
    let delta = finite(cfg, "physics", "delta", p.delta.unwrap_or(0.0))?;
    let x0 = finite(cfg, "physics", "x0", p.x0.unwrap_or(0.0))?;
    if (x0 - 1.0).abs() < 1e-12 {
        return Err(cfg.error_at("physics", "x0", "tube on the rotor track"));
    }
    let alphas = nonempty(cfg, "alphas", p.alphas.clone().unwrap_or_else(|| vec![0.0, 0.25, 0.5]))?;
    let betas = beta_grid(cfg, 0.1, 10.0, 100)?;
    let mut t = Table::new("wy_partition", &[("alpha", "1"), ("beta", "1/energy"), ("ln_Z", "1"), ("ln_Z0", "1"), ("ratio", "1")]);
    let mut plot = Plot::new("wy_partition", "Wu-Yang ratio Z/Z0", "beta", "r");
    for &a in &alphas {
        let mut pts = Vec::new();
        for &b in &betas {
            let z = z_wy_closed(a, x0, delta, i, b)?;
            let r = wy_ratio(a, x0, i, b)?;
            t.push(vec![a.into(), b.into(), z.ln().into(), ln_z0(delta, i, b).into(), r.into()]);
            pts.push((b, r));
        }
        plot = plot.with(Series::new(format!("alpha = {a}"), pts));
    }
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn model_partition(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let i = inertia(cfg)?;
    let theta = finite(cfg, "physics", "theta", p.theta.unwrap_or(PI / 2.0))?;
    let deltas = nonempty(cfg, "deltas", p.deltas.clone().unwrap_or_else(|| vec![0.0, 1.0, 10.0, 100.0]))?;
    let betas = beta_grid(cfg, 0.5, 50.0, 100)?;
    let m_max = at_least(cfg, "grid", "m_max", cfg.grid.m_max.unwrap_or(64), 1)?;
    let mut t = Table::new(
        "model_partition",
        &[("delta", "energy"), ("beta", "1/energy"), ("ln_Z", "1"), ("ln_Z0_tilde", "1"), ("ratio", "1"), ("r_wy", "1"), ("r_free", "1")],
    );
    let mut plot = Plot::new("model_partition", "Vortex rotor ratio with counter term", "beta", "r~");
    let base = GaugeConfig { inertia: i, theta, m_max, ..GaugeConfig::default() };
    let alpha = base.adiabatic_alpha();
    for &d in &deltas {
        let gc = GaugeConfig { delta: d, alpha, ..base };
        let mut pts = Vec::new();
        for &b in &betas {
            let z = z_exact_model(&gc, b)?;
            let z0 = ln_z0_tilde(&gc, b);
            let r = (z.ln() - z0).exp();
            t.push(vec![
                d.into(),
                b.into(),
                z.ln().into(),
                z0.into(),
                r.into(),
                wy_ratio(alpha, 0.0, i, b)?.into(),
                free_rotor_ratio_tilde(&gc, b)?.into(),
            ]);
            pts.push((b, r));
        }
        plot = plot.with(Series::new(format!("delta = {d}"), pts));
    }
    plot = plot.with(Series::new("WY ratio", betas.iter().map(|&b| (b, wy_ratio(alpha, 0.0, i, b).unwrap_or(f64::NAN))).collect()).dashed());
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn wilson(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let base = SpacetimeLoop {
        q: p.q.unwrap_or(1),
        theta: finite(cfg, "physics", "theta", p.theta.unwrap_or(PI / 3.0))?,
        gamma: finite(cfg, "physics", "gamma", p.gamma.unwrap_or(0.0))?,
        delta: finite(cfg, "physics", "delta", p.delta.unwrap_or(1.0))?,
        omega: positive(cfg, "physics", "omega", p.omega.unwrap_or(0.1))?,
        m: p.m.unwrap_or(1),
    };
    let n = at_least(cfg, "grid", "points", g.points.unwrap_or(200), 2)?;
    let by_theta = cfg.variant() == Some("theta");
    let params: Vec<f64> = if by_theta {
        linspace(0.0, PI, n)
    } else {
        let lo = positive(cfg, "grid", "omega_min", g.omega_min.unwrap_or(0.005 * base.delta.abs().max(1e-3)))?;
        let hi = positive(cfg, "grid", "omega_max", g.omega_max.unwrap_or(2.0 * base.delta.abs().max(1e-3)))?;
        if hi <= lo {
            return Err(cfg.error_at("grid", "omega_max", "must exceed omega_min"));
        }
        linspace(lo, hi, n)
    };
    let name = if by_theta { "theta" } else { "omega" };
    let unit = if by_theta { "rad" } else { "1/time" };
    let mut t = Table::new(
        "wilson",
        &[(name, unit), ("re_TrW", "1"), ("im_TrW", "1"), ("re_TrW_adiabatic", "1"), ("im_TrW_adiabatic", "1"), ("Omega", "1")],
    );
    let (mut exact, mut adiabatic) = (Vec::new(), Vec::new());
    for &x in &params {
        let lp = if by_theta { SpacetimeLoop { theta: x, ..base } } else { SpacetimeLoop { omega: x, ..base } };
        let w = spacetime_line_closed_form(&lp)?.trace();
        let a = adiabatic_product(&lp)?.trace();
        t.push(vec![x.into(), w.re.into(), w.im.into(), a.re.into(), a.im.into(), effective_omega(&lp).into()]);
        exact.push((x, w.re));
        adiabatic.push((x, a.re));
    }
    let plot = Plot::new("wilson", "Space-time Wilson line", name, "Re Tr W")
        .with(Series::new("closed form", exact))
        .with(Series::new("adiabatic", adiabatic).dashed());
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn spin1_fig9(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let i = inertia(cfg)?;
    let delta = positive(cfg, "physics", "delta", cfg.physics.delta.unwrap_or(100.0))?;
    let n = at_least(cfg, "grid", "theta_points", cfg.grid.theta_points.unwrap_or(25), 2)?;
    let rows = fig9_comparison(i, delta, &linspace(0.0, PI / 2.0, n))?;
    let mut t = Table::new(
        "fig9",
        &[("theta", "rad"), ("E_exact", "energy"), ("E_adiabatic", "energy"), ("E_pss", "energy"), ("E_pss_omega0", "energy"), ("E_pss_omega0_drift", "energy")],
    );
    for r in &rows {
        t.push(vec![r.theta.into(), r.exact.into(), r.adiabatic.into(), r.pss.into(), r.pss_omega0.into(), r.pss_omega0_drift.into()]);
    }
    let series = |label: &str, f: fn(&topogauge_core::spin1::Fig9Row) -> f64| Series::new(label, rows.iter().map(|r| (r.theta, f(r))).collect());
    let plot = Plot::new("fig9", &format!("Spin-1 ground energy, delta = {delta}"), "theta", "E0")
        .with(series("exact", |r| r.exact))
        .with(series("adiabatic", |r| r.adiabatic).dashed())
        .with(series("projected", |r| r.pss))
        .with(series("projected, zero charge", |r| r.pss_omega0).dashed());
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn appendix_a(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let i = inertia(cfg)?;
    let delta = finite(cfg, "physics", "delta", p.delta.unwrap_or(100.0))?;
    let thetas = nonempty(cfg, "thetas", p.thetas.clone().unwrap_or_else(|| vec![PI / 6.0, PI / 4.0, PI / 3.0, PI / 2.0]))?;
    let gamma = finite(cfg, "physics", "gamma", p.gamma.unwrap_or(0.0))?;
    let q = p.q.unwrap_or(1);
    let betas = beta_grid(cfg, 0.1, 5.0, 50)?;
    let mut cols: Vec<(String, String)> = vec![("beta".into(), "1/energy".into())];
    for th in &thetas {
        cols.push((format!("ln_ratio(theta={th:.6})"), "1".into()));
        cols.push((format!("ln_topological(theta={th:.6})"), "1".into()));
    }
    let col_refs: Vec<(&str, &str)> = cols.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
    let mut t = Table::new("appendixA", &col_refs);
    let mut plot = Plot::new("appendixA", &format!("ln(Z/Z0), delta = {delta}"), "beta", "ln ratio");
    let mut curves: Vec<Vec<(f64, f64)>> = vec![Vec::new(); thetas.len()];
    for &b in &betas {
        let mut row = vec![b.into()];
        for (k, &th) in thetas.iter().enumerate() {
            let m = TwoLevelModel { inertia: i, delta, theta: th, gamma, q };
            let lr = twolevel_partition(&m, b)?.ln() - twolevel_ln_z0(&m, b);
            row.push(lr.into());
            row.push(twolevel_topological_sum(&m, b)?.ln().into());
            curves[k].push((b, lr));
        }
        t.push(row);
    }
    for (th, c) in thetas.iter().zip(curves) {
        plot = plot.with(Series::new(format!("theta = {th:.4}"), c));
    }
    Ok(Artifacts { tables: vec![t], plots: vec![plot], warnings: vec![] })
}

fn spinor(cfg: &ExperimentConfig, key: &str, v: [f64; 2]) -> Res<C64> {
    finite(cfg, "physics", key, v[0])?;
    finite(cfg, "physics", key, v[1])?;
    Ok(C64::new(v[0], v[1]))
}

pub fn revival_state(cfg: &ExperimentConfig) -> Res<(RotorState, RationalCharge)> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let den = p.alpha_den.unwrap_or(4);
    if den <= 0 {
        return Err(cfg.error_at("physics", "alpha_den", "must be positive"));
    }
    let charge = RationalCharge::new(p.alpha_num.unwrap_or(1), den)?;
    let i = inertia(cfg)?;
    let hbar = positive(cfg, "physics", "hbar", p.hbar.unwrap_or(1.0))?;
    let k_max = g.k_max.unwrap_or(64);
    if k_max < 4 {
        return Err(cfg.error_at("grid", "k_max", "must be at least 4"));
    }
    let spin = [
        spinor(cfg, "spin_up", p.spin_up.unwrap_or([0.6, 0.0]))?,
        spinor(cfg, "spin_down", p.spin_down.unwrap_or([0.0, 0.8]))?,
    ];
    let mut state = RotorState::gaussian(
        k_max,
        finite(cfg, "physics", "phi0", p.phi0.unwrap_or(0.5))?,
        positive(cfg, "physics", "sigma", p.sigma.unwrap_or(0.4))?,
        finite(cfg, "physics", "m0", p.m0.unwrap_or(3.0))?,
        spin,
        i,
        charge.value(),
    )?;
    state.hbar = hbar;
    Ok((state, charge))
}

fn revival(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let (state, charge) = revival_state(cfg)?;
    let nt = at_least(cfg, "grid", "t_points", cfg.grid.t_points.unwrap_or(401), 2)?;
    let nd = at_least(cfg, "grid", "density_points", cfg.grid.density_points.unwrap_or(256), 2 * state.k_max as usize + 1)?;
    let report = revival_analysis(&state, charge)?;
    let mut t = Table::new("revival", &[("t", "time"), ("abs_autocorr", "1"), ("centroid_up", "rad"), ("centroid_down", "rad")]);
    let (mut ac, mut cu, mut cd) = (Vec::new(), Vec::new(), Vec::new());
    for tt in linspace(0.0, report.t_revival, nt) {
        let s = rotor_propagate(&state, tt);
        let a = state.overlap(&s).norm();
        let c = s.centroids();
        t.push(vec![tt.into(), a.into(), c[0].into(), c[1].into()]);
        ac.push((tt, a));
        cu.push((tt, c[0]));
        cd.push((tt, c[1]));
    }
    let final_state = rotor_propagate(&state, report.t_revival);
    let d0 = state.density(nd)?;
    let d1 = final_state.density(nd)?;
    let l1: f64 = d0.iter().zip(&d1).map(|(a, b)| (a - b).abs()).sum::<f64>() * 2.0 * PI / nd as f64;
    let mut r = Table::new(
        "revival_report",
        &[
            ("alpha", "1"),
            ("n_star", "1"),
            ("t_revival", "time"),
            ("winding", "1"),
            ("fidelity", "1"),
            ("density_l1", "1"),
            ("raw_phase_up", "rad"),
            ("raw_phase_down", "rad"),
            ("phase_up", "rad"),
            ("phase_down", "rad"),
            ("wilson_argument", "rad"),
        ],
    );
    r.push(vec![
        charge.value().into(),
        report.n_star.into(),
        report.t_revival.into(),
        report.winding.into(),
        report.fidelity.into(),
        l1.into(),
        report.raw_phases[0].into(),
        report.raw_phases[1].into(),
        report.spin_phases[0].into(),
        report.spin_phases[1].into(),
        report.wilson_argument.into(),
    ]);
    let mut art = Artifacts::default();
    if report.fidelity < 1.0 - 1e-8 {
        art.warnings.push(format!("revival fidelity {} below 1 - 1e-8", report.fidelity));
    }
    art.plots.push(Plot::new("revival", "Autocorrelation", "t", "|<psi0|psi(t)>|").with(Series::new("|autocorrelation|", ac)));
    art.plots.push(
        Plot::new("centroids", "Spin-resolved centroids", "t", "phi")
            .with(Series::new("spin up", cu))
            .with(Series::new("spin down", cd).dashed()),
    );
    art.tables.extend([t, r]);
    Ok(art)
}

fn trap_model(cfg: &ExperimentConfig, b0: f64) -> Res<TrapModel> {
    let p = &cfg.physics;
    let mut m = TrapModel::new(
        b0,
        finite(cfg, "physics", "current", p.current.unwrap_or(1.0))?,
        positive(cfg, "physics", "rho0", p.rho0.unwrap_or(0.5))?,
        finite(cfg, "physics", "charge", p.charge.unwrap_or(1.0))?,
    )?;
    m.hbar = positive(cfg, "physics", "hbar", p.hbar.unwrap_or(1.0))?;
    m.c_light = positive(cfg, "physics", "c_light", p.c_light.unwrap_or(1.0))?;
    m.mu0 = positive(cfg, "physics", "mu0", p.mu0.unwrap_or(1.0))?;
    Ok(m)
}

fn trap_tune(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let base = trap_model(cfg, 0.0)?;
    let flux = tune_bias_for_free_upper(&base)?;
    let b0 = flux / (PI * base.rho0 * base.rho0);
    let tuned = TrapModel { b0, ..base };
    let g = trap_effective_gauge(&tuned);
    let mut report = Table::new(
        "trap_tuning",
        &[("current", "current"), ("rho0", "length"), ("charge", "charge"), ("b0", "field"), ("flux", "field*length^2"), ("cos_theta", "1"), ("alpha_upper", "1"), ("alpha_lower", "1")],
    );
    report.push(vec![
        base.current.into(),
        base.rho0.into(),
        base.charge.into(),
        b0.into(),
        flux.into(),
        tuned.cos_theta().into(),
        g[0].into(),
        g[1].into(),
    ]);
    let n = at_least(cfg, "grid", "points", cfg.grid.points.unwrap_or(101), 2)?;
    let b_max = positive(cfg, "grid", "b0_max", cfg.grid.b0_max.unwrap_or(2.0 * b0.abs().max(1e-6)))?;
    let mut sweep = Table::new("trap_sweep", &[("b0", "field"), ("cos_theta", "1"), ("alpha_upper", "1"), ("alpha_lower", "1")]);
    let (mut up, mut lo) = (Vec::new(), Vec::new());
    for b in linspace(0.0, b_max, n) {
        let m = TrapModel { b0: b, ..base };
        let g = trap_effective_gauge(&m);
        sweep.push(vec![b.into(), m.cos_theta().into(), g[0].into(), g[1].into()]);
        up.push((b, g[0]));
        lo.push((b, g[1]));
    }
    let plot = Plot::new("trap_sweep", "Wire-trap flux charges", "B0", "charge")
        .with(Series::new("upper", up))
        .with(Series::new("lower", lo).dashed());
    Ok(Artifacts { tables: vec![report, sweep], plots: vec![plot], warnings: vec![] })
}

fn boson_gauge(cfg: &ExperimentConfig) -> Res<Artifacts> {
    let p = &cfg.physics;
    let g = &cfg.grid;
    let lambdas = nonempty(cfg, "lambdas", p.lambdas.clone().unwrap_or_else(|| vec![0.1, 0.3, 0.5]))?;
    let mass = positive(cfg, "physics", "mass", p.mass.unwrap_or(1.0))?;
    let radius = positive(cfg, "physics", "radius", p.radius.unwrap_or(1.0))?;
    let i = inertia(cfg)?;
    let gap = positive(cfg, "physics", "gap", p.gap.unwrap_or(100.0))?;
    let lambda = finite(cfg, "physics", "lambda", p.lambda.unwrap_or(0.3))?;
    let n_max = at_least(cfg, "grid", "n_max", g.n_max.unwrap_or(24), 2)?;
    let k_max = g.k_max.unwrap_or(8);
    if k_max < 1 {
        return Err(cfg.error_at("grid", "k_max", "must be at least 1"));
    }
    let ch_n = at_least(cfg, "grid", "channel_n_max", g.channel_n_max.unwrap_or(8), 1)?;
    let levels = at_least(cfg, "grid", "levels", g.levels.unwrap_or(6), 1)?;
    let space = FockSpace::new(n_max)?;
    let mut charge = Table::new(
        "boson_charge",
        &[("lambda", "1"), ("charge", "1"), ("charge_expected", "1"), ("induced_scalar", "energy"), ("induced_expected", "energy")],
    );
    let (mut cp, mut sp) = (Vec::new(), Vec::new());
    for &l in &lambdas {
        let a = connection_matrix(0.0, l, &space)?;
        let s = induced_scalar(l, mass, radius, &space)?;
        charge.push(vec![l.into(), a[(0, 0)].re.into(), (l * l).into(), s.into(), (l * l / (2.0 * mass * radius * radius)).into()]);
        cp.push((l, a[(0, 0)].re));
        sp.push((l, s));
    }
    let e = channel_spectrum(lambda, i, gap, k_max, ch_n)?;
    let ab = ab_rotor_levels(lambda, i, k_max);
    let mut spec = Table::new("boson_spectrum", &[("level", "1"), ("E_channel", "energy"), ("E_ab", "energy"), ("error", "energy")]);
    for k in 0..levels.min(e.len()).min(ab.len()) {
        spec.push(vec![(k as i64).into(), e[k].into(), ab[k].into(), (e[k] - ab[k]).into()]);
    }
    let plot = Plot::new("boson_charge", "Vacuum gauge charge and induced scalar", "lambda", "value")
        .with(Series::new("charge", cp))
        .with(Series::new("induced scalar", sp).dashed());
    Ok(Artifacts { tables: vec![charge, spec], plots: vec![plot], warnings: vec![] })
}
