//! Experiment configuration files: parsing, key checks and line-anchored errors.

use std::fmt;
use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::error::CliError;

/// Overrides the directory that relative `output.dir` values resolve against.
pub const OUTPUT_ROOT_ENV: &str = "TOPOGAUGE_OUTPUT_ROOT";

#[derive(Clone, Copy, Debug, PartialEq, Eq, Deserialize)]
pub enum ExperimentKind {
    #[serde(rename = "double-slit")]
    DoubleSlit,
    #[serde(rename = "rotor-spectrum")]
    RotorSpectrum,
    #[serde(rename = "wy-partition")]
    WyPartition,
    #[serde(rename = "model-partition")]
    ModelPartition,
    #[serde(rename = "wilson")]
    Wilson,
    #[serde(rename = "spin1-fig9")]
    Spin1Fig9,
    #[serde(rename = "appendixA")]
    AppendixA,
    #[serde(rename = "revival")]
    Revival,
    #[serde(rename = "trap-tune")]
    TrapTune,
    #[serde(rename = "boson-gauge")]
    BosonGauge,
}

impl ExperimentKind {
    pub const ALL: [ExperimentKind; 10] = [
        Self::DoubleSlit,
        Self::RotorSpectrum,
        Self::WyPartition,
        Self::ModelPartition,
        Self::Wilson,
        Self::Spin1Fig9,
        Self::AppendixA,
        Self::Revival,
        Self::TrapTune,
        Self::BosonGauge,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Self::DoubleSlit => "double-slit",
            Self::RotorSpectrum => "rotor-spectrum",
            Self::WyPartition => "wy-partition",
            Self::ModelPartition => "model-partition",
            Self::Wilson => "wilson",
            Self::Spin1Fig9 => "spin1-fig9",
            Self::AppendixA => "appendixA",
            Self::Revival => "revival",
            Self::TrapTune => "trap-tune",
            Self::BosonGauge => "boson-gauge",
        }
    }

    pub fn summary(self) -> &'static str {
        match self {
            Self::DoubleSlit => "2D spinor packet through two slits past a vortex; screen profile and fitted phase",
            Self::RotorSpectrum => "rotor levels vs m (closed form and dense), or vs tube offset x0",
            Self::WyPartition => "Wu-Yang rotor partition function and topological ratio vs beta",
            Self::ModelPartition => "vortex rotor partition ratio with counter term vs beta for several gaps",
            Self::Wilson => "space-time Wilson line trace vs angular frequency or mixing angle",
            Self::Spin1Fig9 => "spin-1 ground energy: exact, adiabatic, projected with and without charge",
            Self::AppendixA => "spin-1/2 rotor ln(Z/Z0) vs beta for several mixing angles",
            Self::Revival => "rotor packet autocorrelation, spin centroids and revival phases",
            Self::TrapTune => "wire-trap flux charges vs bias field and bias tuning",
            Self::BosonGauge => "boson-induced gauge charge, induced scalar and channel spectrum",
        }
    }

    /// Keys each experiment reads from `[physics]` and `[grid]`, and its variants.
    fn schema(self) -> (&'static [&'static str], &'static [&'static str], &'static [&'static str]) {
        match self {
            Self::DoubleSlit => (
                &["theta", "delta", "vortex_offset", "k0", "sigma", "mass"],
                &[
                    "n", "length", "dt", "x_start", "barrier_x", "barrier_half_thickness",
                    "barrier_height", "slit_center", "slit_half_width", "screen_x", "t_max",
                ],
                &[],
            ),
            Self::RotorSpectrum => (
                &["inertia", "delta", "theta"],
                &["m_max", "basis_m_max", "x0_points", "x0_max", "n_levels"],
                &["levels", "x0-sweep"],
            ),
            Self::WyPartition => (
                &["inertia", "delta", "alphas", "x0"],
                &["beta_min", "beta_max", "beta_points"],
                &[],
            ),
            Self::ModelPartition => (
                &["inertia", "deltas", "theta"],
                &["beta_min", "beta_max", "beta_points", "m_max"],
                &[],
            ),
            Self::Wilson => (
                &["q", "theta", "gamma", "delta", "omega", "m"],
                &["points", "omega_min", "omega_max"],
                &["omega", "theta"],
            ),
            Self::Spin1Fig9 => (&["inertia", "delta"], &["theta_points"], &[]),
            Self::AppendixA => (
                &["inertia", "delta", "thetas", "q", "gamma"],
                &["beta_min", "beta_max", "beta_points"],
                &[],
            ),
            Self::Revival => (
                &["alpha_num", "alpha_den", "inertia", "hbar", "phi0", "sigma", "m0", "spin_up", "spin_down"],
                &["k_max", "t_points", "density_points"],
                &[],
            ),
            Self::TrapTune => (
                &["current", "rho0", "charge", "hbar", "c_light", "mu0"],
                &["b0_max", "points"],
                &[],
            ),
            Self::BosonGauge => (
                &["lambdas", "lambda", "mass", "radius", "inertia", "gap"],
                &["n_max", "k_max", "channel_n_max", "levels"],
                &[],
            ),
        }
    }
}

impl fmt::Display for ExperimentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentSection {
    pub name: ExperimentKind,
    #[serde(default)]
    pub variant: Option<String>,
    #[serde(default)]
    pub seed: u64,
}

/// Physical parameters; each experiment reads a subset.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Physics {
    pub theta: Option<f64>,
    pub thetas: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub deltas: Option<Vec<f64>>,
    pub inertia: Option<f64>,
    pub alphas: Option<Vec<f64>>,
    pub x0: Option<f64>,
    pub q: Option<i64>,
    pub gamma: Option<f64>,
    pub omega: Option<f64>,
    pub m: Option<i64>,
    pub vortex_offset: Option<f64>,
    pub k0: Option<f64>,
    pub sigma: Option<f64>,
    pub mass: Option<f64>,
    pub alpha_num: Option<i64>,
    pub alpha_den: Option<i64>,
    pub hbar: Option<f64>,
    pub phi0: Option<f64>,
    pub m0: Option<f64>,
    pub spin_up: Option<[f64; 2]>,
    pub spin_down: Option<[f64; 2]>,
    pub current: Option<f64>,
    pub rho0: Option<f64>,
    pub charge: Option<f64>,
    pub c_light: Option<f64>,
    pub mu0: Option<f64>,
    pub lambdas: Option<Vec<f64>>,
    pub lambda: Option<f64>,
    pub radius: Option<f64>,
    pub gap: Option<f64>,
}

/// Discretization parameters; each experiment reads a subset.
#[derive(Clone, Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Grid {
    pub n: Option<usize>,
    pub length: Option<f64>,
    pub dt: Option<f64>,
    pub x_start: Option<f64>,
    pub barrier_x: Option<f64>,
    pub barrier_half_thickness: Option<f64>,
    pub barrier_height: Option<f64>,
    pub slit_center: Option<f64>,
    pub slit_half_width: Option<f64>,
    pub screen_x: Option<f64>,
    pub t_max: Option<f64>,
    pub m_max: Option<usize>,
    pub basis_m_max: Option<usize>,
    pub x0_points: Option<usize>,
    pub x0_max: Option<f64>,
    pub n_levels: Option<usize>,
    pub beta_min: Option<f64>,
    pub beta_max: Option<f64>,
    pub beta_points: Option<usize>,
    pub points: Option<usize>,
    pub omega_min: Option<f64>,
    pub omega_max: Option<f64>,
    pub theta_points: Option<usize>,
    pub k_max: Option<i64>,
    pub t_points: Option<usize>,
    pub density_points: Option<usize>,
    pub b0_max: Option<f64>,
    pub n_max: Option<usize>,
    pub channel_n_max: Option<usize>,
    pub levels: Option<usize>,
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputSection {
    pub dir: PathBuf,
    #[serde(default = "default_true")]
    pub svg: bool,
}

fn default_true() -> bool {
    true
}

#[derive(Clone, Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawConfig {
    experiment: ExperimentSection,
    #[serde(default)]
    physics: Physics,
    #[serde(default)]
    grid: Grid,
    output: OutputSection,
}

/// A parsed and key-checked configuration together with its source text.
#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub experiment: ExperimentSection,
    pub physics: Physics,
    pub grid: Grid,
    pub output: OutputSection,
    pub source: String,
    pub origin: String,
}

impl ExperimentConfig {
    pub fn kind(&self) -> ExperimentKind {
        self.experiment.name
    }

    pub fn variant(&self) -> Option<&str> {
        self.experiment.variant.as_deref()
    }

    /// Config error pointing at `section.key` in the source, if present.
    pub fn error_at(&self, section: &str, key: &str, msg: impl fmt::Display) -> CliError {
        match locate_key(&self.source, section, key) {
            Some(line) => CliError::Config(format!("{}:{line}: {section}.{key}: {msg}", self.origin)),
            None => CliError::Config(format!("{}: {section}.{key}: {msg}", self.origin)),
        }
    }

    /// Output directory after applying the root override.
    pub fn output_dir(&self) -> PathBuf {
        resolve_output(&self.output.dir, std::env::var_os(OUTPUT_ROOT_ENV).map(PathBuf::from))
    }
}

pub fn resolve_output(dir: &Path, root: Option<PathBuf>) -> PathBuf {
    match root {
        Some(r) if dir.is_relative() => r.join(dir),
        _ => dir.to_path_buf(),
    }
}

fn line_of(text: &str, offset: usize) -> usize {
    text[..offset.min(text.len())].matches('\n').count() + 1
}

/// 1-based line of `key = ...` inside `[section]`.
pub fn locate_key(text: &str, section: &str, key: &str) -> Option<usize> {
    let mut current = String::new();
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if let Some(name) = t.strip_prefix('[').and_then(|s| s.split(']').next()) {
            current = name.trim().to_string();
            continue;
        }
        if current == section {
            if let Some(rest) = t.strip_prefix(key) {
                if rest.trim_start().starts_with('=') {
                    return Some(i + 1);
                }
            }
        }
    }
    None
}

/// Parses and checks a configuration; `origin` labels error messages.
pub fn parse(text: &str, origin: &str) -> Result<ExperimentConfig, CliError> {
    let raw: RawConfig = toml::from_str(text).map_err(|e| {
        let msg = e.message().trim().to_string();
        match e.span() {
            Some(span) => CliError::Config(format!("{origin}:{}: {msg}", line_of(text, span.start))),
            None => CliError::Config(format!("{origin}: {msg}")),
        }
    })?;
    let cfg = ExperimentConfig {
        experiment: raw.experiment,
        physics: raw.physics,
        grid: raw.grid,
        output: raw.output,
        source: text.to_string(),
        origin: origin.to_string(),
    };
    check_keys(&cfg)?;
    if cfg.output.dir.as_os_str().is_empty() {
        return Err(cfg.error_at("output", "dir", "must not be empty"));
    }
    Ok(cfg)
}

pub fn load(path: &Path) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| CliError::Config(format!("{}: cannot read config: {e}", path.display())))?;
    parse(&text, &path.display().to_string())
}

fn check_keys(cfg: &ExperimentConfig) -> Result<(), CliError> {
    let doc: toml::Table = cfg.source.parse().map_err(|e: toml::de::Error| CliError::Config(e.to_string()))?;
    let (physics, grid, variants) = cfg.kind().schema();
    for (section, allowed) in [("physics", physics), ("grid", grid)] {
        if let Some(toml::Value::Table(t)) = doc.get(section) {
            for key in t.keys() {
                if !allowed.contains(&key.as_str()) {
                    return Err(cfg.error_at(
                        section,
                        key,
                        format!("not used by experiment `{}` (accepted: {})", cfg.kind(), allowed.join(", ")),
                    ));
                }
            }
        }
    }
    match (cfg.variant(), variants.is_empty()) {
        (Some(v), true) => Err(cfg.error_at("experiment", "variant", format!("`{}` has no variants, got `{v}`", cfg.kind()))),
        (Some(v), false) if !variants.contains(&v) => Err(cfg.error_at(
            "experiment",
            "variant",
            format!("unknown variant `{v}` (accepted: {})", variants.join(", ")),
        )),
        _ => Ok(()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const GOOD: &str = "[experiment]\nname = \"wilson\"\nvariant = \"omega\"\n\n[physics]\ntheta = 1.0\n\n[output]\ndir = \"out\"\n";

    #[test]
    fn parses_minimal_config() {
        let c = parse(GOOD, "t.toml").unwrap();
        assert_eq!(c.kind(), ExperimentKind::Wilson);
        assert_eq!(c.physics.theta, Some(1.0));
        assert!(c.output.svg);
    }

    #[test]
    fn unknown_key_reports_line() {
        let bad = GOOD.replace("theta = 1.0", "theta = 1.0\nthetta = 2.0");
        let e = parse(&bad, "t.toml").unwrap_err().to_string();
        assert!(e.contains("t.toml:7"), "{e}");
    }

    #[test]
    fn key_of_other_experiment_is_rejected() {
        let bad = GOOD.replace("theta = 1.0", "lambdas = [0.1]");
        let e = parse(&bad, "t.toml").unwrap_err().to_string();
        assert!(e.contains("t.toml:6") && e.contains("lambdas"), "{e}");
    }

    #[test]
    fn type_error_reports_line() {
        let bad = GOOD.replace("theta = 1.0", "theta = \"big\"");
        let e = parse(&bad, "t.toml").unwrap_err().to_string();
        assert!(e.contains("t.toml:6"), "{e}");
    }

    #[test]
    fn root_override_applies_to_relative_dirs() {
        let r = Some(PathBuf::from("/tmp/root"));
        assert_eq!(resolve_output(Path::new("a/b"), r.clone()), PathBuf::from("/tmp/root/a/b"));
        assert_eq!(resolve_output(Path::new("/abs"), r), PathBuf::from("/abs"));
    }
}
