//! Config-driven experiment runner and acceptance checks built on `topogauge-core`.

pub mod artifact;
pub mod checks;
pub mod config;
pub mod error;
pub mod experiments;
pub mod svg;

use std::path::{Path, PathBuf};
use std::time::Instant;

use artifact::{Artifacts, Metadata, RunInfo};
use config::ExperimentConfig;
pub use error::CliError;

/// Result of a completed `run`.
#[derive(Debug)]
pub struct RunOutcome {
    pub output_dir: PathBuf,
    pub files: Vec<PathBuf>,
    pub warnings: Vec<String>,
}

/// Runs an experiment fully in memory; nothing touches the filesystem.
pub fn compute(cfg: &ExperimentConfig) -> Result<Artifacts, CliError> {
    experiments::run(cfg)
}

/// Parses `path`, runs the experiment and writes its artifacts.
///
/// All artifacts are computed before the output directory is created, so a
/// config or numerical error leaves no partial output behind.
pub fn run_file(path: &Path) -> Result<RunOutcome, CliError> {
    let cfg = config::load(path)?;
    run_config(&cfg)
}

pub fn run_config(cfg: &ExperimentConfig) -> Result<RunOutcome, CliError> {
    let start = Instant::now();
    let art = compute(cfg)?;
    let dir = cfg.output_dir();
    let meta = Metadata::new(cfg.kind().name(), &cfg.source);
    let info = RunInfo {
        origin: &cfg.origin,
        config_text: &cfg.source,
        wall_time_seconds: start.elapsed().as_secs_f64(),
        write_svg: cfg.output.svg,
    };
    let files = artifact::write_all(&dir, &art, &meta, &info)?;
    Ok(RunOutcome { output_dir: dir, files, warnings: art.warnings })
}
