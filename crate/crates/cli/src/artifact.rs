//! In-memory experiment outputs and their serialization.

use std::fs;
use std::path::{Path, PathBuf};

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::error::CliError;
use crate::svg::Plot;

#[derive(Clone, Debug, PartialEq)]
pub enum Cell {
    Num(f64),
    Int(i64),
    Text(String),
}

impl Cell {
    fn render(&self) -> String {
        match self {
            // Shortest round-trip scientific form; identical inputs give identical bytes.
            Cell::Num(v) => format!("{v:e}"),
            Cell::Int(v) => v.to_string(),
            Cell::Text(s) => s.clone(),
        }
    }
}

impl From<f64> for Cell {
    fn from(v: f64) -> Self {
        Cell::Num(v)
    }
}

impl From<i64> for Cell {
    fn from(v: i64) -> Self {
        Cell::Int(v)
    }
}

impl From<&str> for Cell {
    fn from(v: &str) -> Self {
        Cell::Text(v.to_string())
    }
}

/// Named CSV table; column headers carry a unit annotation `name [unit]`.
#[derive(Clone, Debug, PartialEq)]
pub struct Table {
    pub name: String,
    pub columns: Vec<(String, String)>,
    pub rows: Vec<Vec<Cell>>,
}

impl Table {
    pub fn new(name: &str, columns: &[(&str, &str)]) -> Self {
        Self {
            name: name.to_string(),
            columns: columns.iter().map(|(c, u)| (c.to_string(), u.to_string())).collect(),
            rows: Vec::new(),
        }
    }

    pub fn push(&mut self, row: Vec<Cell>) {
        debug_assert_eq!(row.len(), self.columns.len());
        self.rows.push(row);
    }

    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let j = self.columns.iter().position(|(c, _)| c == name)?;
        Some(
            self.rows
                .iter()
                .map(|r| match &r[j] {
                    Cell::Num(v) => *v,
                    Cell::Int(v) => *v as f64,
                    Cell::Text(_) => f64::NAN,
                })
                .collect(),
        )
    }
}

/// Provenance lines written at the top of every CSV.
#[derive(Clone, Debug)]
pub struct Metadata {
    pub experiment: String,
    pub config_sha256: String,
}

impl Metadata {
    pub fn new(experiment: &str, config_text: &str) -> Self {
        Self { experiment: experiment.to_string(), config_sha256: sha256_hex(config_text.as_bytes()) }
    }
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    Sha256::digest(bytes).iter().map(|b| format!("{b:02x}")).collect()
}

pub fn render_csv(table: &Table, meta: &Metadata) -> Result<Vec<u8>, CliError> {
    let mut out = Vec::new();
    out.extend_from_slice(format!("# experiment: {}\n", meta.experiment).as_bytes());
    out.extend_from_slice(format!("# table: {}\n", table.name).as_bytes());
    out.extend_from_slice(format!("# config_sha256: {}\n", meta.config_sha256).as_bytes());
    out.extend_from_slice(format!("# topogauge-core: {}\n", topogauge_core::VERSION).as_bytes());
    out.extend_from_slice(format!("# topogauge: {}\n", env!("CARGO_PKG_VERSION")).as_bytes());
    let mut w = csv::Writer::from_writer(out);
    let header: Vec<String> = table.columns.iter().map(|(c, u)| format!("{c} [{u}]")).collect();
    let csv_err = |e: csv::Error| CliError::Failure(format!("csv: {e}"));
    w.write_record(&header).map_err(csv_err)?;
    for row in &table.rows {
        w.write_record(row.iter().map(Cell::render)).map_err(csv_err)?;
    }
    w.into_inner().map_err(|e| CliError::Failure(format!("csv: {e}")))
}

/// Data rows of a rendered CSV: header names and string cells, metadata skipped.
pub fn parse_csv(text: &str) -> Result<(Vec<String>, Vec<Vec<String>>), CliError> {
    let body: String = text.lines().filter(|l| !l.starts_with('#')).map(|l| format!("{l}\n")).collect();
    let mut r = csv::Reader::from_reader(body.as_bytes());
    let csv_err = |e: csv::Error| CliError::Failure(format!("csv: {e}"));
    let header = r.headers().map_err(csv_err)?.iter().map(str::to_string).collect();
    let mut rows = Vec::new();
    for rec in r.records() {
        rows.push(rec.map_err(csv_err)?.iter().map(str::to_string).collect());
    }
    Ok((header, rows))
}

/// Everything an experiment produced, held in memory until written.
#[derive(Clone, Debug, Default)]
pub struct Artifacts {
    pub tables: Vec<Table>,
    pub plots: Vec<Plot>,
    pub warnings: Vec<String>,
}

impl Artifacts {
    pub fn table(&self, name: &str) -> Option<&Table> {
        self.tables.iter().find(|t| t.name == name)
    }
}

#[derive(Serialize)]
struct Manifest<'a> {
    experiment: &'a str,
    config_origin: &'a str,
    config_sha256: &'a str,
    topogauge_version: &'a str,
    topogauge_core_version: &'a str,
    wall_time_seconds: f64,
    files: Vec<String>,
    warnings: &'a [String],
    config: &'a str,
}

/// Inputs echoed into `manifest.toml`.
pub struct RunInfo<'a> {
    pub origin: &'a str,
    pub config_text: &'a str,
    pub wall_time_seconds: f64,
    pub write_svg: bool,
}

/// Writes every table, plot and the manifest into `dir`; returns the written paths.
pub fn write_all(dir: &Path, art: &Artifacts, meta: &Metadata, info: &RunInfo) -> Result<Vec<PathBuf>, CliError> {
    let mut files = Vec::new();
    let mut blobs: Vec<(String, Vec<u8>)> = Vec::new();
    for t in &art.tables {
        blobs.push((format!("{}.csv", t.name), render_csv(t, meta)?));
    }
    if info.write_svg {
        for p in &art.plots {
            blobs.push((format!("{}.svg", p.name), p.render().into_bytes()));
        }
    }
    let manifest = Manifest {
        experiment: &meta.experiment,
        config_origin: info.origin,
        config_sha256: &meta.config_sha256,
        topogauge_version: env!("CARGO_PKG_VERSION"),
        topogauge_core_version: topogauge_core::VERSION,
        wall_time_seconds: info.wall_time_seconds,
        files: blobs.iter().map(|(n, _)| n.clone()).collect(),
        warnings: &art.warnings,
        config: info.config_text,
    };
    let text = toml::to_string(&manifest).map_err(|e| CliError::Failure(format!("manifest: {e}")))?;
    blobs.push(("manifest.toml".to_string(), text.into_bytes()));
    fs::create_dir_all(dir)?;
    for (name, bytes) in blobs {
        let path = dir.join(name);
        fs::write(&path, bytes)?;
        files.push(path);
    }
    Ok(files)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn csv_round_trip() {
        let mut t = Table::new("demo", &[("beta", "1/energy"), ("branch", "-")]);
        t.push(vec![0.5.into(), "minus".into()]);
        t.push(vec![1e-20.into(), "plus".into()]);
        let bytes = render_csv(&t, &Metadata::new("demo", "x = 1")).unwrap();
        let text = String::from_utf8(bytes).unwrap();
        assert!(text.starts_with("# experiment: demo\n"));
        let (h, rows) = parse_csv(&text).unwrap();
        assert_eq!(h, vec!["beta [1/energy]", "branch [-]"]);
        assert_eq!(rows[1], vec!["1e-20", "plus"]);
        assert_eq!(rows[0][0].parse::<f64>().unwrap(), 0.5);
    }
}
