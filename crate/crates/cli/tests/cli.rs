use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn topogauge(args: &[&str], root: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_topogauge"))
        .args(args)
        .env("TOPOGAUGE_OUTPUT_ROOT", root)
        .output()
        .expect("binary runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

const PARTITION: &str = "[experiment]\nname = \"wy-partition\"\n\n[physics]\nalphas = [0.0, 0.5]\n\n[grid]\nbeta_points = 15\n\n[output]\ndir = \"wy\"\n";

#[test]
fn lists_every_experiment() {
    let tmp = TempDir::new().unwrap();
    let out = topogauge(&["list-experiments"], tmp.path());
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in [
        "double-slit", "rotor-spectrum", "wy-partition", "model-partition", "wilson",
        "spin1-fig9", "appendixA", "revival", "trap-tune", "boson-gauge",
    ] {
        assert!(text.contains(name), "{name} missing from listing");
    }
}

#[test]
fn run_writes_tables_plots_and_manifest() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "wy.toml", PARTITION);
    let out = topogauge(&["run", &cfg], tmp.path());
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let dir = tmp.path().join("wy");
    let csv = fs::read_to_string(dir.join("wy_partition.csv")).unwrap();
    assert!(csv.starts_with("# experiment: wy-partition\n"));
    assert!(csv.contains("# config_sha256: "));
    assert!(dir.join("wy_partition.svg").exists());
    let manifest = fs::read_to_string(dir.join("manifest.toml")).unwrap();
    assert!(manifest.contains("wall_time_seconds") && manifest.contains("beta_points = 15"));
}

#[test]
fn repeated_runs_give_identical_csv_bytes() {
    let a = TempDir::new().unwrap();
    let b = TempDir::new().unwrap();
    let cfg = write_config(a.path(), "wy.toml", PARTITION);
    assert!(topogauge(&["run", &cfg], a.path()).status.success());
    assert!(topogauge(&["run", &cfg], b.path()).status.success());
    let read = |d: &TempDir| fs::read(d.path().join("wy").join("wy_partition.csv")).unwrap();
    assert_eq!(read(&a), read(&b));
}

#[test]
fn unknown_key_is_a_config_error_with_line_and_no_output() {
    let tmp = TempDir::new().unwrap();
    let text = PARTITION.replace("beta_points = 15", "beta_points = 15\nbeta_pionts = 3");
    let cfg = write_config(tmp.path(), "bad.toml", &text);
    let out = topogauge(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("beta_pionts") && err.contains(":9"), "{err}");
    assert!(!tmp.path().join("wy").exists());
}

#[test]
fn invalid_value_is_a_config_error_with_line() {
    let tmp = TempDir::new().unwrap();
    let text = PARTITION.replace("alphas = [0.0, 0.5]", "alphas = [0.0, 0.5]\ninertia = -1.0");
    let cfg = write_config(tmp.path(), "bad.toml", &text);
    let out = topogauge(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("physics.inertia") && err.contains(":6"), "{err}");
    assert!(!tmp.path().join("wy").exists());
}

#[test]
fn malformed_toml_is_a_config_error() {
    let tmp = TempDir::new().unwrap();
    let cfg = write_config(tmp.path(), "bad.toml", "[experiment]\nname = \"wilson\n");
    let out = topogauge(&["run", &cfg], tmp.path());
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn missing_config_file_fails() {
    let tmp = TempDir::new().unwrap();
    let out = topogauge(&["run", "/nonexistent/config.toml"], tmp.path());
    assert!(!out.status.success());
}

#[test]
fn quick_suite_reports_csv() {
    let tmp = TempDir::new().unwrap();
    let out = topogauge(&["verify", "quick"], tmp.path());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("id,measured,comparison,tolerance,pass,note\n"));
    assert!(text.lines().skip(1).all(|l| l.contains(",true,")), "{text}");
    assert!(out.status.success());
}

#[test]
fn committed_configs_parse() {
    let dir = Path::new(env!("CARGO_MANIFEST_DIR")).join("configs");
    let mut n = 0;
    for entry in fs::read_dir(dir).unwrap() {
        let path = entry.unwrap().path();
        topogauge::config::load(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
        n += 1;
    }
    assert!(n >= 10);
}
