//! End-to-end runs of the `bopshox` binary.

use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use tempfile::TempDir;

fn bopshox(args: &[&str], out: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_bopshox"))
        .args(args)
        .arg("--out")
        .arg(out)
        .env_remove("BOPSHOX_THREADS")
        .output()
        .expect("binary runs")
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<String>>) {
    let mut reader = csv::Reader::from_path(path).unwrap();
    let header = reader.headers().unwrap().iter().map(str::to_string).collect();
    let rows = reader.records().map(|r| r.unwrap().iter().map(str::to_string).collect()).collect();
    (header, rows)
}

fn column(header: &[String], rows: &[Vec<String>], name: &str) -> Vec<f64> {
    let idx = header.iter().position(|h| h == name).unwrap_or_else(|| panic!("no column {name}"));
    rows.iter().map(|r| r[idx].parse().unwrap()).collect()
}

#[test]
fn shoot_uncoupled_ground_state() {
    let dir = TempDir::new().unwrap();
    let out = bopshox(&["shoot", "--n", "0", "--l", "0", "--delta", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.starts_with("shoot: 1 rows, energy in ["), "{stdout}");

    let (header, rows) = read_csv(&dir.path().join("shoot.csv"));
    let energy = column(&header, &rows, "energy")[0];
    // (ω + Ω)/2 with the default ω = 1, Ω = 0.2
    assert!((energy - 0.6).abs() < 1e-8, "{energy}");
    assert_eq!(column(&header, &rows, "node_count")[0], 0.0);
}

#[test]
fn shoot_writes_trajectory() {
    let dir = TempDir::new().unwrap();
    let out = bopshox(&["shoot", "--n", "1", "--l", "2", "--delta", "0.6", "--trajectory"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("trajectory.csv"));
    assert_eq!(header, ["y", "phi", "vartheta"]);
    let y = column(&header, &rows, "y");
    assert!(y.windows(2).all(|w| w[1] > w[0]));
    let phi = column(&header, &rows, "phi");
    let nodes = phi.windows(2).filter(|w| w[0] * w[1] < 0.0).count();
    assert_eq!(nodes, 2);
}

#[test]
fn figure2_covers_lattice() {
    let dir = TempDir::new().unwrap();
    let out = bopshox(&["figure", "2", "--delta", "0.6", "--Omega-bar", "0.2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("figure2.csv"));
    assert_eq!(header, ["n", "l", "eps_bo"]);
    assert_eq!(rows.len(), 41 * 41);
    let n = column(&header, &rows, "n");
    let l = column(&header, &rows, "l");
    assert_eq!(n.iter().cloned().fold(f64::INFINITY, f64::min), 0.0);
    assert_eq!(l.iter().cloned().fold(f64::NEG_INFINITY, f64::max), 10.0);
    let eps = column(&header, &rows, "eps_bo");
    assert!(eps.iter().all(|e| e.abs() < 0.01));
}

#[test]
fn qu_sweep_matches_bo_matrix() {
    let dir = TempDir::new().unwrap();
    let out = bopshox(&["qu", "--sweep-delta", "0:0.99:0.01", "--Omega-bar", "0.2"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("qu_sweep.csv"));
    assert_eq!(rows.len(), 100);
    for name in ["delta", "Gt11", "Gt12", "Gt21", "Gt22", "Ut11", "Ut12", "Ut21", "Ut22", "deviation"] {
        assert!(header.iter().any(|h| h == name), "missing {name}");
    }
    // At δ = 0 both factors are diagonal and coincide.
    let deviation = column(&header, &rows, "deviation");
    assert!(deviation[0] < 1e-14);
    assert!(column(&header, &rows, "Ut21").iter().all(|&v| v == 0.0));
}

#[test]
fn json_output_parses_with_same_fields() {
    let dir = TempDir::new().unwrap();
    let out = bopshox(&["errors", "--delta", "0.6", "--n-max", "2", "--l-max", "3", "--format", "json"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let text = fs::read_to_string(dir.path().join("errors.json")).unwrap();
    let rows: serde_json::Value = serde_json::from_str(&text).unwrap();
    let rows = rows.as_array().unwrap();
    assert_eq!(rows.len(), 12);
    assert_eq!(rows[0]["n"], 0);
    assert!(rows[5]["eps_bo"].as_f64().unwrap().abs() < 0.01);
    // δ ≠ 0 also emits the zero-error line.
    assert!(dir.path().join("zero_line.json").exists());
}

#[test]
fn reruns_are_byte_identical() {
    let (a, b) = (TempDir::new().unwrap(), TempDir::new().unwrap());
    for dir in [&a, &b] {
        let out = bopshox(&["figure", "3", "--delta", "0.6", "--sweep-delta", "0:0.9:0.1"], dir.path());
        assert_eq!(out.status.code(), Some(0));
    }
    let first = fs::read(a.path().join("figure3.csv")).unwrap();
    assert_eq!(first, fs::read(b.path().join("figure3.csv")).unwrap());
}

#[test]
fn flags_override_config_file() {
    let dir = TempDir::new().unwrap();
    let config = dir.path().join("params.cfg");
    fs::write(&config, "# coupled pair\nm = 2\nOmega = 0.3\ndelta = 0.5\n").unwrap();
    let config = config.to_str().unwrap();

    let out = bopshox(&["exact", "--config", config], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("exact.csv"));
    let from_file = column(&header, &rows, "energy")[0];

    let out = bopshox(&["exact", "--config", config, "--delta", "0"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&dir.path().join("exact.csv"));
    let overridden = column(&header, &rows, "energy")[0];
    // Uncoupled: (ω + Ω)/2 with Ω from the file.
    assert!((overridden - 0.65).abs() < 1e-15, "{overridden}");
    assert!(from_file < overridden);
}

#[test]
fn validation_errors_exit_2() {
    let dir = TempDir::new().unwrap();
    let file = dir.path().join("plain");
    fs::write(&file, "").unwrap();
    let bad_config = dir.path().join("bad.cfg");
    fs::write(&bad_config, "bogus = 1\n").unwrap();
    let cases: [(&[&str], &Path); 6] = [
        (&["exact", "--delta", "1.2"], dir.path()),
        (&["exact", "--Omega", "2"], dir.path()),
        (&["exact", "--config", bad_config.to_str().unwrap()], dir.path()),
        (&["overlap", "--nodes", "10"], dir.path()),
        (&["figure", "7"], dir.path()),
        (&["exact"], &file.join("sub")),
    ];
    for (args, out_dir) in cases {
        let out = bopshox(args, out_dir);
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
    let out = bopshox(&["exact", "--delta", "1.2"], dir.path());
    assert!(String::from_utf8_lossy(&out.stderr).contains("params/CouplingOutOfRange"));
}

#[test]
fn numerical_failures_exit_3() {
    let dir = TempDir::new().unwrap();
    for args in [
        &["shoot", "--tol", "1e-20"][..],
        &["overlap", "--n", "150", "--l", "150", "--delta", "0.99"][..],
    ] {
        let out = bopshox(args, dir.path());
        assert_eq!(out.status.code(), Some(3), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn thread_cap_from_environment() {
    let dir = TempDir::new().unwrap();
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_bopshox"))
            .args(["figure", "2", "--out"])
            .arg(dir.path())
            .env("BOPSHOX_THREADS", threads)
            .output()
            .unwrap()
    };
    assert_eq!(run("1").status.code(), Some(0));
    let capped = fs::read(dir.path().join("figure2.csv")).unwrap();
    assert_eq!(run("4").status.code(), Some(0));
    assert_eq!(capped, fs::read(dir.path().join("figure2.csv")).unwrap());
    for bad in ["0", "-3", "many"] {
        assert_eq!(run(bad).status.code(), Some(2), "BOPSHOX_THREADS={bad}");
    }
}
