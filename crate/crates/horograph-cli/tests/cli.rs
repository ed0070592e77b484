//! End to end runs of the binary: exit codes, artifact layout and byte
//! reproducibility.

use std::fs;
use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_horograph"))
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("horograph-cli-{name}-{}", std::process::id()));
    let _ = fs::remove_dir_all(&dir);
    fs::create_dir_all(&dir).unwrap();
    dir
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("no signal")
}

#[test]
fn construct_then_check_round_trips() {
    let dir = scratch("roundtrip");
    let poly = dir.join("poly.json");
    let out = bin()
        .args(["construct", "--m0", "1", "--out"])
        .arg(&poly)
        .output()
        .unwrap();
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let out = bin().args(["check", "--input"]).arg(&poly).output().unwrap();
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("verdict: solvable"), "{text}");
}

#[test]
fn malformed_input_exits_two() {
    let dir = scratch("malformed");
    let bad = dir.join("bad.json");
    fs::write(&bad, "{\"vertices\": 3}").unwrap();
    let out = bin().args(["check", "--input"]).arg(&bad).output().unwrap();
    assert_eq!(code(&out), 2);
    let missing = dir.join("missing.json");
    let out = bin()
        .args(["check", "--input"])
        .arg(&missing)
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn bad_parameters_exit_two() {
    let dir = scratch("params");
    let out = bin()
        .args(["construct", "--m0", "2", "--lambda", "1.5", "--out"])
        .arg(dir.join("x.json"))
        .output()
        .unwrap();
    assert_eq!(code(&out), 2);
}

#[test]
fn misaligned_polygon_exits_one_with_witness() {
    let dir = scratch("witness");
    let poly = dir.join("poly.json");
    let status = bin()
        .args(["construct", "--m0", "1", "--out"])
        .arg(&poly)
        .status()
        .unwrap();
    assert!(status.success());
    let mut value: serde_json::Value =
        serde_json::from_str(&fs::read_to_string(&poly).unwrap()).unwrap();
    value["vertices"][3]["y"] = serde_json::json!(0.4);
    fs::write(&poly, serde_json::to_string(&value).unwrap()).unwrap();
    let out = bin().args(["check", "--input"]).arg(&poly).output().unwrap();
    assert_eq!(code(&out), 1);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("witness"), "{text}");
    assert!(text.contains("verdict: not solvable"), "{text}");
}

#[test]
fn repeated_solves_write_identical_bytes() {
    let dir = scratch("bytes");
    let poly = dir.join("poly.json");
    let status = bin()
        .args(["construct", "--m0", "1", "--out"])
        .arg(&poly)
        .status()
        .unwrap();
    assert!(status.success());
    for run in ["a", "b"] {
        let status = bin()
            .args(["solve", "--h", "0.25", "--cap", "3", "--input"])
            .arg(&poly)
            .arg("--outdir")
            .arg(dir.join(run))
            .status()
            .unwrap();
        assert!(status.success());
    }
    for name in [
        "solution.json",
        "diagnostics.json",
        "graph.obj",
        "double.obj",
        "edge_flux.csv",
    ] {
        let a = fs::read(dir.join("a").join(name)).unwrap();
        let b = fs::read(dir.join("b").join(name)).unwrap();
        assert_eq!(a, b, "{name} differs between runs");
    }
    let solution = fs::read_to_string(dir.join("a/solution.json")).unwrap();
    assert!(solution.contains("\"config\""));
    let csv = fs::read_to_string(dir.join("a/edge_flux.csv")).unwrap();
    assert!(csv.starts_with("# config "), "{csv}");
    assert!(csv.contains("horograph "));
}

#[test]
fn sweep_ratios_increase_with_the_cap() {
    let dir = scratch("sweep");
    let poly = dir.join("poly.json");
    let status = bin()
        .args(["construct", "--m0", "1", "--out"])
        .arg(&poly)
        .status()
        .unwrap();
    assert!(status.success());
    let csv_path = dir.join("sweep.csv");
    let status = bin()
        .args([
            "sweep", "--h", "0.25", "--caps", "2,4", "--edge", "A:1:0", "--window", "0.25,0.75",
            "--input",
        ])
        .arg(&poly)
        .arg("--out")
        .arg(&csv_path)
        .status()
        .unwrap();
    assert!(status.success());
    let csv = fs::read_to_string(&csv_path).unwrap();
    let ratios: Vec<f64> = csv
        .lines()
        .skip(2)
        .map(|l| l.rsplit(',').next().unwrap().parse().unwrap())
        .collect();
    assert_eq!(ratios.len(), 2);
    assert!(ratios[0] < ratios[1]);
    assert!((ratios[1] - 1.0).abs() < 0.1);
}

#[test]
fn export_rebuilds_the_stored_surface() {
    let dir = scratch("export");
    let poly = dir.join("poly.json");
    assert!(bin()
        .args(["construct", "--m0", "1", "--out"])
        .arg(&poly)
        .status()
        .unwrap()
        .success());
    assert!(bin()
        .args(["solve", "--h", "0.25", "--input"])
        .arg(&poly)
        .arg("--outdir")
        .arg(dir.join("run"))
        .status()
        .unwrap()
        .success());
    let status = bin()
        .args(["export", "--disk", "--input"])
        .arg(dir.join("run/solution.json"))
        .arg("--stem")
        .arg(dir.join("surface"))
        .status()
        .unwrap();
    assert!(status.success());
    let obj = fs::read_to_string(dir.join("surface.obj")).unwrap();
    assert!(obj.starts_with("# config "));
    let doubled = fs::read_to_string(dir.join("surface_double.obj")).unwrap();
    let faces = |s: &str| s.lines().filter(|l| l.starts_with("f ")).count();
    assert_eq!(2 * faces(&obj), faces(&doubled));
}
