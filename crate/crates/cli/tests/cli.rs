//! End-to-end checks of the binary: determinism, exit codes, and the
//! documented scenario examples.

use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_conic-qm"))
}

fn scenario(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../scenarios").join(name)
}

fn run_ok(args: &[&str]) -> Output {
    let out = bin().args(args).output().expect("spawn binary");
    assert!(
        out.status.success(),
        "exit {:?}\nstdout: {}\nstderr: {}",
        out.status.code(),
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    out
}

#[test]
fn selfcheck_passes_and_is_byte_identical() {
    let a = run_ok(&["selfcheck"]);
    let b = run_ok(&["selfcheck"]);
    assert_eq!(a.stdout, b.stdout);
    let text = String::from_utf8(a.stdout).unwrap();
    assert!(text.contains("all 11 suites passed"), "{text}");
    assert!(!text.contains("FAIL"), "{text}");
}

#[test]
fn run_reports_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = scenario("dephasing.json");
    let out_a = dir.path().join("a.json");
    let out_b = dir.path().join("b.json");
    run_ok(&["run", path.to_str().unwrap(), "--out", out_a.to_str().unwrap()]);
    run_ok(&["run", path.to_str().unwrap(), "--out", out_b.to_str().unwrap()]);
    let a = std::fs::read(&out_a).unwrap();
    let b = std::fs::read(&out_b).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b);

    // both routes report the fair coin on {+1, -1}
    let report: serde_json::Value = serde_json::from_slice(&a).unwrap();
    let routes = report["routes"].as_array().unwrap();
    assert_eq!(routes.len(), 2);
    for route in routes {
        let entries = route["distribution"]["entries"].as_array().unwrap();
        assert_eq!(entries.len(), 2);
        for e in entries {
            assert!((e["probability"].as_f64().unwrap() - 0.5).abs() < 1e-8);
        }
    }
    assert!(report.get("wall_time_ms").is_none());
}

#[test]
fn spin_rotation_example_distribution() {
    let out = run_ok(&["run", scenario("spin_rotation.json").to_str().unwrap()]);
    let report: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let entries = report["routes"][0]["distribution"]["entries"].as_array().unwrap();
    let got: Vec<(f64, f64)> = entries
        .iter()
        .map(|e| (e["value"].as_f64().unwrap(), e["probability"].as_f64().unwrap()))
        .collect();
    assert_eq!(got.len(), 2);
    assert!((got[0].0 - 1.0).abs() < 1e-9 && (got[0].1 - 0.8).abs() < 1e-9, "{got:?}");
    assert!(got[1].0.abs() < 1e-9 && (got[1].1 - 0.2).abs() < 1e-9, "{got:?}");
}

#[test]
fn unnormalized_state_is_a_validation_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("bad.json");
    std::fs::write(
        &path,
        r#"{
        "cone": {"kind": "psd_hermitian", "n": 2},
        "state": {"matrix": [[[0.5,0],[0,0]],[[0,0],[0.4,0]]]},
        "quantity": {"hermitian": [[[1,0],[0,0]],[[0,0],[-1,0]]]}
    }"#,
    )
    .unwrap();
    let out = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("not normalized"), "{err}");
}

#[test]
fn malformed_json_points_at_the_field() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("typo.json");
    std::fs::write(
        &path,
        r#"{"cone": {"kind": "psd_hermitian", "n": 2}, "stat": {"coords": [1]}}"#,
    )
    .unwrap();
    let out = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("typo.json"));
}

#[test]
fn quadrature_node_overflow_is_a_range_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("tiny_eps.json");
    std::fs::write(
        &path,
        r#"{
        "cone": {"kind": "psd_hermitian", "n": 2},
        "state": {"matrix": [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]},
        "quantity": {"hermitian": [[[1,0],[0,0]],[[0,0],[-1,0]]]},
        "route": "numeric",
        "epsilons": [1e-30]
    }"#,
    )
    .unwrap();
    let out = bin().args(["run", path.to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&out.stderr).contains("epsilon"));
}

#[test]
fn converge_emits_decreasing_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("conv.csv");
    run_ok(&[
        "converge",
        scenario("dephasing.json").to_str().unwrap(),
        "--out",
        out_path.to_str().unwrap(),
    ]);
    let csv = std::fs::read_to_string(&out_path).unwrap();
    let mut lines = csv.lines();
    assert_eq!(lines.next(), Some("epsilon,error_norm,nodes,wall_time_ms"));
    let errs: Vec<f64> = lines
        .map(|l| l.split(',').nth(1).unwrap().parse().unwrap())
        .collect();
    assert_eq!(errs.len(), 3);
    assert!(errs.windows(2).all(|w| w[1] < w[0]), "{errs:?}");
    assert!(errs[2] <= 1e-9, "{errs:?}");
}

#[test]
fn converge_with_zero_generator_reports_zero_error() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("identity.json");
    std::fs::write(
        &path,
        r#"{
        "cone": {"kind": "psd_hermitian", "n": 2},
        "state": {"matrix": [[[0.5,0],[0.5,0]],[[0.5,0],[0.5,0]]]},
        "quantity": {"hermitian": [[[1,0],[0,0]],[[0,0],[1,0]]]}
    }"#,
    )
    .unwrap();
    let out = run_ok(&["converge", path.to_str().unwrap()]);
    let csv = String::from_utf8(out.stdout).unwrap();
    for line in csv.lines().skip(1) {
        let err: f64 = line.split(',').nth(1).unwrap().parse().unwrap();
        assert_eq!(err, 0.0, "{line}");
    }
}

#[test]
fn batch_run_writes_one_report_per_scenario() {
    let dir = tempfile::tempdir().unwrap();
    let out_dir = dir.path().join("reports");
    run_ok(&[
        "run",
        scenario("dephasing.json").to_str().unwrap(),
        scenario("spin_rotation.json").to_str().unwrap(),
        "--out",
        out_dir.to_str().unwrap(),
    ]);
    for name in ["dephasing.report.json", "spin_rotation.report.json"] {
        let report = std::fs::read_to_string(out_dir.join(name)).unwrap();
        let parsed: serde_json::Value = serde_json::from_str(&report).unwrap();
        assert!(parsed["routes"].is_array(), "{name}");
    }
}
