use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn pslab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_pslab"))
        .args(args)
        .env("PSLAB_THREADS", "2")
        .output()
        .expect("binary runs")
}

fn json_of(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn check<'a>(cert: &'a Value, name: &str) -> &'a Value {
    cert["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["name"] == name)
        .unwrap_or_else(|| panic!("no check {name}"))
}

const BROKEN_CURVE: &str = "\
label: broken
c1: 2*cos(t)/(3*sqrt3)
c2: 2*sin(t)/(3*sqrt3)
c3: cos(2*t)/(3*sqrt3)
c4: sin(2*t)/(3*sqrt3)
c5: 1
domain: -pi pi
";

#[test]
fn validate_builtins() {
    for name in ["veronese-generator", "alpha0"] {
        let out = pslab(&["validate-curve", "--builtin", name]);
        assert_eq!(out.status.code(), Some(0), "{name}");
        let cert = json_of(&out);
        assert_eq!(cert["verdict"], "pass");
        assert_eq!(cert["command"], "validate-curve");
        assert_eq!(cert["input"]["sha256"].as_str().unwrap().len(), 64);
    }
}

#[test]
fn input_errors_exit_one() {
    assert_eq!(
        pslab(&["report", "--builtin", "nope"]).status.code(),
        Some(1)
    );
    assert_eq!(pslab(&["report"]).status.code(), Some(1));
    assert_eq!(
        pslab(&["report", "--curve", "/nonexistent/curve.txt"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(
        pslab(&["sample", "--builtin", "alpha0", "--grid", "1x5"])
            .status
            .code(),
        Some(1)
    );
    assert_eq!(pslab(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn failing_curve_writes_no_sample_file() {
    let dir = tempfile::tempdir().unwrap();
    let curve = dir.path().join("broken.txt");
    std::fs::write(&curve, BROKEN_CURVE).unwrap();
    let target = dir.path().join("out.csv");
    let out = pslab(&[
        "sample",
        "--curve",
        curve.to_str().unwrap(),
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!target.exists());
    let cert = json_of(&out);
    assert_eq!(cert["verdict"], "fail");

    let out = pslab(&["validate-curve", "--curve", curve.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

fn read_csv(path: &Path) -> (Vec<String>, Vec<Vec<f64>>) {
    let mut rd = csv::Reader::from_path(path).unwrap();
    let header = rd.headers().unwrap().iter().map(String::from).collect();
    let rows = rd
        .records()
        .map(|r| r.unwrap().iter().map(|v| v.parse().unwrap()).collect())
        .collect();
    (header, rows)
}

#[test]
fn csv_sample_lies_on_the_pseudo_sphere() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("a.csv");
    let out = pslab(&[
        "sample",
        "--builtin",
        "alpha0",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let (header, rows) = read_csv(&target);
    assert_eq!(header[0], "s");
    assert_eq!(header.len(), 11);
    assert_eq!(rows.len(), 400);
    let col = header.iter().position(|h| h == "sphere_residual").unwrap();
    for r in &rows {
        assert!(r[col] < 1e-10, "{r:?}");
        let x = &r[2..7];
        let q = -x[0] * x[0] - x[1] * x[1] + x[2] * x[2] + x[3] * x[3] + x[4] * x[4];
        assert!((q - 1.0).abs() < 1e-10);
    }
}

#[test]
fn obj_mesh_counts() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("v.obj");
    let out = pslab(&[
        "sample",
        "--builtin",
        "veronese-generator",
        "--format",
        "obj",
        "--projection",
        "1,3,5",
        "--out",
        target.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(&target).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("v ")).count(), 400);
    assert_eq!(text.lines().filter(|l| l.starts_with("f ")).count(), 722);
    assert!(text.contains("# projection: coordinates x1 x3 x5"));
}

#[test]
fn certificates_are_deterministic() {
    let args = ["report", "--builtin", "alpha0", "--grid", "8x8"];
    let a = pslab(&args);
    let b = Command::new(env!("CARGO_BIN_EXE_pslab"))
        .args(args)
        .env("PSLAB_THREADS", "5")
        .output()
        .unwrap();
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let cert = json_of(&a);
    assert_eq!(cert["verdict"], "pass");
    assert_eq!(check(&cert, "minimality")["status"], "pass");
    assert_eq!(check(&cert, "connection-forms")["status"], "pass");
}

#[test]
fn low_jet_order_skips_connection_checks() {
    let out = pslab(&[
        "report",
        "--builtin",
        "alpha0",
        "--grid",
        "6x6",
        "--jet-order",
        "4",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_of(&out);
    assert_eq!(check(&cert, "connection-forms")["status"], "skipped");
    assert_eq!(check(&cert, "minimality")["status"], "pass");
}

#[test]
fn veronese_surface_report() {
    let out = pslab(&["report", "--builtin", "veronese-surface", "--grid", "10x10"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_of(&out);
    assert_eq!(check(&cert, "normal-curvature-signed")["status"], "pass");
}

#[test]
fn congruence_verdicts() {
    let out = pslab(&["congruence", "--builtin", "veronese-generator"]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json_of(&out)["verdict"], "veronese-congruent");

    let out = pslab(&["congruence", "--builtin", "alpha0"]);
    assert_eq!(out.status.code(), Some(0));
    let cert = json_of(&out);
    assert_eq!(cert["verdict"], "not-congruent");
    assert!(cert["congruence"]["max_abs_c"].as_f64().unwrap() > 60.0);

    let out = pslab(&["congruence", "--builtin", "alpha0", "--t-range", "0:0.01"]);
    assert_eq!(out.status.code(), Some(2));
    assert_eq!(json_of(&out)["verdict"], "inconclusive");
}

#[test]
fn selftest_passes_and_reports_failures() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("self.json");
    let out = pslab(&["selftest", "--out", target.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 8);
    let cert: Value = serde_json::from_str(&std::fs::read_to_string(&target).unwrap()).unwrap();
    assert_eq!(cert["verdict"], "pass");

    let out = pslab(&["selftest", "--tol-geom", "1e-15"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FAIL"));
}
