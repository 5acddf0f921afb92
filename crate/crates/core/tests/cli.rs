use std::path::Path;
use std::process::{Command, Output};

use obstruct::catalog::{self, Expected};
use obstruct::report::{run_checks, CheckConfig, Status};
use serde_json::Value;

fn obstruct(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_obstruct")).args(args).env("OBSTRUCT_WORKERS", "2").output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn catalog_outcomes_match_expectations() {
    for name in catalog::list() {
        let entry = catalog::load_example(name).unwrap();
        let report = run_checks(&entry.subject, &CheckConfig::defaults_for(&entry.subject)).unwrap();
        for e in &entry.expectations {
            let got = &report.check(e.check).unwrap().status;
            let ok = match e.expected {
                Expected::Pass => *got == Status::Pass,
                Expected::Fail => *got == Status::Fail,
                Expected::Skipped => matches!(got, Status::Skipped { .. }),
            };
            assert!(ok, "{name} {}: expected {:?}, got {got:?} ({})", e.check, e.expected, e.note);
        }
    }
}

#[test]
fn list_examples_names_every_entry() {
    let out = obstruct(&["list-examples"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    for name in catalog::list() {
        assert!(text.lines().any(|l| l.starts_with(name)), "{name} missing");
    }
}

#[test]
fn exit_codes_follow_outcomes() {
    assert_eq!(obstruct(&["example", "flat-torus"]).status.code(), Some(0));
    assert_eq!(obstruct(&["example", "fuzzy-sphere"]).status.code(), Some(1));
    let out = obstruct(&["example", "klein-bottle"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("klein-bottle"));
    assert_eq!(obstruct(&["example", "flat-torus", "--grid", "1"]).status.code(), Some(2));
    assert_eq!(obstruct(&["example", "flat-torus", "--tol", "curvature=-1"]).status.code(), Some(2));
}

#[test]
fn exported_config_reproduces_the_example() {
    let dir = tempfile::tempdir().unwrap();
    for name in ["podles-sphere", "sl2-triangular"] {
        let path = dir.path().join(format!("{name}.json"));
        let p = path.to_str().unwrap();
        assert!(obstruct(&["export-example", name, "--out", p]).status.success());
        let a = obstruct(&["example", name, "--format", "json"]);
        let b = obstruct(&["check", p, "--format", "json"]);
        assert_eq!(a.status.code(), b.status.code());
        assert_eq!(a.stdout, b.stdout);
    }
}

#[test]
fn tolerance_override_flips_a_failure() {
    let out =
        obstruct(&["example", "fuzzy-sphere", "--checks", "curvature", "--tol", "curvature=100", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "pass");
    assert_eq!(v["checks"][0]["tolerance"], 100.0);
}

#[test]
fn config_checks_section_and_points_file() {
    let dir = tempfile::tempdir().unwrap();
    let exported = obstruct(&["export-example", "su2-dual"]);
    let mut cfg: Value = serde_json::from_slice(&exported.stdout).unwrap();
    cfg["checks"] = serde_json::json!({"enabled": ["divergence", "curvature"], "tolerances": {"curvature": 0.3}});
    let cfg_path = write(dir.path(), "su2.json", &cfg.to_string());
    let pts = write(
        dir.path(),
        "pts.txt",
        "# two points, one inside the excluded ball\n0.5 0.5 0.5\n0 0 0\n\n-0.2 0.1 0.9\n",
    );
    let out = obstruct(&["check", &cfg_path, "--points", &pts, "--per-point", "--format", "json"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v = json(&out);
    assert_eq!(v["point_count"], 2);
    assert_eq!(v["checks"].as_array().unwrap().len(), 2);
    assert_eq!(v["checks"][1]["points"].as_array().unwrap().len(), 2);
    assert_eq!(v["checks"][1]["max_defect"], 0.25);

    let bad = write(dir.path(), "bad.txt", "0.5 0.5\n");
    assert_eq!(obstruct(&["check", &cfg_path, "--points", &bad]).status.code(), Some(2));
}

#[test]
fn malformed_configs_exit_with_two() {
    let dir = tempfile::tempdir().unwrap();
    let cases = [
        ("nokind.json", r#"{"name": "x"}"#),
        (
            "extra.json",
            r#"{"kind": "scene", "name": "x", "coordinates": ["x"], "metric": [["1"]], "poisson": [["0"]], "domain": {"lower": [0], "upper": [1]}, "colour": 3}"#,
        ),
        (
            "asym.json",
            r#"{"kind": "scene", "name": "x", "coordinates": ["x", "y"], "metric": [["1", "0"], ["0", "1"]], "poisson": [["0", "x"], ["x", "0"]], "domain": {"lower": [0, 0], "upper": [1, 1]}}"#,
        ),
        (
            "syntax.json",
            r#"{"kind": "scene", "name": "x", "coordinates": ["x"], "metric": [["2x"]], "poisson": [["0"]], "domain": {"lower": [0], "upper": [1]}}"#,
        ),
    ];
    for (name, text) in cases {
        let p = write(dir.path(), name, text);
        let out = obstruct(&["check", &p]);
        assert_eq!(out.status.code(), Some(2), "{name}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn evaluation_errors_carry_the_point() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = r#"{
        "kind": "scene", "name": "log-metric", "coordinates": ["x", "y"],
        "metric": [["1", "0"], ["0", "1"]],
        "poisson": [["0", "log(x)"], ["-log(x)", "0"]],
        "domain": {"lower": [1, 0], "upper": [2, 1]},
        "checks": {"enabled": ["divergence"]}
    }"#;
    let p = write(dir.path(), "log.json", cfg);
    let pts = write(dir.path(), "pts.txt", "1.5 0.5\n-1 0.5\n");
    let out = obstruct(&["check", &p, "--points", &pts, "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["checks"][0]["status"], "error");
    assert_eq!(v["checks"][0]["point"], serde_json::json!([-1.0, 0.5]));
}

#[test]
fn csv_points_for_a_chosen_check() {
    let out =
        obstruct(&["example", "podles-sphere", "--format", "csv-points", "--csv-check", "divergence", "--grid", "3,4"]);
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "x0,x1,defect");
    assert_eq!(lines.len(), 1 + 12);
    assert_eq!(lines[1], "-2,-2,4");
}

#[test]
fn timing_only_when_asked() {
    let plain = json(&obstruct(&["example", "sl2-triangular", "--format", "json"]));
    assert!(plain.get("wall_time_ms").is_none());
    let timed = json(&obstruct(&["example", "sl2-triangular", "--format", "json", "--timing"]));
    assert!(timed["wall_time_ms"].as_f64().unwrap() >= 0.0);
}
