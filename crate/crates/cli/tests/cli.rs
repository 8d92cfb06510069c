use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn corpus(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(format!("{name}.json"))
        .to_string_lossy()
        .into_owned()
}

fn otc(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_otc"))
        .args(args)
        .output()
        .expect("run otc")
}

fn stderr(o: &Output) -> String {
    String::from_utf8_lossy(&o.stderr).into_owned()
}

#[test]
fn compute_reports_the_example() {
    let out = otc(&["compute", &corpus("cubic2")]);
    assert_eq!(out.status.code(), Some(0), "{}", stderr(&out));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(r["schema_version"], 1);
    assert_eq!(r["status"], "ok");
    assert_eq!(r["betti"]["values"], serde_json::json!([1, 1, 0, 1, 1]));
    assert_eq!(r["lck"]["lee_class"], serde_json::json!([["1", "0"]]));
    assert!(r.get("telemetry").is_some());
    assert!(r.get("timing_ms").is_none());
}

#[test]
fn quiet_strips_telemetry_and_timing_adds_it() {
    let out = otc(&["compute", &corpus("cubic2"), "--quiet", "--timing"]);
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(r.get("telemetry").is_none());
    assert!(r.get("timing_ms").is_some());
}

#[test]
fn keys_are_sorted() {
    let out = otc(&["compute", &corpus("plastic")]);
    let text = String::from_utf8(out.stdout).unwrap();
    let top: Vec<&str> = text
        .lines()
        .filter(|l| l.starts_with("  \"") && !l.starts_with("   "))
        .collect();
    let mut sorted = top.clone();
    sorted.sort();
    assert_eq!(top, sorted);
}

#[test]
fn out_flag_writes_the_report() {
    let dir = std::env::temp_dir().join(format!("otc-test-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("report.json");
    let out = otc(&["compute", &corpus("cubic2"), "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(r["chern_vanishing"], 1);
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn numeric_mode_agrees_with_exact() {
    let exact: Value = serde_json::from_slice(&otc(&["compute", &corpus("quintic2"), "--quiet"]).stdout).unwrap();
    let out = otc(&["compute", &corpus("quintic2"), "--quiet", "--certify", "numeric"]);
    assert!(out.status.success());
    let numeric: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(exact["betti"], numeric["betti"]);
    assert_eq!(exact["rho"]["trivial_sets"], numeric["rho"]["trivial_sets"]);
    assert_eq!(numeric["rho"]["verdicts"][1]["certificate"]["kind"], "numeric_certified");
}

#[test]
fn paranoid_matches_default() {
    let a: Value = serde_json::from_slice(&otc(&["compute", &corpus("septic2"), "--quiet"]).stdout).unwrap();
    let b: Value =
        serde_json::from_slice(&otc(&["compute", &corpus("septic2"), "--quiet", "--paranoid"]).stdout).unwrap();
    assert_eq!(a["rho"], b["rho"]);
}

#[test]
fn theta_from_input_adds_twisted_vectors() {
    let out = otc(&["compute", &corpus("cubic2_theta"), "--quiet", "--theta-from-input"]);
    assert!(out.status.success(), "{}", stderr(&out));
    let r: Value = serde_json::from_slice(&out.stdout).unwrap();
    let labels: Vec<&str> = r["twisted"]
        .as_array()
        .unwrap()
        .iter()
        .map(|t| t["label"].as_str().unwrap())
        .collect();
    assert_eq!(labels, ["zero", "lee", "lee_negated", "input", "input_negated"]);
}

#[test]
fn malformed_theta_length_is_rejected() {
    let out = otc(&["compute", &corpus("bad_theta")]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("theta length 2 ≠ s=1"), "{}", stderr(&out));
}

#[test]
fn identity_unit_fails_validation_before_oracle() {
    let out = otc(&["oracle", &corpus("identity_unit"), "--bits", "512"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("not certified"), "{}", stderr(&out));
}

#[test]
fn oracle_refuses_degree_nine() {
    let dir = std::env::temp_dir().join(format!("otc-nonic-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("nonic.json");
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "polynomial": [-2, 0, 0, 0, 0, 0, 0, 0, 0, 1],
            "units": [["-1", "1", "0", "0", "0", "0", "0", "0", "0"]]}"#,
    )
    .unwrap();
    let out = otc(&["oracle", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("at most 8"), "{}", stderr(&out));
    std::fs::remove_dir_all(dir).ok();
}

#[test]
fn verify_passes_on_plastic() {
    let out = otc(&["verify", &corpus("plastic")]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).contains("verify: pass"));
}

#[test]
fn fault_injection_names_the_identity() {
    let out = otc(&["verify", &corpus("fault_betti")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL euler_characteristic"), "{text}");
    assert!(stderr(&out).contains("violated identity: poincare_symmetry"));

    let out = otc(&["verify", &corpus("fault_rho")]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL rho_symmetry"), "{text}");
    assert!(text.contains("PASS euler_characteristic"), "{text}");
}

#[test]
fn parse_errors_carry_locations() {
    let dir = std::env::temp_dir().join(format!("otc-parse-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("broken.json");
    std::fs::write(&path, "{\n  \"schema_version\": 1,\n  \"polynomial\": [1, 2,\n}").unwrap();
    let out = otc(&["compute", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stderr(&out).contains("line 4"), "{}", stderr(&out));
    std::fs::write(
        &path,
        r#"{"schema_version": 1, "polynomial": [-2, 0, 0, 1], "units": [["-1", "one", "0"]]}"#,
    )
    .unwrap();
    let out = otc(&["compute", path.to_str().unwrap()]);
    assert!(stderr(&out).contains("units[0][1]"), "{}", stderr(&out));
    std::fs::remove_dir_all(dir).ok();
}
