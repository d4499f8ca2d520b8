use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_cgl-quantizer"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().expect("exited normally")
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn scratch(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    dir.join(format!("{}-{name}", std::process::id()))
}

fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}.json", env!("CARGO_MANIFEST_DIR"))
}

#[test]
fn quantize_and_verify_weyl() {
    let out = run(&["quantize", "--fixture", "weyl3", "--verify"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let v = stdout_json(&out);
    assert_eq!(v["relations"][1], "X1*X3 = X3*X1 + (1/2 - 1/2*q^2)*X2^2");
    assert_eq!(v["y_sequence"][2], "X1*X3 - 1/2*X2^2");
    assert_eq!(v["verification"]["passed"], true);
}

#[test]
fn spec_path_matches_bundled_fixture() {
    let a = run(&["quantize", &fixture_path("chain3")]);
    let b = run(&["quantize", "--fixture", "chain3"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["quantize", "--fixture", "m2x2", "--verify"]);
    let b = run(&["quantize", "--fixture", "m2x2", "--verify", "--sequential"]);
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn analyze_reports_the_determinant() {
    let out = run(&["analyze", "--fixture", "m2x2"]);
    assert_eq!(code(&out), 0);
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("t11*t22 - t12*t21"), "{text}");
}

#[test]
fn validate_accepts_fixtures() {
    for name in ["quantum-plane", "weyl3", "chain3", "m2x2"] {
        let out = run(&["validate", "--fixture", name]);
        assert_eq!(code(&out), 0, "{name}");
        assert_eq!(stdout_json(&out)["report"]["valid"], true);
    }
}

#[test]
fn malformed_spec_exits_2() {
    let path = scratch("bad.json");
    std::fs::write(&path, "{\"n\": ").unwrap();
    let out = run(&["quantize", path.to_str().unwrap()]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("parse error"));
}

#[test]
fn unknown_fixture_exits_2() {
    assert_eq!(code(&run(&["analyze", "--fixture", "nope"])), 2);
}

#[test]
fn bad_epsilon_exits_2() {
    assert_eq!(
        code(&run(&["quantize", "--fixture", "weyl3", "--epsilon", "2"])),
        2
    );
}

#[test]
fn scaled_epsilon_still_verifies() {
    let out = run(&[
        "quantize",
        "--fixture",
        "weyl3",
        "--epsilon",
        "2 - q",
        "--verify",
    ]);
    assert_eq!(code(&out), 0);
    let eps = &stdout_json(&out)["verification"]["epsilons"];
    assert!(eps.to_string().contains("2 - q"), "{eps}");
}

#[test]
fn peel_cap_exits_3() {
    let out = run(&["quantize", "--fixture", "weyl3", "--max-peel", "0"]);
    assert_eq!(code(&out), 3);
}

#[test]
fn verify_round_trips_a_written_presentation() {
    let out = run(&["quantize", "--fixture", "chain3"]);
    assert_eq!(code(&out), 0);
    let path = scratch("chain3-pres.json");
    std::fs::write(&path, &out.stdout).unwrap();
    let ok = run(&[
        "verify",
        "--fixture",
        "chain3",
        "--presentation",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));

    let mut v = stdout_json(&out);
    v["delta"]["2"]["1"] = Value::from("2*q - 2");
    std::fs::write(&path, v.to_string()).unwrap();
    let bad = run(&[
        "verify",
        "--fixture",
        "chain3",
        "--presentation",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&bad), 1);
    assert_eq!(stdout_json(&bad)["passed"], false);
}

#[test]
fn audit_is_written_to_file() {
    let path = scratch("weyl3-audit.json");
    let out = run(&[
        "quantize",
        "--fixture",
        "weyl3",
        "--audit",
        path.to_str().unwrap(),
    ]);
    assert_eq!(code(&out), 0);
    assert!(stdout_json(&out).get("audit").is_none());
    let audit: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(audit.as_array().unwrap().len(), 2);
}

#[test]
fn fixtures_run_passes() {
    let out = run(&["fixtures", "run", "--jobs", "2"]);
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    let outcomes = stdout_json(&out);
    assert_eq!(outcomes.as_array().unwrap().len(), 4);
    assert!(outcomes
        .as_array()
        .unwrap()
        .iter()
        .all(|o| o["passed"] == true));
    assert_eq!(code(&run(&["fixtures", "run", "--fixture", "nope"])), 2);
}
