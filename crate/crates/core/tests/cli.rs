use std::process::{Command, Output};

use serde_json::Value;

fn fixture(name: &str) -> String {
    format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn realdescent(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_realdescent"))
        .args(args)
        .env_remove("REALDESCENT_BUDGET")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn json_report(path: &str) -> Value {
    let o = realdescent(&["descend", path, "--format", "json"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    serde_json::from_slice(&o.stdout).expect("valid json")
}

#[test]
fn humbert_descends() {
    let o = realdescent(&["descend", &fixture("humbert.problem")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("branch: GenericDescent"));
    assert!(text.contains("W: empty"));
    assert!(!text.contains("[FAIL]"));
    assert!(text.contains("  t11\n"));
}

#[test]
fn identity_symmetry_is_rejected() {
    let o = realdescent(&["descend", &fixture("identity.problem")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("witness"));
}

#[test]
fn self_conjugate_input() {
    let report = json_report(&fixture("circle.problem"));
    assert_eq!(report["branch"], "SelfConjugate");
    assert_eq!(report["z_generators"], serde_json::json!(["x^2 + y^2 - 1"]));
    assert_eq!(report["w_status"], "not_applicable");
}

#[test]
fn resource_limit_exits_three() {
    let o = realdescent(&["descend", &fixture("humbert.problem"), "--budget", "1"]);
    assert_eq!(o.status.code(), Some(3));
    let o = Command::new(env!("CARGO_BIN_EXE_realdescent"))
        .args(["descend", &fixture("humbert.problem")])
        .env("REALDESCENT_BUDGET", "1")
        .output()
        .unwrap();
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn usage_errors_exit_one() {
    assert_eq!(realdescent(&["project", &fixture("humbert.problem"), "--keep", ""]).status.code(), Some(1));
    assert_eq!(realdescent(&["project", &fixture("humbert.problem"), "--keep", "q7"]).status.code(), Some(1));
    assert_eq!(realdescent(&["descend", "/no/such/file"]).status.code(), Some(1));
    assert_eq!(realdescent(&["frobnicate"]).status.code(), Some(1));
}

#[test]
fn gb_and_check() {
    let o = realdescent(&["gb", &fixture("toy.problem")]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).trim(), "x^2 - i");
    let o = realdescent(&["check", &fixture("humbert.problem")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("[pass] cocycle_involution"));
}

#[test]
fn projection_output() {
    let o = realdescent(&["project", &fixture("humbert.problem"), "--keep", "t1,t2,t3,t4"]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("birationality not certified"));
    assert!(text.contains("t1^2 + t4^2 - 2"));
}

#[test]
fn json_is_deterministic_and_matches_schema() {
    let schema: Value = serde_json::from_str(include_str!("../schema/report.schema.json")).expect("schema is json");
    let compiled = jsonschema::JSONSchema::compile(&schema).expect("schema compiles");
    for name in ["toy.problem", "humbert.problem", "circle.problem"] {
        let a = realdescent(&["descend", &fixture(name), "--format", "json"]);
        let b = realdescent(&["descend", &fixture(name), "--format", "json"]);
        assert_eq!(a.stdout, b.stdout, "{name}: output differs between runs");
        let report: Value = serde_json::from_slice(&a.stdout).unwrap();
        let msgs: Vec<String> = match compiled.validate(&report) {
            Ok(()) => Vec::new(),
            Err(errors) => errors.map(|e| e.to_string()).collect(),
        };
        assert!(msgs.is_empty(), "{name}: {msgs:?}");
    }
}

#[test]
fn output_file() {
    let dir = std::env::temp_dir().join(format!("realdescent-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("toy.json");
    let o = realdescent(&["descend", &fixture("toy.problem"), "--format", "json", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(report["z_generators"], serde_json::json!(["t1^2 + 2", "t2 + 1"]));
    std::fs::remove_dir_all(&dir).ok();
}
