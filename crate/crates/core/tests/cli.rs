use std::path::Path;
use std::process::{Command, Output};

use tangent_porosity::report::RunManifest;

fn bin(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_tangent-porosity"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn code(args: &[&str]) -> i32 {
    bin(args).status.code().expect("exit code")
}

fn read_json(path: &Path) -> serde_json::Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn porosity_expectations_set_the_exit_code() {
    assert_eq!(code(&["porosity", "--set", "geometric:1/2", "--criterion", "w", "--expect", "fails"]), 0);
    assert_eq!(code(&["porosity", "--set", "example-2-8:40", "--criterion", "w", "--expect", "holds"]), 0);
    assert_eq!(code(&["porosity", "--set", "example-2-8:40", "--criterion", "w", "--expect", "fails"]), 1);
    assert_eq!(code(&["porosity", "--set", "geometric:1/2:oops", "--criterion", "w"]), 3);
    assert_eq!(code(&["porosity", "--set", "@/nonexistent/set.json", "--criterion", "w"]), 3);
    assert_eq!(code(&["porosity", "--set", "factorial", "--criterion", "w", "--format", "xml"]), 3);
}

#[test]
fn porosity_writes_verdicts_scores_and_manifest() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let set = r#"{"kind":"explicit","log2_points":["0","-1","-3","-7","-15","-31","-63","-127","-255","-511"],"contains_zero":true}"#;
    let o = bin(&["porosity", "--set", set, "--criterion", "tau", "--criterion", "w", "--out", out]);
    assert!(matches!(o.status.code(), Some(0 | 2)), "{}", String::from_utf8_lossy(&o.stderr));

    let tau = read_json(&dir.path().join("tau.json"));
    assert_eq!(tau["criterion"], "tau");
    assert!(tau["status"].is_string());
    let scores = std::fs::read_to_string(dir.path().join("tau_scores.csv")).unwrap();
    assert!(scores.starts_with("n,log2_tau_n,best_k,log2_K_star\n"));
    assert!(dir.path().join("w.json").exists());

    let manifest: RunManifest =
        serde_json::from_str(&std::fs::read_to_string(dir.path().join("manifest.json")).unwrap()).unwrap();
    assert!(manifest.verify());
    assert!(!manifest.command.iter().any(|a| a == out));
    assert!(manifest.outputs.iter().all(|p| dir.path().join(p).exists()));
}

#[test]
fn pretangent_reports_agreement() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let o = bin(&["pretangent", "--set", "factorial", "--trials", "4", "--out", out]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let rep = read_json(&dir.path().join("experiment.json"));
    assert_eq!(rep["w_status"], "holds");
    assert_eq!(rep["agreement"], "agree");
    let runs = std::fs::read_to_string(dir.path().join("runs.csv")).unwrap();
    assert!(runs.starts_with("run_id,r_descriptor,diameter,class_count,status\n"));
    assert!(read_json(&dir.path().join("manifest.json"))["config_digest"].is_string());
}

#[test]
fn non_metric_space_is_an_error() {
    let o = bin(&["pretangent", "--set", "geometric:1/2", "--space", "squared-line", "--trials", "2"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains("triangle"));
}

#[test]
fn unknown_config_keys_are_rejected() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("cfg.json");
    std::fs::write(&cfg, r#"{"depth": 40, "windw": "1/2"}"#).unwrap();
    let o = bin(&["pretangent", "--set", "factorial", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn reproduce_example_passes_and_reports() {
    let dir = tempfile::tempdir().unwrap();
    let o = bin(&["reproduce", "example-2-8", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stdout));
    let report = std::fs::read_to_string(dir.path().join("report.txt")).unwrap();
    assert!(report.contains("result: pass"));
    assert!(std::fs::read_to_string(dir.path().join("trace.csv")).unwrap().lines().count() == 41);
    assert_eq!(code(&["reproduce", "no-such-target"]), 3);
}

#[test]
fn help_and_version_exit_zero() {
    assert_eq!(code(&["--help"]), 0);
    assert_eq!(code(&["--version"]), 0);
    assert_eq!(code(&[]), 3);
}
