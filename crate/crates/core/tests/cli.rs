use std::path::Path;
use std::process::{Command, Output};

use sft_core::theorem::SEMIDECISION_CAVEAT;

fn sft(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sft")).args(args).output().unwrap()
}

fn stdout(out: &Output) -> serde_json::Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn emit(dir: &Path, name: &str) {
    let out = sft(&["corpus", "emit", name, "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}

fn path(dir: &Path, file: &str) -> String {
    dir.join(file).to_str().unwrap().to_string()
}

#[test]
fn validate_and_d2_on_the_toy() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-overtwisted");
    let out = sft(&["validate", "--action", &path(dir.path(), "toy-overtwisted.sft-star.json")]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert_eq!(report["verdict"], "valid");
    assert_eq!(report["inputs"].as_array().unwrap().len(), 2);
    let out = sft(&["d2", &path(dir.path(), "toy-overtwisted.sft.json")]);
    assert_eq!(out.status.code(), Some(0));
}

#[test]
fn failed_checks_exit_with_one() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-overtwisted");
    // d q_b = q_c and d q_c = q_e give d^2 q_b = q_e
    let text = r#"{
  "version": 1,
  "flavor": "CH",
  "contactData": "toy-overtwisted.contact.json",
  "images": [
    {"generator": "q:b", "terms": [{"coeff": "1", "q": {"c": 1}}]},
    {"generator": "q:c", "terms": [{"coeff": "1", "q": {"e": 1}}]}
  ]
}
"#;
    let file = dir.path().join("broken.json");
    std::fs::write(&file, text).unwrap();
    let out = sft(&["d2", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out)["verdict"].as_str().unwrap().starts_with("failed check"));
}

#[test]
fn usage_and_parse_errors_exit_with_two() {
    assert_eq!(sft(&["no-such-command"]).status.code(), Some(2));
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("bad.json");
    std::fs::write(&file, "{\"version\": 1, \"extra\": 0}").unwrap();
    let out = sft(&["d2", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 1"));
    assert_eq!(sft(&["classify", "--policy", "p=x", file.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn classify_writes_certificates() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-overtwisted");
    let report = dir.path().join("report.json");
    let out = sft(&[
        "classify",
        &path(dir.path(), "toy-overtwisted.ch.json"),
        &path(dir.path(), "toy-overtwisted.sft-star.json"),
        "--bounds",
        "word=3",
        "--report",
        report.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(report).unwrap()).unwrap();
    assert_eq!(report["verdict"], "algebraically overtwisted: YES (certificates attached)");
}

#[test]
fn tight_search_reports_the_caveat() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-tight");
    let out = sft(&["find-primitive", &path(dir.path(), "toy-tight.ch.json"), "--bounds", "word=6"]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains(SEMIDECISION_CAVEAT));
}

#[test]
fn lift_and_project_through_files() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-overtwisted");
    let ch = path(dir.path(), "toy-overtwisted.ch.json");
    let sft_file = path(dir.path(), "toy-overtwisted.sft.json");
    let out = sft(&["lift", &ch, &sft_file, "--element", "q:a", "--policy", "all=4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let report = stdout(&out);
    assert_eq!(report["certificate"]["verifiedToWeight"], 4);
    let lifted = report["certificate"]["element"].as_str().unwrap().to_string();
    let out = sft(&["project", &sft_file, &ch, "--element", &lifted, "--policy", "all=4"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    assert_eq!(stdout(&out)["certificate"]["element"], "q:a");
    // q_b is not a primitive
    let out = sft(&["lift", &ch, &sft_file, "--element", "q:b"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out)["verdict"].as_str().unwrap().starts_with("failed check"));
}

#[test]
fn enumerate_and_corpus_listing() {
    let dir = tempfile::tempdir().unwrap();
    emit(dir.path(), "toy-overtwisted");
    let out = sft(&[
        "enumerate",
        &path(dir.path(), "toy-overtwisted.contact.json"),
        "--orbit",
        "a",
        "--policy",
        "p=1,hbar=1,t=1,word=3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let report = stdout(&out);
    assert!(report["profiles"].as_array().unwrap().iter().all(|p| p["dimension"] == 0));
    let listing = stdout(&sft(&["corpus", "list"]));
    assert_eq!(listing["entries"].as_array().unwrap().len(), 4);
    let a = tempfile::tempdir().unwrap();
    emit_seeded(a.path(), 7);
    let b = tempfile::tempdir().unwrap();
    emit_seeded(b.path(), 7);
    let file = "layered-7.sft-star.json";
    assert_eq!(std::fs::read(a.path().join(file)).unwrap(), std::fs::read(b.path().join(file)).unwrap());
}

fn emit_seeded(dir: &Path, seed: u64) {
    let out = sft(&["corpus", "emit", "layered", "--seed", &seed.to_string(), "--out", dir.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
}
