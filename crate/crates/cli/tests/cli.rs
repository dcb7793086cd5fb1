use std::path::PathBuf;
use std::process::{Command, Output};

fn fixture(rel: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../fixtures").join(rel).to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_superclaim")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn formula_uses_the_threshold() {
    let o = run(&["formula", &fixture("koa.claims")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("≥ 0.9"), "{text}");
    let golden = std::fs::read_to_string(fixture("golden/koa-formula.txt")).unwrap();
    assert!(text.contains(golden.trim()), "{text}");
}

#[test]
fn eval_reports_ratio() {
    let o = run(&["eval", &fixture("three-persons.claims"), "--model", &fixture("models/three-persons.model")]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("mostly: holds, ratio 2/3"), "{text}");
    assert!(text.contains("generally: fails"), "{text}");
}

#[test]
fn check_exits_one_on_contradiction() {
    let o = run(&["check", &fixture("contradiction.claims")]);
    assert_eq!(o.status.code(), Some(1));
    let text = stdout(&o);
    assert_eq!(text.lines().filter(|l| l.starts_with("contradicts:")).count(), 1, "{text}");

    let o = run(&["check", &fixture("three-persons.claims")]);
    assert_eq!(o.status.code(), Some(0));
}

#[test]
fn usage_and_input_errors() {
    assert_eq!(run(&["bogus"]).status.code(), Some(2));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.claims");
    std::fs::write(&bad, "SUBJECT: x\nQUALIFIER: sometimes\n").unwrap();
    let o = run(&["validate", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stdout(&o).contains("line 1"));
    assert_eq!(run(&["validate", &fixture("corpus.claims")]).status.code(), Some(0));
}

#[test]
fn export_writes_trig() {
    let o = run(&[
        "--base-iri",
        "http://example.org/np/",
        "export",
        &fixture("koa.claims"),
        "--created",
        "2024-01-01T00:00:00Z",
        "--creator",
        "someone",
    ]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = stdout(&o);
    assert!(text.contains("@prefix"), "{text}");
    assert!(text.contains("2024-01-01T00:00:00Z"));
    assert!(text.contains("co-occurs-with") || text.contains("CoOccursWith") || text.contains("co_occurs_with"), "{text}");
    // Same inputs, same bytes.
    assert_eq!(stdout(&run(&["--base-iri", "http://example.org/np/", "export", &fixture("koa.claims"), "--created", "2024-01-01T00:00:00Z", "--creator", "someone"])), text);
}

#[test]
fn offline_resolve_warns() {
    let dir = tempfile::tempdir().unwrap();
    let o = run(&["--offline", "--cache-dir", dir.path().to_str().unwrap(), "resolve", "knee osteoarthritis"]);
    assert!(o.status.success());
    assert!(stdout(&o).contains("no candidates"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("offline"));
}

#[test]
fn structured_stats() {
    let o = run(&["--format", "structured", "stats", &fixture("corpus.claims")]);
    assert!(o.status.success());
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["expressible"], 22);
}
