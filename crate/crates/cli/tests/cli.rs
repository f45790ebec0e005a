use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use gsd_core::io;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../core/fixtures").join(name)
}

fn gsd(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_gsd")).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn path(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn validate_reports_violations_and_exit_codes() {
    let ok = gsd(&["validate", path(&fixture("network.json"))]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).contains("network: valid"));

    let bad = gsd(&["validate", path(&fixture("shared_wire.json"))]);
    assert_eq!(bad.status.code(), Some(1));
    assert!(stdout(&bad).contains("LeftMonogamy"));
}

#[test]
fn usage_errors_exit_with_two() {
    assert_eq!(gsd(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(gsd(&["complexity", path(&fixture("network.json"))]).status.code(), Some(2));
    assert_eq!(gsd(&["complexity", path(&fixture("network.json")), "-d", "missing"]).status.code(), Some(2));
    assert_eq!(gsd(&["validate", "/nonexistent/file.json"]).status.code(), Some(2));
}

#[test]
fn commands_on_invalid_documents_exit_with_one() {
    let o = gsd(&["complexity", path(&fixture("causal_loop.json")), "-d", "loop"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn complexity_and_iso() {
    let o = gsd(&["complexity", path(&fixture("network.json")), "-d", "network"]);
    assert_eq!(stdout(&o).trim(), "7");
    let o = gsd(&["iso", path(&fixture("network.json")), "-a", "network", "-b", "network"]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn compose_writes_a_parseable_document() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("out.json");
    let o = gsd(&["compose", path(&fixture("chain.json")), "-a", "h", "-b", "h", "-o", out.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let bundle = io::parse(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let chain = io::parse(&std::fs::read_to_string(fixture("chain.json")).unwrap()).unwrap();
    assert!(gsd_core::iso_equal(bundle.diagram("result").unwrap(), chain.diagram("hh").unwrap()).unwrap());
}

#[test]
fn factorize_emits_bloom_and_circuitry() {
    let o = gsd(&["factorize", path(&fixture("network.json")), "-d", "network"]);
    let bundle = io::parse(&stdout(&o)).unwrap();
    assert!(gsd_core::is_pure_bloom(bundle.diagram("bloom").unwrap()));
    assert!(gsd_core::is_pure_circuitry(bundle.diagram("circuitry").unwrap()));
}

#[test]
fn normalize_and_canon_keep_the_name() {
    for cmd in ["normalize", "canon"] {
        let o = gsd(&[cmd, path(&fixture("network.json")), "-d", "network"]);
        let bundle = io::parse(&stdout(&o)).unwrap();
        assert!(bundle.diagram("network").is_some(), "{cmd}");
    }
}

#[test]
fn eval_prints_the_matrix_and_checks_expectations() {
    let o = gsd(&["eval", path(&fixture("chain.json")), "-d", "hh"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = io::parse_matrix(&stdout(&o)).unwrap();
    let expected = [[0.83, 0.34], [0.17, 0.66]];
    for (r, row) in rows.iter().enumerate() {
        for (c, x) in row.iter().enumerate() {
            assert!((x - expected[r][c]).abs() < 1e-12);
        }
    }

    let dir = tempfile::tempdir().unwrap();
    let good = dir.path().join("good.json");
    std::fs::write(&good, "[[0.83, 0.34], [0.17, 0.66]]").unwrap();
    let o = gsd(&["eval", path(&fixture("chain.json")), "-d", "hh", "--expect", good.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "[[0.5, 0.5], [0.5, 0.5]]").unwrap();
    let o = gsd(&["eval", path(&fixture("chain.json")), "-d", "hh", "--expect", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn eval_with_separate_interpretation_and_backend() {
    let o = gsd(&[
        "eval",
        path(&fixture("fork.json")),
        "-d",
        "fork",
        "--interp",
        path(&fixture("fork.json")),
        "--backend",
        "substochastic",
    ]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(io::parse_matrix(&stdout(&o)).unwrap().len(), 8);
    // a stochastic interpretation is not a function
    let o = gsd(&["eval", path(&fixture("chain.json")), "-d", "hh", "--backend", "function"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn ci_on_the_fork() {
    let f = fixture("fork.json");
    let o = gsd(&["ci", path(&f), "-d", "fork", "--left", "1", "--right", "2", "--given", "0"]);
    assert_eq!(stdout(&o).trim(), "true");
    let o = gsd(&["ci", path(&f), "-d", "fork", "--left", "1", "--right", "2"]);
    assert_eq!(stdout(&o).trim(), "false");
    let o = gsd(&["ci", path(&f), "-d", "fork", "--left", "1", "--right", "1"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn dot_is_deterministic() {
    let f = fixture("network.json");
    let args = ["dot", path(&f), "-d", "network"];
    let first = stdout(&gsd(&args));
    assert!(first.starts_with("digraph diagram {"));
    assert_eq!(first, stdout(&gsd(&args)));
}
