use std::path::Path;
use std::process::{Command, Output};

use taiko_core::fixtures::{self, FixtureFile};

const BIN: &str = env!("CARGO_BIN_EXE_taiko-search");

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().expect("binary runs")
}

fn code(out: &Output) -> i32 {
    out.status.code().unwrap_or(-1)
}

fn write_fixture(dir: &Path, name: &str, file: &FixtureFile) -> String {
    let path = dir.join(name);
    file.write(&path).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(code(&run(&["search", "--m", "4"])), 64);
    assert_eq!(code(&run(&["search", "--m", "4", "--n", "4", "--girth-pairs", "4"])), 64);
    assert_eq!(code(&run(&["search", "--m", "4", "--n", "4", "--mode", "census"])), 64);
    assert_eq!(code(&run(&["frobnicate"])), 64);
    assert_eq!(code(&run(&["--help"])), 0);
}

#[test]
fn complete_and_truncated_searches() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("run.jsonl");
    let report = dir.path().join("run.json");
    let done = run(&["search", "--m", "4", "--n", "4", "--out", out.to_str().unwrap(), "--report", report.to_str().unwrap()]);
    assert_eq!(code(&done), 0, "{}", String::from_utf8_lossy(&done.stderr));
    let first = std::fs::read_to_string(&out).unwrap();
    let header: serde_json::Value = serde_json::from_str(first.lines().next().unwrap()).unwrap();
    assert_eq!(header["type"], "header");
    assert_eq!(header["manifest"], "run.manifest.json");
    assert!(dir.path().join("run.manifest.json").exists());
    let r: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(r["completed"].as_array().map(Vec::len), Some(0));

    let cut = run(&["search", "--m", "6", "--n", "6", "--max-nodes", "3"]);
    assert_eq!(code(&cut), 3);
}

#[test]
fn export_dot() {
    let dir = tempfile::tempdir().unwrap();
    let full = write_fixture(dir.path(), "full.json", &FixtureFile::from_subpartition(&fixtures::full_4x4()));
    let taiko = run(&["export", "--fixture", &full, "--what", "taiko"]);
    assert_eq!(code(&taiko), 0);
    let text = String::from_utf8(taiko.stdout).unwrap();
    assert!(text.starts_with("digraph"));
    assert_eq!(text.matches("dir=none").count(), 16);

    let link = run(&["export", "--fixture", &full, "--what", "midlink"]);
    assert_eq!(code(&link), 0);
    assert_eq!(String::from_utf8(link.stdout).unwrap().matches(" -- ").count(), 24);
}

#[test]
fn verify_fixtures() {
    let dir = tempfile::tempdir().unwrap();
    let good = write_fixture(dir.path(), "p127.json", &FixtureFile::from_subpartition(&fixtures::subpartition("P127").unwrap()));
    let ok = run(&["verify", "--fixture", &good]);
    assert_eq!(code(&ok), 0, "{}", String::from_utf8_lossy(&ok.stdout));

    let twisted = FixtureFile { m: 2, n: 2, parity: taiko_core::Parity::Even, cells: vec![vec![[1, 1], [2, 2]], vec![[1, 2], [2, 1]]] };
    let bad = write_fixture(dir.path(), "twisted.json", &twisted);
    assert_eq!(code(&run(&["verify", "--fixture", &bad])), 1);
    let export = run(&["export", "--fixture", &bad, "--what", "midlink"]);
    assert_eq!(code(&export), 1);
    assert!(String::from_utf8_lossy(&export.stderr).contains("conflicting cells"));

    assert_eq!(code(&run(&["verify", "--fixture", "/nonexistent/x.json"])), 74);
}
