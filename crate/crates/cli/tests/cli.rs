use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_prism-idcode"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let path = dir.join(name);
    fs::write(&path, text).unwrap();
    path
}

fn gen_to(dir: &Path, kind: &str, n: usize) -> PathBuf {
    let out = run(&["gen", kind, &n.to_string()]);
    assert!(out.status.success());
    write(dir, &format!("{kind}{n}.txt"), &stdout(&out))
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

#[test]
fn gen_prism_nine_has_45_edges() {
    let text = stdout(&run(&["gen", "prism", "9"]));
    assert!(text.starts_with("c prism 9\n"));
    assert!(text.contains("\np 18 45\n"));
    assert_eq!(text.lines().filter(|l| l.starts_with("e ")).count(), 45);
}

#[test]
fn gen_rejects_small_cycles() {
    assert_eq!(run(&["gen", "cycle", "2"]).status.code(), Some(64));
    assert_eq!(run(&["gen", "prism", "x"]).status.code(), Some(64));
}

#[test]
fn usage_errors_exit_64_but_help_exits_0() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(run(&[]).status.code(), Some(64));
    assert_eq!(run(&["--help"]).status.code(), Some(0));
    assert_eq!(run(&["--version"]).status.code(), Some(0));
}

#[test]
fn pattern_nine() {
    let out = run(&["pattern", "9"]);
    assert_eq!(stdout(&out), "111000000\n000011110\n");
    let ascii = stdout(&run(&["pattern", "9", "--ascii"]));
    assert!(ascii.contains("vbar ....####."));
    let json: serde_json::Value = serde_json::from_str(&stdout(&run(&["pattern", "9", "--json"]))).unwrap();
    assert_eq!(json["size"], 7);
    assert_eq!(json["upper_analytic"], "79/9");
}

#[test]
fn pattern_round_trips_through_verify() {
    let dir = TempDir::new().unwrap();
    for n in [9, 13, 20] {
        let graph = gen_to(dir.path(), "prism", n);
        let code = write(dir.path(), "code.txt", &stdout(&run(&["pattern", &n.to_string()])));
        let out = run(&["verify", s(&graph), s(&code)]);
        assert_eq!(out.status.code(), Some(0), "n = {n}");
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(json["valid"], true);
        assert!(json["failure"].is_null());
    }
}

#[test]
fn verify_reports_failures_with_labels() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "prism", 9);
    let empty = write(dir.path(), "empty.txt", "000000000\n000000000\n");
    let out = run(&["verify", s(&graph), s(&empty)]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["failure"]["kind"], "empty-ball");
    assert_eq!(json["failure"]["vertices"][0], "v1");

    let triangle = write(dir.path(), "k3.txt", "p 3 3\ne 1 2\ne 1 3\ne 2 3\n");
    let all = write(dir.path(), "all.txt", "1 2 3\n");
    let out = run(&["verify", s(&triangle), s(&all)]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["failure"]["kind"], "unseparated");
    assert_eq!(json["failure"]["vertices"], serde_json::json!([1, 2]));
}

#[test]
fn verify_accepts_plain_bitstrings_and_labels() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "cycle", 6);
    let bits = write(dir.path(), "bits.txt", "101010\n");
    assert_eq!(run(&["verify", s(&graph), s(&bits)]).status.code(), Some(0));
    let short = write(dir.path(), "short.txt", "110000\n");
    assert_eq!(run(&["verify", s(&graph), s(&short)]).status.code(), Some(1));
    let all = write(dir.path(), "all.txt", "1 2 3 4 5 6\n");
    assert_eq!(run(&["verify", s(&graph), s(&all)]).status.code(), Some(0));
    let text = run(&["verify", s(&graph), s(&all), "--format", "text"]);
    assert_eq!(stdout(&text), "valid\n");
}

#[test]
fn verify_parse_errors_exit_64() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "prism", 9);
    let bad = write(dir.path(), "bad.txt", "v1 v99\n");
    assert_eq!(run(&["verify", s(&graph), s(&bad)]).status.code(), Some(64));
    let broken = write(dir.path(), "broken.txt", "p 3 2\ne 1 2\n");
    assert_eq!(run(&["verify", s(&broken), s(&bad)]).status.code(), Some(64));
    assert_eq!(run(&["verify", "/nonexistent", s(&bad)]).status.code(), Some(64));
}

#[test]
fn conditions_command() {
    let dir = TempDir::new().unwrap();
    let code = write(dir.path(), "c.txt", &stdout(&run(&["pattern", "9"])));
    let out = run(&["conditions", s(&code)]);
    assert_eq!(out.status.code(), Some(0));
    assert!(stdout(&out).contains("all conditions hold"));

    let empty = write(dir.path(), "e.txt", "000000000\n000000000\n");
    let out = run(&["conditions", s(&empty), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["holds"], false);
    assert!(json["violations"].as_array().unwrap().iter().any(|v| v == "C(1)"));
}

#[test]
fn solve_prism_nine() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "prism", 9);
    for strategy in ["bnb", "exhaustive"] {
        let out = run(&["solve", s(&graph), "--strategy", strategy, "--workers", "2"]);
        assert_eq!(out.status.code(), Some(0));
        let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
        assert_eq!(json["status"], "optimal");
        assert_eq!(json["size"], 7);
        assert_eq!(json["code"][0], "v1");
    }
}

#[test]
fn solve_infeasible_and_capped() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "prism", 6);
    let out = run(&["solve", s(&graph), "-d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["status"], "infeasible");
    assert_eq!(json["witness"].as_array().unwrap().len(), 2);

    let out = run(&["solve", s(&graph), "--cap", "2"]);
    assert_eq!(out.status.code(), Some(0));
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["status"], "cap-exceeded");
}

#[test]
fn twins_command() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "prism", 6);
    let out = run(&["twins", s(&graph), "-d", "2"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!stdout(&out).is_empty());
    let out = run(&["twins", s(&graph)]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(stdout(&out), "");
}

#[test]
fn export_command() {
    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "cycle", 5);
    let out = run(&["export", s(&graph)]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("h 5 "));
}

#[test]
fn scan_nine_to_twelve() {
    let out = run(&["scan", "9", "12"]);
    assert!(out.status.success());
    let text = stdout(&out);
    let rows: Vec<Vec<&str>> = text.lines().skip(1).map(|l| l.split_whitespace().collect()).collect();
    assert_eq!(rows.len(), 4);
    let ic: Vec<&str> = rows.iter().map(|r| r[2]).collect();
    assert_eq!(ic, ["7", "8", "8", "10"]);
    assert_eq!(run(&["scan", "8", "10"]).status.code(), Some(64));
    let skipped = stdout(&run(&["scan", "15", "15"]));
    assert_eq!(skipped.lines().nth(1).unwrap().split_whitespace().nth(2), Some("-"));
}

#[test]
fn cwcheck_command() {
    let out = run(&["cwcheck", "--n", "8", "--trials", "20", "--seed", "7"]);
    assert!(out.status.success());
    assert!(stdout(&out).ends_with("20 checks, 0 failures\n"));

    let dir = TempDir::new().unwrap();
    let graph = gen_to(dir.path(), "cycle", 4);
    let out = run(&["cwcheck", "--graph", s(&graph), "--tree", "((1,2),(3,4))", "--json"]);
    assert!(out.status.success());
    let json: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    assert_eq!(json["checks"], 1);
    assert_eq!(json["results"][0]["ok"], true);
    assert_eq!(run(&["cwcheck"]).status.code(), Some(64));
}
