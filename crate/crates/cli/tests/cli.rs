use std::fs;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use tempfile::TempDir;

const LIPS: &str = "a p1\np1 b\na q1\nq1 b\na s1\ns1 c\nb t1\nt1 c\na w1\nw1 c\n";
const LIPS_UNIFORM: &str = "* a 1\n* b 1\n* c 1\n* p1 1\n* q1 1\n* s1 1\n* t1 1\n* w1 1\n";

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

fn run(dir: &Path, args: &[&str]) -> Run {
    let Output { status, stdout, stderr } = Command::new(env!("CARGO_BIN_EXE_tanglefair"))
        .current_dir(dir)
        .args(args)
        .output()
        .expect("binary runs");
    Run {
        code: status.code().expect("exit code"),
        stdout: String::from_utf8(stdout).unwrap(),
        stderr: String::from_utf8(stderr).unwrap(),
    }
}

fn write(dir: &TempDir, name: &str, body: &str) -> PathBuf {
    let path = dir.path().join(name);
    fs::write(&path, body).unwrap();
    path
}

fn setup() -> TempDir {
    let dir = tempfile::tempdir().unwrap();
    write(&dir, "y.graph", "graph ystar\no x\no y\no z\n");
    write(&dir, "lips.graph", LIPS);
    write(&dir, "lips.val", LIPS_UNIFORM);
    write(&dir, "theta.graph", "u v\nu v\nu v\n");
    write(&dir, "delta.graph", "a b\nb c\na c\na d\nb d\nc x\nd y\n");
    dir
}

#[test]
fn classify_reports_excess_and_threshold() {
    let dir = setup();
    let out = run(dir.path(), &["classify", "y.graph"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("NonStringable, epsilon−sigma3=2, gap_threshold=1\n"));
    assert!(out.stdout.contains("degree_sequence=⟨3,0,1⟩"));
    assert!(out.stdout.contains("witness={o} gap=2"));

    let out = run(dir.path(), &["classify", "theta.graph"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.starts_with("Stringable(theta), gap_threshold=infinite"), "{}", out.stdout);
}

#[test]
fn classify_json() {
    let dir = setup();
    let out = run(dir.path(), &["--json", "classify", "lips.graph"]);
    assert_eq!(out.code, 0);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["stringable"], false);
    assert_eq!(v["epsilon_minus_sigma3"], 2);
}

#[test]
fn generalized_threshold_beats_plain_on_delta_diamond() {
    let dir = setup();
    let out = run(dir.path(), &["threshold", "--generalized", "delta.graph"]);
    assert_eq!(out.code, 0);
    assert!(out.stdout.contains("gap_threshold=3"), "{}", out.stdout);
    assert!(out.stdout.contains("generalized_gap_threshold=2"), "{}", out.stdout);
    let out = run(dir.path(), &["threshold", "--relax-connectivity", "delta.graph"]);
    assert!(out.stdout.contains("generalized_gap_threshold_relaxed="));
}

#[test]
fn solve_three_agents_on_lips() {
    let dir = setup();
    let out = run(dir.path(), &["solve", "lips.graph", "lips.val", "--agents", "3", "--trace", "--verify"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.starts_with("# procedure lips\n"));
    assert!(out.stdout.contains("# envy (k = 1)"));
    assert!(out.stderr.lines().next().unwrap().starts_with("step=1 l=0 "));

    write(&dir, "sol.txt", "");
    let out = run(dir.path(), &["solve", "lips.graph", "lips.val", "--agents", "3", "-o", "sol.txt"]);
    assert_eq!(out.code, 0);
    let check = run(dir.path(), &["verify", "lips.graph", "lips.val", "sol.txt"]);
    assert_eq!(check.code, 0);
    assert!(check.stdout.starts_with("contiguous=yes ef1_outer=yes"));
}

#[test]
fn solve_two_agents() {
    let dir = setup();
    write(&dir, "path.graph", "v1 v2\nv2 v3\nv3 v4\n");
    write(&dir, "path.val", "1 v1 5\n1 v4 1\n2 v2 2\n2 v3 2\n");
    let out = run(dir.path(), &["--json", "solve", "path.graph", "path.val", "--agents", "2"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    let v: serde_json::Value = serde_json::from_str(&out.stdout).unwrap();
    assert_eq!(v["procedure"], "bipolar");
    assert_eq!(v["ef1_outer"], true);

    write(&dir, "y.val", "* x 1\n");
    let out = run(dir.path(), &["solve", "y.graph", "y.val", "--agents", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("no bipolar numbering"));
}

#[test]
fn verify_flags_envy_and_splits() {
    let dir = setup();
    write(&dir, "alloc.txt", "1 a p1 b q1\n2 s1 c t1\n3 w1\n");
    let out = run(dir.path(), &["verify", "lips.graph", "lips.val", "alloc.txt"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("contiguous=yes ef1_outer=no\n"));
    assert!(out.stdout.contains("# 3 -> 1: 3 not cleared"));

    write(&dir, "split.txt", "1 a c\n2 p1 b q1\n3 s1 t1 w1\n");
    let out = run(dir.path(), &["verify", "lips.graph", "lips.val", "split.txt"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.starts_with("contiguous=no (bundle of agent 1)"));
}

#[test]
fn counterexample_is_certified_and_written() {
    let dir = setup();
    let out = run(dir.path(), &["counterexample", "y.graph", "--n", "2", "--certify", "--out-dir", "out"]);
    assert_eq!(out.code, 0, "{}", out.stderr);
    assert!(out.stdout.contains("verification = certified absent"));
    assert!(out.stdout.contains("vertices = 10"));
    assert!(out.stdout.contains("per_vertex_bound = holds"));
    let base = dir.path().join("out");
    for ext in ["graph", "val", "manifest"] {
        assert!(base.join(format!("ystar-n2-k1.{ext}")).exists());
    }
    let graph = fs::read_to_string(base.join("ystar-n2-k1.graph")).unwrap();
    assert!(graph.starts_with("graph ystar-n2-k1\n"));

    let out = run(dir.path(), &["oracle", "out/ystar-n2-k1.graph", "out/ystar-n2-k1.val", "--n", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("no contiguous EF1_outer allocation exists"));
}

#[test]
fn counterexample_beyond_caps_is_unverified() {
    let dir = setup();
    let out = run(dir.path(), &["counterexample", "lips.graph", "--n", "4", "--certify", "--max-vertices", "20"]);
    assert_eq!(out.code, 3);
    assert!(out.stdout.contains("verification = unverified at desk scale"));
    assert!(out.stdout.contains("vertices = 23"));
    assert!(out.stdout.contains("per_vertex_bound = holds"));

    let out = run(dir.path(), &["counterexample", "theta.graph", "--n", "2"]);
    assert_eq!(out.code, 1);
    assert!(out.stdout.contains("stringable"));
}

#[test]
fn oracle_finds_allocations_and_respects_caps() {
    let dir = setup();
    let out = run(dir.path(), &["oracle", "lips.graph", "lips.val", "--n", "3"]);
    assert_eq!(out.code, 0);
    let bundles: Vec<&str> = out.stdout.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(bundles.len(), 3);
    for (i, line) in bundles.iter().enumerate() {
        assert!(line.starts_with(&format!("{}", i + 1)));
    }

    let out = run(dir.path(), &["oracle", "lips.graph", "lips.val", "--n", "3", "--max-vertices", "5"]);
    assert_eq!(out.code, 3);
    assert!(out.stderr.starts_with("error: "));
}

#[test]
fn input_errors_exit_two() {
    let dir = setup();
    assert_eq!(run(dir.path(), &["classify", "missing.graph"]).code, 2);
    write(&dir, "bad.graph", "a b c\n");
    let out = run(dir.path(), &["classify", "bad.graph"]);
    assert_eq!(out.code, 2);
    assert!(out.stderr.contains("line 1"));
    write(&dir, "bad.val", "* zz 1\n");
    assert_eq!(run(dir.path(), &["solve", "lips.graph", "bad.val", "--agents", "3"]).code, 2);
}

#[test]
fn manifest_records_inputs() {
    let dir = setup();
    let out = run(dir.path(), &["--manifest", "run.txt", "classify", "y.graph"]);
    assert_eq!(out.code, 0);
    let m = fs::read_to_string(dir.path().join("run.txt")).unwrap();
    assert!(m.starts_with("command = classify\n"));
    assert!(m.contains("input.graph.sha256 = "));
    assert!(m.contains("exit = 0"));
}

#[test]
fn graph_names_come_from_header_or_file_stem() {
    let dir = setup();
    let out = run(dir.path(), &["counterexample", "lips.graph", "--n", "4"]);
    assert!(out.stdout.contains("base = lips\n"), "{}", out.stdout);
    write(&dir, "other.graph", "graph named\no x\no y\no z\n");
    let out = run(dir.path(), &["counterexample", "other.graph", "--n", "2"]);
    assert!(out.stdout.contains("base = named\n"), "{}", out.stdout);
}
