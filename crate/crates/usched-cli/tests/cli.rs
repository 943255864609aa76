//! End-to-end runs of the `usched` binary.

use std::path::Path;
use std::process::Command;

fn usched(args: &[&str]) -> std::process::Output {
    Command::new(env!("CARGO_BIN_EXE_usched"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn solve_validate_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "d.us", "p usched 4 2\na 1 3\na 2 3\n");
    let out = usched(&["solve", &inst, "--witness"]);
    assert!(out.status.success());
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("makespan: 2"), "{stdout}");
    // Feed the printed witness back through validate.
    let witness: String = stdout
        .lines()
        .filter(|l| l.contains(':') && l.chars().next().unwrap().is_ascii_digit())
        .map(|l| format!("{l}\n"))
        .collect();
    let sched = write(dir.path(), "w.sched", &witness);
    assert!(usched(&["validate", &inst, &sched]).status.success());
    // A corrupted schedule is rejected.
    let bad = write(dir.path(), "bad.sched", "1: 3\n2: 1 2 4\n");
    assert!(!usched(&["validate", &inst, &bad]).status.success());
}

#[test]
fn forced_strategies_and_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "d.us", "p usched 6 2\na 1 4\na 2 4\na 3 5\n");
    let mut spans = Vec::new();
    for strat in ["auto", "vc", "acdp", "split", "2n"] {
        let out = usched(&["solve", &inst, "--strategy", strat, "--format", "json-report"]);
        assert!(out.status.success(), "{strat}");
        let v: serde_json::Value =
            serde_json::from_slice(&out.stdout).expect("json output parses");
        spans.push(v["makespan"].as_u64().unwrap());
    }
    assert!(spans.windows(2).all(|w| w[0] == w[1]), "{spans:?}");
}

#[test]
fn infeasible_deadline_exits_2() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "c.us", "p usched 3 2 2\na 1 2\na 2 3\n");
    let out = usched(&["solve", &inst]);
    assert_eq!(out.status.code(), Some(2));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("infeasible"), "{stdout}");
}

#[test]
fn gen_output_is_solvable_and_deterministic() {
    let a = usched(&["gen", "--n", "9", "--m", "3", "--seed", "5"]);
    let b = usched(&["gen", "--n", "9", "--m", "3", "--seed", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("g.us");
    std::fs::write(&path, &a.stdout).unwrap();
    assert!(usched(&["solve", path.to_str().unwrap()]).status.success());
}

#[test]
fn gen_dks_emits_a_three_m_instance() {
    let out = usched(&[
        "gen-dks",
        "--vertices",
        "5",
        "--delta",
        "3",
        "--kappa",
        "3",
        "--ell",
        "2",
        "--seed",
        "2",
    ]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let header = text
        .lines()
        .find(|l| l.starts_with("p usched"))
        .expect("header present");
    let fields: Vec<usize> = header
        .split_whitespace()
        .skip(2)
        .map(|x| x.parse().unwrap())
        .collect();
    assert_eq!(fields[0], 3 * fields[1], "n = 3m");
    assert_eq!(fields[2], 3, "decision deadline recorded");
    assert_eq!(fields[1], 2 * 3 * 5 + 1, "m = 2ΔN + 1");
}

#[test]
fn bench_and_xcheck() {
    let empty = usched(&["bench", "--count", "0"]);
    assert!(empty.status.success());
    assert_eq!(
        String::from_utf8(empty.stdout).unwrap().trim(),
        "instance-id,n,m,cover,ac,strategy,makespan,wall-time,peak-table-bytes"
    );
    let bench = usched(&["bench", "--count", "5", "--max-n", "8", "--seed", "3"]);
    assert!(bench.status.success());
    assert_eq!(String::from_utf8(bench.stdout).unwrap().lines().count(), 6);
    let xc = usched(&["xcheck", "--count", "12", "--max-n", "8", "--seed", "3"]);
    assert!(xc.status.success(), "{}", String::from_utf8_lossy(&xc.stderr));
}

#[test]
fn count_antichains_and_vertex_cover() {
    let dir = tempfile::tempdir().unwrap();
    let inst = write(dir.path(), "c.us", "p usched 3 1\na 1 2\na 2 3\n");
    let out = usched(&["count-antichains", &inst]);
    assert!(out.status.success());
    // A 3-chain has antichains ∅, {1}, {2}, {3}.
    assert!(String::from_utf8(out.stdout).unwrap().contains("antichains: 4"));
    let vc = usched(&["vertex-cover", &inst]);
    assert!(vc.status.success());
    assert!(String::from_utf8(vc.stdout).unwrap().contains("cover (2)"));
}
