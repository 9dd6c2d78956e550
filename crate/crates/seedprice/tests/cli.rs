//! Black-box tests of the seedprice binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_seedprice"))
}

fn data(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("data").join(name)
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

#[test]
fn solve_reports_the_optimum() {
    let out = bin()
        .args(["solve", "--graph"])
        .arg(data("demo.tsv"))
        .arg("--valuations")
        .arg(data("demo.val"))
        .args(["--n", "4", "--solver", "prub", "--no-timing"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let text = stdout(&out);
    let mut lines = text.lines();
    assert_eq!(
        lines.next().unwrap(),
        "solver,n,n_over_v,p_max,revenue,seed_set,prices_examined,prices_pruned,groups_or_rounds_evaluated,wall_time_ms"
    );
    let row = lines.next().unwrap();
    assert!(row.starts_with("prub,4,"), "{row}");
    assert!(row.contains(",6.0,18.0,d,"), "{row}");
    assert!(row.ends_with(",0"), "timing not zeroed: {row}");
}

#[test]
fn solve_is_byte_reproducible_without_timing() {
    let run = || {
        let out = bin()
            .args(["solve", "--graph"])
            .arg(data("demo.tsv"))
            .arg("--valuations")
            .arg(data("demo.val"))
            .args(["--ratio", "0.67", "--solver", "prubif", "--no-timing"])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run(), run());
}

#[test]
fn cascade_prints_the_walkthrough() {
    let out = bin()
        .args(["cascade", "--graph"])
        .arg(data("demo.tsv"))
        .arg("--valuations")
        .arg(data("demo.val"))
        .args(["--price", "6", "--seeds", "d", "--n", "4"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.contains("adopters: a;b;c;d"), "{text}");
    assert!(text.contains("revenue: 18"), "{text}");
}

#[test]
fn gen_then_bench_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let prefix = dir.path().join("inst");
    let out = bin()
        .args(["gen", "--nodes", "60", "--edge-prob", "0.05"])
        .args(["--weights", "uniform:1,5", "--val-dist", "mshape:2,0.44,8,0.44"])
        .args(["--seed", "11", "--out-prefix"])
        .arg(&prefix)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let csv = dir.path().join("rows.csv");
    let table = dir.path().join("ratios.csv");
    let out = bin()
        .args(["bench", "--graph"])
        .arg(prefix.with_extension("tsv"))
        .arg("--valuations")
        .arg(prefix.with_extension("val"))
        .args(["--solvers", "prubif,sumweights,random,nosocial"])
        .args(["--ratios", "0.05..0.30:0.05", "--seed", "1", "--no-timing"])
        .arg("--output")
        .arg(&csv)
        .arg("--ratio-table")
        .arg(&table)
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));

    let rows = std::fs::read_to_string(&csv).unwrap();
    assert_eq!(rows.lines().count(), 1 + 4 * 6, "{rows}");
    let table = std::fs::read_to_string(&table).unwrap();
    assert!(table.starts_with("solver,n_over_v,n,revenue,nosocial_revenue,ratio_to_nosocial"));
    assert_eq!(table.lines().count(), 1 + 4 * 6);
}

#[test]
fn validate_accepts_and_rejects() {
    let out = bin()
        .args(["validate", "--graph"])
        .arg(data("tiny.tsv"))
        .arg("--valuations")
        .arg(data("tiny.val"))
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(stdout(&out).contains("ok: 3 nodes, 2 edges"));

    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.tsv");
    std::fs::write(&bad, "a\tb\t-1\n").unwrap();
    let out = bin().args(["validate", "--graph"]).arg(&bad).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(!String::from_utf8_lossy(&out.stderr).is_empty());
}

#[test]
fn bad_arguments_exit_nonzero() {
    let out = bin()
        .args(["solve", "--graph"])
        .arg(data("demo.tsv"))
        .args(["--n", "4", "--solver", "nonsense"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));

    let out = bin()
        .args(["solve", "--graph"])
        .arg(data("demo.tsv"))
        .args(["--n", "99"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = bin()
            .args(["solve", "--graph"])
            .arg(data("demo.tsv"))
            .arg("--valuations")
            .arg(data("demo.val"))
            .args(["--n", "4", "--solver", "prubif", "--no-timing", "--threads", threads])
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("4"));
}
