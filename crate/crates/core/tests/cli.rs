use std::fs;
use std::path::Path;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mub-forge"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

fn path(dir: &Path, name: &str) -> String {
    dir.join(name).to_string_lossy().into_owned()
}

#[test]
fn sweep_dim4_passes_and_writes_report() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "report.json");
    let o = run(&["sweep", "--family", "dim4", "--grid", "5", "--out", &out]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
    let report: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(report["passed"], true);
    assert_eq!(report["seed"], 42);
    assert_eq!(report["points"], 625 + 100);
}

#[test]
fn outputs_are_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = path(dir.path(), "a.json");
    let b = path(dir.path(), "b.json");
    for out in [&a, &b] {
        let o = run(&[
            "sweep",
            "--family",
            "dim8-quintuplet",
            "--grid",
            "0",
            "--samples",
            "30",
            "--seed",
            "7",
            "--out",
            out,
        ]);
        assert_eq!(o.status.code(), Some(0));
    }
    assert_eq!(fs::read(&a).unwrap(), fs::read(&b).unwrap());
}

#[test]
fn entangle_writes_purity_curve() {
    let dir = tempfile::tempdir().unwrap();
    let csv = path(dir.path(), "fig.csv");
    let o = run(&["entangle", "--family", "dim8-quintuplet", "--csv", &csv]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&csv).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "alpha,purity_A,purity_B,purity_C");
    assert_eq!(lines.len(), 102);
    assert!(lines[1].starts_with("0.000000000000000,0.500000000000000,0.5"));
    assert!(lines[101].starts_with("1.570796326794897,1.000000000000000,0.5"));
}

#[test]
fn bound_reports_rank() {
    let o = run(&["bound", "--set", "dim4"]);
    assert_eq!(o.status.code(), Some(0));
    let s = stdout(&o);
    assert!(s.contains("rank 10"), "{s}");
    assert!(s.contains("m <= 5"), "{s}");
}

#[test]
fn bad_usage_exits_2() {
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--grid", "many"]).status.code(), Some(2));
    assert_eq!(run(&["sweep", "--family", "nope"]).status.code(), Some(2));
    assert_eq!(run(&["catalog", "--eps", "-1"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_1() {
    let o = run(&["sweep", "--family", "dim8-triplet-all", "--grid", "0", "--samples", "5"]);
    assert_eq!(o.status.code(), Some(1));
    let o = run(&["circuit", "--quintuplet", "1,2,3,5", "--circuit", "A"]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn inject_then_sweep_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let fam = path(dir.path(), "family.json");
    assert_eq!(
        run(&["inject", "--set", "fourier4", "--out", &fam]).status.code(),
        Some(0)
    );
    let o = run(&["sweep", "--input", &fam, "--grid", "3", "--samples", "10"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn catalog_round_trip_and_corrupt_input() {
    let dir = tempfile::tempdir().unwrap();
    let set = path(dir.path(), "set.json");
    assert_eq!(run(&["catalog", "--set", "dim8", "--out", &set]).status.code(), Some(0));
    assert_eq!(run(&["catalog", "--input", &set]).status.code(), Some(0));
    let mut v: serde_json::Value = serde_json::from_str(&fs::read_to_string(&set).unwrap()).unwrap();
    v["bases"][1][0][0] = serde_json::json!(0.3);
    fs::write(&set, v.to_string()).unwrap();
    assert_eq!(run(&["catalog", "--input", &set]).status.code(), Some(2));
}

#[test]
fn find_ger_csv() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "pairs.csv");
    let o = run(&[
        "find-ger",
        "--set",
        "dim4",
        "--include-first-block",
        "--format",
        "csv",
        "--out",
        &out,
    ]);
    assert_eq!(o.status.code(), Some(0));
    let text = fs::read_to_string(&out).unwrap();
    assert_eq!(text.lines().count(), 7);
    assert!(text.contains("0,0,1,0000++--++--"));
}

#[test]
fn circuit_decomposition_json() {
    let dir = tempfile::tempdir().unwrap();
    let out = path(dir.path(), "g.json");
    let o = run(&["circuit", "--circuit", "G", "--alpha", "0.3", "--out", &out]);
    assert_eq!(o.status.code(), Some(0));
    let gates: serde_json::Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    let kinds: Vec<&str> = gates
        .as_array()
        .unwrap()
        .iter()
        .map(|g| g["kind"].as_str().unwrap())
        .collect();
    assert!(kinds.contains(&"phase_r"));
}

#[test]
fn census_and_tables() {
    assert_eq!(run(&["census"]).status.code(), Some(0));
    assert_eq!(run(&["export", "table2"]).status.code(), Some(0));
    let o = run(&["circuit", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("56/56 entries realized"));
}
