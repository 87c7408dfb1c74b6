use std::path::Path;
use std::process::{Command, Output};

use qed_core::stats::read_sweep_csv;
use serde_json::Value;

fn qed(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qed"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn ok(args: &[&str]) -> String {
    let out = qed(args);
    assert!(
        out.status.success(),
        "{args:?}: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    serde_json::from_str(&ok(args)).unwrap()
}

fn read_json(path: &Path) -> Value {
    serde_json::from_str(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn compile_reports_qubits_and_writes_resources() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    ok(&[
        "compile",
        "--spec",
        "s=4,d=1",
        "--r",
        "1",
        "--seed",
        "5",
        "--out",
        out.to_str().unwrap(),
    ]);
    let resources = read_json(&out.with_extension("resources.json"));
    assert_eq!(resources["measured"]["qubits"], 8);
    assert_eq!(resources["seed"], 5);
    assert_eq!(read_json(&out)["seed"], 5);
}

#[test]
fn zero_rounds_compiles_without_mid_circuit_gadgets() {
    let with = json(&["compile", "--spec", "s=2,d=1", "--r", "2"]);
    let without = json(&["compile", "--spec", "s=2,d=1", "--r", "0"]);
    let mid_reads = |v: &Value| {
        v["ops"]
            .as_array()
            .unwrap()
            .iter()
            .filter(|op| matches!(op["creg"].as_str(), Some("syn_x" | "syn_z")))
            .count()
    };
    assert_eq!(mid_reads(&with), 4);
    assert_eq!(mid_reads(&without), 0);
    assert_eq!(without["layout"]["rounds"], 0);
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("c.json");
    ok(&[
        "compile",
        "--spec",
        "s=2,d=1",
        "--r",
        "0",
        "--out",
        out.to_str().unwrap(),
    ]);
    let r = read_json(&out.with_extension("resources.json"));
    assert_eq!(r["rounds"], 0);
}

#[test]
fn malformed_circuit_is_a_usage_error() {
    let dir = tempfile::tempdir().unwrap();
    let bad = dir.path().join("bad.json");
    std::fs::write(&bad, "{\"qubits\": ").unwrap();
    for cmd in ["compile", "simulate"] {
        let mut args = vec![cmd, "--circuit", bad.to_str().unwrap()];
        if cmd == "simulate" {
            args.extend(["--p", "0.01", "--expect", "00"]);
        }
        let out = qed(&args);
        assert_eq!(out.status.code(), Some(2), "{cmd}");
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn invalid_arguments_exit_with_two() {
    assert_eq!(
        qed(&["simulate", "--spec", "s=2,d=1", "--p", "0.01", "--shots", "0"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        qed(&["simulate", "--spec", "s=2,d=1", "--p", "1.5"]).status.code(),
        Some(2)
    );
    assert_eq!(qed(&["identity-bench", "--r", "4"]).status.code(), Some(2));
    assert_eq!(qed(&["sweep", "--spec", "s=4"]).status.code(), Some(2));
    assert_eq!(qed(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn noiseless_encoded_search_matches_ideal() {
    let v = json(&[
        "simulate", "--spec", "s=4,d=1", "--r", "1", "--p", "0", "--shots", "4000", "--trials", "5",
    ]);
    assert_eq!(v["survival"], 1.0);
    let success = v["success"].as_f64().unwrap();
    let sigma = (0.473f64 * 0.527 / 20_000.0).sqrt();
    assert!((success - 0.4727).abs() < 3.0 * sigma, "{success}");
    assert_eq!(v["encoded"], true);
}

#[test]
fn noiseless_bare_two_qubit_search_always_succeeds() {
    let v = json(&[
        "simulate", "--spec", "s=2,d=1", "--bare", "--p", "0", "--shots", "500", "--trials", "2",
    ]);
    assert_eq!(v["success"], 1.0);
    assert_eq!(v["survival"], 1.0);
}

#[test]
fn compiled_file_simulates_like_the_built_in_search() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("g.json");
    ok(&[
        "compile",
        "--spec",
        "s=2,d=1",
        "--r",
        "1",
        "--out",
        out.to_str().unwrap(),
    ]);
    let args = ["--p", "0.01", "--shots", "300", "--trials", "3", "--seed", "4"];
    let from_file = json(
        &[
            &["simulate", "--circuit", out.to_str().unwrap(), "--expect", "11"][..],
            &args,
        ]
        .concat(),
    );
    let built = json(&[&["simulate", "--spec", "s=2,d=1", "--r", "1"][..], &args].concat());
    assert_eq!(from_file["success"], built["success"]);
    assert_eq!(from_file["survival"], built["survival"]);
}

#[test]
fn simulate_is_deterministic_and_seed_dependent() {
    let run = |seed: &str| {
        ok(&[
            "simulate", "--spec", "s=2,d=1", "--p", "0.02", "--shots", "300", "--seed", seed,
        ])
    };
    assert_eq!(run("1"), run("1"));
    assert_ne!(run("1"), run("2"));
}

#[test]
fn thread_count_does_not_change_results() {
    let run = |threads: &str| {
        let out = Command::new(env!("CARGO_BIN_EXE_qed"))
            .args([
                "simulate", "--spec", "s=2,d=1", "--p", "0.02", "--shots", "400", "--seed", "3",
            ])
            .env("QED_THREADS", threads)
            .output()
            .unwrap();
        assert!(out.status.success());
        out.stdout
    };
    assert_eq!(run("1"), run("3"));
}

#[test]
fn sweep_resumes_and_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("sweep.csv");
    let path = csv.to_str().unwrap();
    let base = [
        "sweep",
        "--spec",
        "s=2,d=1",
        "--p",
        "0.004",
        "--shots",
        "100",
        "--trials",
        "3",
        "--resamples",
        "200",
    ];
    ok(&[&base[..], &["--r", "1-2", "--out", path]].concat());
    let first = std::fs::read_to_string(&csv).unwrap();
    assert!(first.starts_with("# qed sweep seed=0"));
    ok(&[&base[..], &["--r", "1-3", "--out", path]].concat());
    let second = std::fs::read_to_string(&csv).unwrap();
    assert!(second.starts_with(&first), "existing rows must be kept as written");
    assert_eq!(second.lines().count(), first.lines().count() + 1);

    let points = read_sweep_csv(std::fs::File::open(&csv).unwrap()).unwrap();
    let rounds: Vec<Option<usize>> = points.iter().map(|p| p.r).collect();
    assert_eq!(rounds, [None, Some(1), Some(2), Some(3)]);
    let bare = &points[0];
    assert_eq!(bare.survival, 1.0);
    for p in &points {
        assert!(p.ci_low <= p.success && p.success <= p.ci_high);
    }
    let summary = read_json(&dir.path().join("sweep.summary.json"));
    assert_eq!(summary["optima"].as_array().unwrap().len(), 1);

    let other_seed = qed(&[&base[..], &["--r", "1-3", "--out", path, "--seed", "1"]].concat());
    assert_eq!(other_seed.status.code(), Some(2));
}

#[test]
fn statmodel_outputs_the_delta_grid() {
    let out = ok(&["statmodel", "--epsilon", "0.1", "--n", "10"]);
    let mut lines = out.lines();
    assert!(lines.next().unwrap().starts_with("# qed statmodel seed=0"));
    assert_eq!(lines.next().unwrap(), "epsilon,delta,gamma,shots,expected_success");
    assert_eq!(lines.count(), 51);
    let v = json(&[
        "statmodel",
        "--epsilon",
        "0.1,0.3",
        "--delta",
        "0,0.5",
        "--format",
        "json",
    ]);
    assert_eq!(v["rows"].as_array().unwrap().len(), 4);
}

#[test]
fn identity_bench_is_perfect_without_noise() {
    let v = json(&[
        "identity-bench",
        "--p",
        "0",
        "--r",
        "0,1,30",
        "--shots",
        "50",
        "--trials",
        "2",
        "--format",
        "json",
    ]);
    for row in v["rows"].as_array().unwrap() {
        assert_eq!(row["success"], 1.0);
        assert_eq!(row["survival"], 1.0);
    }
}
