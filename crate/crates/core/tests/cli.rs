//! The command-line binary: outputs, determinism and exit codes.

use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    format!("{}/tests/data/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn ncomsim(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ncomsim")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn tmp(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn simulate_fourier_is_near_uniform() {
    let o =
        ncomsim(&["simulate", "--backend", "wigner", "--circuit", &data("f0.qc"), "--shots", "100000", "--seed", "7"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("outcome\tcount\tfrequency"));
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split('\t').collect()).collect();
    assert_eq!(rows.len(), 3);
    for row in rows {
        let f: f64 = row[2].parse().unwrap();
        assert!((f - 1.0 / 3.0).abs() < 0.01, "{row:?}");
    }
    let err = stderr(&o);
    assert!(err.contains("shots: 100000") && err.contains("seed: 7") && err.contains("wall time"), "{err}");
}

#[test]
fn simulate_is_byte_identical_for_a_seed() {
    let args = ["simulate", "--circuit", &data("sum.qc"), "--shots", "5000", "--seed", "11"];
    let a = ncomsim(&args);
    let b = ncomsim(&args);
    assert_eq!(a.stdout, b.stdout);
    let out = tmp("sum_counts.tsv");
    let c = ncomsim(&[&args[..], &["--output", out.to_str().unwrap()]].concat());
    assert_eq!(c.status.code(), Some(0));
    assert!(c.stdout.is_empty());
    assert_eq!(std::fs::read(&out).unwrap(), a.stdout);
}

#[test]
fn thread_count_does_not_change_output() {
    let args = ["simulate", "--circuit", &data("sum.qc"), "--shots", "20000", "--seed", "3"];
    let one = Command::new(env!("CARGO_BIN_EXE_ncomsim")).args(args).env("NCOMSIM_THREADS", "1").output().unwrap();
    let four = Command::new(env!("CARGO_BIN_EXE_ncomsim")).args(args).env("NCOMSIM_THREADS", "4").output().unwrap();
    assert_eq!(one.status.code(), Some(0));
    assert_eq!(one.stdout, four.stdout);
    let bad = Command::new(env!("CARGO_BIN_EXE_ncomsim")).args(args).env("NCOMSIM_THREADS", "many").output().unwrap();
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn statevector_backend_samples_the_oracle() {
    let o = ncomsim(&["simulate", "--backend", "statevector", "--circuit", &data("x1.qc"), "--shots", "10"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "outcome\tcount\tfrequency\n2\t10\t1\n");
}

#[test]
fn non_clifford_gate_is_refused() {
    let o = ncomsim(&["simulate", "--backend", "wigner", "--circuit", &data("t_gate.qc")]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("no nonnegative representation in this backend"), "{}", stderr(&o));
    assert!(o.stdout.is_empty());
}

#[test]
fn parse_and_usage_errors_exit_one() {
    let bad = tmp("bad.qc");
    std::fs::write(&bad, "dim 3\nwires 2\nprep 5 basis 0\n").unwrap();
    let o = ncomsim(&["simulate", "--circuit", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(1));
    assert!(stderr(&o).contains("line 3, column 6"), "{}", stderr(&o));
    assert_eq!(ncomsim(&["simulate", "--circuit", "/nonexistent.qc"]).status.code(), Some(1));
    assert_eq!(ncomsim(&["simulate", "--circuit", &data("f0.qc"), "--shots", "0"]).status.code(), Some(1));
    assert_eq!(ncomsim(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(ncomsim(&["simulate", "--backend", "generic", "--circuit", &data("f0.qc")]).status.code(), Some(1));
    assert_eq!(ncomsim(&["--help"]).status.code(), Some(0));
}

#[test]
fn verify_basis_flip() {
    let o = ncomsim(&["verify", "--circuit", &data("x1.qc"), "--shots", "1000"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    assert!(text.starts_with("outcome\toracle\tontological\tsampled\n2\t1\t1\t1\n"), "{text}");
    assert!(text.contains("max_abs_diff_ontological_oracle\t0e0"));
}

#[test]
fn verify_reports_even_when_tv_threshold_fails() {
    let o = ncomsim(&["verify", "--circuit", &data("f0.qc"), "--shots", "10", "--tv-threshold", "0.0001"]);
    assert_eq!(o.status.code(), Some(5));
    assert!(stdout(&o).contains("tv_sampled_oracle"));
    assert!(stderr(&o).contains("verify FAIL"));
}

#[test]
fn verify_cap_exceeded() {
    let o = ncomsim(&["verify", "--circuit", &data("sum.qc"), "--support-cap", "8"]);
    assert_eq!(o.status.code(), Some(4), "{}", stderr(&o));
}

#[test]
fn verify_generic_model_without_oracle() {
    let o = ncomsim(&[
        "verify",
        "--backend",
        "generic",
        "--model",
        &data("parity_model.json"),
        "--circuit",
        &data("parity.qc"),
        "--shots",
        "20000",
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    assert!(stdout(&o).contains("01\t-\t0.5\t"));
}

#[test]
fn check_model_exit_codes() {
    let ok = ncomsim(&["check-model", "--model", &data("parity_model.json")]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(stdout(&ok).starts_with("status\tvalid\n"));
    let bad = ncomsim(&["check-model", "--model", &data("bad_model.json")]);
    assert_eq!(bad.status.code(), Some(3));
    assert!(stdout(&bad).contains("gates1[NOT][1]\ttransformation not deterministic/invertible"));
    let junk = tmp("junk.json");
    std::fs::write(&junk, "{ \"version\": 1, ").unwrap();
    assert_eq!(ncomsim(&["check-model", "--model", junk.to_str().unwrap()]).status.code(), Some(1));
    let sim = ncomsim(&[
        "simulate",
        "--backend",
        "generic",
        "--model",
        &data("bad_model.json"),
        "--circuit",
        &data("parity.qc"),
    ]);
    assert_eq!(sim.status.code(), Some(3));
}

#[test]
fn negativity_reports() {
    let o = ncomsim(&["negativity", "--circuit", &data("sum.qc")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.ends_with("summary\tNCOM available\n"), "{text}");
    assert!(!text.contains("\tno\n"));
    let o = ncomsim(&["negativity", "--circuit", &data("t_gate.qc")]);
    assert_eq!(o.status.code(), Some(0));
    let text = stdout(&o);
    assert!(text.contains("gate\t1: T 0\t-\tno\n"), "{text}");
    assert!(text.ends_with("summary\tno NCOM in this representation\n"));
}

#[test]
fn bench_emits_tsv() {
    let o = ncomsim(&["bench", "--sizes", "1,10,40", "--shots", "5", "--seed", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", stderr(&o));
    let text = stdout(&o);
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines.len(), 4);
    assert!(lines[0].starts_with("n\tgates\tdepth\tshots"));
    let first: Vec<&str> = lines[1].split('\t').collect();
    assert_eq!((first[0], first[7], first[8]), ("1", "1", "0"));
    for line in &lines[1..] {
        let f: Vec<usize> = line
            .split('\t')
            .enumerate()
            .filter(|(i, _)| [0, 7, 8, 9].contains(i))
            .map(|(_, v)| v.parse().unwrap())
            .collect();
        let (n, tracked, touched, bound) = (f[0], f[1], f[2], f[3]);
        assert_eq!(tracked, n + touched);
        assert!(tracked <= bound);
    }
}
