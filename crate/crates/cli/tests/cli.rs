use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn hscm(dir: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hscm")).current_dir(dir).args(args).output().unwrap()
}

fn ok(dir: &Path, args: &[&str]) {
    let out = hscm(dir, args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
}

fn json(path: &Path) -> Value {
    serde_json::from_str(&fs::read_to_string(path).unwrap()).unwrap()
}

fn without_wall_time(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("wall_time_s");
    v
}

fn csv_column(path: &Path, name: &str) -> Vec<String> {
    let text = fs::read_to_string(path).unwrap();
    let mut lines = text.lines();
    let idx = lines.next().unwrap().split(',').position(|h| h == name).unwrap();
    lines.map(|l| l.split(',').nth(idx).unwrap_or("").to_string()).collect()
}

const GEN: [&str; 12] =
    ["generate", "--gamma", "2", "--nu", "10", "--n", "1000", "--replicas", "2", "--seed", "7", "--out"];

#[test]
fn generate_writes_replicas_and_is_deterministic() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &[&GEN[..], &["a"]].concat());
    ok(d.path(), &[&GEN[..], &["b", "--jobs", "1"]].concat());
    let mut files: Vec<_> = fs::read_dir(d.path().join("a")).unwrap().map(|e| e.unwrap().file_name()).collect();
    files.sort();
    assert_eq!(files, ["graph_0000.edges", "graph_0001.edges", "meta.json"]);
    for f in ["graph_0000.edges", "graph_0001.edges"] {
        let a = fs::read(d.path().join("a").join(f)).unwrap();
        assert_eq!(a, fs::read(d.path().join("b").join(f)).unwrap());
        assert!(a.starts_with(b"# hscm v1 n=1000 seed="));
    }
    let meta = json(&d.path().join("a/meta.json"));
    assert_eq!(meta["schema_version"], 1);
    assert_eq!(meta["config"]["seed"], 7);
    assert_eq!(meta["replicas"].as_array().unwrap().len(), 2);
    let mut other = json(&d.path().join("b/meta.json"));
    other["config"]["out"] = "a".into();
    assert_eq!(without_wall_time(meta), without_wall_time(other));
}

#[test]
fn samplers_use_separate_streams() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &[&GEN[..], &["fast"]].concat());
    ok(d.path(), &[&GEN[..], &["naive", "--sampler", "naive"]].concat());
    let a = fs::read(d.path().join("fast/graph_0000.edges")).unwrap();
    let b = fs::read(d.path().join("naive/graph_0000.edges")).unwrap();
    assert_ne!(a, b);
}

#[test]
fn replay_reproduces_recorded_run() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &[&GEN[..], &["run"]].concat());
    let first = fs::read(d.path().join("run/graph_0001.edges")).unwrap();
    let meta = json(&d.path().join("run/meta.json"));
    fs::copy(d.path().join("run/meta.json"), d.path().join("recorded.json")).unwrap();
    fs::remove_dir_all(d.path().join("run")).unwrap();
    ok(d.path(), &["replay", "recorded.json"]);
    assert_eq!(first, fs::read(d.path().join("run/graph_0001.edges")).unwrap());
    assert_eq!(without_wall_time(meta), without_wall_time(json(&d.path().join("run/meta.json"))));
}

#[test]
fn degrees_table_is_contiguous_and_matches_theory_command() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["degrees", "--gamma", "2", "--nu", "10", "--n", "2000", "--replicas", "5", "--seed", "3", "--out", "deg"]);
    ok(d.path(), &["theory", "--gamma", "2", "--nu", "10", "--n", "2000", "--out", "th"]);
    let k = csv_column(&d.path().join("deg/degrees.csv"), "k");
    for (i, v) in k.iter().enumerate() {
        assert_eq!(v, &i.to_string());
    }
    for col in ["theory_pmf_asymptotic", "theory_pmf_finite_n"] {
        let a = csv_column(&d.path().join("deg/degrees.csv"), col);
        let b = csv_column(&d.path().join("th/theory_pmf.csv"), col);
        assert_eq!(&a[..=100], &b[..]);
    }
    let s = json(&d.path().join("deg/summary.json"));
    assert_eq!(s["graphs"], 5);
    let e = s["expected_avg_degree_finite_n"].as_f64().unwrap();
    let th = json(&d.path().join("th/summary.json"));
    assert_eq!(th["expected_avg_degree_finite_n"].as_f64().unwrap(), e);
    let pmf_sum: f64 =
        csv_column(&d.path().join("deg/degrees.csv"), "empirical_pmf").iter().map(|v| v.parse::<f64>().unwrap()).sum();
    assert!((pmf_sum - 1.0).abs() < 1e-12);
}

#[test]
fn degrees_from_generated_files() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &[&GEN[..], &["g"]].concat());
    ok(
        d.path(),
        &["degrees", "--gamma", "2", "--nu", "10", "--input", "g/graph_0000.edges", "g/graph_0001.edges", "--out", "deg"],
    );
    let s = json(&d.path().join("deg/summary.json"));
    let meta = json(&d.path().join("g/meta.json"));
    let mean: f64 = meta["replicas"].as_array().unwrap().iter().map(|r| r["average_degree"].as_f64().unwrap()).sum::<f64>() / 2.0;
    assert!((s["avg_degree"].as_f64().unwrap() - mean).abs() < 1e-12);
    assert_eq!(s["n"], 1000);
}

#[test]
fn entropy_table() {
    let d = TempDir::new().unwrap();
    ok(d.path(), &["entropy", "--gamma", "2", "--nu", "10", "--sizes", "1000,10000,100000", "--out", "e.csv"]);
    let n = csv_column(&d.path().join("e.csv"), "n");
    let m = csv_column(&d.path().join("e.csv"), "m_n");
    for (n, m) in n.iter().zip(&m) {
        let l = n.parse::<f64>().unwrap().ln();
        assert_eq!(m.parse::<f64>().unwrap(), (l * l).ceil() + 1.0);
    }
    let r: Vec<f64> = csv_column(&d.path().join("e.csv"), "n_sigma_over_log_n").iter().map(|v| v.parse().unwrap()).collect();
    assert!(r.windows(2).all(|w| w[0] < w[1] && w[1] < 10.0), "{r:?}");
    assert_eq!(json(&d.path().join("e.json"))["schema_version"], 1);

    ok(d.path(), &["entropy", "--gamma", "2", "--nu", "10", "--sizes", "5000", "--out", "one.csv"]);
    assert_eq!(csv_column(&d.path().join("one.csv"), "n"), ["5000"]);
}

#[test]
fn scm_solve_from_file_and_from_model() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("k.txt"), "# two nodes\n0.2\n0.2\n").unwrap();
    ok(d.path(), &["scm-solve", "--degrees", "k.txt", "--tol", "1e-13", "--out", "s.csv"]);
    let l: Vec<f64> = csv_column(&d.path().join("s.csv"), "multiplier").iter().map(|v| v.parse().unwrap()).collect();
    assert!((l[0] + l[1] - 4f64.ln()).abs() < 1e-12);

    ok(d.path(), &["scm-solve", "--gamma", "2", "--nu", "10", "--n", "50", "--seed", "1", "--out", "h.csv"]);
    let m: Vec<f64> = csv_column(&d.path().join("h.csv"), "multiplier").iter().map(|v| v.parse().unwrap()).collect();
    let x: Vec<f64> = csv_column(&d.path().join("h.csv"), "coordinate").iter().map(|v| v.parse().unwrap()).collect();
    for (a, b) in m.iter().zip(&x) {
        assert!((a - b).abs() < 1e-6);
    }
    assert!(json(&d.path().join("h.json"))["residual"].as_f64().unwrap() < 1e-10);
}

#[test]
fn ingest_reports_cleanup() {
    let d = TempDir::new().unwrap();
    fs::write(d.path().join("e.txt"), "0 1\n1 2\n2 1\n").unwrap();
    let out = hscm(d.path(), &["ingest", "--input", "e.txt", "--out", "i"]);
    assert!(out.status.success());
    assert!(String::from_utf8_lossy(&out.stderr).contains("1 duplicate"));
    assert_eq!(csv_column(&d.path().join("i/degrees.csv"), "count"), ["0", "2", "1"]);
    let s = json(&d.path().join("i/summary.json"));
    assert_eq!((s["duplicates"].as_u64(), s["edges"].as_u64()), (Some(1), Some(2)));
}

#[test]
fn exit_codes() {
    let d = TempDir::new().unwrap();
    let code = |args: &[&str]| hscm(d.path(), args).status.code().unwrap();
    // configuration
    assert_eq!(code(&["generate", "--gamma", "1", "--nu", "10", "--n", "10", "--seed", "1", "--out", "x"]), 2);
    assert_eq!(code(&["generate", "--gamma", "2", "--nu", "10", "--n", "10", "--out", "x"]), 2);
    assert_eq!(code(&["entropy", "--gamma", "2", "--nu", "10", "--sizes", "1000,100", "--out", "x.csv"]), 2);
    assert_eq!(
        code(&["generate", "--gamma", "2", "--nu", "10", "--n", "40000", "--seed", "1", "--sampler", "naive", "--out", "x"]),
        2
    );
    // numerical: in range but infeasible, the solver cannot converge
    fs::write(d.path().join("bad.txt"), "2.9\n0.1\n0.1\n0.1\n").unwrap();
    assert_eq!(code(&["scm-solve", "--degrees", "bad.txt", "--out", "s.csv"]), 3);
    // I/O and malformed input
    assert_eq!(code(&["ingest", "--input", "missing.txt", "--out", "i"]), 4);
    fs::write(d.path().join("broken.txt"), "0 1\n1 two\n").unwrap();
    let out = hscm(d.path(), &["ingest", "--input", "broken.txt", "--out", "i"]);
    assert_eq!(out.status.code(), Some(4));
    assert!(String::from_utf8_lossy(&out.stderr).contains("line 2"));
}
