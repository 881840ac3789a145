use std::path::PathBuf;
use std::process::{Command, Output};
use std::time::{Duration, Instant};

use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("fixtures").join(name)
}

fn mp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_mp")).args(args).env_remove("MP_THREADS").output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is json")
}

fn path(name: &str) -> String {
    fixture(name).to_string_lossy().into_owned()
}

#[test]
fn benchmark_value() {
    let out = mp(&["solve", &path("prosecutor.json"), "--mode", "bp"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["spec_version"], "1");
    assert!((v["value"].as_f64().unwrap() - 0.6).abs() < 1e-9);
}

#[test]
fn refuted_check_exits_four() {
    let out = mp(&["solve", &path("three_step.json"), "--mode", "check", "--x", "identity"]);
    assert_eq!(out.status.code(), Some(4));
    let v = json(&out);
    assert_eq!(v["verdict"]["status"], "refuted");
    assert_eq!(v["verdict"]["deviation"]["player"], "sender");
}

#[test]
fn search_finds_two_outcomes() {
    let out = mp(&["solve", &path("two_outcomes.json"), "--mode", "search"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let clusters = v["clusters"].as_array().unwrap();
    assert_eq!(clusters.len(), 2);
    assert_eq!(clusters.iter().filter(|c| c["babbling"] == true).count(), 1);
}

#[test]
fn feasible_csv_has_vertex() {
    let out = mp(&["feasible", &path("butterfly.json")]);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("family,p,b1,b2,prob1,prob2"));
    let hit = lines.any(|l| {
        let f: Vec<&str> = l.split(',').collect();
        let num = |i: usize| f[i].parse::<f64>().unwrap();
        let (lo, hi) = (num(2).min(num(3)), num(2).max(num(3)));
        f.len() == 6 && (lo - 0.16).abs() < 1e-3 && (hi - 0.5333).abs() < 1e-3
    });
    assert!(hit, "{text}");
}

#[test]
fn identity_wing_reaches_corner_and_prior() {
    let out = mp(&["feasible", &path("prosecutor.json"), "--format", "json"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let prior = v["prior"].as_f64().unwrap();
    let natural = v["wings"]["natural"].as_array().unwrap();
    let has = |b1: f64, b2: f64| {
        natural.iter().any(|r| (r[0].as_f64().unwrap() - b1).abs() < 1e-9 && (r[1].as_f64().unwrap() - b2).abs() < 1e-9)
    };
    assert!(has(0.0, 1.0) && has(prior, prior));
}

#[test]
fn rank_deficient_garbling_exits_three() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("flat.json");
    std::fs::write(&file, r#"{"prior": 0.3, "sigma": [[0.5, 0.5], [0.5, 0.5]]}"#).unwrap();
    let out = mp(&["feasible", file.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn order_verdicts() {
    let first = |out: &Output| String::from_utf8_lossy(&out.stdout).lines().next().unwrap_or("").to_string();
    assert_eq!(first(&mp(&["order", "--pair", &path("ranked.txt")])), "dominates");
    assert_eq!(first(&mp(&["order", "--pair", &path("unranked.txt")])), "unranked");
    assert_eq!(first(&mp(&["order", "--a", "2/3,1/4;1/3,3/4", "--b", "2/3,1/4;1/3,3/4"])), "equivalent");
}

#[test]
fn unknown_key_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("typo.json");
    std::fs::write(&file, r#"{"prior": 0.3, "sigmaa": [[1, 0], [0, 1]]}"#).unwrap();
    assert_eq!(mp(&["feasible", file.to_str().unwrap()]).status.code(), Some(2));
}

#[test]
fn invalid_thread_cap_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_mp"))
        .args(["solve", &path("prosecutor.json"), "--mode", "bp"])
        .env("MP_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn output_is_byte_stable() {
    let args = ["solve", &path("informative.json"), "--mode", "search"];
    assert_eq!(mp(&args).stdout, mp(&args).stdout);
    let args = ["feasible", &path("butterfly.json"), "--format", "json"];
    assert_eq!(mp(&args).stdout, mp(&args).stdout);
}

#[test]
fn every_fixture_runs_quickly() {
    let start = Instant::now();
    for name in ["prosecutor", "butterfly", "three_signals", "two_outcomes", "informative", "three_step"] {
        let file = path(&format!("{name}.json"));
        let out = mp(&["feasible", &file]);
        assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        if name != "butterfly" && name != "three_signals" {
            let out = mp(&["solve", &file, "--mode", "search"]);
            assert_eq!(out.status.code(), Some(0), "{name}: {}", String::from_utf8_lossy(&out.stderr));
        }
    }
    assert!(start.elapsed() < Duration::from_secs(60), "{:?}", start.elapsed());
}
