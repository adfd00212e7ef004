use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_levy-mart"))
        .args(args)
        .env_remove("LEVY_MART_THREADS")
        .output()
        .expect("binary runs")
}

fn json_out(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, body: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, body).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn constants_at_three() {
    let v = json_out(&["constants", "--p", "3"]);
    assert_eq!(v["command"], "constants");
    assert_eq!(v["result"]["burkholder"].as_f64(), Some(2.0));
    assert_eq!(v["result"]["p_star"].as_f64(), Some(3.0));
}

#[test]
fn interval_flags_must_come_in_pairs() {
    let out = run(&["constants", "--p", "3", "--b", "-0.5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn dual_t2_cutoff_one() {
    let v = json_out(&["dual", "--group", "t2", "--cutoff", "1"]);
    let irreps = v["result"].as_array().unwrap();
    assert_eq!(irreps.len(), 9);
    assert!(irreps.iter().all(|p| p["dim"] == 1));
}

#[test]
fn csv_rows_carry_hash_and_seed() {
    let out = run(&["dual", "--group", "su2", "--cutoff", "2", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("label,dim,casimir,config_hash,seed"));
    let rows: Vec<_> = lines.collect();
    assert_eq!(rows.len(), 5);
    assert!(rows[1].starts_with("j=1/2,2,0.75,"));
}

#[test]
fn verify_is_reproducible() {
    let args = ["verify", "subordination", "--paths", "1000", "--seed", "7"];
    let a = run(&args);
    let b = run(&["--threads", "3", "verify", "subordination", "--paths", "1000", "--seed", "7"]);
    assert!(a.status.success(), "stderr: {}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let v: Value = serde_json::from_slice(&a.stdout).unwrap();
    assert_eq!(v["seed"], 7);
    assert_eq!(v["result"][0]["passed"], true);
}

#[test]
fn unknown_config_key_is_reported_with_its_path() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sym.json",
        r#"{"triple": {"drift": [0.0], "diffusion": [[0.5]], "atoms": [], "jumps": 1},
            "frequencies": {"points": [[1.0]]}}"#,
    );
    let out = run(&["symbol", "--config", &cfg]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("triple"), "{err}");
    assert!(err.contains("jumps"), "{err}");
}

#[test]
fn gaussian_symbol_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sym.json",
        r#"{"triple": {"drift": [0.5], "diffusion": [[0.25]], "atoms": []},
            "frequencies": {"points": [[2.0]]}}"#,
    );
    let v = json_out(&["symbol", "--config", &cfg]);
    let row = &v["result"][0];
    // ρ(ξ) = i b ξ - a ξ^2
    assert!((row["re"].as_f64().unwrap() + 1.0).abs() < 1e-15);
    assert!((row["im"].as_f64().unwrap() - 1.0).abs() < 1e-15);
}

#[test]
fn heat_apply_damps_each_mode() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "apply.json",
        r#"{"group": "t1", "n": 8, "terms": [{"k": [2], "coeff": 1.0}],
            "symbol": {"kind": "heat", "t": 0.1}, "p": [2]}"#,
    );
    let v = json_out(&["apply", "--config", &cfg]);
    let norms = &v["result"]["norms"][0];
    let ratio = norms["output"].as_f64().unwrap() / norms["input"].as_f64().unwrap();
    assert!((ratio - (-0.4f64).exp()).abs() < 1e-14, "{ratio}");
}

#[test]
fn simulate_writes_gzipped_transcripts() {
    use std::io::{BufRead, BufReader};
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(
        dir.path(),
        "sim.json",
        r#"{"group": "t1", "c": 0.5, "drift": [0.0], "atoms": [{"algebra": [0.4], "mass": 1.0}],
            "horizon": 0.5, "dt": 0.05, "paths": 100, "seed": 4,
            "function": {"band": 2, "seed": 1},
            "transform": {"a": [[0.5]], "psi": [-1.0]}}"#,
    );
    let tr = dir.path().join("tr.jsonl.gz");
    let v = json_out(&["simulate", "--config", &cfg, "--transcripts", tr.to_str().unwrap()]);
    assert_eq!(v["seed"], 4);
    let lines: Vec<String> = BufReader::new(flate2::read::GzDecoder::new(std::fs::File::open(&tr).unwrap()))
        .lines()
        .map(Result::unwrap)
        .collect();
    assert_eq!(lines.len(), 100);
    let first: Value = serde_json::from_str(&lines[0]).unwrap();
    assert_eq!(first["times"].as_array().unwrap().len(), first["m"].as_array().unwrap().len());
}

#[test]
fn missing_config_is_a_config_error() {
    let out = run(&["multiplier"]);
    assert_eq!(out.status.code(), Some(2));
}
