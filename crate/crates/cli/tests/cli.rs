use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_valuewalk"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn config(name: &str, body: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("valuewalk-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, body).unwrap();
    path
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn rows(o: &Output) -> Vec<csv::StringRecord> {
    let text = stdout(o);
    csv::Reader::from_reader(text.as_bytes()).records().map(|r| r.unwrap()).collect()
}

#[test]
fn analyze_half_step_row() {
    let o = run(&["analyze", "--delta", "0.5"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = rows(&o);
    let half = rs.iter().find(|r| &r[0] == "0.5").unwrap();
    assert_eq!(half[1].parse::<f64>().unwrap(), 3.0);
    assert_eq!(half[2].parse::<f64>().unwrap(), 2.0);
}

#[test]
fn analyze_zero_row_and_empty_grid() {
    let o = run(&["analyze"]);
    let zero = &rows(&o)[0];
    assert_eq!(&zero[0], "0.0");
    for col in [1, 2, 3, 4, 6] {
        assert_eq!(zero[col].parse::<f64>().unwrap(), 0.0);
    }
    let cfg = config("empty.json", r#"{"v_grid": []}"#);
    let o = run(&["analyze", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
}

#[test]
fn optimize_thresholds() {
    let o = run(&["optimize"]);
    let bin = rows(&o).into_iter().find(|r| &r[1] == "bin").unwrap();
    assert!((bin[3].parse::<f64>().unwrap() - 0.5).abs() < 1e-6);
    let cfg = config("averse.json", r#"{"profiles": ["inf"], "process": {"kind": "walk", "delta": 0.01}}"#);
    let o = run(&["optimize", "--config", cfg.to_str().unwrap()]);
    let bin = rows(&o).into_iter().find(|r| &r[1] == "bin").unwrap();
    assert!((bin[3].parse::<f64>().unwrap() - 2.0 / 3.0).abs() < 0.01);
}

#[test]
fn compare_flags_winners() {
    let o = run(&["compare", "--seed", "4", "--n", "20000"]);
    assert_eq!(o.status.code(), Some(0));
    let rs = rows(&o);
    let ppp = rs.iter().find(|r| &r[1] == "ppp").unwrap();
    assert_eq!(&ppp[8], "true");
    let cfg = config("power.json", r#"{"distribution": {"kind": "power", "k": 2}}"#);
    let o = run(&["compare", "--config", cfg.to_str().unwrap(), "--seed", "4", "--n", "20000"]);
    let rs = rows(&o);
    let bin = rs.iter().find(|r| &r[1] == "bin").unwrap();
    assert_eq!(&bin[8], "true");
    assert!((bin[5].parse::<f64>().unwrap() - 0.4446).abs() < 1e-3);
}

#[test]
fn compare_needs_two_schemes() {
    let cfg = config("single.json", r#"{"schemes": [{"kind": "ppp", "price": 0.5}], "master_seed": 1}"#);
    let o = run(&["compare", "--config", cfg.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn simulate_is_deterministic() {
    let a = run(&["simulate", "--seed", "11", "--n", "5000"]);
    let b = run(&["simulate", "--seed", "11", "--n", "5000"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let json = run(&["simulate", "--seed", "11", "--n", "5000", "--format", "json"]);
    let v: serde_json::Value = serde_json::from_slice(&json.stdout).unwrap();
    assert_eq!(v[0]["seed"], 11);
    assert!(v[0]["metrics"]["revenue"]["mean"].as_f64().unwrap() > 0.0);
}

#[test]
fn config_errors_exit_two() {
    assert_eq!(run(&["analyze", "--delta", "0.3"]).status.code(), Some(2));
    assert_eq!(run(&["simulate", "--n", "5000"]).status.code(), Some(2));
    assert_eq!(run(&["analyze", "--config", "/nonexistent/cfg.json"]).status.code(), Some(2));
    let cfg = config("typo.json", r#"{"distributon": {"kind": "uniform"}}"#);
    assert_eq!(run(&["analyze", "--config", cfg.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--only", "13"]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let o = run(&["verify", "--only", "4,7"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    assert_eq!(rows(&o).len(), 3);
    let cfg = config("noslack.json", r#"{"slack_constant": 0, "mc_scale": 0.02, "criteria": [11]}"#);
    let o = run(&["verify", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(o.status.code(), Some(1));
    let v: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert!(v.as_array().unwrap().iter().any(|c| c["passed"] == false));
}

#[test]
fn writes_output_file() {
    let dir = std::env::temp_dir().join(format!("valuewalk-out-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("table.csv");
    let o = run(&["analyze", "--out", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert!(o.stdout.is_empty());
    assert_eq!(std::fs::read_to_string(&path).unwrap().lines().count(), 12);
}
