use std::path::PathBuf;
use std::process::{Command, Output};

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_restriction")).args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8(out.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name)
}

#[test]
fn broad_prints_exact_exponent() {
    let out = run(&["broad", "5", "3"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("p = 2 + 63/100"), "{}", stdout(&out));
}

#[test]
fn linear_json_carries_exact_fraction() {
    let out = run(&["linear", "9", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    let text = v.to_string();
    assert!(text.contains("53357/23032") || text.contains("\"53357\""), "{text}");
}

#[test]
fn table_csv_has_one_row_per_dimension() {
    let out = run(&["table", "5", "19", "--format", "csv"]);
    assert!(out.status.success());
    let mut rdr = csv::Reader::from_reader(out.stdout.as_slice());
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 15);
    assert_eq!(&rows[0][0], "5");
    assert_eq!((&rows[0][1], &rows[0][2]), ("263", "100"));
    assert_eq!(&rows[14][0], "19");
}

#[test]
fn sequential_flag_does_not_change_output() {
    let a = run(&["table", "3", "40", "--format", "csv"]);
    let b = run(&["table", "3", "40", "--format", "csv", "--sequential"]);
    assert!(a.status.success() && b.status.success());
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn verify_params_reports_reciprocal_convention() {
    let out = run(&["verify-params", "5", "2", "--format", "json"]);
    assert!(out.status.success());
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_zero"], true);
    assert_eq!(v["convention"], "reciprocal");
}

#[test]
fn verify_params_symbolic_succeeds() {
    let out = run(&["verify-params", "--symbolic", "2", "--format", "json"]);
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    let v: serde_json::Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(v["all_zero"], true);
}

#[test]
fn cubic_encloses_lambda() {
    let out = run(&["cubic", "--precision", "80", "--format", "json"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("2.5960716"), "{}", stdout(&out));
}

#[test]
fn asymptotic_csv_header() {
    let out = run(&["asymptotic", "--n-min", "10", "--n-max", "50", "--step", "20", "--format", "csv"]);
    assert!(out.status.success());
    let text = stdout(&out);
    assert!(text.starts_with("n,k_opt,gap_num,gap_den,deviation"));
    assert_eq!(text.lines().count(), 4);
}

#[test]
fn bad_flags_and_domain_errors_exit_one() {
    let out = run(&["broad", "5", "3", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(!out.stderr.is_empty());
    let out = run(&["broad", "5", "9"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("error"));
    let out = run(&["verify-params", "5"]);
    assert_eq!(out.status.code(), Some(1));
    let out = run(&["wolff", "--config", "/nonexistent/config.json"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn help_exits_zero() {
    assert_eq!(run(&["--help"]).status.code(), Some(0));
}

fn write_config(name: &str, body: &str) -> PathBuf {
    let path = scratch(name);
    std::fs::write(&path, body).unwrap();
    path
}

#[test]
fn wolff_runs_are_deterministic() {
    let cfg = write_config("det.json", r#"{"n": 3, "m": 1, "R": 400, "seeds": [1, 2, 3], "budget": 2000}"#);
    let cfg = cfg.to_str().unwrap();
    let a = run(&["wolff", "--config", cfg, "--format", "json"]);
    let b = run(&["wolff", "--config", cfg, "--format", "json", "--sequential"]);
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stderr));
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> =
        stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert_eq!(lines.len(), 3);
    assert!(lines.iter().all(|l| l["violated"] == false));
}

#[test]
fn wolff_writes_output_file() {
    let cfg = write_config("out.json", r#"{"n": 3, "m": 1, "R": 100, "seeds": [7], "budget": 500}"#);
    let dest = scratch("out.jsonl");
    let out = run(&["wolff", "--config", cfg.to_str().unwrap(), "--format", "json", "--output", dest.to_str().unwrap()]);
    assert!(out.status.success());
    let written = std::fs::read_to_string(&dest).unwrap();
    assert_eq!(written.lines().count(), 1);
}

#[test]
fn wolff_violation_exits_two() {
    // A constant this small makes the bound fall below one line.
    let cfg = write_config(
        "tiny.json",
        r#"{"n": 3, "m": 1, "R": 400, "seeds": [1], "budget": 2000, "C": 1e-9}"#,
    );
    let out = run(&["wolff", "--config", cfg.to_str().unwrap(), "--format", "json"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(stdout(&out).contains("\"violated\":true"));
}

#[test]
fn wolff_rejects_unknown_fields() {
    let cfg = write_config("bad.json", r#"{"n": 3, "m": 1, "R": 400, "seeds": [1], "budget": 10, "extra": 1}"#);
    assert_eq!(run(&["wolff", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}
