use std::process::{Command, Output};

use serde_json::Value;

fn qorbit(args: &[&str], threads: Option<&str>) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_qorbit"));
    cmd.args(args);
    match threads {
        Some(t) => cmd.env("QORBIT_THREADS", t),
        None => cmd.env_remove("QORBIT_THREADS"),
    };
    cmd.output().expect("qorbit runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn classify_holomorphic_example() {
    let out = qorbit(&["classify", "--q", "0.5", "--c0", "1", "--d0", "1", "--nu0", "0.5"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["details"]["series"], "HolomorphicDiscrete");
    assert_eq!(v["details"]["spectrum_kind"], "M_plus");
    assert_eq!(v["status"], "pass");
}

#[test]
fn q_outside_unit_interval_is_invalid() {
    let out = qorbit(&["classify", "--q", "1.5", "--c0", "1", "--d0", "1", "--nu0", "0.5"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    assert!(String::from_utf8_lossy(&out.stderr).contains("(0, 1)"));
}

#[test]
fn unknown_flag_prints_usage() {
    let out = qorbit(&["classify", "--frobnicate", "3"], None);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("Usage:"));
}

#[test]
fn heis_relations_example() {
    let out = qorbit(&["heis", "--n", "1", "--degree", "6", "--check", "relations"], None);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["details"]["check"], "relations");
    assert!(v["counterexample"].is_null());
}

#[test]
fn failing_check_exits_one_with_counterexample() {
    let out = qorbit(&["moment", "--variant", "literal", "--check", "relations"], None);
    assert_eq!(out.status.code(), Some(1));
    let v = json(&out);
    assert_eq!(v["status"], "fail");
    assert!(v["counterexample"].is_string());
}

#[test]
fn complex_parameters_parse() {
    let c = std::f64::consts::FRAC_1_SQRT_2;
    let (c0, d0) = (format!("{c},{c}"), format!("{c},-{c}"));
    let out = qorbit(&["classify", "--q", "0.5", "--c0", &c0, "--d0", &d0, "--nu0", "1"], None);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(json(&out)["details"]["series"], "PrincipalContinuous");
}

#[test]
fn byte_identical_across_runs_and_thread_counts() {
    let args = ["sweep", "--c0-range", "0.2:5:12", "--nu0-range", "-3:3:10"];
    let a = qorbit(&args, Some("1"));
    let b = qorbit(&args, Some("4"));
    let c = qorbit(&args, None);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
    let k1 = qorbit(&["kernel", "--q", "0.5", "--l", "-1", "--check", "psd"], Some("3"));
    let k2 = qorbit(&["kernel", "--q", "0.5", "--l", "-1", "--check", "psd"], Some("1"));
    assert_eq!(k1.stdout, k2.stdout);
}

#[test]
fn floats_carry_seventeen_digits() {
    let out = qorbit(&["classify", "--q", "0.5", "--c0", "0.8", "--nu0", "0.3"], None);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("\"q\":5.0000000000000000e-1"), "{text}");
}

#[test]
fn csv_emits_table_rows() {
    let out = qorbit(&["kernel", "--q", "0.5", "--l", "-1.5", "--kmax", "4", "--emit-csv"], None);
    assert_eq!(out.status.code(), Some(0));
    let text = String::from_utf8(out.stdout).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert_eq!(lines[0], "k,numeric,closed,residual");
    assert_eq!(lines.len(), 6);
}

#[test]
fn sweep_reads_grid_file() {
    let path = std::env::temp_dir().join(format!("qorbit-grid-{}.json", std::process::id()));
    std::fs::write(&path, r#"{"q": 0.6, "c0": [0.5, 1.0, 2.0], "nu0": {"start": -2, "end": 2, "count": 4}}"#).unwrap();
    let out = qorbit(&["sweep", "--grid", path.to_str().unwrap()], None);
    std::fs::remove_file(&path).ok();
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["details"]["points"], 12);
    assert_eq!(v["details"]["disagreements"], 0);
}

#[test]
fn bad_thread_variable_is_invalid() {
    let out = qorbit(&["heis", "--check", "i0"], Some("many"));
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn in_process_run_matches_binary() {
    let args = ["qorbit", "degen", "--q", "0.5", "--c0", "1", "--d0", "2", "--lambda1", "4", "--lambda2", "0.5"];
    let lib = qorbit_cli::run(args);
    let bin = qorbit(&args[1..], None);
    assert_eq!(lib.stdout.as_bytes(), bin.stdout.as_slice());
    assert_eq!(Some(lib.code), bin.status.code());
}
