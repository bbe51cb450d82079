//! End-to-end checks of the batch front-end: exit codes, output formats,
//! and determinism of seeded reports.

use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_nonarch"))
}

#[test]
fn eval_canonical_forms() {
    let out = bin().args(["eval", "T^(1/2)*T^(1/3)"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "T^(5/6)");

    let out = bin()
        .args(["eval", "Y1 + T*Y1^-1", "--at", "Y1=T^(1/2)"])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "2*T^(1/2)");

    let out = bin().args(["eval", "(1+T)^-1", "--order", "3"]).output().unwrap();
    assert!(out.status.success());
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "1 - T + T^2");
}

#[test]
fn eval_usage_errors_exit_one() {
    let out = bin().args(["eval", "T^(1/2"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    let out = bin().args(["--no-such-flag"]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn folklore_cp2_matches_and_reports_json() {
    let out = bin()
        .args(["folklore", "--space", "cp2", "--energy", "1", "--order", "4", "--format", "json"])
        .output()
        .unwrap();
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let text = String::from_utf8_lossy(&out.stdout);
    let v: serde_json::Value = serde_json::from_str(&text).unwrap();
    for key in ["config", "inputs", "results", "residuals", "status"] {
        assert!(v.get(key).is_some(), "report must carry '{key}'");
    }
    assert_eq!(v["status"], "match");
    assert_eq!(v["results"]["matching"]["matched"].as_array().unwrap().len(), 3);
}

#[test]
fn folklore_p1xp1_and_cpn() {
    let out = bin()
        .args(["folklore", "--space", "p1xp1", "--e1", "1", "--e2", "3/2"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("status: match"));
    assert_eq!(text.matches('~').count(), 4);

    let out = bin()
        .args(["folklore", "--space", "cpn", "--n", "4", "--energy", "1"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    assert_eq!(text.matches('~').count(), 5);
}

#[test]
fn selftest_seeded_reports_are_byte_identical() {
    let run = || {
        bin()
            .args(["selftest", "--suite", "novikov", "--seed", "13", "--format", "json"])
            .output()
            .unwrap()
    };
    let a = run();
    let b = run();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout, "identical seeds must give identical bytes");
}

#[test]
fn seed_env_var_overrides() {
    let base = bin()
        .args(["selftest", "--suite", "novikov", "--seed", "13", "--format", "json"])
        .output()
        .unwrap();
    let over = bin()
        .args(["selftest", "--suite", "novikov", "--seed", "13", "--format", "json"])
        .env("NONARCH_SEED", "99")
        .output()
        .unwrap();
    assert_ne!(base.stdout, over.stdout);
    let v: serde_json::Value =
        serde_json::from_slice(&over.stdout).expect("selftest json parses");
    assert_eq!(v["config"]["seed"], 99);
}

#[test]
fn corrupted_build_control_fails_with_location() {
    let out = bin()
        .args(["selftest", "--suite", "ainf", "--cutoff", "2", "--seed", "7"])
        .env("NONARCH_CORRUPT", "1")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(text.contains("FAIL"));
    assert!(text.contains("(k, beta)"), "failure must locate the identity");
}

#[test]
fn fibration_sample_csv() {
    let out = bin()
        .args(["fibration", "sample", "--count", "25", "--seed", "5"])
        .output()
        .unwrap();
    assert!(out.status.success());
    let text = String::from_utf8_lossy(&out.stdout);
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "val_x0,val_x1,val_y,q1,q2,residual");
    let rows: Vec<&str> = lines.collect();
    assert_eq!(rows.len(), 25);
    for row in rows {
        let cols: Vec<&str> = row.split(',').collect();
        assert_eq!(cols.len(), 6);
        let residual: f64 = cols[5].parse().unwrap();
        assert!(residual <= 1e-9);
    }
}
