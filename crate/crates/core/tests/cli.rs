use std::fs;
use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn uimpl(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_uimpl"))
        .args(args)
        .env_remove("UIMPL_THREADS")
        .output()
        .unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

const JC8: &str = r#"{"model": "jaynes_cummings", "epsilon": 10.0, "lambda": 0.19634954084936207,
                      "alpha": 8.0, "tau": 1.0, "fock_dim": "auto"}"#;

fn uncoupled() -> String {
    let (c, s) = (1f64.cos(), 1f64.sin());
    let z = "[0,0]";
    format!(
        r#"{{"model": "generic", "dim_s": 2, "dim_e": 2,
            "h_s": [[[1,0],{z}],[{z},[-1,0]]],
            "h_e": [[{z},{z}],[{z},[1,0]]],
            "h_se": [[{z},{z},{z},{z}],[{z},{z},{z},{z}],[{z},{z},{z},{z}],[{z},{z},{z},{z}]],
            "sigma_e": [[[0.5,0],{z}],[{z},[0.5,0]]],
            "u_target": [[[{c},{ms}],{z}],[{z},[{c},{s}]]],
            "tau": 1.0}}"#,
        ms = -s
    )
}

#[test]
fn verify_jc_reports_satisfied_tradeoff() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "jc.json", JC8);
    let out = dir.path().join("r.json");
    let o = uimpl(&["verify", "-m", &model, "-o", out.to_str().unwrap(), "--samples", "2000", "--threads", "2"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert!((v["metrics"]["comm_norm"].as_f64().unwrap() - 20.0).abs() < 1e-10);
    assert_eq!(v["metrics"]["fock_dim"], uimpl::models::auto_fock_dim(8.0));
    assert_eq!(v["provenance"]["samples"], 2000);
    assert_eq!(v["provenance"]["threads"], 2);
    let checks = v["checks"].as_array().unwrap();
    let t1 = checks.iter().find(|c| c["name"] == "tradeoff1").unwrap();
    assert_eq!(t1["satisfied"], true);
    assert!(checks.iter().all(|c| c["status"] != "violated"));
}

#[test]
fn uncoupled_model_is_perfect() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "free.json", &uncoupled());
    let o = uimpl(&["verify", "-m", &model, "--samples", "500"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    let m = &v["metrics"];
    assert!(m["delta_u"].as_f64().unwrap() < 1e-6);
    assert!(m["delta_ue"].as_f64().unwrap() < 1e-6);
    assert!(m["chi"].as_f64().unwrap() < 1e-12);
    assert!(m["comm_norm"].as_f64().unwrap() < 1e-12);
    assert_eq!(m["fock_dim"], Value::Null);
    assert!((m["delta_e"].as_f64().unwrap() - 0.5).abs() < 1e-12);
}

#[test]
fn malformed_model_exits_two() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write(dir.path(), "bad.json", r#"{"model": "jaynes_cummings", "epsilon": -1, "lambda": 0.1, "alpha": 2, "tau": 1}"#);
    let o = uimpl(&["verify", "-m", &bad]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("epsilon > 0"));

    let junk = write(dir.path(), "junk.json", "{");
    assert_eq!(uimpl(&["verify", "-m", &junk]).status.code(), Some(2));
    assert_eq!(uimpl(&["verify", "-m", "/no/such/file.json"]).status.code(), Some(2));
    assert_eq!(uimpl(&["verify"]).status.code(), Some(2));
    assert_eq!(uimpl(&["frobnicate"]).status.code(), Some(2));
}

/// The report with the fields that legitimately differ removed.
fn stable_part(text: &str) -> String {
    text.lines()
        .filter(|l| !l.contains("\"timestamp\"") && !l.contains("\"threads\""))
        .collect::<Vec<_>>()
        .join("\n")
}

#[test]
fn reports_are_byte_stable_across_thread_counts() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "jc.json", JC8);
    let mut reports = Vec::new();
    for threads in ["1", "4", "8"] {
        let o = uimpl(&["verify", "-m", &model, "--samples", "3000", "--seed", "7", "--threads", threads]);
        assert_eq!(o.status.code(), Some(0));
        reports.push(stable_part(&String::from_utf8(o.stdout).unwrap()));
    }
    assert_eq!(reports[0], reports[1]);
    assert_eq!(reports[0], reports[2]);
    // 17 significant digits.
    assert!(reports[0].contains("\"comm_norm\": 2.0000000000000000e1"));
}

#[test]
fn threads_fall_back_to_environment() {
    let dir = tempfile::tempdir().unwrap();
    let model = write(dir.path(), "free.json", &uncoupled());
    let o = Command::new(env!("CARGO_BIN_EXE_uimpl"))
        .args(["verify", "-m", &model, "--samples", "100"])
        .env("UIMPL_THREADS", "3")
        .output()
        .unwrap();
    let v: Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(v["provenance"]["threads"], 3);
}

#[test]
fn sweep_writes_csv_and_plot() {
    let dir = tempfile::tempdir().unwrap();
    let csv = dir.path().join("fig.csv");
    let o = uimpl(&[
        "sweep", "--alpha-min", "2", "--alpha-max", "4", "--steps", "2", "--samples", "500", "-o",
        csv.to_str().unwrap(),
    ]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let text = fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "alpha,lambda,fock_dim,delta_u,delta_e,product,bound,in_regime,seed");
    let rows: Vec<Vec<&str>> = lines.map(|l| l.split(',').collect()).collect();
    assert_eq!(rows.len(), 2);
    assert_eq!(rows[1][0].parse::<f64>().unwrap(), 4.0);
    assert_eq!(rows[1][8], "42");
    let script = fs::read_to_string(dir.path().join("fig.gp")).unwrap();
    assert!(script.contains("'fig.csv'"));
}

#[test]
fn props_exit_codes() {
    let o = uimpl(&["props", "--trials", "0"]);
    assert_eq!(o.status.code(), Some(0));

    let o = uimpl(&["props", "--trials", "5", "--suite", "lemma1", "--inject-bug"]);
    assert_eq!(o.status.code(), Some(1));
    let stdout = String::from_utf8(o.stdout).unwrap();
    let seed = stdout
        .lines()
        .find_map(|l| l.trim().strip_prefix("FAIL trial seed "))
        .and_then(|rest| rest.split(':').next())
        .unwrap()
        .to_owned();
    let replay = uimpl(&["props", "--suite", "lemma1", "--trial-seed", &seed, "--inject-bug"]);
    assert_eq!(replay.status.code(), Some(1));
    let honest = uimpl(&["props", "--suite", "lemma1", "--trial-seed", &seed]);
    assert_eq!(honest.status.code(), Some(0));

    assert_eq!(uimpl(&["props", "--suite", "nope"]).status.code(), Some(2));
}
