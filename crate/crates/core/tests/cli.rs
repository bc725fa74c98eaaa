use std::path::Path;
use std::process::{Command, Output};

use polariton_sn::sweep;

const THREE_PUMPS: &str = r#"{"scenario": "sn_vs_dt", "pumps": {"magnitudes": [0.025, 0.05, 0.075]},
    "medium_slope_minus": 0.5, "medium_slope_plus": 1.0, "dt_points": 40}"#;

fn simulate(args: &[&str], envs: &[(&str, &str)]) -> Output {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_simulate"));
    cmd.args(args).env_remove("SIM_THREADS");
    for (k, v) in envs {
        cmd.env(k, v);
    }
    cmd.output().expect("simulate runs")
}

fn write_config(dir: &Path, name: &str, text: &str) -> String {
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_owned()
}

fn data_rows(csv: &str) -> Vec<Vec<String>> {
    csv.lines().filter(|l| !l.starts_with('#')).skip(1).map(|l| l.split(',').map(str::to_owned).collect()).collect()
}

#[test]
fn sn_vs_dt_table() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "three_pumps.json", THREE_PUMPS);
    let out = dir.path().join("three_pumps.csv");
    let o = simulate(&["sn_vs_dt", "--config", &cfg, "--out", out.to_str().unwrap()], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let text = std::fs::read_to_string(&out).unwrap();
    let header = text.lines().find(|l| !l.starts_with('#')).unwrap();
    assert_eq!(header, "dt_over_t0,delta,p_s,certified_sn,f_1,f_2,f_3,f_4,f_5,f_6,f_7,f_8");
    let rows = data_rows(&text);
    assert_eq!(rows.len(), 40);
    assert_eq!(rows[0][0], "0.00000000000e0");
    assert_eq!(rows[0][3], "8");
    let sn: Vec<usize> = rows.iter().map(|r| r[3].parse().unwrap()).collect();
    assert!(sn.windows(2).all(|w| w[1] <= w[0]));
    assert!(*sn.last().unwrap() <= 2);
}

#[test]
fn output_is_deterministic_and_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "three_pumps.json", THREE_PUMPS);
    let first = simulate(&["sn_vs_dt", "--config", &cfg, "--threads", "1"], &[]);
    let second = simulate(&["sn_vs_dt", "--config", &cfg], &[("SIM_THREADS", "3")]);
    assert!(first.status.success() && second.status.success());
    assert_eq!(first.stdout, second.stdout);

    let text = String::from_utf8(first.stdout).unwrap();
    let embedded = sweep::extract_embedded_config(&text).unwrap();
    let replay = write_config(dir.path(), "replay.json", &embedded.to_json());
    let third = simulate(&["sn_vs_dt", "--config", &replay], &[]);
    assert!(third.status.success());
    assert_eq!(String::from_utf8(third.stdout).unwrap(), text);
}

#[test]
fn json_output() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "beta.json", r#"{"delta_grid": [-1, 0, 1], "p_s_grid": [0, 0.4]}"#);
    let o = simulate(&["beta_map", "--config", &cfg, "--format", "json"], &[]);
    assert!(o.status.success(), "{}", String::from_utf8_lossy(&o.stderr));
    let doc: serde_json::Value = serde_json::from_slice(&o.stdout).unwrap();
    assert_eq!(doc["scenario"], "beta_map");
    assert_eq!(doc["columns"], serde_json::json!(["delta", "p_s", "beta_sq"]));
    let rows = doc["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    for row in rows {
        if row[1].as_f64().unwrap() == 0.0 {
            assert!((row[2].as_f64().unwrap() - 0.5).abs() < 1e-12);
        }
    }
}

#[test]
fn hopfield_sweep_right_edge() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write_config(dir.path(), "h.json", r#"{"scenario": "hopfield_sweep", "k_grid": {"start": 0, "stop": 3, "points": 31}}"#);
    let o = simulate(&["hopfield_sweep", "--config", &cfg], &[]);
    assert!(o.status.success());
    let rows = data_rows(&String::from_utf8(o.stdout).unwrap());
    assert_eq!(rows.len(), 93);
    for r in rows.iter().filter(|r| r[0] == "3.00000000000e0") {
        assert!(r[2].parse::<f64>().unwrap() > 0.99);
    }
}

#[test]
fn validation_failures_exit_2() {
    let dir = tempfile::tempdir().unwrap();
    let bad = write_config(dir.path(), "bad.json", r#"{"pumps": {"magnitudes": [0.1]}, "dt_grid": [0, -1]}"#);
    let o = simulate(&["sn_vs_dt", "--config", &bad], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("dt_grid"));

    let empty = write_config(dir.path(), "empty.json", "");
    let o = simulate(&["sn_vs_dt", "--config", &empty], &[]);
    assert_eq!(o.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&o.stderr).contains("pumps"));

    let o = simulate(&["spectrum", "--config", &empty], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = simulate(&["beta_map", "--config", &empty, "--format", "xml"], &[]);
    assert_eq!(o.status.code(), Some(2));
    let o = simulate(&["beta_map", "--config", &empty], &[("SIM_THREADS", "many")]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn io_failures_exit_4() {
    let dir = tempfile::tempdir().unwrap();
    let missing = dir.path().join("nope.json");
    let o = simulate(&["beta_map", "--config", missing.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(4));

    let cfg = write_config(dir.path(), "b.json", r#"{"delta_grid": [0], "p_s_grid": [0.4]}"#);
    let target = dir.path().join("no/such/dir/out.csv");
    let o = simulate(&["beta_map", "--config", &cfg, "--out", target.to_str().unwrap()], &[]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn output_path_from_config() {
    let dir = tempfile::tempdir().unwrap();
    let target = dir.path().join("from_config.csv");
    let cfg = write_config(
        dir.path(),
        "b.json",
        &format!(r#"{{"delta_grid": [0], "p_s_grid": [0.4], "output_path": {:?}}}"#, target.to_str().unwrap()),
    );
    let o = simulate(&["beta_map", "--config", &cfg], &[]);
    assert!(o.status.success());
    assert!(o.stdout.is_empty());
    let rows = data_rows(&std::fs::read_to_string(target).unwrap());
    // mpmath: beta^2 = 0.18286631828952 at delta = 0, p_s = 0.4, kp = 0.05 k0
    assert_eq!(rows[0][2], "1.82866318290e-1");
}
