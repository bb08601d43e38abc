use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TWO_OVER_E: f64 = 0.735_758_882_342_884_6;

fn krzyz(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_krzyz"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    serde_json::from_str(&stdout(o)).unwrap_or_else(|e| panic!("{e}: {}", stdout(o)))
}

/// Data rows of a CSV artifact, header comments and column names skipped.
fn csv_rows(text: &str) -> Vec<Vec<String>> {
    text.lines()
        .filter(|l| !l.starts_with('#'))
        .skip(1)
        .map(|l| l.split(',').map(str::to_string).collect())
        .collect()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn coeffs_table_of_kappa() {
    let o = krzyz(&["coeffs", "--nmax", "3"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("# krzyz-cli"));
    assert!(text.contains("config_hash="));
    let want = [TWO_OVER_E / 2.0, TWO_OVER_E, 0.0, TWO_OVER_E / 3.0];
    let rows = csv_rows(&text);
    assert_eq!(rows.len(), 4);
    for (r, w) in rows.iter().zip(want) {
        assert!((r[1].parse::<f64>().unwrap() - w).abs() < 1e-12);
    }
}

#[test]
fn coeffs_edge_sizes() {
    let rows = csv_rows(&stdout(&krzyz(&["coeffs", "--nmax", "0"])));
    assert_eq!(rows.len(), 1);
    assert!((rows[0][1].parse::<f64>().unwrap() - TWO_OVER_E / 2.0).abs() < 1e-15);

    let rows = csv_rows(&stdout(&krzyz(&["coeffs", "--nmax", "50"])));
    assert_eq!(rows.len(), 51);
    assert!(rows[2..].iter().all(|r| r[1].parse::<f64>().unwrap() < TWO_OVER_E));
}

#[test]
fn unwritable_output_is_a_usage_error() {
    let o = krzyz(&["coeffs", "--nmax", "3", "--out", "/nonexistent-dir/x/table.csv"]);
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn optimize_n1_reaches_two_over_e() {
    let o = krzyz(&["optimize", "--n", "1", "--seed", "7"]);
    assert!(o.status.success());
    let v = json(&o);
    assert_eq!(v["header"]["seed"], 7);
    let best = v["result"]["best_value"].as_f64().unwrap();
    assert!((best - 0.735759).abs() < 1e-6);
    assert!(v["result"]["gap_to_conjecture"].as_f64().unwrap().abs() < 1e-5);
    assert!(String::from_utf8_lossy(&o.stderr).contains("extremal shape"));
}

#[test]
fn optimize_is_byte_for_byte_reproducible() {
    let dir = tempfile::tempdir().unwrap();
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    for p in [&a, &b] {
        let o = krzyz(&["optimize", "--n", "2", "--seed", "7", "--out", p.to_str().unwrap()]);
        assert!(o.status.success());
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
}

#[test]
fn optimize_n3_has_vanishing_lower_coefficients() {
    let v = json(&krzyz(&["optimize", "--n", "3"]));
    let lower = v["result"]["lower_coefficients"].as_array().unwrap();
    assert_eq!(lower.len(), 2);
    assert!(lower.iter().all(|c| c.as_f64().unwrap() < 1e-3));
}

#[test]
fn optimize_rejects_bad_index() {
    assert_eq!(krzyz(&["optimize", "--n", "0"]).status.code(), Some(2));
    assert_eq!(krzyz(&["optimize"]).status.code(), Some(2));
    assert_eq!(krzyz(&["optimize", "--n", "x"]).status.code(), Some(2));
}

#[test]
fn verify_geometry_passes_with_json_lines() {
    let o = krzyz(&["verify", "geometry"]);
    assert_eq!(o.status.code(), Some(0), "{}", String::from_utf8_lossy(&o.stderr));
    let lines: Vec<Value> = stdout(&o).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(lines[0].get("header").is_some());
    let checks = &lines[1..lines.len() - 1];
    assert!(checks.iter().any(|c| c["check"] == "hyperbolic_curvature_minus_four" && c["pass"] == true));
    assert!(checks.iter().all(|c| c["pass"] == true));
    assert_eq!(lines.last().unwrap()["summary"]["failed"], 0);
}

#[test]
fn verify_factorization_round_trips() {
    let o = krzyz(&["verify", "factorization", "--population", "40"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).contains("\"check\":\"cover_round_trip\",\"pass\":true"));
}

#[test]
fn verify_all_reports_the_caveat() {
    let o = krzyz(&["verify", "all", "--population", "20", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let last: Value = serde_json::from_str(stdout(&o).lines().last().unwrap()).unwrap();
    assert!(last["summary"]["caveat"].as_str().unwrap().contains("counterexample"));
    assert!(String::from_utf8_lossy(&o.stderr).contains("note:"));
}

#[test]
fn verify_unknown_suite_is_a_usage_error() {
    assert_eq!(krzyz(&["verify", "everything"]).status.code(), Some(2));
}

#[test]
fn metric_scan_geodesic_equality_and_zero_column() {
    let o = krzyz(&["metric-scan", "--f", "kappa:1", "--n", "1"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.contains("zeta_re,zeta_im,lambda_j,lambda_hyp,dominated"));
    for r in csv_rows(&text) {
        let lj: f64 = r[2].parse().unwrap();
        let lh: f64 = r[3].parse().unwrap();
        assert!((lj / lh - 1.0).abs() < 1e-12);
    }
    let zero = stdout(&krzyz(&["metric-scan", "--f", "kappa:2", "--n", "1"]));
    assert!(csv_rows(&zero).iter().all(|r| r[2] == "0"));
}

#[test]
fn metric_scan_on_a_measure_file() {
    let dir = tempfile::tempdir().unwrap();
    let mu = write(
        dir.path(),
        "mu.json",
        r#"{"beta": 0.4, "atoms": [[0.5, 0.3], [2.0, 0.2], [4.1, 0.25]]}"#,
    );
    let o = krzyz(&["metric-scan", "--f", &mu, "--n", "2", "--format", "json"]);
    assert_eq!(o.status.code(), Some(0));
    let rows = json(&o)["result"].as_array().unwrap().clone();
    assert!(!rows.is_empty());
    assert!(rows.iter().all(|r| r["dominated"] == true));
}

#[test]
fn uncertifiable_input_is_a_data_error() {
    let dir = tempfile::tempdir().unwrap();
    let zero = write(dir.path(), "z.json", r#"{"coeffs": [[-0.25, 0.0], [0.5, 0.0]]}"#);
    assert_eq!(krzyz(&["metric-scan", "--f", &zero]).status.code(), Some(3));
    let junk = write(dir.path(), "j.json", "not json");
    assert_eq!(krzyz(&["distance", "--f", &junk]).status.code(), Some(3));
    assert_eq!(krzyz(&["distance", "--f", "missing-file.json"]).status.code(), Some(3));
}

#[test]
fn distance_along_kappa_geodesic() {
    let v = json(&krzyz(&["distance", "--f", "kappa:1", "--t", "0.3"]));
    let d = v["result"]["distance"].as_f64().unwrap();
    assert!((d / 0.3f64.atanh() - 1.0).abs() < 1e-8);
    assert_eq!(v["result"]["best_deck"], 0);
}

#[test]
fn slope_of_kappa() {
    let v = json(&krzyz(&["slope", "--f", "kappa:1", "--m", "1"]));
    assert!((v["result"]["slope"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert_eq!(krzyz(&["slope", "--f", "kappa:1", "--m", "2"]).status.code(), Some(3));
}

#[test]
fn config_file_supplies_defaults_and_flags_win() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = write(dir.path(), "cfg.json", r#"{"seed": 5, "n": 1, "restarts": 4}"#);
    let v = json(&krzyz(&["optimize", "--config", &cfg]));
    assert_eq!(v["header"]["seed"], 5);
    assert_eq!(v["result"]["restarts"], 4);
    let v = json(&krzyz(&["optimize", "--config", &cfg, "--seed", "6"]));
    assert_eq!(v["header"]["seed"], 6);
    let bad = write(dir.path(), "bad.json", r#"{"seeds": 5}"#);
    assert_eq!(krzyz(&["optimize", "--config", &bad]).status.code(), Some(2));
}
