use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn avset(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_avset"))
        .args(args)
        .env_remove("AVSET_WORKERS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn strip_timing(mut v: Value) -> Value {
    if let Some(obj) = v.as_object_mut() {
        obj.remove("elapsed_ms");
    }
    v
}

#[test]
fn exact_run_reproduces_worked_fixture() {
    let out = avset(&["--field", "7", "--d", "3", "--s", "1", "--a", "0", "--method", "both"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    for key in ["avg_brute", "avg_formula"] {
        assert_eq!(v[key]["num"], "33");
        assert_eq!(v[key]["den"], "7");
    }
    assert_eq!(v["identity_holds"], true);
    assert_eq!(v["chi"]["3"], 5);

    let sub = avset(&["avset", "--field", "5", "--d", "3", "--s", "1", "--a", "0"]);
    let v = json(&sub);
    assert_eq!((v["avg_brute"]["num"].as_str(), v["avg_brute"]["den"].as_str()), (Some("17"), Some("5")));
}

#[test]
fn exit_codes() {
    // d >= q
    assert_eq!(avset(&["--field", "5", "--d", "6", "--s", "1"]).status.code(), Some(1));
    // 101^8 polynomials
    assert_eq!(
        avset(&["--field", "101", "--d", "9", "--s", "1", "--method", "brute"]).status.code(),
        Some(2)
    );
    assert_eq!(avset(&["--field", "6", "--d", "3", "--s", "1"]).status.code(), Some(4));
    assert_eq!(avset(&["--field", "7", "--d", "3", "--s", "1", "--a", "9"]).status.code(), Some(4));
    assert_eq!(avset(&["scan", "--field", "7", "--d", "4", "--s", "1", "--r", "2"]).status.code(), Some(1));
}

#[test]
fn scan_reports_point_counts() {
    let out = avset(&["scan", "--field", "5", "--d", "4", "--s", "2", "--a", "0,0", "--r", "4"]);
    assert_eq!(out.status.code(), Some(0));
    let row = &json(&out)["scans"][0];
    assert_eq!(row["total"], 25);
    assert_eq!(row["distinct_coords"], 24);
    assert_eq!(row["rank_deficient"], 1);
    assert_eq!(row["rank_deficiency_check"], true);
    assert_eq!(row["chi_cross_check"], true);
    assert!(row["estimate_check"].is_null());
}

#[test]
fn scan_modes_agree() {
    let base = ["scan", "--field", "9", "--d", "6", "--s", "2", "--seed", "4"];
    let a = avset(&[&base[..], &["--mode", "odometer"]].concat());
    let b = avset(&[&base[..], &["--mode", "orbit", "--evaluator", "remainder"]].concat());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(json(&a), json(&b));
}

#[test]
fn output_is_independent_of_worker_count() {
    let args = ["--field", "3^2:1,0,1", "--d", "5", "--s", "2", "--seed", "2"];
    let one = avset(&[&args[..], &["--workers", "1"]].concat());
    let four = avset(&[&args[..], &["--workers", "4"]].concat());
    assert_eq!(strip_timing(json(&one)), strip_timing(json(&four)));
    let env = Command::new(env!("CARGO_BIN_EXE_avset"))
        .args(args)
        .env("AVSET_WORKERS", "2")
        .output()
        .unwrap();
    assert_eq!(strip_timing(json(&env)), strip_timing(json(&one)));
}

#[test]
fn chi_reports_estimate_in_regime() {
    let out = avset(&["chi", "--field", "7", "--d", "4", "--s", "1", "--a", "0"]);
    let v = json(&out);
    let row = &v["counts"][0];
    assert_eq!(row["r"], 4);
    assert_eq!(row["chi"], 5);
    assert_eq!(row["estimate"]["bound"], "49/4");
    assert_eq!(row["estimate"]["holds"], true);
}

#[test]
fn bounds_sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sweep.csv");
    let out = avset(&["bounds", "sweep", "--d-max", "40", "--format", "csv", "--output", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_path(&path).unwrap();
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // one row per 4 <= d <= 40, 1 <= s <= d/2 - 1
    let expected: u64 = (4..=40u64).map(|d| d / 2 - 1).sum();
    assert_eq!(rows.len() as u64, expected);
    for r in &rows {
        assert_eq!(&r[col("h_le_c")], "true");
        assert_eq!(&r[col("c_le_envelope")], "true");
    }
}

#[test]
fn bounds_grid_rows_hold() {
    let out = avset(&["bounds", "grid", "--fields", "11,13", "--seeds", "1,2", "--format", "csv"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let mut reader = csv::Reader::from_reader(&out.stdout[..]);
    let headers = reader.headers().unwrap().clone();
    let col = |name: &str| headers.iter().position(|h| h == name).unwrap();
    let rows: Vec<csv::StringRecord> = reader.records().map(Result::unwrap).collect();
    // main regime: 4 <= d < q, 1 <= s <= d/2 - 1, three a vectors each
    let cells: usize = [11usize, 13].iter().map(|&q| (4..q).map(|d| d / 2 - 1).sum::<usize>()).sum();
    assert_eq!(rows.len(), 3 * cells);
    for r in &rows {
        assert_eq!(&r[col("corollary_holds")], "true");
        assert_eq!(&r[col("main_holds")], "true");
        assert_ne!(&r[col("restricted_holds")], "false");
    }
}

#[test]
fn bounds_point_checks_exact_average() {
    let out = avset(&["bounds", "point", "--field", "11", "--d", "6", "--s", "2", "--check"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["regime"]["main"], true);
    assert_eq!(v["check"]["corollary_holds"], true);
    assert_eq!(v["check"]["main_holds"], true);
    // advisory range: warns and still reports
    let out = avset(&["bounds", "point", "--field", "7", "--d", "3", "--s", "1"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stderr).contains("warning"));
    assert!(json(&out)["main_bound"].is_null());
}

#[test]
fn htable_dump_text() {
    let out = avset(&["htable", "--r", "2", "--d", "3", "--format", "text"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.contains("-1·Π2"));
    assert!(text.contains("1·Π1^2 - 1·Π2"));
    let sys = avset(&["htable", "--system", "--field", "7", "--d", "5", "--s", "1", "--a", "3", "--r", "5"]);
    assert_eq!(sys.status.code(), Some(0));
    assert!(json(&sys)["system"]["R[4]"].is_string());
}

#[test]
fn verify_subset_runs() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("verify.json");
    let out = avset(&[
        "verify",
        "--criteria",
        "2,4,7",
        "--fields",
        "5,7",
        "--seeds",
        "1",
        "--samples",
        "200",
        "--output",
        path.to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let v: Value = serde_json::from_str(&std::fs::read_to_string(Path::new(&path)).unwrap()).unwrap();
    let statuses: Vec<&str> = v["results"].as_array().unwrap().iter().map(|r| r["status"].as_str().unwrap()).collect();
    assert_eq!(statuses, ["Pass", "Pass", "Pass"]);
}
