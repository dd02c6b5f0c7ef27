use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn orbita(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_orbita"))
        .args(args)
        .env("ORBITA_THREADS", "1")
        .output()
        .expect("run orbita")
}

fn fixture(name: &str) -> String {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("tests/fixtures")
        .join(name)
        .to_string_lossy()
        .into_owned()
}

fn json_of(out: &Output) -> Value {
    assert!(
        out.status.success(),
        "stderr: {}",
        String::from_utf8_lossy(&out.stderr)
    );
    serde_json::from_slice(&out.stdout).expect("JSON on stdout")
}

fn classical(r0: f64, r2: f64) -> f64 {
    let a = (r0 + r2) / 2.0;
    ((2.0 / r0 - 1.0 / a).sqrt() - (1.0 / r0).sqrt())
        + ((1.0 / r2).sqrt() - (2.0 / r2 - 1.0 / a).sqrt())
}

#[test]
fn hohmann_one_to_two() {
    let v = json_of(&orbita(&["hohmann", "--r0", "1", "--r2", "2"]));
    let f1 = v["f1"].as_f64().unwrap();
    assert!((f1 - classical(1.0, 2.0)).abs() < 1e-12, "{f1}");
    assert_eq!(v["branch"], "coplanar");
}

#[test]
fn hohmann_all_branches() {
    let v = json_of(&orbita(&[
        "hohmann",
        "--r0",
        "1",
        "--r2",
        "1",
        "--dir2",
        "-1",
        "--all-branches",
    ]));
    let branches = v["branches"].as_array().unwrap();
    // two coplanar, two out of plane, one reversal
    assert_eq!(branches.len(), 5);
    assert!(branches.iter().any(|b| b["branch"] == "reversal"));
    assert!((branches[0]["f1"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn bad_radius_is_a_validation_error() {
    let out = orbita(&["hohmann", "--r0", "1", "--r2", "-2"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn usage_errors_exit_64() {
    assert_eq!(orbita(&["no-such-command"]).status.code(), Some(64));
    assert_eq!(orbita(&["hohmann", "--r0", "1"]).status.code(), Some(64));
    assert_eq!(orbita(&["--help"]).status.code(), Some(0));
}

#[test]
fn eval_plan_same_orbit() {
    let v = json_of(&orbita(&["eval-plan", &fixture("same_orbit.json")]));
    assert_eq!(v["cost"]["f1"].as_f64(), Some(0.0));
}

#[test]
fn eval_plan_hohmann_and_bi_elliptic() {
    let h = json_of(&orbita(&["eval-plan", &fixture("hohmann_1_2.json")]));
    assert!((h["cost"]["f1"].as_f64().unwrap() - classical(1.0, 2.0)).abs() < 1e-12);
    let h15 = json_of(&orbita(&["eval-plan", &fixture("hohmann_1_15.json")]));
    let b = json_of(&orbita(&["eval-plan", &fixture("bielliptic_1_15_80.json")]));
    let (h15, b) = (
        h15["cost"]["f1"].as_f64().unwrap(),
        b["cost"]["f1"].as_f64().unwrap(),
    );
    assert!(b < h15, "{b} {h15}");
}

#[test]
fn eval_plan_rejects_bad_input() {
    let out = orbita(&["eval-plan", &fixture("malformed.json")]);
    assert_eq!(out.status.code(), Some(2));
    let out = orbita(&["eval-plan", &fixture("off_plane.json")]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("off the plane"));
}

#[test]
fn lambert_from_file() {
    let v = json_of(&orbita(&["lambert", &fixture("lambert_symmetric.json")]));
    assert!(v["minimum"]["f2"].as_f64().unwrap() < 1e-20);
    assert_eq!(v["minimum"]["minimum"], true);
}

#[test]
fn rotated_half_turn() {
    let v = json_of(&orbita(&["rotated", "--e", "0.5", "--alpha", "180"]));
    assert_eq!(v["winner"]["case_tag"], "case2a_axis");
    let f1 = v["winner"]["f1"].as_f64().unwrap();
    assert!((f1 - 2.0 * (0.5f64 - 0.5f64.sqrt()).abs()).abs() < 1e-12);
}

#[test]
fn rotated_exact_parameters() {
    let v = json_of(&orbita(&[
        "rotated", "--s0x", "3/10", "--s0y", "2/5", "--all",
    ]));
    assert_eq!(v["input"]["s0x"], "3/10");
    let all = v["candidates"].as_array().unwrap();
    let w = v["winner"]["f1"].as_f64().unwrap();
    assert!(all.iter().all(|c| c["f1"].as_f64().unwrap() >= w));
}

#[test]
fn sweep_writes_csv() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.csv");
    let out = orbita(&[
        "sweep-rotated",
        "--e",
        "0.3:0.4:0.1",
        "--alpha",
        "90",
        "--include-180",
        "--out",
        path.to_str().unwrap(),
    ]);
    assert!(
        out.status.success(),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    let mut rdr = csv::Reader::from_path(&path).unwrap();
    let header: Vec<String> = rdr.headers().unwrap().iter().map(String::from).collect();
    assert_eq!(
        header,
        [
            "e",
            "alpha",
            "a",
            "b",
            "best_f1",
            "best_case",
            "separation_deg",
            "apogee_f1",
            "ratio_pct",
            "case1_found",
            "case2b_best_f1"
        ]
    );
    let rows: Vec<csv::StringRecord> = rdr.records().map(|r| r.unwrap()).collect();
    assert_eq!(rows.len(), 4);
    let cells: Vec<(&str, &str)> = rows.iter().map(|r| (&r[0], &r[1])).collect();
    assert_eq!(
        cells,
        [("0.3", "90"), ("0.3", "180"), ("0.4", "90"), ("0.4", "180")]
    );
    assert_eq!(&rows[0][5], "case2a_general");
    assert_eq!(&rows[1][5], "case2a_axis");
    for r in &rows {
        let ratio: f64 = r[8].parse().unwrap();
        assert!(ratio > 0.0 && ratio <= 100.0 + 1e-9);
    }
}

#[test]
fn sweep_rejects_half_turn_in_range() {
    let out = orbita(&[
        "sweep-rotated",
        "--alpha",
        "90:180:90",
        "--out",
        "/dev/null",
    ]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn oracle_check_hohmann() {
    let v = json_of(&orbita(&[
        "oracle-check",
        "--problem",
        "hohmann",
        "--r0",
        "1",
        "--r2",
        "3",
        "--grid",
        "32",
    ]));
    assert_eq!(v["ok"], true);
}
