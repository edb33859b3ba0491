use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_spectral-lab"));
    c.env_remove("SPECTRAL_LAB_OUT_DIR");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("spawn")
}

fn json_ok(args: &[&str]) -> Value {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn error_of(args: &[&str]) -> (i32, Value) {
    let out = run(args);
    let code = out.status.code().unwrap();
    let err: Value = serde_json::from_slice(&out.stderr).expect("stderr is JSON");
    (code, err["error"].clone())
}

#[test]
fn mm_on_equal_squares_fails_with_diagonal_swaps() {
    let v = json_ok(&["mm", "--op1", "dirichlet:pi", "--op2", "dirichlet:pi", "--lambda-max", "60"]);
    assert_eq!(v["mm"], false);
    let first = &v["collisions"][0];
    assert_eq!((first["i"].as_u64(), first["j"].as_u64()), (Some(1), Some(2)));
    assert_eq!((first["i2"].as_u64(), first["j2"].as_u64()), (Some(2), Some(1)));
}

#[test]
fn mm_holds_for_incommensurable_sides() {
    let v = json_ok(&["mm", "--op1", "dirichlet:pi", "--op2", "dirichlet:2.6417540005910616", "--lambda-max", "200"]);
    assert_eq!(v["mm"], true);
    assert_eq!(v["collisions"].as_array().unwrap().len(), 0);
}

#[test]
fn gfunc_half_interval_is_one_half() {
    let v = json_ok(&["gfunc", "--op", "dirichlet:pi", "--omega", "[[0,1.5707963267948966]]", "--lambda-max", "10000"]);
    assert!((v["value"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert_eq!(v["kind"], "g_direct");
}

#[test]
fn square_scan_csv_has_half_at_fifty() {
    let out = run(&["square", "scan", "--omega", "[[0,1.5708,0,3.1416]]", "--lambda-max", "5000", "--format", "csv"]);
    assert!(out.status.success());
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("lambda,dim,c_value\n"));
    let row = text.lines().find(|l| l.starts_with("50,")).expect("row for 50");
    let cols: Vec<&str> = row.split(',').collect();
    assert_eq!(cols[1], "3");
    assert!((cols[2].parse::<f64>().unwrap() - 0.5).abs() < 1e-4);
}

#[test]
fn square_min_lambda() {
    let v = json_ok(&["square", "min-lambda", "--p", "3"]);
    assert_eq!(v["lambda"].as_u64(), Some(325));
}

#[test]
fn exit_codes() {
    let (code, e) = error_of(&["square", "min-lambda", "--p", "5", "--limit", "100"]);
    assert_eq!((code, e["kind"].as_str()), (4, Some("not_found")));
    let (code, e) = error_of(&["mm", "--op1", "bogus:pi", "--op2", "dirichlet:pi", "--lambda-max", "3"]);
    assert_eq!((code, e["kind"].as_str()), (2, Some("schema")));
    assert_eq!(error_of(&["frobnicate"]).0, 2);
    assert_eq!(error_of(&["gfunc", "--op", "dirichlet:pi", "--omega", "[[0,1", "--lambda-max", "10"]).0, 2);
    assert_eq!(error_of(&["square", "value", "--omega", "[[0,1,0,1]]", "--lambda", "3"]).0, 4);
    assert_eq!(error_of(&[]).0, 2);
}

#[test]
fn output_is_deterministic_across_thread_counts() {
    let args = ["square", "scan", "--omega", "[[0,1,0,2],[2,3,1,3]]", "--lambda-max", "3000", "--format", "both"];
    let a = bin().args(args).args(["--threads", "1"]).output().unwrap();
    let b = bin().args(args).args(["--threads", "4"]).output().unwrap();
    let c = bin().args(args).output().unwrap();
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(a.stdout, c.stdout);
}

#[test]
fn csv_reals_round_trip_to_json() {
    let dir = tempfile::tempdir().unwrap();
    let d = dir.path().to_str().unwrap();
    let out = run(&["--out-dir", d, "square", "scan", "--omega", "[[0,1,0,2]]", "--lambda-max", "500"]);
    assert!(out.status.success());
    let json: Value = serde_json::from_str(&std::fs::read_to_string(dir.path().join("square_scan.json")).unwrap()).unwrap();
    let csv = std::fs::read_to_string(dir.path().join("square_scan.csv")).unwrap();
    let cs: Vec<f64> = csv.lines().skip(1).map(|r| r.split(',').nth(2).unwrap().parse().unwrap()).collect();
    assert_eq!(cs.len() as u64, json["eigenvalues"].as_u64().unwrap());
    // 17 significant digits in CSV and shortest round-trip JSON give the same f64
    let min = cs.iter().copied().fold(f64::INFINITY, f64::min);
    assert_eq!(min.to_bits(), json["min_c"].as_f64().unwrap().to_bits());
}

fn files_in(dir: &Path) -> Vec<String> {
    let mut v: Vec<String> =
        std::fs::read_dir(dir).unwrap().map(|e| e.unwrap().file_name().to_string_lossy().into_owned()).collect();
    v.sort();
    v
}

#[test]
fn out_dir_from_environment() {
    let dir = tempfile::tempdir().unwrap();
    let out = bin()
        .env("SPECTRAL_LAB_OUT_DIR", dir.path())
        .args(["tube", "scan", "--geodesic", r#"{"kind":"horizontal","y":1.0}"#, "--eps-list", "0.1,0.2"])
        .output()
        .unwrap();
    assert!(out.status.success(), "{}", String::from_utf8_lossy(&out.stderr));
    assert!(out.stdout.is_empty());
    assert_eq!(files_in(dir.path()), ["tube_scan.csv", "tube_scan.json"]);
    let csv = std::fs::read_to_string(dir.path().join("tube_scan.csv")).unwrap();
    assert_eq!(csv.lines().next(), Some("epsilon,bound_value,direct_value"));
    assert_eq!(csv.lines().count(), 3);
}

#[test]
fn config_file_matches_flags() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    std::fs::write(
        &cfg,
        r#"{"subcommand": "gfunc", "parameters": {"op": "dirichlet:pi", "omega": [[0, 1.5707963267948966]], "lambda_max": 2000}, "seed": 1}"#,
    )
    .unwrap();
    let via_cfg = bin().arg("--config").arg(&cfg).output().unwrap();
    let via_flags = run(&["gfunc", "--op", "dirichlet:pi", "--omega", "[[0,1.5707963267948966]]", "--lambda-max", "2000"]);
    assert!(via_cfg.status.success(), "{}", String::from_utf8_lossy(&via_cfg.stderr));
    assert_eq!(via_cfg.stdout, via_flags.stdout);

    std::fs::write(&cfg, r#"{"subcommand": "gfunc", "unknown": 1}"#).unwrap();
    assert_eq!(bin().arg("--config").arg(&cfg).output().unwrap().status.code(), Some(2));
}

#[test]
fn tube_complement_reports_both_approximations() {
    let v = json_ok(&[
        "tube",
        "complement",
        "--geodesic",
        r#"{"kind":"diagonal","slope":1.0,"t":4.0}"#,
        "--eps",
        "0.1",
        "--resolution",
        "32",
    ]);
    let outer = v["outer_measure"].as_f64().unwrap();
    let inner = v["inner_measure"].as_f64().unwrap();
    assert!(0.0 < outer && outer <= inner);
}
