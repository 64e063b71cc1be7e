use std::path::PathBuf;
use std::process::Command;

use serde_json::Value;
use srsphere::cli::run_with;

fn run(args: &[&str]) -> (i32, String, String) {
    let (mut out, mut err) = (Vec::new(), Vec::new());
    let mut argv = vec!["srsphere"];
    argv.extend_from_slice(args);
    let code = run_with(argv, &mut out, &mut err);
    (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
}

fn schema(name: &str) -> jsonschema::Validator {
    let path = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../docs/schemas").join(format!("{name}.schema.json"));
    let text = std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{}: {e}", path.display()));
    jsonschema::validator_for(&serde_json::from_str(&text).unwrap()).unwrap()
}

fn assert_valid(name: &str, doc: &str) -> Value {
    let v: Value = serde_json::from_str(doc).unwrap();
    let errors: Vec<String> = schema(name).iter_errors(&v).map(|e| format!("{} at {}", e, e.instance_path())).collect();
    assert!(errors.is_empty(), "{name}: {errors:?}");
    v
}

const TRACE_34: &[&str] = &[
    "trace", "--space", "s2n1", "--n", "1", "--p", "1,0,0,0", "--v", "0,0.75,1,0", "--t0", "0", "--t1", "12.566370614",
    "--samples", "1000",
];

#[test]
fn trace_closed_orbit_returns() {
    let (code, out, _) = run(TRACE_34);
    assert_eq!(code, 0);
    let v = assert_valid("trace", &out);
    let last = v["points"].as_array().unwrap().last().unwrap().as_array().unwrap();
    let d: f64 = last.iter().zip([1.0, 0.0, 0.0, 0.0]).map(|(a, b)| (a.as_f64().unwrap() - b).powi(2)).sum::<f64>().sqrt();
    assert!(d <= 1e-8, "final distance {d}");
    assert_eq!(v["points"].as_array().unwrap().len(), 1000);
    assert_eq!(v["exact_lambda"], "3/4");
}

#[test]
fn trace_quaternionic_and_csv() {
    let (code, out, _) = run(&[
        "trace", "--space", "s4n3", "--n", "1", "--p", "0,0,0,0,0,0,0,1", "--v", "0.3,-0.2,1,0,0.5,0,0,0", "--t1", "2",
        "--samples", "11", "--out", "csv",
    ]);
    assert_eq!(code, 0);
    let lines: Vec<&str> = out.lines().collect();
    assert_eq!(lines[2], "t,x0,x1,x2,x3,x4,x5,x6,x7,speed,horiz_residual_1,horiz_residual_2,horiz_residual_3");
    assert_eq!(lines.len(), 3 + 11);
    for row in &lines[3..] {
        let cells: Vec<f64> = row.split(',').map(|c| c.parse().unwrap()).collect();
        assert_eq!(cells.len(), 13);
        assert!(cells[10..].iter().all(|h| h.abs() < 1e-9));
    }
    let (_, json, _) = run(&[
        "trace", "--space", "s4n3", "--n", "1", "--p", "0,0,0,0,0,0,0,1", "--v", "0.3,-0.2,1,0,0.5,0,0,0", "--t1", "2",
        "--samples", "11",
    ]);
    let v = assert_valid("trace", &json);
    assert!(v["closedness"].is_null());
}

#[test]
fn shoot_is_reproducible_and_valid() {
    let args = [
        "shoot", "--space", "s2n1", "--n", "1", "--p", "1,0,0,0", "--q", "0,0,1,0", "--T", "1", "--starts", "8", "--seed", "7",
    ];
    let (code, a, _) = run(&args);
    assert_eq!(code, 0);
    let v = assert_valid("shoot", &a);
    let sols = v["solutions"].as_array().unwrap();
    assert!(!sols.is_empty());
    assert!(sols.iter().all(|s| s["residual"].as_f64().unwrap() <= 1e-10));
    assert_eq!(run(&args).1, a);
}

#[test]
fn htype_json_matches_closed_form() {
    let (code, out, _) = run(&["htype", "--lambda", "0.5,-1,0.25", "--u0", "0.6,0,0.8,0", "--T", "10", "--step", "1e-3"]);
    assert_eq!(code, 0);
    let v = assert_valid("htype", &out);
    assert!(v["max_discrepancy"].as_f64().unwrap() <= 1e-6);
    let speed = v["speed"].as_array().unwrap();
    assert!(speed.iter().all(|s| (s.as_f64().unwrap() - 1.0).abs() < 1e-9));
}

#[test]
fn heat_reports_both_discrepancies() {
    let (code, out, _) = run(&["heat", "--t", "0.5", "--degree", "3"]);
    assert_eq!(code, 0);
    let v = assert_valid("heat", &out);
    assert!(v["report"]["split_discrepancy"].as_f64().unwrap() <= 1e-8);
    assert!(v["report"]["laplace_beltrami_discrepancy"].as_f64().unwrap() <= 1e-8);
}

#[test]
fn spectrum_blocks() {
    let (code, out, _) = run(&["spectrum", "--space", "s3", "--degree", "2"]);
    assert_eq!(code, 0);
    let v = assert_valid("spectrum", &out);
    let blocks = v["report"]["blocks"].as_array().unwrap();
    assert_eq!(blocks.len(), 3);
    assert!(blocks.iter().all(|b| b["certified"] == true));
}

#[test]
fn verify_frames_all_exact() {
    let (code, out, _) = run(&["verify", "--module", "frames", "--out", "json"]);
    assert_eq!(code, 0);
    let v = assert_valid("verify", &out);
    let checks = v["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["status"] == "exact-pass"));
}

#[test]
fn output_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("srsphere-cli-{}.json", std::process::id()));
    let p = path.to_str().unwrap();
    let (code, out, _) = run(&["heat", "--t", "0.25", "--degree", "1", "--output", p]);
    assert_eq!(code, 0);
    assert!(out.is_empty());
    let text = std::fs::read_to_string(&path).unwrap();
    let v = assert_valid("heat", &text);
    assert_eq!(v["header"]["config"]["output"], p);
    std::fs::remove_file(&path).ok();
}

#[test]
fn binary_exit_codes() {
    let bin = env!("CARGO_BIN_EXE_srsphere");
    let status = |args: &[&str]| Command::new(bin).args(args).output().unwrap();
    let ok = status(&["verify", "--module", "frames"]);
    assert_eq!(ok.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&ok.stdout).contains("exact-pass"));
    let bad = status(&["trace", "--nope"]);
    assert_eq!(bad.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&bad.stderr).contains("Usage"));
    let off = status(&["shoot", "--space", "s2n1", "--n", "1", "--p", "2,0,0,0", "--q", "1,0,0,0", "--T", "1"]);
    assert_eq!(off.status.code(), Some(2));
    let threads = Command::new(bin).env("SRSPHERE_THREADS", "1").args(TRACE_34).output().unwrap();
    assert_eq!(threads.status.code(), Some(0));
    let default = status(TRACE_34);
    assert_eq!(threads.stdout, default.stdout);
    let junk = Command::new(bin).env("SRSPHERE_THREADS", "zero").args(["heat", "--t", "1"]).output().unwrap();
    assert_eq!(junk.status.code(), Some(2));
}

#[test]
fn failing_identity_exits_one_with_location() {
    let bin = env!("CARGO_BIN_EXE_srsphere");
    let out = Command::new(bin).args(["verify", "--module", "subelliptic"]).output().unwrap();
    let stderr = String::from_utf8_lossy(&out.stderr);
    // the S^3 bracket comes out as -2V under [A,B]_i = A(B_i) - B(A_i)
    assert_eq!(out.status.code(), Some(1), "{stderr}");
    assert!(stderr.contains("verification failed at S^3 contact frame: [X, Y] = 2V"), "{stderr}");
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(String::from_utf8_lossy(&out.stdout).contains("FAIL"));
}
