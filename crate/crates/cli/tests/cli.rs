use std::fs;
use std::process::{Command, Output};

use expspline::SampledFunction;
use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_expspline")).args(args).output().expect("spawn expspline")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn hat_samples_as_csv() {
    let o = run(&["sample", "--z", "2", "--a", "0", "--x0", "0", "--dx", "0.5", "--n", "5"]);
    assert!(o.status.success());
    assert_eq!(stdout(&o), "x,re,im\n0,0,0\n0.5,0.5,0\n1,1,0\n1.5,0.5,0\n2,0,0\n");
}

#[test]
fn order_below_one_is_rejected() {
    let o = run(&["sample", "--z", "0.9"]);
    assert_eq!(o.status.code(), Some(1));
    let err = String::from_utf8(o.stderr).unwrap();
    assert!(err.contains("Re z > 1"), "{err}");
    assert_eq!(err.lines().count(), 1);
    assert!(o.stdout.is_empty());
}

#[test]
fn usage_errors_exit_one() {
    for args in [
        vec!["sample", "--z", "2+1j"],
        vec!["sample"],
        vec!["sample", "--z", "2", "--a", "-1"],
        vec!["sample", "--z", "2", "--dx", "0"],
        vec!["verify", "--suite", "nope"],
        vec!["unknown"],
    ] {
        assert_eq!(run(&args).status.code(), Some(1), "{args:?}");
    }
}

#[test]
fn filter_that_cannot_converge_is_numeric_error() {
    let o = run(&["filter", "--z", "1.2", "--a", "0", "--tol", "1e-12"]);
    assert_eq!(o.status.code(), Some(3));
}

#[test]
fn json_samples_round_trip_through_a_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("s.json");
    let o = run(&["sample", "--z", "2.5+1i", "--a", "0.5", "--dx", "0.125", "--n", "64", "--format", "json", "--out"]
        .into_iter()
        .chain([path.to_str().unwrap()])
        .collect::<Vec<_>>());
    assert!(o.status.success());
    let text = fs::read_to_string(&path).unwrap();
    let f = SampledFunction::from_json(&text).unwrap();
    assert_eq!((f.x0(), f.dx(), f.len()), (0.0, 0.125, 64));
    assert_eq!(f.to_json().unwrap() + "\n", text);
}

#[test]
fn output_is_deterministic() {
    for args in [
        vec!["fourier", "--z", "2.5-1i", "--a", "1", "--omega0", "-5", "--domega", "0.1", "--n", "101"],
        vec!["bivariate", "--z", "2+0.5i", "--zeta", "1.5", "--a", "1", "--b", "0.3", "--n", "65"],
        vec!["filter", "--z", "3+0.5i", "--a", "0.7"],
    ] {
        assert_eq!(run(&args).stdout, run(&args).stdout);
    }
}

#[test]
fn fourier_sweep_has_modulus_column() {
    let o = run(&["fourier", "--z", "2", "--a", "0", "--omega0", "0", "--domega", "1", "--n", "2"]);
    let text = stdout(&o);
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("omega,re,im,abs"));
    assert_eq!(lines.next(), Some("0,1,0,1"));
    let row: Vec<f64> = lines.next().unwrap().split(',').map(|v| v.parse().unwrap()).collect();
    assert!((row[3] - (row[1].hypot(row[2]))).abs() < 1e-16);
}

#[test]
fn filter_json_shape() {
    let o = run(&["filter", "--z", "2", "--a", "0"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["z"], serde_json::json!([2.0, 0.0]));
    assert_eq!(v["weights"], serde_json::json!([[0.25, 0.0], [0.5, 0.0], [0.25, 0.0]]));
    assert_eq!(v["tail_bound"], serde_json::json!(0.0));
}

#[test]
fn bivariate_reports_both_forms() {
    let o = run(&["bivariate", "--z", "2+0.5i", "--zeta", "1.5", "--a", "1", "--b", "0.3", "--format", "json", "--n", "33"]);
    let v: Value = serde_json::from_str(&stdout(&o)).unwrap();
    assert_eq!(v["spec"]["zeta"], serde_json::json!([1.5, 0.0]));
    assert_eq!(v["kummer"].as_array().unwrap().len(), 33);
    assert_eq!(v["gauss"].as_array().unwrap().len(), 33);
    let diffs = v["difference"].as_array().unwrap();
    assert!(diffs.iter().all(|d| d.as_f64().unwrap() < 1e-10));
    let csv = stdout(&run(&["bivariate", "--z", "2", "--zeta", "2", "--a", "1", "--b", "1", "--n", "3"]));
    assert!(csv.starts_with("x,kummer_re,kummer_im,gauss_re,gauss_im,difference\n"));
}

#[test]
fn flags_override_config_file() {
    let dir = tempfile::tempdir().unwrap();
    let cfg = dir.path().join("run.json");
    fs::write(&cfg, r#"{"z": "2", "a": 5.0, "x0": 0, "dx": 0.5, "n": 5}"#).unwrap();
    let o = run(&["sample", "--config", cfg.to_str().unwrap(), "--a", "0"]);
    assert_eq!(stdout(&o), "x,re,im\n0,0,0\n0.5,0.5,0\n1,1,0\n1.5,0.5,0\n2,0,0\n");
    fs::write(&cfg, r#"{"z": "2", "colour": 1}"#).unwrap();
    assert_eq!(run(&["sample", "--config", cfg.to_str().unwrap()]).status.code(), Some(1));
}

#[test]
fn verify_report_shape() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let o = run(&["verify", "--suite", "two-scale", "--out", out.to_str().unwrap()]);
    assert!(o.status.success());
    let v: Value = serde_json::from_str(&fs::read_to_string(&out).unwrap()).unwrap();
    assert_eq!(v["suite"], "two-scale");
    assert_eq!(v["passed"], true);
    assert_eq!(v["checks"].as_array().unwrap().len(), 48);
    assert!(v["wall_time"].as_f64().unwrap() >= 0.0);
    assert_eq!(v["config_echo"]["command"], "verify");
    for check in v["checks"].as_array().unwrap() {
        for key in ["name", "grid_size", "max_violation", "passed"] {
            assert!(check.get(key).is_some());
        }
    }
}

#[test]
fn verify_csv_lists_checks() {
    let o = run(&["verify", "--suite", "bivariate", "--format", "csv"]);
    assert!(o.status.success());
    let text = stdout(&o);
    assert!(text.starts_with("name,grid_size,max_violation,passed\n"));
    assert_eq!(text.lines().count(), 10);
}
