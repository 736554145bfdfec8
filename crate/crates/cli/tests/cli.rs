use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

const TWO_ATOMS: &str = r#"{"atoms": [[-1, 0.5], [1, 0.5]]}"#;
const DELTA1: &str = r#"{"atoms": [[1, 1.0]]}"#;

fn hs(args: &[&str], dir: &Path) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hs")).args(args).current_dir(dir).output().expect("spawn hs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("json report on stdout")
}

fn setup() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    std::fs::write(dir.path().join("two_atoms.json"), TWO_ATOMS).unwrap();
    std::fs::write(dir.path().join("delta1.json"), DELTA1).unwrap();
    dir
}

#[test]
fn certify_point_mass_is_exceptional() {
    let dir = setup();
    let out = hs(&["certify", "--mu", DELTA1], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["verdict"], "exceptional");
    assert_eq!(r["results"]["certification"]["verdict"], "exceptional");
}

#[test]
fn identity_check_at_i() {
    let dir = setup();
    let out = hs(&["identity-check", "--mu", "delta1.json", "--z", "0+1i"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    let row = &r["table"]["rows"][0];
    assert!(row[6].as_f64().unwrap() <= 1e-8);
    let lhs = (row[2].as_f64().unwrap(), row[3].as_f64().unwrap());
    assert!((lhs.0 + 0.5 * 2f64.ln()).abs() < 1e-12);
    assert!((lhs.1 - std::f64::consts::FRAC_PI_4).abs() < 1e-12);
}

#[test]
fn hardy_outside_window_is_non_converged() {
    let dir = setup();
    let out = hs(&["hardy", "--nu", "two_atoms.json", "--p", "2.5", "--y", "0.1"], dir.path());
    assert_eq!(out.status.code(), Some(3));
    let stderr = String::from_utf8_lossy(&out.stderr);
    assert_eq!(stderr.lines().count(), 1, "{stderr}");
    assert!(stderr.starts_with("hs: non-converged:"));
    assert_eq!(report(&out)["table"]["rows"][0][3], false);
}

#[test]
fn hardy_inside_window_passes() {
    let dir = setup();
    let out = hs(&["hardy", "norm", "--nu", TWO_ATOMS, "--p", "1.5", "--y", "0.1,0.5,1"], dir.path());
    assert_eq!(out.status.code(), Some(0));
    let rows = report(&out)["table"]["rows"].as_array().unwrap().clone();
    let values: Vec<f64> = rows.iter().map(|r| r[2].as_f64().unwrap()).collect();
    assert!(values.windows(2).all(|w| w[0] > w[1]), "{values:?}");
}

#[test]
fn rejected_candidates_exit_one() {
    let dir = setup();
    for b in ["pole-at-minus-one", "one-plus-5z"] {
        let out = hs(&["certify", "builtin", "--builtin", b], dir.path());
        assert_eq!(out.status.code(), Some(1), "{b}");
        assert_eq!(report(&out)["verdict"], "rejected");
    }
    let v = r#"{"kind": "indicator", "a": 0.5, "b": 2, "height": 1}"#;
    let out = hs(&["certify", "--v", v], dir.path());
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(report(&out)["verdict"], "failed");
}

#[test]
fn usage_errors_exit_two() {
    let dir = setup();
    let cases: [&[&str]; 6] = [
        &["eval", "--nu", "missing.json", "--z", "i"],
        &["eval", "--nu", "{\"atoms\": [[1, 2]]", "--z", "i"],
        &["eval", "--nu", TWO_ATOMS, "--z", "1+2j"],
        &["eval", "--nu", TWO_ATOMS],
        &["hardy", "--nu", DELTA1, "--p", "1.5"],
        &["certify", "--mu", DELTA1, "--builtin", "koebe"],
    ];
    for args in cases {
        let out = hs(args, dir.path());
        assert_eq!(out.status.code(), Some(2), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
        assert!(!out.stderr.is_empty());
    }
}

#[test]
fn negative_arguments() {
    let dir = setup();
    let out = hs(&["eval", "--nu", TWO_ATOMS, "--z", "-0.5+0.25i", "--x", "-0.5", "--beta", "-1"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["job"]["parameters"]["z"][0][0], -0.5);
    assert_eq!(r["job"]["parameters"]["x"][0], -0.5);
}

#[test]
fn reports_are_deterministic() {
    let dir = setup();
    let job = r#"{"command": "certify", "mode": "builtin", "input": {"builtin": "polylog:1"},
                  "parameters": {"samples": 256, "seed": 7}}"#;
    std::fs::write(dir.path().join("job.json"), job).unwrap();
    let a = hs(&["run", "--job", "job.json", "--out", "a.json"], dir.path());
    let b = hs(&["run", "--job", "job.json", "--out", "b.json"], dir.path());
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(b.status.code(), Some(0));
    let ra = std::fs::read_to_string(dir.path().join("a.json")).unwrap();
    let rb = std::fs::read_to_string(dir.path().join("b.json")).unwrap();
    assert_eq!(ra.replace("a.json", "x"), rb.replace("b.json", "x"));
    let r: Value = serde_json::from_str(&ra).unwrap();
    assert_eq!(r["seed"], 7);
    assert_eq!(r["tolerance"]["abs"], r["job"]["parameters"]["tol_abs"]);
}

#[test]
fn job_file_resolves_relative_inputs() {
    let dir = setup();
    let sub = dir.path().join("jobs");
    std::fs::create_dir(&sub).unwrap();
    std::fs::write(sub.join("nu.json"), TWO_ATOMS).unwrap();
    let job = r#"{"command": "eval", "input": {"nu": "nu.json"}, "parameters": {"z": [[0, 1]]}}"#;
    std::fs::write(sub.join("job.json"), job).unwrap();
    let out = hs(&["run", "--job", "jobs/job.json"], dir.path());
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let r = report(&out);
    assert_eq!(r["job"]["input"]["nu"]["atoms"][0][0], -1.0);
    let phi = r["table"]["rows"]
        .as_array()
        .unwrap()
        .iter()
        .find(|row| row[0] == "phi")
        .cloned()
        .unwrap();
    assert!(phi[3].as_f64().unwrap().abs() < 1e-10);
    assert!((phi[4].as_f64().unwrap() - 1.0).abs() < 1e-10);

    let bad = r#"{"command": "eval", "input": {"nu": "nu.json"}, "parameters": {"zz": 1}}"#;
    std::fs::write(sub.join("bad.json"), bad).unwrap();
    assert_eq!(hs(&["run", "--job", "jobs/bad.json"], dir.path()).status.code(), Some(2));
}

#[test]
fn csv_rows_round_trip_through_json() {
    let dir = setup();
    let cases: [&[&str]; 3] = [
        &["eval", "--nu", "two_atoms.json", "--z", "i,0.3+0.2i", "--x", "0,0.5,2"],
        &["transform", "hilbert", "--v", r#"{"kind": "indicator", "a": -1, "b": 1, "height": 1}"#, "--x", "-0.5,3"],
        &["hardy", "--nu", "two_atoms.json", "--p", "1.5,2.5", "--y", "0.5"],
    ];
    for (k, args) in cases.iter().enumerate() {
        let csv_path = format!("out{k}.csv");
        let mut full: Vec<&str> = args.to_vec();
        full.extend(["--format", "csv", "--out", &csv_path]);
        let out = hs(&full, dir.path());
        assert!(out.status.code().is_some_and(|c| c == 0 || c == 3), "{args:?}");
        let json: Value =
            serde_json::from_str(&std::fs::read_to_string(dir.path().join(format!("out{k}.json"))).unwrap()).unwrap();
        let mut reader = csv::Reader::from_path(dir.path().join(&csv_path)).unwrap();
        let header: Vec<String> = reader.headers().unwrap().iter().map(str::to_string).collect();
        assert_eq!(Value::from(header), json["table"]["columns"]);
        let rows = json["table"]["rows"].as_array().unwrap();
        let mut n = 0;
        for (record, row) in reader.records().zip(rows) {
            let record = record.unwrap();
            for (cell, value) in record.iter().zip(row.as_array().unwrap()) {
                match value {
                    Value::Number(x) => assert_eq!(cell.parse::<f64>().unwrap(), x.as_f64().unwrap()),
                    Value::Bool(b) => assert_eq!(cell, b.to_string()),
                    Value::String(s) => assert_eq!(cell, s),
                    Value::Null => assert_eq!(cell, ""),
                    other => panic!("unexpected cell {other}"),
                }
            }
            n += 1;
        }
        assert_eq!(n, rows.len());
        assert!(n > 0);
    }
}
