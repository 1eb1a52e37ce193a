//! End-to-end runs of the `heckex` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::{json, Value};

const S3: &str = r#"{"type":"perm","degree":3,"generators":[[2,1,3],[1,3,2]],"gamma":[[2,1,3]]}"#;
const BS: &str = r#"{"type":"bs","m":2}"#;

fn heckex(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_heckex")).args(args).output().expect("binary runs")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("heckex-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

fn stdout_json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| {
        panic!("bad JSON ({e}): {}\nstderr: {}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr))
    })
}

#[test]
fn check_all_is_deterministic_across_thread_counts() {
    let run = |threads: &str| {
        Command::new(env!("CARGO_BIN_EXE_heckex"))
            .args(["--pair", S3, "--seed", "7", "--samples", "10", "check", "all"])
            .env("HECKEX_THREADS", threads)
            .output()
            .unwrap()
    };
    let (a, b) = (run("1"), run("4"));
    assert_eq!(a.status.code(), Some(0), "{}", String::from_utf8_lossy(&a.stdout));
    assert_eq!(b.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    let v = stdout_json(&a);
    assert_eq!(v["passed"], json!(true));
    assert_eq!(v["seed"], json!(7));
    assert!(v["suites"].as_array().unwrap().len() > 5);
}

#[test]
fn malformed_spec_reports_line_and_column() {
    let bad = scratch("bad.json", "{\"type\":\"perm\",\n\"degree\": 3,\n\"generators\": [[2,1,3]\n");
    let out = heckex(&["--pair", bad.to_str().unwrap(), "pair", "info"]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("bad.json:4:"), "{err}");
}

#[test]
fn semantic_spec_error_names_the_field() {
    let out = heckex(&["--pair", r#"{"type":"perm","degree":3,"generators":[[2,1]],"gamma":[]}"#, "pair", "info"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/generators/0"));
}

#[test]
fn graded_bundle_over_bs_is_rejected() {
    let out = heckex(&["--pair", BS, "--bundle", r#"{"kind":"graded","preset":"scalars"}"#, "check", "all"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bs_pair_info_reports_modular_function() {
    let out = heckex(&["--pair", BS, "pair", "info", "--elem", r#"{"t":"0","k":1}"#]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let e = v["elements"]
        .as_array()
        .unwrap()
        .iter()
        .find(|e| e["g"] == json!({"t": "0", "k": 1}))
        .expect("requested element reported");
    assert_eq!(e["delta"], json!("2"));
    assert_eq!(e["left_count"], json!("2"));
    assert_eq!(e["right_count"], json!("1"));
    assert_eq!(e["gamma_index"], json!("2"));
}

#[test]
fn hecke_square_of_transposition_class() {
    let t = r#"[{"dcoset":[3,2,1],"value":"1"}]"#;
    let out = heckex(&["--pair", S3, "hecke", "mul", t, t]);
    assert_eq!(out.status.code(), Some(0));
    let v = stdout_json(&out);
    let terms = v.as_array().unwrap();
    assert_eq!(terms.len(), 2);
    assert_eq!(terms[0]["dcoset"], json!([1, 2, 3]));
    assert_eq!(terms[0]["value"][0]["re"], json!("2"));
    assert_eq!(terms[1]["value"][0]["re"], json!("1"));
}

#[test]
fn corrupted_covariant_pair_fails() {
    let good = heckex(&["--pair", S3, "rep", "covcheck"]);
    assert_eq!(good.status.code(), Some(0), "{}", String::from_utf8_lossy(&good.stdout));
    let bad = heckex(&["--pair", S3, "rep", "covcheck", "--corrupt"]);
    assert_eq!(bad.status.code(), Some(1));
}

#[test]
fn crossed_star_round_trips_through_json() {
    let f = r#"[{"dcoset":[1,3,2],"section":{"terms":[{"arrow":[2,3,1],"value":["2","-1"]}]}}]"#;
    // The value has two entries only if the fiber is two-dimensional; the line bundle needs one.
    let bad = heckex(&["--pair", S3, "xp", "star", f]);
    assert_eq!(bad.status.code(), Some(2));
    let f = r#"[{"dcoset":[1,3,2],"section":{"terms":[{"arrow":[2,3,1],"value":["3"]}]}},
               {"dcoset":[1,2,3],"section":{"terms":[{"arrow":[1,2,3],"value":["1"]}]}}]"#;
    let once = heckex(&["--pair", S3, "xp", "star", f]);
    assert_eq!(once.status.code(), Some(0), "{}", String::from_utf8_lossy(&once.stderr));
    let path = scratch("star.json", std::str::from_utf8(&once.stdout).unwrap());
    let twice = heckex(&["--pair", S3, "xp", "star", path.to_str().unwrap()]);
    assert_eq!(twice.status.code(), Some(0));
    // f·1 normalizes f into the same canonical form as the double star.
    let original = heckex(&["--pair", S3, "xp", "mul", f, &unit_json()]);
    assert_eq!(original.status.code(), Some(0));
    assert_eq!(stdout_json(&twice), stdout_json(&original));
}

/// The unit of the crossed product on the S₃ line bundle. Pushing 1/2 at both points of each
/// Γ-orbit gives the value 1 on every orbit.
fn unit_json() -> String {
    let points = ["[1,2,3]", "[2,1,3]", "[1,3,2]", "[3,2,1]", "[2,3,1]", "[3,1,2]"];
    let terms: Vec<String> = points.iter().map(|x| format!(r#"{{"arrow":{x},"value":["1/2"]}}"#)).collect();
    format!(r#"[{{"dcoset":[1,2,3],"section":{{"terms":[{}]}}}}]"#, terms.join(","))
}
