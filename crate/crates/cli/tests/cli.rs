use std::fs;
use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

fn zcover(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_zcover"))
        .args(args)
        .env_remove("ZCOVER_THREADS")
        .output()
        .expect("binary runs")
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("json output")
}

fn write_matrix(dir: &tempfile::TempDir, name: &str, text: &str) -> String {
    let path = dir.path().join(name);
    fs::write(&path, text).unwrap();
    path.to_str().unwrap().to_string()
}

#[test]
fn construct_prints_matrix_and_metadata() {
    let v = json(&zcover(&["construct", "simplex-alpha", "k=1"]));
    assert_eq!(v["matrix"], "2 4\n0 1 2 3\n");
    assert_eq!(v["metadata"]["audited_parameters"]["status"], "verified");

    let out = zcover(&["--format", "table", "construct", "simplex-alpha", "k=1"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "2 4\n0 1 2 3\n");
}

#[test]
fn construct_writes_files() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m21.txt");
    let out = zcover(&["construct", "macdonald-alpha", "k=2", "u=1", "--out", path.to_str().unwrap()]);
    assert!(out.status.success());
    let matrix = fs::read_to_string(&path).unwrap();
    assert!(matrix.starts_with("2 12\n"), "{matrix}");
    let meta: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("m21.txt.json")).unwrap()).unwrap();
    assert_eq!(meta["deleted_columns"].as_array().unwrap().len(), 4);
}

#[test]
fn construct_rejects_bad_parameters() {
    assert_eq!(zcover(&["construct", "repetition-beta", "n=0"]).status.code(), Some(2));
    assert_eq!(zcover(&["construct", "no-such-family", "n=1"]).status.code(), Some(2));
    assert_eq!(zcover(&["construct", "repetition-beta", "n"]).status.code(), Some(2));
}

#[test]
fn radius_of_files_and_stdin() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_matrix(&dir, "rep.txt", "2 3\n2 2 2\n");
    let v = json(&zcover(&["radius", &rep, "--metric", "euclidean"]));
    assert_eq!(v["value"], 5);
    assert_eq!(v["witness"], "0 1 2");

    let zero = write_matrix(&dir, "zero.txt", "2 1\n");
    assert_eq!(json(&zcover(&["radius", &zero]))["value"], 2);

    let mut child = Command::new(env!("CARGO_BIN_EXE_zcover"))
        .args(["radius", "-", "--method", "syndrome"])
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(b"2 4\n1 1 1 1\n").unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(json(&out)["value"], 4);
}

#[test]
fn radius_of_simplex_beta() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("sb2.txt");
    assert!(zcover(&["construct", "simplex-beta", "k=2", "--out", path.to_str().unwrap()]).status.success());
    let v = json(&zcover(&["radius", path.to_str().unwrap(), "--metric", "lee", "--threads", "2"]));
    assert_eq!(v["value"], 5);
}

#[test]
fn bfs_cap_and_budget() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_matrix(&dir, "rep6.txt", "2 6\n1 1 1 1 1 1\n");
    let v = json(&zcover(&["radius", &rep, "--method", "bfs", "--r-cap", "2"]));
    assert!(v["value"].is_null());
    assert_eq!(v["interval"][0], 3);

    // an exhausted budget falls back to the bound interval
    let v = json(&zcover(&["radius", &rep, "--method", "direct", "--budget", "10"]));
    assert_eq!(v["method"], "bound_only");
    assert_eq!(v["interval"], serde_json::json!([5, 6]));
}

#[test]
fn bounds_report() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_matrix(&dir, "rep.txt", "2 3\n2 2 2\n");
    let v = json(&zcover(&["bounds", &rep]));
    assert_eq!(v["sphere_covering_lb"], 3);
    assert_eq!(v["delsarte_ub"], 3);

    let sb = write_matrix(&dir, "stack.txt", "2 4\n0 0 1 2\n1 3 0 3\n");
    let v = json(&zcover(&["bounds", &sb, "--metric", "lee", "--mattson", "1:2"]));
    let m = &v["mattson_ub"];
    assert_eq!(m["value"], m["c0_radius"].as_u64().unwrap() + m["c1_radius"].as_u64().unwrap());
}

#[test]
fn gray_image() {
    let dir = tempfile::tempdir().unwrap();
    let rep = write_matrix(&dir, "rep.txt", "2 3\n2 2 2\n");
    let v = json(&zcover(&["gray", &rep, "--radius"]));
    assert_eq!(v["length"], 6);
    assert_eq!(v["words"], serde_json::json!(["0 0 0 0 0 0", "1 1 1 1 1 1"]));
    assert_eq!(v["lee_radius"]["value"], v["hamming_radius_of_image"]["value"]);

    let z8 = write_matrix(&dir, "z8.txt", "3 2\n1 3\n");
    assert_eq!(zcover(&["gray", &z8]).status.code(), Some(2));
}

#[test]
fn verify_exit_codes() {
    let v = json(&zcover(&["verify", "--list"]));
    assert_eq!(v.as_array().unwrap().len(), 27);

    let out = zcover(&["verify", "rep-lee-alpha", "dual-beta-lee"]);
    let rows = json(&out);
    assert!(rows.as_array().unwrap().iter().all(|r| r["status"] == "MATCH"));

    // known discrepancies are listed in the errata and do not fail the run
    let out = zcover(&["--format", "table", "verify", "rep-euclid-alpha"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8(out.stdout).unwrap().contains("FLAGGED"));

    assert_eq!(zcover(&["verify", "no-such-check"]).status.code(), Some(2));
    assert_eq!(zcover(&["--format", "xml", "verify"]).status.code(), Some(2));
}
