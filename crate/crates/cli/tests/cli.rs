use std::fs;
use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fiberlrc")).args(args).output().expect("binary runs")
}

fn stdout(args: &[&str]) -> String {
    let out = run(args);
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    String::from_utf8(out.stdout).unwrap()
}

fn json(args: &[&str]) -> Value {
    let mut a = args.to_vec();
    a.extend(["--format", "json"]);
    serde_json::from_str(&stdout(&a)).unwrap()
}

#[test]
fn exit_codes() {
    assert_eq!(run(&["build", "as", "--p", "3", "--h", "2", "--t", "2", "--l", "80"]).status.code(), Some(2));
    assert_eq!(run(&["table", "9"]).status.code(), Some(2));
    assert_eq!(run(&["build", "thc", "--p", "4"]).status.code(), Some(2));
    assert_eq!(run(&["nonsense"]).status.code(), Some(2));
    // far beyond what can be enumerated
    assert_eq!(run(&["curve", "hermitian_lrc2", "--p", "7", "--h", "4"]).status.code(), Some(3));
    assert_eq!(
        run(&["recover", "thc", "--p", "2", "--h", "2", "--input", "/nonexistent/w.csv"]).status.code(),
        Some(1)
    );
}

#[test]
fn table_output() {
    let csv = stdout(&["table", "1", "--format", "csv"]);
    let mut lines = csv.lines();
    assert!(lines.next().unwrap().starts_with("q2,r1,r2,n,k,d,bt_bound,rel_defect"));
    assert!(lines.next().unwrap().starts_with("4,1,2,6,2,4,4,"));
    assert_eq!(csv.lines().count(), 17);

    let v = json(&["table", "thc"]);
    let rows = v.as_array().unwrap();
    assert_eq!(rows.len(), 16);
    assert_eq!(rows[4]["k"], 60);
    assert_eq!(rows[4]["d"], 62);
}

#[test]
fn deterministic_output() {
    let args = ["recover", "as", "--p", "3", "--h", "2", "--t", "2", "--erase", "4", "--seed", "7", "--format", "json"];
    assert_eq!(run(&args).stdout, run(&args).stdout);
    let other =
        ["recover", "as", "--p", "3", "--h", "2", "--t", "2", "--erase", "4", "--seed", "8", "--format", "json"];
    assert_ne!(run(&args).stdout, run(&other).stdout);
    assert_eq!(run(&["figure-data", "--p", "3"]).stdout, run(&["figure-data", "--p", "3", "--jobs", "1"]).stdout);
}

#[test]
fn build_artifacts() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let meta = json(&["build", "thc", "--p", "2", "--h", "2", "--l", "4", "--out", out]);
    assert_eq!((meta["n"].as_u64(), meta["k"].as_u64(), meta["d_lower"].as_i64()), (Some(240), Some(60), Some(62)));

    let file: Value = serde_json::from_str(&fs::read_to_string(dir.path().join("metadata.json")).unwrap()).unwrap();
    assert_eq!(file, meta);
    let gen = fs::read_to_string(dir.path().join("generator.csv")).unwrap();
    assert_eq!(gen.lines().count(), 61);
    assert!(gen.lines().skip(1).all(|l| l.split(',').count() == 240));
    let eval = fs::read_to_string(dir.path().join("evaluation_set.csv")).unwrap();
    assert_eq!(eval.lines().next().unwrap(), "position,y0,y1,y2");
    assert_eq!(eval.lines().count(), 241);
    let idx = fs::read_to_string(dir.path().join("recovery_index.csv")).unwrap();
    assert_eq!(idx.lines().count(), 1 + 240 * 2);
    let first: Vec<&str> = idx.lines().nth(1).unwrap().split(',').collect();
    assert_eq!(first[..2], ["0", "1"]);
    assert_eq!(first[2].split(' ').count(), 4);
}

#[test]
fn recover_demo_and_file() {
    let v = json(&["recover", "as", "--p", "3", "--h", "2", "--t", "2", "--erase", "1"]);
    assert_eq!(v["success"], true);
    assert_eq!(v["erased"].as_array().unwrap().len(), 1);

    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&["recover", "thc", "--p", "2", "--h", "2", "--l", "2", "--erase", "5", "--seed", "3", "--out", out]);
    assert_eq!(v["success"], true);
    let received = dir.path().join("received.csv");
    let recovered = fs::read_to_string(dir.path().join("recovered.csv")).unwrap();
    assert_eq!(fs::read_to_string(&received).unwrap().matches('?').count(), 5);
    assert!(!recovered.contains('?'));

    // the received word fed back through --input gives the same repair
    let again = stdout(&[
        "recover",
        "thc",
        "--p",
        "2",
        "--h",
        "2",
        "--l",
        "2",
        "--input",
        received.to_str().unwrap(),
        "--format",
        "csv",
    ]);
    assert_eq!(again, recovered);
}

#[test]
fn recover_rejects_bad_input() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("w.csv");
    fs::write(&path, "position,symbol\n0,1\n0,2\n").unwrap();
    let out = run(&["recover", "thc", "--p", "3", "--input", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn certify_x4_is_an_interval() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().to_str().unwrap();
    let v = json(&["certify", "thc", "--p", "2", "--h", "2", "--l", "4", "--out", out]);
    assert_eq!(v["status"], "interval");
    assert_eq!((v["lower"].as_u64(), v["upper"].as_u64()), (Some(62), Some(72)));
    assert_eq!(v["witness_verified"], false);

    let w = dir.path().join("witness.json");
    let check = json(&["certify", "thc", "--p", "2", "--h", "2", "--l", "4", "--witness", w.to_str().unwrap()]);
    assert_eq!(check["valid"], false);
    assert_eq!(check["weight"], 72);
}

#[test]
fn certify_small_exact() {
    let v = json(&["certify", "hermitian_rational", "--p", "2", "--h", "1"]);
    assert_eq!(v["status"], "exact");
}

#[test]
fn field_and_bounds() {
    let v = json(&["field", "--p", "2", "--degree", "4", "--op", "inv", "--a", "2", "--modulus", "1,1,1,1,1"]);
    assert_eq!(v["result"]["enc"], 15);
    let v = json(&["field", "--p", "3", "--degree", "4", "--preimage", "artin-schreier", "--target", "0"]);
    assert_eq!(v["preimage_size"], 3);

    let v = json(&["bounds", "--n", "240", "--k", "48", "--localities", "3,4"]);
    assert_eq!(v["bhadane_thangaraj"], 175);
    let v = json(&["bounds", "--family", "hermitian_lrc2", "--p", "2", "--h", "2"]);
    assert_eq!((v["n"].as_u64(), v["d"].as_i64(), v["bhadane_thangaraj"].as_i64()), (Some(60), Some(38), Some(46)));
}
