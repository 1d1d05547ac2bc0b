use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn cubecx(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_cubecx")).args(args).output().unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap()
}

#[test]
fn validate_exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = cubecx(&["generate", "cube", "3"]);
    assert!(q3.status.success());
    let q3 = write(dir.path(), "q3.json", std::str::from_utf8(&q3.stdout).unwrap());
    let ok = cubecx(&["validate", &q3]);
    assert_eq!(ok.status.code(), Some(0));
    assert_eq!(json(&ok)["hyperplane_count"], 3);

    let k3 = write(dir.path(), "k3.json", r#"{"vertices": 3, "edges": [[0, 1], [1, 2], [0, 2]]}"#);
    let bad = cubecx(&["validate", &k3]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["witness"]["triple"], serde_json::json!([0, 1, 2]));
    let bad = cubecx(&["analyze", &k3]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(json(&bad)["error"], "not_median");

    assert_eq!(cubecx(&["validate"]).status.code(), Some(2));
    assert_eq!(cubecx(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(cubecx(&["dist", &q3, "0", "99"]).status.code(), Some(1));
}

#[test]
fn generation_is_deterministic() {
    let a = cubecx(&["generate", "random-wallspace", "12", "8", "--seed", "42"]);
    let b = cubecx(&["generate", "random-wallspace", "12", "8", "--seed", "42"]);
    let c = cubecx(&["generate", "random-wallspace", "12", "8", "--seed", "43"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(json(&a)["walls"].as_array().unwrap().len(), 8);
    let too_big = cubecx(&["generate", "cube", "17"]);
    assert_eq!(too_big.status.code(), Some(1));
}

#[test]
fn dot_and_analyze() {
    let dir = tempfile::tempdir().unwrap();
    let q3 = write(
        dir.path(),
        "q3.json",
        std::str::from_utf8(&cubecx(&["generate", "cube", "3"]).stdout).unwrap(),
    );
    let d = cubecx(&["dot", &q3]);
    let text = String::from_utf8(d.stdout).unwrap();
    assert_eq!(text.matches(" -- ").count(), 12);
    assert_eq!(cubecx(&["dot", &q3]).stdout, text.as_bytes());
    let empty = cubecx(&["dot", &q3, "--select"]);
    assert_eq!(String::from_utf8(empty.stdout).unwrap(), "graph cube {\n}\n");

    let a = cubecx(&["analyze", &q3]);
    assert!(a.status.success());
    let v = json(&a);
    assert_eq!(v["hyperplanes"].as_array().unwrap().len(), 3);
    assert_eq!(v["decomposition"]["classes"].as_array().unwrap().len(), 3);
    assert_eq!(v["qi"]["clean"], true);
    assert_eq!(cubecx(&["analyze", &q3, "--format", "dot"]).status.code(), Some(2));
}

#[test]
fn coset_tree_file_doubles_as_action() {
    let dir = tempfile::tempdir().unwrap();
    let t = cubecx(&["generate", "coset-tree", "3"]);
    let t = write(dir.path(), "tree.json", std::str::from_utf8(&t.stdout).unwrap());
    let a = cubecx(&["action", &t, &t, "--points", "7", "0"]);
    assert!(a.status.success(), "{}", String::from_utf8_lossy(&a.stdout));
    let v = json(&a);
    assert_eq!(v["group_order"], 8);
    assert_eq!(v["linkage"]["subgroup_failures"], 0);
}

#[test]
fn partial_action_certificate() {
    let dir = tempfile::tempdir().unwrap();
    let p9 = write(
        dir.path(),
        "p9.json",
        std::str::from_utf8(&cubecx(&["generate", "path", "9"]).stdout).unwrap(),
    );
    let shift = write(
        dir.path(),
        "shift.json",
        r#"{"domain": [0, 1, 2, 3, 4, 5, 6, 7], "map": [1, 2, 3, 4, 5, 6, 7, 8]}"#,
    );
    let a = cubecx(&["action", &p9, &shift]);
    assert!(a.status.success());
    let v = json(&a);
    assert_eq!(v["wpd"]["outcome"], "certificate");
    assert_eq!(v["wpd"]["certificate"]["l"], 0);
    let not_auto = write(dir.path(), "bad.json", r#"{"map": [0, 2, 1, 3, 4, 5, 6, 7, 8]}"#);
    let b = cubecx(&["action", &p9, &not_auto]);
    assert_eq!(b.status.code(), Some(1));
    assert_eq!(json(&b)["witness"]["edge"], serde_json::json!([0, 1]));
}

#[test]
fn small_suite_run() {
    let o = cubecx(&["suite", "--criteria", "1,3,10", "--wallspaces", "5", "--samples", "100", "--format", "text"]);
    assert!(o.status.success());
    let text = String::from_utf8(o.stdout).unwrap();
    assert_eq!(text.lines().filter(|l| l.contains("PASS")).count(), 3);
}
