use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn sculpt(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_sculpt"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn s(p: &Path) -> &str {
    p.to_str().unwrap()
}

const SQUARE: &str = r#"{"outer": [[0, 0], [4, 0], [4, 4], [0, 4]]}"#;
const TRIANGLE: &str = r#"{"outer": [[0, 0], [4, 0], [1, 3]]}"#;

#[test]
fn place_verify_certify_square() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "sq.json", SQUARE);
    let guards = dir.path().join("g.json");
    let out = sculpt(&["place", "-s", "convex", "-i", s(&poly), "-o", s(&guards)]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stderr));
    let pl: Value = serde_json::from_str(&std::fs::read_to_string(&guards).unwrap()).unwrap();
    assert_eq!(pl["guards"].as_array().unwrap().len(), 2);

    let out = sculpt(&["verify", "-p", s(&poly), "-g", s(&guards)]);
    assert_eq!(out.status.code(), Some(0));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "ok");
    assert_eq!(report["guard_count"], 2);

    let out = sculpt(&["certify", "-p", s(&poly), "-g", s(&guards), "--point", "1,1"]);
    assert_eq!(out.status.code(), Some(0));
    let cert: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert!(cert.is_array());
    let out = sculpt(&["certify", "-p", s(&poly), "-g", s(&guards), "--point", "-1,1/2"]);
    assert_eq!(String::from_utf8_lossy(&out.stdout).trim(), "\"outside\"");
}

#[test]
fn dropped_guard_fails_verification() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "sq.json", SQUARE);
    let out = sculpt(&["place", "-s", "convex", "-i", s(&poly)]);
    let mut pl: Value = serde_json::from_slice(&out.stdout).unwrap();
    let first = pl["guards"][0]["label"].as_str().unwrap().to_string();
    pl["guards"].as_array_mut().unwrap().remove(0);
    pl["formula"] = Value::String(pl["guards"][0]["label"].as_str().unwrap().to_string());
    assert_ne!(first, pl["formula"]);
    let guards = write(dir.path(), "g.json", &pl.to_string());
    let out = sculpt(&["verify", "-p", s(&poly), "-g", s(&guards)]);
    assert_eq!(out.status.code(), Some(1));
    let report: Value = serde_json::from_slice(&out.stdout).unwrap();
    assert_eq!(report["status"], "counterexample");
    let w = sculpt(&["witness", "-p", s(&poly), "-g", s(&guards)]);
    let w: Value = serde_json::from_slice(&w.stdout).unwrap();
    assert!(w["p_in"].is_array() && w["q_out"].is_array());
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    let tri = write(dir.path(), "tri.json", TRIANGLE);
    let out = sculpt(&["place", "-s", "orthogonal", "-i", s(&tri)]);
    assert_eq!(out.status.code(), Some(2));
    let out = sculpt(&["place", "-s", "nonsense", "-i", s(&tri)]);
    assert_eq!(out.status.code(), Some(3));
    let bad = write(dir.path(), "bad.json", r#"{"outer": [[0, 0], [1, 1], [1, 0], [0, 1]]}"#);
    assert_eq!(
        sculpt(&["place", "-s", "general", "-i", s(&bad)]).status.code(),
        Some(3)
    );

    let out = sculpt(&["place", "-s", "general", "-i", s(&tri)]);
    let mut pl: Value = serde_json::from_slice(&out.stdout).unwrap();
    pl["formula"] = Value::String("(v0 & zz)".into());
    let guards = write(dir.path(), "g.json", &pl.to_string());
    assert_eq!(
        sculpt(&["verify", "-p", s(&tri), "-g", s(&guards)]).status.code(),
        Some(3)
    );
    assert_eq!(sculpt(&["frobnicate"]).status.code(), Some(3));
}

#[test]
fn counterexample_has_witness() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("pent.json");
    let guards = dir.path().join("g.json");
    let out = sculpt(&["gen", "counterexample", "-o", s(&poly), "--placement", s(&guards)]);
    assert_eq!(out.status.code(), Some(0));
    let w = sculpt(&["witness", "-p", s(&poly), "-g", s(&guards)]);
    assert_eq!(w.status.code(), Some(0));
    let w: Value = serde_json::from_slice(&w.stdout).unwrap();
    assert!(w["p_in"].is_array());
    assert_eq!(
        sculpt(&["verify", "-p", s(&poly), "-g", s(&guards)]).status.code(),
        Some(1)
    );
}

#[test]
fn zigzag_and_random() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("z.json");
    let guards = dir.path().join("zg.json");
    let out = sculpt(&["gen", "zigzag", "--k", "1", "-o", s(&poly), "--placement", s(&guards)]);
    assert_eq!(out.status.code(), Some(0));
    let pl: Value = serde_json::from_str(&std::fs::read_to_string(&guards).unwrap()).unwrap();
    assert_eq!(pl["guards"].as_array().unwrap().len(), 16);
    assert_eq!(
        sculpt(&["verify", "-p", s(&poly), "-g", s(&guards)]).status.code(),
        Some(0)
    );

    let a = sculpt(&["gen", "random", "--kind", "orthogonal", "--n", "12", "--seed", "5"]);
    let b = sculpt(&["gen", "random", "--kind", "orthogonal", "--n", "12", "--seed", "5"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert_eq!(
        sculpt(&["gen", "random", "--kind", "orthogonal", "--n", "7"])
            .status
            .code(),
        Some(2)
    );
}

#[test]
fn line_cap_is_enforced() {
    let dir = tempfile::tempdir().unwrap();
    let poly = dir.path().join("z.json");
    let guards = dir.path().join("zg.json");
    sculpt(&["gen", "zigzag", "--k", "1", "-o", s(&poly), "--placement", s(&guards)]);
    let out = Command::new(env!("CARGO_BIN_EXE_sculpt"))
        .args(["verify", "-p", s(&poly), "-g", s(&guards)])
        .env("SCULPT_MAX_LINES", "3")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn render_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let poly = write(dir.path(), "sq.json", SQUARE);
    let guards = dir.path().join("g.json");
    sculpt(&["place", "-s", "general", "-i", s(&poly), "-o", s(&guards)]);
    let a = sculpt(&["render", "-p", s(&poly), "-g", s(&guards)]);
    let b = sculpt(&["render", "-p", s(&poly), "-g", s(&guards)]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
    assert!(String::from_utf8_lossy(&a.stdout).starts_with("<svg"));
}
