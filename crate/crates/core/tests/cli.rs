use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn thom(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_thom")).args(args).env_remove("THOM_CORPUS_DIR").output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn scratch(name: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("thom-cli-{}-{name}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    dir
}

#[test]
fn finite_complexes_exit_zero() {
    let o = thom(&["homology", "klein_bottle"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H0=Z, H1=Z + Z/2, H2=0\n");
}

#[test]
fn json_reports_are_byte_identical_across_runs() {
    for args in [
        &["steenrod", "solenoid_6", "--format", "json"][..],
        &["cech", "solenoid_3", "--format", "json"],
        &["verify", "duality", "--trials", "30", "--seed", "5", "--format", "json"],
    ] {
        let (a, b) = (thom(args), thom(args));
        assert_eq!(a.status.code(), Some(0), "{args:?}");
        assert_eq!(a.stdout, b.stdout, "{args:?}");
        let v: Value = serde_json::from_slice(&a.stdout).unwrap();
        assert!(v.get("timing").is_none());
    }
}

#[test]
fn schema_errors_exit_two() {
    let dir = scratch("schema");
    let bad = dir.join("bad.json");
    std::fs::write(&bad, r#"{"kind": "complex", "name": "x", "cells": [{"id": "v", "dim": 0, "colour": 1}]}"#).unwrap();
    assert_eq!(thom(&["homology", bad.to_str().unwrap()]).status.code(), Some(2));
    let num = dir.join("num.json");
    std::fs::write(&num, r#"{"kind": "complex", "name": "x", "cells": [{"id": "v", "dim": 0}, {"id": "e", "dim": 1, "boundary": [["v", 1]]}]}"#).unwrap();
    assert_eq!(thom(&["homology", num.to_str().unwrap()]).status.code(), Some(2));
    assert_eq!(thom(&["homology", "--degree", "x", "torus"]).status.code(), Some(2));
}

#[test]
fn validation_errors_exit_three_and_name_cells() {
    let dir = scratch("validation");
    let bad = dir.join("dd.json");
    std::fs::write(
        &bad,
        r#"{"kind": "complex", "name": "dd", "cells": [
            {"id": "v", "dim": 0}, {"id": "w", "dim": 0},
            {"id": "e", "dim": 1, "boundary": [["w", "1"], ["v", "-1"]]},
            {"id": "f", "dim": 2, "boundary": [["e", "1"]]}
        ]}"#,
    )
    .unwrap();
    let o = thom(&["homology", bad.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(3));
    assert!(String::from_utf8_lossy(&o.stderr).contains('f'));
}

#[test]
fn unsupported_bondings_exit_four() {
    let o = thom(&["steenrod", "hyperbolic_wedge", "--format", "json"]);
    assert_eq!(o.status.code(), Some(4));
}

#[test]
fn corpus_directory_override() {
    let dir = scratch("corpus");
    std::fs::write(
        dir.join("mine.json"),
        r#"[{"kind": "complex", "name": "two_points", "cells": [{"id": "a", "dim": 0}, {"id": "b", "dim": 0}]}]"#,
    )
    .unwrap();
    let o = Command::new(env!("CARGO_BIN_EXE_thom")).args(["homology", "two_points"]).env("THOM_CORPUS_DIR", &dir).output().unwrap();
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o), "H0=Z^2\n");
    // the bundled corpus is not consulted
    let o = Command::new(env!("CARGO_BIN_EXE_thom")).args(["homology", "torus"]).env("THOM_CORPUS_DIR", &dir).output().unwrap();
    assert_eq!(o.status.code(), Some(2));
}

#[test]
fn named_documents_inside_a_file() {
    let path = concat!(env!("CARGO_MANIFEST_DIR"), "/corpus/towers.json#solenoid_2");
    let o = thom(&["cech", path, "--degree", "1"]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("H^1=Z[1/2]"));
}
