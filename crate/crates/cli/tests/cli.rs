//! End-to-end checks of the command-line surface.

use std::path::PathBuf;
use std::process::Command;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_logicnet"))
}

fn kb(name: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../kb").join(name)
}

fn tmp(name: &str) -> PathBuf {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR"));
    std::fs::create_dir_all(&dir).unwrap();
    dir.join(name)
}

#[test]
fn infer_answers_query_true() {
    let out = bin()
        .args(["infer", kb("modus_ponens.kb").to_str().unwrap(), "--query", "q1"])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(doc["converged"], serde_json::json!(true));
    let answers = &doc["queries"][0]["answers"][0];
    assert_eq!(answers["lower"], serde_json::json!(1.0));
    assert_eq!(answers["upper"], serde_json::json!(1.0));
    assert_eq!(answers["state"], serde_json::json!("True"));
}

#[test]
fn identical_invocations_are_byte_identical() {
    let run = || {
        bin()
            .args([
                "infer",
                kb("smokers5.kb").to_str().unwrap(),
                "--semantics",
                "lukasiewicz",
                "--alpha",
                "1",
            ])
            .output()
            .expect("runs")
            .stdout
    };
    assert_eq!(run(), run());
    let train = || {
        bin()
            .args([
                "train",
                kb("smokers5.kb").to_str().unwrap(),
                "--epochs",
                "5",
                "--seed",
                "7",
            ])
            .output()
            .expect("runs")
            .stdout
    };
    assert_eq!(train(), train());
}

#[test]
fn parse_errors_exit_2() {
    let bad = tmp("bad.kb");
    std::fs::write(&bad, "pred S/1\naxiom broken : S(x | \n").unwrap();
    let out = bin().args(["infer", bad.to_str().unwrap()]).output().expect("runs");
    assert_eq!(out.status.code(), Some(2));
    let msg = String::from_utf8_lossy(&out.stderr);
    assert!(msg.contains("line 2"), "error carries a position: {}", msg);
}

#[test]
fn strict_nonconvergence_exits_3() {
    let out = bin()
        .args([
            "infer",
            kb("smokers8.kb").to_str().unwrap(),
            "--max-iters",
            "1",
            "--strict",
        ])
        .output()
        .expect("runs");
    assert_eq!(out.status.code(), Some(3));
}

#[test]
fn unknown_semantics_fails() {
    let out = bin()
        .args(["infer", kb("modus_ponens.kb").to_str().unwrap(), "--semantics", "zadeh"])
        .output()
        .expect("runs");
    assert!(!out.status.success());
}

#[test]
fn semantics_env_default_applies() {
    let out = bin()
        .args(["infer", kb("modus_ponens.kb").to_str().unwrap()])
        .env("LOGICNET_SEMANTICS", "probability")
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert_eq!(doc["semantics"], serde_json::json!("probability"));
}

#[test]
fn train_reports_and_checkpoints() {
    let report = tmp("train.json");
    let ckpt = tmp("ckpt.json");
    let out = bin()
        .args([
            "train",
            kb("smokers5.kb").to_str().unwrap(),
            "--epochs",
            "10",
            "--out",
            report.to_str().unwrap(),
            "--checkpoint",
            ckpt.to_str().unwrap(),
        ])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&report).unwrap()).unwrap();
    assert_eq!(doc["epochs"].as_array().unwrap().len(), 10);
    let ckpt: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&ckpt).unwrap()).unwrap();
    assert_eq!(ckpt["format"], serde_json::json!("logicnet-checkpoint"));
    assert_eq!(ckpt["version"], serde_json::json!(1));
    assert!(!ckpt["axiom_bounds"].as_array().unwrap().is_empty());
}

#[test]
fn check_reports_constraint_margins() {
    let out = bin()
        .args(["check", kb("smokers5.kb").to_str().unwrap(), "--alpha", "0.8"])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value = serde_json::from_slice(&out.stdout).expect("json");
    assert!(doc["checks"].as_array().unwrap().len() > 0);
}

#[test]
fn graph_dump_and_csv_exports() {
    let dump = tmp("graph.json");
    let csv = tmp("tables.csv");
    let out = bin()
        .args([
            "infer",
            kb("university.kb").to_str().unwrap(),
            "--dump-graph",
            dump.to_str().unwrap(),
            "--csv-out",
            csv.to_str().unwrap(),
        ])
        .output()
        .expect("runs");
    assert!(out.status.success());
    let doc: serde_json::Value =
        serde_json::from_str(&std::fs::read_to_string(&dump).unwrap()).unwrap();
    assert!(doc["nodes"].as_array().unwrap().len() > 10);
    let csv = std::fs::read_to_string(&csv).unwrap();
    assert!(csv.contains("# Person"));
    assert!(csv.lines().any(|l| l.starts_with("alice,1,1")));
}
