use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut cmd = Command::new(env!("CARGO_BIN_EXE_treebound"));
    cmd.env_remove("TREEBOUND_WORK_CAP");
    cmd
}

fn run(dir: &Path, args: &[&str]) -> Output {
    bin().current_dir(dir).args(args).output().unwrap()
}

fn json(out: &Output) -> Value {
    assert!(out.status.success(), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> PathBuf {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p
}

fn k4(dir: &Path) {
    write(dir, "k4.txt", "4 6\n0 1\n0 2\n0 3\n1 2\n1 3\n2 3\n");
    write(dir, "p2.txt", "3 2\n1 2\n2 3\n");
    write(dir, "p3.txt", "4 3\n1 2\n2 3\n3 4\n");
}

#[test]
fn count_k4_p2_from_files() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let v = json(&run(dir.path(), &["count", "--graph", "k4.txt", "--tree", "p2.txt"]));
    assert_eq!(v["payload"]["count"], "24");
    assert_eq!(v["schemaVersion"], 1);
    assert_eq!(v["command"][0], "count");
    let inputs = v["inputs"].as_array().unwrap();
    assert_eq!(inputs.len(), 2);
    assert_eq!(inputs[0]["sha256"].as_str().unwrap().len(), 64);
    assert!(v["elapsedMs"].is_number());
}

#[test]
fn payload_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let args = ["gtable", "--graph", "k4.txt", "--tree", "path:3", "--measure", "P", "--samples", "500", "--seed", "9"];
    let a = json(&run(dir.path(), &args));
    let b = json(&run(dir.path(), &args));
    assert_eq!(a["payload"], b["payload"]);
    assert_eq!(a["inputs"], b["inputs"]);
}

#[test]
fn bounds_thm1_is_ln_24() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let v = json(&run(dir.path(), &["bounds", "--graph", "k4.txt", "--t", "2"]));
    let thm1 = v["payload"]["thm1"]["log"].as_f64().unwrap();
    assert!((thm1 - 24f64.ln()).abs() < 1e-9);
    assert!(v["payload"]["p3Eq2"]["inapplicable"].is_string());
}

#[test]
fn verify_k4_p3_passes() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let out = run(dir.path(), &["verify", "--graph", "k4.txt", "--tree", "p3.txt"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["payload"]["allPass"], true);
    let checks = v["payload"]["checks"].as_array().unwrap();
    assert!(checks.iter().all(|c| c["status"] == "pass"), "{checks:?}");
}

#[test]
fn hom_walks_and_chain() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let dp = json(&run(dir.path(), &["hom", "--graph", "k4.txt", "--tree", "path:2"]));
    let brute = json(&run(dir.path(), &["hom", "--graph", "k4.txt", "--tree", "path:2", "--method", "brute"]));
    assert_eq!(dp["payload"]["count"], "36");
    assert_eq!(brute["payload"]["count"], "36");
    assert_eq!(brute["payload"]["method"], "brute");
    let w = json(&run(dir.path(), &["walks", "--graph", "k4.txt", "--length", "3"]));
    assert_eq!(w["payload"]["count"], "108");
    let c = json(&run(dir.path(), &["chain", "--graph", "k4.txt", "--tree", "path:3"]));
    assert_eq!(c["payload"]["omegaCount"], "24");
    assert_eq!(c["payload"]["totalPMeasure"], "1/1");
    let links = &c["payload"]["links"];
    assert_eq!(links["entropyGeProduct"], false);
    assert_eq!(links["omegaGeThm1"], true);
}

#[test]
fn exact_gtable_rationals() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let v = json(&run(dir.path(), &["gtable", "--graph", "k4.txt", "--tree", "star:3", "--measure", "Pprime", "--exact"]));
    let rows = v["payload"]["table"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert!(rows.iter().flat_map(|r| r.as_array().unwrap()).all(|x| x == "1/4"));
    assert_eq!(v["payload"]["minSlack"], "0/1");
}

#[test]
fn sample_and_gen() {
    let dir = tempfile::tempdir().unwrap();
    let g = json(&run(dir.path(), &["gen", "cliques", "3", "5", "-o", "c35.txt"]));
    assert_eq!(g["payload"]["n"], 15);
    assert_eq!(g["payload"]["edges"], 30);
    let c = json(&run(dir.path(), &["count", "--graph", "c35.txt", "--tree", "star:3"]));
    assert_eq!(c["payload"]["count"], "360");
    let s = json(&run(dir.path(), &["sample", "--graph", "c35.txt", "--tree", "path:3", "--samples", "5", "--seed", "2"]));
    let draws = s["payload"]["samples"].as_array().unwrap();
    assert_eq!(draws.len(), 5);
    assert!(draws.iter().all(|d| d["P"] == "1/360"));
}

#[test]
fn csv_output() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    let out = run(dir.path(), &["count", "--graph", "k4.txt", "--tree", "path:2", "--format", "csv"]);
    assert!(out.status.success());
    assert_eq!(String::from_utf8(out.stdout).unwrap(), "count,method\n24,enumeration\n");
    let out = run(dir.path(), &["conjecture", "--family", "cliques", "--n", "15", "--t", "3", "--min-degree", "4", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert!(text.starts_with("instance,tree,n,d,minDegree,t,count,"));
    assert!(text.contains("\"cliques:3,5\",path:3,15,4,4,3,360,"), "{text}");
}

#[test]
fn conjecture_and_sharpness() {
    let dir = tempfile::tempdir().unwrap();
    let v = json(&run(
        dir.path(),
        &["conjecture", "--family", "random", "--n", "9..10", "--t", "3", "--trials", "3", "--seed", "4", "--min-degree", "4"],
    ));
    assert_eq!(v["payload"]["rows"].as_array().unwrap().len(), 12);
    assert!(v["payload"]["minLogMargin"].is_number());
    let s = json(&run(dir.path(), &["sharpness", "--q", "5", "--c", "3", "--t", "3"]));
    assert_eq!(s["payload"]["ok"], true);
    assert_eq!(s["payload"]["expected"], "360");
}

#[test]
fn exit_codes() {
    let dir = tempfile::tempdir().unwrap();
    k4(dir.path());
    write(dir.path(), "cyc.txt", "3 3\n1 2\n2 3\n3 1\n");
    write(dir.path(), "bad.txt", "4 2\n0 1\n");
    let code = |args: &[&str]| run(dir.path(), args).status.code();
    assert_eq!(code(&["count", "--graph", "k4.txt"]), Some(2));
    assert_eq!(code(&["frobnicate"]), Some(2));
    assert_eq!(code(&["gtable", "--graph", "k4.txt", "--tree", "path:2", "--measure", "q"]), Some(2));
    assert_eq!(code(&["count", "--graph", "k4.txt", "--tree", "cyc.txt"]), Some(3));
    assert_eq!(code(&["count", "--graph", "bad.txt", "--tree", "path:2"]), Some(3));
    assert_eq!(code(&["count", "--graph", "missing.txt", "--tree", "path:2"]), Some(3));
    let capped = bin()
        .current_dir(dir.path())
        .env("TREEBOUND_WORK_CAP", "5")
        .args(["count", "--graph", "k4.txt", "--tree", "path:3"])
        .output()
        .unwrap();
    assert_eq!(capped.status.code(), Some(4));
    assert!(capped.stdout.is_empty());
}

#[test]
fn parse_error_names_the_line() {
    let dir = tempfile::tempdir().unwrap();
    write(dir.path(), "loop.txt", "# comment\n3 2\n0 1\n2 2\n");
    let out = run(dir.path(), &["count", "--graph", "loop.txt", "--tree", "path:1"]);
    assert_eq!(out.status.code(), Some(3));
    let err = String::from_utf8(out.stderr).unwrap();
    assert!(err.contains("line 4"), "{err}");
}

#[test]
fn suite_from_config() {
    let dir = tempfile::tempdir().unwrap();
    write(
        dir.path(),
        "suite.json",
        r#"{"graphs": ["complete:4", "cycle:5"], "trees": ["path:2", "path:3"], "seed": 3}"#,
    );
    let v = json(&run(dir.path(), &["suite", "--config", "suite.json"]));
    let rows = v["payload"]["rows"].as_array().unwrap();
    assert_eq!(rows.len(), 4);
    assert_eq!(v["payload"]["schemaVersion"], 1);
    assert_eq!(rows[0]["count"], "24");
    assert!(rows[3]["bounds"]["thm1"]["inapplicable"].is_string());
    let out = run(dir.path(), &["suite", "--config", "suite.json", "--format", "csv"]);
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(text.lines().count(), 5);
    assert!(text.starts_with("graph,tree,n,edges,d,min_degree,t,count,"));
    write(dir.path(), "broken.json", "{\"graphs\": [\"moebius:3\"]}");
    assert_eq!(run(dir.path(), &["suite", "--config", "broken.json"]).status.code(), Some(3));
}
