mod common;

use std::collections::BTreeSet;
use std::fs;
use std::process::{Command, Output};

use common::*;
use hfp_core::cli::profiles_in;

fn hfp(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_hfp"))
        .args(args)
        .env_remove("HFP_THREADS")
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

#[test]
fn verify_examples() {
    let o = hfp(&["verify", "--family", "2t4u", "--t", "8", "--a", EXAMPLE_1]);
    assert_eq!(o.status.code(), Some(0));
    let v: serde_json::Value = serde_json::from_str(stdout(&o).trim()).unwrap();
    assert_eq!((v["rank"].as_u64(), v["kernel_dim"].as_u64()), (Some(11), Some(2)));
    assert_eq!(v["length"], 32);
    assert_eq!(v["size"], 64);
    assert_eq!(v["generator_a"], EXAMPLE_1);
    assert_eq!(v["kernel_basis"].as_array().unwrap().len(), 2);

    let o = hfp(&["verify", "--family", "2t4u", "--t", "8", "--a", EXAMPLE_2]);
    assert_eq!(profiles_in(&stdout(&o)), BTreeSet::from([(13, 1)]));

    let zero = "0".repeat(32);
    let o = hfp(&["verify", "--family", "2t4u", "--t", "8", "--a", &zero]);
    assert_eq!(o.status.code(), Some(1));
}

#[test]
fn verify_quaternion() {
    let o = hfp(&["search", "--family", "tQu", "--t", "3"]);
    let line = stdout(&o).lines().next().unwrap().to_string();
    let v: serde_json::Value = serde_json::from_str(&line).unwrap();
    let d = v["generator_d"].as_str().unwrap();
    let a = v["generator_a"].as_str().unwrap();
    let o = hfp(&["verify", "--family", "tqu", "--t", "3", "--d", d, "--a", a]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(profiles_in(&stdout(&o)), BTreeSet::from([(11, 1)]));
}

#[test]
fn usage_exit_codes() {
    assert_eq!(hfp(&["frobnicate"]).status.code(), Some(64));
    assert_eq!(hfp(&["search", "--family", "2t4u"]).status.code(), Some(64));
    assert_eq!(hfp(&["search", "--family", "tqu", "--t", "4"]).status.code(), Some(64));
    assert_eq!(hfp(&["verify", "--family", "2t4u", "--t", "8", "--a", "0101"]).status.code(), Some(64));
    assert_eq!(hfp(&["search", "--family", "4tu2", "--t", "10", "--all"]).status.code(), Some(64));
}

#[test]
fn search_outputs() {
    let o = hfp(&["search", "--family", "tqu", "--t", "3", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert_eq!(profiles_in(&out), BTreeSet::from([(11, 1)]));
    let summary: serde_json::Value = serde_json::from_str(out.lines().last().unwrap()).unwrap();
    assert_eq!(summary["profiles"], serde_json::json!([[11, 1]]));
    let rejected: u64 = summary["rejected"].as_object().unwrap().values().map(|v| v.as_u64().unwrap()).sum();
    assert_eq!(
        rejected + summary["accepted"].as_u64().unwrap(),
        summary["examined"].as_u64().unwrap()
    );
    assert!(String::from_utf8(o.stderr).unwrap().contains("wall time"));

    let o = hfp(&["search", "--family", "4tu2", "--t", "4", "--all"]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("codes.jsonl");
    let o = hfp(&["search", "--family", "2t22u", "--t", "4", "--all", "--output", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(stdout(&o).lines().count(), 1);
    let written = fs::read_to_string(&path).unwrap();
    assert_eq!(profiles_in(&written), BTreeSet::from([(5, 5), (6, 3)]));
}

#[test]
fn threads_env_does_not_change_output() {
    let base = stdout(&hfp(&["search", "--family", "tqu", "--t", "5", "--all", "--workers", "1"]));
    let o = Command::new(env!("CARGO_BIN_EXE_hfp"))
        .args(["search", "--family", "tqu", "--t", "5", "--all"])
        .env("HFP_THREADS", "3")
        .output()
        .unwrap();
    assert_eq!(stdout(&o), base);
}

#[test]
fn checkpoint_resume() {
    let dir = tempfile::tempdir().unwrap();
    let ckpt = dir.path().join("run.ckpt");
    let ckpt_s = ckpt.to_str().unwrap();
    let args = ["search", "--family", "tqu", "--t", "5", "--all", "--workers", "2", "--checkpoint", ckpt_s];
    let full = stdout(&hfp(&args));
    // drop the second half of the finished chunks, plus a torn line
    let text = fs::read_to_string(&ckpt).unwrap();
    let lines: Vec<&str> = text.lines().collect();
    assert!(lines.len() > 10);
    let mut kept = lines[..lines.len() / 2].join("\n");
    kept.push_str("\n{\"chunk\": 12, \"cou");
    fs::write(&ckpt, kept).unwrap();
    let resumed = stdout(&hfp(&args));
    assert_eq!(resumed, full);
    // a checkpoint of another run is refused
    let o = hfp(&["search", "--family", "tqu", "--t", "3", "--all", "--workers", "2", "--checkpoint", ckpt_s]);
    assert_eq!(o.status.code(), Some(64));
}

#[test]
fn cchm_pipeline() {
    let o = hfp(&["cchm", "check", "--row", ROW_1]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(0), "true"));
    let o = hfp(&["cchm", "check", "--row", "1,1"]);
    assert_eq!((o.status.code(), stdout(&o).trim()), (Some(1), "false"));

    let o = hfp(&["cchm", "to-code", "--row", ROW_1]);
    assert_eq!(o.status.code(), Some(0));
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("code.txt");
    fs::write(&path, &o.stdout).unwrap();
    let o = hfp(&["verify", "--code", path.to_str().unwrap()]);
    assert_eq!(o.status.code(), Some(0));
    assert_eq!(profiles_in(&stdout(&o)), BTreeSet::from([(11, 2)]));

    let o = hfp(&["cchm", "from-code", "--a", EXAMPLE_2]);
    assert_eq!(o.status.code(), Some(0));
    let row = stdout(&o);
    let o = hfp(&["cchm", "check", "--row", row.trim()]);
    assert_eq!(stdout(&o).trim(), "true");
}

#[test]
fn table_rows() {
    let o = hfp(&["table", "--tmax", "1"]);
    let text = stdout(&o);
    let row = text.lines().nth(1).unwrap();
    assert_eq!(row.matches("(3,3)").count(), 3);
    assert!(row.contains("x [searched]"));

    let o = hfp(&["table", "--tmax", "7", "--format", "csv"]);
    let csv = stdout(&o);
    assert!(csv.contains("7,tQu,found,27:1"));
    assert!(csv.contains("2,2t22u,analytic,"));
    assert!(csv.contains("6,4tu2,searched-none,"));
    assert!(csv.contains("4,tQu,n/a,"));
}
