use std::fs;
use std::path::PathBuf;
use std::process::Command;

use binclone_cli::{run, Output};
use serde_json::Value;

fn cli(args: &[&str]) -> Output {
    run(std::iter::once("binclone").chain(args.iter().copied()))
}

fn json(out: &Output) -> Value {
    serde_json::from_str(&out.stdout).unwrap_or_else(|e| panic!("{e}: {:?}", out))
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("binclone-cli-{}", std::process::id()));
    fs::create_dir_all(&dir).unwrap();
    let p = dir.join(name);
    fs::write(&p, contents).unwrap();
    p
}

#[test]
fn table_csv() {
    let out = cli(&["table", "--fn", "builtin:p", "--n", "2", "--format", "csv"]);
    assert_eq!(out.code, 0);
    assert_eq!(out.stdout.trim_end(), "1,3\n2,5");
}

#[test]
fn table_json_has_schema() {
    let v = json(&cli(&["table", "--fn", "builtin:chi_delta", "--n", "3"]));
    assert_eq!(v["schema"], 1);
    assert_eq!(v["rows"], serde_json::json!([[0, 0, 0], [1, 0, 0], [1, 1, 0]]));
}

#[test]
fn classify_p_delta() {
    let out = cli(&["classify", "--fn", "builtin:p_delta"]);
    assert_eq!(out.code, 0);
    let v = json(&out);
    let statuses: Vec<(&str, &str)> = v["verdicts"]
        .as_array()
        .unwrap()
        .iter()
        .map(|d| (d["clone"].as_str().unwrap(), d["status"].as_str().unwrap()))
        .collect();
    assert_eq!(statuses, [("T1", "DECIDED_IN"), ("T2", "DECIDED_OUT"), ("T1&T2", "DECIDED_OUT")]);
}

#[test]
fn classify_needs_a_builtin() {
    let p = scratch("min.json", r#"{"repr":"piecewise","delta":["min","x","y"],"nabla":["min","x","y"],"diagonal":"x"}"#);
    let v = json(&cli(&["eval", "--fn", p.to_str().unwrap(), "--x", "7", "--y", "3"]));
    assert_eq!(v["value"], 3);
    let out = cli(&["classify", "--fn", p.to_str().unwrap()]);
    assert_eq!(out.code, 1, "{out:?}");
    assert!(out.stderr.contains("builtin"));
}

#[test]
fn tree_rank_of_three_chain() {
    let p = scratch("chain3.json", "[[], [0], [0, 0]]");
    let out = cli(&["tree-rank", "--tree", p.to_str().unwrap()]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["rank"], 2);
}

#[test]
fn malformed_tree_is_a_usage_error() {
    let p = scratch("gap.json", "[[], [0, 0]]");
    assert_eq!(cli(&["tree-rank", "--tree", p.to_str().unwrap()]).code, 1);
    let closed = cli(&["tree-rank", "--tree", p.to_str().unwrap(), "--close"]);
    assert_eq!(json(&closed)["rank"], 2);
}

#[test]
fn tree_wf_and_reduce() {
    let p = scratch("gen.json", r#"{"generator":"all_zero","depth":12}"#);
    let v = json(&cli(&["tree-wf", "--tree", p.to_str().unwrap()]));
    assert_eq!(v["status"], "ill_founded");

    // ⟨⟩ and ⟨0⟩ have indices 0 and 1
    let p = scratch("two.json", "[[], [0]]");
    let out = cli(&["tree-reduce", "--tree", p.to_str().unwrap(), "--n", "3", "--format", "csv"]);
    assert_eq!(out.code, 0);
    let rows: Vec<&str> = out.stdout.lines().collect();
    assert_eq!(rows.len(), 3);
    assert_eq!(rows[2], "0,0,0");
}

#[test]
fn enum_seq_both_ways() {
    let v = json(&cli(&["enum-seq", "--index", "13"]));
    assert_eq!(v["seq"], serde_json::json!([0, 0, 0]));
    let v = json(&cli(&["enum-seq", "--seq", "0,0,0"]));
    assert_eq!(v["index"], 13);
    assert_eq!(cli(&["enum-seq", "--seq", "0,x"]).code, 1);
}

#[test]
fn eval_point() {
    let v = json(&cli(&["eval", "--fn", "builtin:p", "--x", "3", "--y", "4"]));
    assert_eq!(v["value"], 33);
}

#[test]
fn check_t2_falsified_exits_two() {
    let out = cli(&["check-t2", "--fn", "builtin:p", "--k", "3"]);
    assert_eq!(out.code, 2);
    assert_eq!(json(&out)["status"], "FALSIFIED");
    let out = cli(&["check-t2", "--fn", "builtin:chi_delta", "--k", "3", "--seed-bound", "20"]);
    assert_eq!(out.code, 0);
    assert_eq!(json(&out)["status"], "EVIDENCE_IN");
}

#[test]
fn check_t1_window() {
    let v = json(&cli(&["check-t1", "--fn", "builtin:p_delta", "--n", "20"]));
    assert_eq!(v["status"], "DECIDED_IN");
}

#[test]
fn canonize_reports_a_block_pair() {
    let v = json(&cli(&["canonize", "--fn", "builtin:p_delta", "--k", "3", "--family", "initial"]));
    assert_eq!(v["report"]["delta_type"]["tag"], "one_one");
    assert_eq!(v["family"], "initial");
}

#[test]
fn dichotomy_of_p() {
    let out = cli(&["dichotomy", "--fn", "builtin:p"]);
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(json(&out)["dichotomy"]["kind"], "p_delta_term");
}

#[test]
fn dichotomy_without_report_for_t2_member() {
    let out = cli(&["dichotomy", "--fn", "builtin:chi_delta", "--k", "3", "--seed-bound", "20"]);
    assert_eq!(out.code, 2);
}

#[test]
fn synth_t1_from_flags() {
    let out = cli(&["synth-t1", "--fn", "builtin:p_delta", "--axis", "x", "--bound", "builtin:pair_diag", "--window", "10"]);
    assert_eq!(out.code, 0, "{out:?}");
    assert_eq!(json(&out)["mismatch"], Value::Null);
}

#[test]
fn synth_t1_declared_witness() {
    let p = scratch(
        "low.json",
        r#"{"repr":"piecewise","delta":["mod","x",3],"nabla":["mod","x",3],"diagonal":0,
            "witness":{"axis":"x","bound":{"repr":"builtin","name":"const:2"}}}"#,
    );
    let out = cli(&["synth-t1", "--fn", p.to_str().unwrap(), "--window", "12"]);
    assert_eq!(out.code, 0, "{out:?}");
    let v = json(&out);
    assert_eq!(v["env"].as_object().unwrap().keys().collect::<Vec<_>>(), ["p_delta"]);
}

#[test]
fn synth_t1_with_violated_witness() {
    let out = cli(&["synth-t1", "--fn", "builtin:p", "--axis", "x", "--bound", "builtin:pair_diag", "--window", "10"]);
    assert_eq!(out.code, 3, "{out:?}");
}

#[test]
fn usage_errors() {
    assert_eq!(cli(&["frobnicate"]).code, 1);
    assert_eq!(cli(&["table", "--fn", "builtin:p", "--n", "10001"]).code, 1);
    assert_eq!(cli(&["check-t2", "--fn", "builtin:p", "--k", "21"]).code, 1);
    assert_eq!(cli(&["table", "--fn", "builtin:nope", "--n", "2"]).code, 1);
    assert_eq!(cli(&["table", "--fn", "/does/not/exist.json", "--n", "2"]).code, 1);
    assert_eq!(cli(&["--help"]).code, 0);
}

#[test]
fn output_is_deterministic() {
    let a = cli(&["classify", "--fn", "builtin:p"]);
    let b = cli(&["classify", "--fn", "builtin:p"]);
    assert_eq!(a, b);
}

#[test]
fn binary_exit_code() {
    let out = Command::new(env!("CARGO_BIN_EXE_binclone"))
        .args(["check-t2", "--fn", "builtin:p", "--k", "3"])
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
