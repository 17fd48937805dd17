//! End-to-end tests against the compiled binary: exit codes, JSON shape,
//! and agreement between human and JSON output.

use serde_json::Value;
use std::path::{Path, PathBuf};
use std::process::{Command, Output};

fn qeta(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_qeta"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn repo_job(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../jobs").join(name)
}

fn json_lines(output: &Output) -> Vec<Value> {
    let stdout = String::from_utf8(output.stdout.clone()).expect("utf8 stdout");
    stdout
        .lines()
        .map(|line| serde_json::from_str(line).expect("each line is a JSON object"))
        .collect()
}

#[test]
fn certify_emits_four_true_conditions() {
    let out = qeta(&["certify", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 1);
    let report = &reports[0];
    assert_eq!(report["task"], "certify");
    assert_eq!(report["status"], "pass");
    assert_eq!(report["checked"], 4);
    let conditions = report["tables"]["conditions"].as_array().unwrap();
    assert_eq!(conditions.len(), 4);
    assert!(conditions.iter().all(|c| c["holds"] == Value::Bool(true)));
    assert_eq!(report["tables"]["constant"], "81");
}

#[test]
fn run_on_a_missing_file_exits_two() {
    let out = qeta(&["run", "missing.qeta"]);
    assert_eq!(out.status.code(), Some(2));
    assert!(out.stdout.is_empty());
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("missing.qeta"));
}

#[test]
fn syntax_errors_carry_a_position() {
    let path = fixture("syntax_error.qeta");
    let out = qeta(&["run", path.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("1:16"), "diagnostic should carry line:column, got {stderr}");
    assert!(stderr.contains("'*'"), "diagnostic should name the stray token, got {stderr}");
}

#[test]
fn a_failing_assertion_exits_one_but_reports_everything() {
    let path = fixture("pass_fail.qeta");
    let out = qeta(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(1));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 2);
    assert_eq!(reports[0]["status"], "pass");
    assert_eq!(reports[1]["status"], "fail");
    assert_eq!(reports[1]["first_violation"]["index"], 3);
    assert_eq!(reports[1]["first_violation"]["value"], "1");
}

#[test]
fn human_and_json_agree_on_pass_fail_sets() {
    let path = fixture("pass_fail.qeta");
    let human = qeta(&["run", path.to_str().unwrap()]);
    let json = qeta(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(human.status.code(), json.status.code());
    let human_lines: Vec<String> = String::from_utf8(human.stdout)
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with(' '))
        .map(|l| l.split_whitespace().next().unwrap().to_lowercase())
        .collect();
    let json_statuses: Vec<String> = json_lines(&json)
        .iter()
        .map(|r| r["status"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(human_lines, json_statuses);
}

#[test]
fn bundled_job_passes_end_to_end() {
    let path = repo_job("cubic.qeta");
    let out = qeta(&["run", path.to_str().unwrap(), "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 7);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn theorem11_passes_at_the_contract_depth() {
    let out = qeta(&["theorem11", "--terms", "1000"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("PASS theorem11 (checked 1000)"), "{stdout}");
}

#[test]
fn orders_prints_the_full_table() {
    let out = qeta(&["orders", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1"]);
    assert_eq!(out.status.code(), Some(0));
    let stdout = String::from_utf8(out.stdout).unwrap();
    assert!(stdout.contains("denominator 3 (multiplicity 2): order 0"));
    assert!(stdout.contains("denominator 18 (multiplicity 1): order 1"));
}

#[test]
fn expand_respects_the_modulus_flag() {
    let out = qeta(&[
        "expand", "--level", "6", "--eta", "3:4,6:4,1:-4,2:-4", "--terms", "5", "--modulus", "5",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    // 0, 1, 4, 18, 52 reduced mod 5
    assert_eq!(reports[0]["tables"]["constant"], "0, 1, 4, 3, 2");
}

#[test]
fn u_subcommand_extracts_the_triple_progression() {
    let out = qeta(&[
        "u", "--p", "3", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--terms", "5", "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports[0]["task"], "u3");
    assert_eq!(reports[0]["tables"]["constant"], "0, 3, 12, 54, 156");
}

#[test]
fn u_rejects_order_below_two() {
    let out = qeta(&["u", "--p", "1", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn decompose_recovers_the_linear_polynomial() {
    let out = qeta(&[
        "decompose", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--u", "3", "--terms", "40",
        "--json",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports[0]["status"], "pass");
    assert_eq!(reports[0]["tables"]["constant"], "[0, 3]");
}

#[test]
fn decompose_reports_nonpolynomial_input_as_failure() {
    // F itself is not a polynomial in the level-6 generator
    let out = qeta(&[
        "decompose", "--level", "18", "--eta", "9:1,18:1,1:-1,2:-1", "--terms", "40", "--json",
    ]);
    assert_eq!(out.status.code(), Some(1));
    let reports = json_lines(&out);
    assert_eq!(reports[0]["status"], "fail");
}

#[test]
fn watson_small_depths_pass() {
    let out = qeta(&["watson", "--k-max", "2", "--upto", "500", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports.len(), 2);
    assert!(reports.iter().all(|r| r["status"] == "pass"));
}

#[test]
fn theorem12_respects_an_incompatible_modulus() {
    // divisor 3 does not divide 5, so every family reports an error
    let out = qeta(&["theorem12", "--alpha-max", "1", "--upto", "100", "--modulus", "5"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn bad_eta_flag_exits_two() {
    let out = qeta(&["certify", "--level", "18", "--eta", "9;1"]);
    assert_eq!(out.status.code(), Some(2));
    let stderr = String::from_utf8(out.stderr).unwrap();
    assert!(stderr.contains("bad eta factor"));
}

#[test]
fn foreign_divisor_exits_two() {
    let out = qeta(&["certify", "--level", "18", "--eta", "5:1"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn replay_passes_and_reports_the_constant() {
    let out = qeta(&["replay3", "--terms", "60", "--json"]);
    assert_eq!(out.status.code(), Some(0));
    let reports = json_lines(&out);
    assert_eq!(reports[0]["task"], "replay3");
    assert_eq!(reports[0]["tables"]["constant"], "3");
    assert_eq!(reports[0]["tables"]["orders"].as_array().unwrap().len(), 6);
}
