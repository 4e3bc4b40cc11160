use std::process::{Command, Output};

use serde_json::Value;

fn run(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_forest-spectra")).args(args).output().expect("binary runs")
}

fn report(args: &[&str]) -> Value {
    let out = run(args);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

fn without_timing(mut v: Value) -> Value {
    v.as_object_mut().unwrap().remove("timing_ms");
    v
}

#[test]
fn k4_spectrum_report() {
    let v = report(&["spectrum", "--complete", "4", "--k", "1"]);
    assert_eq!(v["command"], "spectrum");
    let eig: Vec<(String, u64)> = v["result"]["eigenvalues"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| (e["value"].as_str().unwrap().to_string(), e["multiplicity"].as_u64().unwrap()))
        .collect();
    let mut expected = vec![("16/1".to_string(), 1), ("-2/1".to_string(), 2), ("-4/1".to_string(), 3)];
    let mut got = eig.clone();
    expected.sort();
    got.sort();
    assert_eq!(got, expected);
    assert_eq!(v["result"]["signs"]["positive"], 1);
    assert_eq!(v["result"]["signs"]["zero"], 0);
    assert_eq!(v["result"]["signs"]["negative"], 5);
    assert_eq!(v["result"]["determinant"], "-4096/1");
    assert_eq!(v["verdict"]["theorem_holds"], true);
    assert_eq!(v["verdict"]["passed"], true);
    assert!(v["timing_ms"].is_u64());
}

#[test]
fn matrix_flag_adds_the_hessian() {
    let v = report(&["spectrum", "--complete", "4", "--k", "1", "--matrix"]);
    let rows = v["result"]["matrix"].as_array().unwrap();
    assert_eq!(rows.len(), 6);
    assert_eq!(rows[0][0], "0/1");
}

#[test]
fn bipartite_outside_range_still_reports() {
    let v = report(&["spectrum", "--bipartite", "2", "2", "--k", "2"]);
    assert_eq!(v["verdict"]["in_theorem_range"], false);
    assert_eq!(v["verdict"]["spectrum_certified"], true);
    assert!(v["verdict"]["note"].as_str().unwrap().contains("outside theorem range"));
    assert!(v["result"]["parameters"]["delta"].is_string());
}

#[test]
fn k4_truncation_is_strong_lefschetz() {
    let v = report(&["slp", "--complete", "4", "--r", "3"]);
    assert_eq!(v["verdict"]["strong_lefschetz"], true);
    assert_eq!(v["verdict"]["degree_one_holds"], true);
    assert_eq!(v["result"]["hilbert_function"], serde_json::json!([1, 6, 6, 1]));
}

#[test]
fn slp_at_a_degenerate_point_is_reported_not_failed() {
    let v = report(&["slp", "--complete", "4", "--r", "3", "--point", "1,0,0,0,0,0"]);
    assert_eq!(v["verdict"]["strong_lefschetz"], false);
    assert_eq!(v["verdict"]["passed"], true);
}

#[test]
fn bipartite_bijections_verify() {
    let v = report(&["bijections", "--bipartite", "3", "3", "--k", "2"]);
    assert_eq!(v["verdict"]["bijections_verified"], true);
    assert_eq!(v["verdict"]["inequalities_hold"], true);
    assert_eq!(v["result"]["families"]["R_i"], serde_json::json!([1, 5, 8, 0, 1]));
}

#[test]
fn complete_forestbij_on_anchored_set() {
    let v = report(&["bijections", "--complete", "5", "--k", "1", "--w", "5"]);
    let recs = v["result"]["bijections"].as_array().unwrap();
    assert_eq!(recs.len(), 1);
    assert_eq!(recs[0]["verified"], true);
}

#[test]
fn matroid_bases_match_forests() {
    let v = report(&["matroid", "--complete", "5", "--r", "3", "--verify-axioms"]);
    assert_eq!(v["verdict"]["bases_are_forests"], true);
    assert_eq!(v["verdict"]["exchange_axiom"], true);
    assert_eq!(v["result"]["rank"], 3);
}

#[test]
fn enumerate_counts_spanning_trees() {
    let v = report(&["enumerate", "--complete", "4", "--k", "1"]);
    assert_eq!(v["result"]["count"], 16);
    assert_eq!(v["result"]["forests"].as_array().unwrap().len(), 16);
    let v = report(&["enumerate", "--complete", "5", "--k", "1", "--count-only"]);
    assert_eq!(v["result"]["count"], 125);
    assert!(v["result"].get("forests").is_none());
}

#[test]
fn output_is_deterministic() {
    let args = ["bijections", "--bipartite", "2", "3", "--k", "1"];
    assert_eq!(without_timing(report(&args)), without_timing(report(&args)));
}

#[test]
fn thread_count_does_not_change_results() {
    let args = ["spectrum", "--bipartite", "3", "3", "--k", "2"];
    let one = Command::new(env!("CARGO_BIN_EXE_forest-spectra"))
        .args(args)
        .env("FOREST_SPECTRA_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(one.status.code(), Some(0));
    let one: Value = serde_json::from_slice(&one.stdout).unwrap();
    assert_eq!(without_timing(one), without_timing(report(&args)));
}

#[test]
fn invalid_input_exits_two() {
    for args in [
        vec!["spectrum", "--complete", "4"],
        vec!["spectrum", "--complete", "4", "--bipartite", "2", "2", "--k", "1"],
        vec!["spectrum", "--complete", "4", "--k", "0"],
        vec!["spectrum", "--complete", "2", "--k", "1"],
        vec!["bijections", "--complete", "6", "--k", "2", "--w", "3"],
        vec!["slp", "--complete", "4", "--r", "4"],
        vec!["slp", "--complete", "4", "--r", "3", "--point", "1,2"],
        vec!["slp", "--complete", "4", "--r", "3", "--point", "1,2,3,4,5,x"],
        vec!["frobnicate"],
    ] {
        let out = run(&args);
        assert_eq!(out.status.code(), Some(2), "{args:?}");
        assert!(!out.stderr.is_empty(), "{args:?} printed no message");
    }
}

#[test]
fn bad_thread_setting_exits_two() {
    let out = Command::new(env!("CARGO_BIN_EXE_forest-spectra"))
        .args(["enumerate", "--complete", "3", "--k", "1"])
        .env("FOREST_SPECTRA_THREADS", "zero")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(2));
}
