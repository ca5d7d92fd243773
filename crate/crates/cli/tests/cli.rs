use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;
use ztop::family::{build_gpq_qgraph, gpq_full_resolution, GpqParams};
use ztop::fixtures;
use ztop::resolve::ResolveOptions;
use ztop::zeta::zeta_q;

fn ztop(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_ztop"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn json(args: &[&str]) -> (Value, i32) {
    let mut all = vec!["--format", "json"];
    all.extend_from_slice(args);
    let out = ztop(&all);
    let v = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: {e}\n{}", String::from_utf8_lossy(&out.stdout)));
    (v, out.status.code().unwrap())
}

fn temp_file(name: &str, text: &str) -> PathBuf {
    let p = std::env::temp_dir().join(format!("ztop-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p
}

#[test]
fn zeta_of_the_standard_graph() {
    let (v, code) = json(&["zeta", "fab_fig1"]);
    assert_eq!(code, 0);
    let poles: Vec<(String, u64)> = v["poles"]
        .as_array()
        .unwrap()
        .iter()
        .map(|p| {
            (
                p["s0"].as_str().unwrap().to_string(),
                p["order"].as_u64().unwrap(),
            )
        })
        .collect();
    assert_eq!(
        poles,
        [("-1", 1), ("-7/38", 1), ("-10/57", 1), ("-1/6", 2)].map(|(s, k)| (s.to_string(), k))
    );
    assert_eq!(v["engine"], "ordinary");
}

#[test]
fn zeta_double_poles_of_the_second_example() {
    let (v, _) = json(&["zeta", "fab_fig3"]);
    let doubles: Vec<&str> = v["poles"]
        .as_array()
        .unwrap()
        .iter()
        .filter(|p| p["order"] == 2)
        .map(|p| p["s0"].as_str().unwrap())
        .collect();
    assert_eq!(doubles, ["-5/3", "-3/2"]);
}

#[test]
fn q_engine_on_the_template() {
    let (v, code) = json(&[
        "zeta", "gpq_fig5", "--engine", "q", "--p", "2", "--q", "3", "--a", "1",
    ]);
    assert_eq!(code, 0);
    let params = GpqParams::new(2, 3, 1).unwrap();
    let want = gpq_full_resolution(params, ResolveOptions::default())
        .unwrap()
        .value;
    assert_eq!(v["value"], want.to_string());
    assert_eq!(
        v["value"],
        zeta_q(&build_gpq_qgraph(params)).unwrap().value.to_string()
    );
}

#[test]
fn template_without_parameters_is_an_input_error() {
    assert_eq!(ztop(&["zeta", "gpq_fig5"]).status.code(), Some(2));
}

#[test]
fn input_errors_exit_two() {
    assert_eq!(ztop(&["zeta", "no-such-graph"]).status.code(), Some(2));
    let bad = temp_file(
        "bad.json",
        r#"{"vertices":[{"id":"E","kind":"exceptional","N":2,"nu":2}],"edges":[{"a":"E","b":"X"}]}"#,
    );
    let out = ztop(&["zeta", bad.to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(2));
    assert!(!out.stderr.is_empty());
    assert_eq!(
        ztop(&["decorate", "fab_fig1", "--form", "nope=1"])
            .status
            .code(),
        Some(2)
    );
    assert_eq!(
        ztop(&["resolve", "--branch", "f=1+x"]).status.code(),
        Some(2)
    );
}

#[test]
fn monodromy_report() {
    let (v, code) = json(&["monodromy", "fab_fig1", "--eigen", "-1/6"]);
    assert_eq!(code, 0);
    assert_eq!(v["milnor"], 188);
    assert_eq!(v["char_poly"]["19"], -5);
    assert_eq!(v["eigenvalues"][0]["multiplicity"], 3);
}

#[test]
fn resolve_the_cusp() {
    let (v, code) = json(&["resolve", "--branch", "f=y^2+x^3"]);
    assert_eq!(code, 0);
    assert_eq!(v["milnor"], 2);
    assert_eq!(v["blowups"], 3);
}

#[test]
fn resolve_budget_is_a_computation_failure() {
    assert_eq!(
        ztop(&["--budget", "1", "resolve", "fab_curves"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn decorate_matches_the_fixture() {
    let out = ztop(&["--format", "json", "decorate", "fab_fig1", "--form", "x=3"]);
    assert_eq!(out.status.code(), Some(0));
    let g = ztop::graph::ResGraph::parse(&String::from_utf8(out.stdout).unwrap()).unwrap();
    assert!(g.is_isomorphic(&fixtures::graph("fab_fig2").unwrap()));
}

#[test]
fn gpq_statuses() {
    let (v, code) = json(&["gpq", "--p", "2", "--q", "3", "--a", "3"]);
    assert_eq!(code, 0);
    assert_eq!(v[0]["printed_status"], "EXPECTED-DIFF");
    assert_eq!(v[0]["full"]["z0"], "1/9");
    let (v, _) = json(&["gpq", "--p", "2", "--q", "3", "--a", "2"]);
    assert_eq!(v[0]["printed_status"], "UNDEFINED");
    assert_eq!(v[0]["engines_agree"], true);
    let (v, _) = json(&["gpq", "--p", "2", "--q", "3", "--a", "1"]);
    assert_eq!(v[0]["printed_status"], "AGREE");
    let (printed, code) = json(&[
        "gpq", "--p", "2", "--q", "3", "--a", "2", "--engine", "printed",
    ]);
    assert_eq!(code, 1);
    assert!(printed["error"].as_str().unwrap().contains("a = p"));
    let (full, _) = json(&[
        "gpq", "--p", "2", "--q", "3", "--a", "1", "--engine", "full",
    ]);
    let (q, _) = json(&["gpq", "--p", "2", "--q", "3", "--a", "1", "--engine", "q"]);
    assert_eq!(full["value"], q["value"]);
}

#[test]
fn explore_target() {
    let (v, code) = json(&[
        "--jobs",
        "1",
        "explore",
        "--bounds",
        "x=3",
        "--target=-1/2,-1/3",
    ]);
    assert_eq!(code, 0);
    assert!(v["target_count"].as_u64().unwrap() >= 1);
    assert_eq!(v["hits"][0]["form"], "x=3");
}

#[test]
fn verify_subset_and_fault_injection() {
    let out = ztop(&["verify", "--only", "monodromy"]);
    assert_eq!(out.status.code(), Some(0));
    assert!(String::from_utf8_lossy(&out.stdout).starts_with("criterion 5 PASS"));

    let corrupted = fixtures::FAB_FIG1.replacen("\"nu\": 7", "\"nu\": 8", 1);
    assert_ne!(corrupted, fixtures::FAB_FIG1);
    let path = temp_file("fig1.json", &corrupted);
    let arg = format!("fab_fig1={}", path.display());
    let out = ztop(&["verify", "--only", "1", "--override", &arg]);
    assert_eq!(out.status.code(), Some(1));
    let text = String::from_utf8_lossy(&out.stdout);
    assert!(
        text.contains("criterion 1 FAIL") && text.contains("fab_fig1"),
        "{text}"
    );
}

#[test]
fn fixtures_list_and_dump() {
    let (v, code) = json(&["fixtures", "list"]);
    assert_eq!(code, 0);
    assert!(v.as_array().unwrap().iter().any(|f| f["id"] == "gpq_fig5"));
    let out = ztop(&["fixtures", "dump", "cusp"]);
    assert_eq!(String::from_utf8(out.stdout).unwrap(), fixtures::CUSP);
}

#[test]
fn json_errors_carry_the_exit_code() {
    let (v, code) = json(&["zeta", "no-such-graph"]);
    assert_eq!(code, 2);
    assert_eq!(v["exit"], 2);
}
