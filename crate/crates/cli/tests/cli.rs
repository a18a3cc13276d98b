use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::Value;

const A2: &str = r#"{"rank":2,"unfrozen":[true,true],"d":[1,1],"form_num":[[0,1],[-1,0]],"form_den":1}"#;
const A3_SYM: &str =
    r#"{"rank":3,"unfrozen":[true,true,true],"d":[1,1,1],"form_num":[[0,1,0],[-1,0,-1],[0,1,0]],"form_den":1}"#;

fn qcluster(args: &[&str], stdin: &str) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_qcluster"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(stdin.as_bytes()).unwrap();
    child.wait_with_output().unwrap()
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn monomial(exp: [i32; 4]) -> String {
    serde_json::json!({ "seed": "sl2-standard", "D": 1, "terms": [{ "exp": exp, "coeff": [[0, "1"]] }] }).to_string()
}

#[test]
fn sl2_elements_match_golden_file() {
    let out = qcluster(&["scenario", "sl2", "--emit", "elements"], "");
    assert!(out.status.success());
    let golden = include_str!("golden/sl2_elements.json");
    assert_eq!(String::from_utf8(out.stdout).unwrap(), golden);
    let names: Vec<_> = serde_json::from_str::<Value>(golden).unwrap()["elements"]
        .as_array()
        .unwrap()
        .iter()
        .map(|e| e["name"].as_str().unwrap().to_string())
        .collect();
    assert_eq!(names, ["E", "F", "K", "K'", "C"]);
}

#[test]
fn sl2_generators_pass_both_criteria() {
    let elements = String::from_utf8(qcluster(&["scenario", "sl2"], "").stdout).unwrap();
    for mode in ["gmatrix", "transport"] {
        let out = qcluster(&["check-poly", "--mode", mode, "--depth", "8"], &elements);
        assert_eq!(out.status.code(), Some(0), "{mode}");
        let v = json(&out);
        assert_eq!(v["status"], "UniversallyPolynomial");
        assert_eq!(v["elements"].as_array().unwrap().len(), 5);
    }
}

#[test]
fn a2_c_matrix_on_the_pentagon_is_a_permutation() {
    let out = qcluster(&["cvec", "--seed", "-", "--path", "0,1,0,1,0", "--json"], A2);
    assert!(out.status.success());
    assert_eq!(json(&out), serde_json::json!([[0, 1], [1, 0]]));
    let text = qcluster(&["cvec", "--seed", "-", "--path", "0,1,0,1,0"], A2);
    assert_eq!(String::from_utf8(text.stdout).unwrap(), "0 1\n1 0\n");
}

#[test]
fn x1_fails_the_g_matrix_criterion_at_its_own_vertex() {
    let out = qcluster(&["check-poly", "--mode", "gmatrix", "--depth", "8"], &monomial([0, 1, 0, 0]));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "FailsAt");
    assert_eq!(v["witness_path"], serde_json::json!([1]));
    assert_eq!(v["witness_monomial"], serde_json::json!([0, 1, 0, 0]));
}

#[test]
fn frozen_x0_is_not_laurent_after_one_step() {
    let out = qcluster(&["check-poly", "--mode", "transport", "--depth", "3"], &monomial([1, 0, 0, 0]));
    assert_eq!(out.status.code(), Some(2));
    let v = json(&out);
    assert_eq!(v["status"], "FailsAt");
    assert_eq!(v["reason"], "NotLaurent");
    assert_eq!(v["witness_path"], serde_json::json!([1]));
}

#[test]
fn output_is_deterministic() {
    let elements = String::from_utf8(qcluster(&["scenario", "sl2-coproduct"], "").stdout).unwrap();
    let a = qcluster(&["check-poly", "--mode", "gmatrix", "--depth", "3", "--threads", "1"], &elements);
    let b = qcluster(&["check-poly", "--mode", "gmatrix", "--depth", "3", "--threads", "4"], &elements);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let bench = ["bench", "--rank", "6", "--frozen", "2", "--depth", "3", "--samples", "3", "--rng-seed", "5"];
    assert_eq!(qcluster(&bench, "").stdout, qcluster(&bench, "").stdout);
}

#[test]
fn bad_input_exits_with_one() {
    assert_eq!(qcluster(&["check-poly"], "{not json").status.code(), Some(1));
    assert_eq!(qcluster(&["mutate", "--seed", "sl2-standard", "--path", "0"], "").status.code(), Some(1));
    assert_eq!(qcluster(&["mutate", "--seed", "-", "--path", "x"], A2).status.code(), Some(1));
    let mut bad_d = monomial([0, 1, 0, 0]);
    bad_d = bad_d.replace("\"D\":1", "\"D\":0");
    let out = qcluster(&["check-poly"], &bad_d);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("D = 0"));
}

#[test]
fn fold_gives_the_b2_type_seed() {
    let out = qcluster(&["fold", "--seed", "-", "--orbits", "0,2|1"], A3_SYM);
    assert!(out.status.success());
    let v = json(&out);
    assert_eq!(v["rank"], 2);
    assert_eq!(v["d"], serde_json::json!([{ "num": 1, "den": 2 }, 1]));
    assert_eq!(v["form_num"], serde_json::json!([[0, 2], [-2, 0]]));
}

#[test]
fn amalgamating_two_sl2_seeds() {
    let args = ["amalgamate", "--seed", "sl2-standard", "--seed", "sl2-standard", "--gluing", "0,1,2,3|4,5,0,6", "--defrost", "0"];
    let v = json(&qcluster(&args, ""));
    assert_eq!(v["rank"], 7);
    assert_eq!(v["unfrozen"], serde_json::json!([true, true, false, true, false, true, true]));
    let coproduct = json(&qcluster(&["scenario", "sl2-coproduct", "--emit", "seed"], ""));
    assert_eq!(v["form_num"], coproduct["form_num"]);
}

#[test]
fn verify_reports_every_check() {
    let out = qcluster(&["verify"], "");
    let text = String::from_utf8(out.stdout).unwrap();
    assert_eq!(out.status.code(), Some(0), "{text}");
    assert_eq!(text.lines().filter(|l| l.starts_with("PASS")).count(), 7);
}
