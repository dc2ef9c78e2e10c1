//! End-to-end runs of the `exseq` binary.

use std::path::PathBuf;
use std::process::{Command, Output};

fn exseq(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_exseq")).args(args).output().expect("binary runs")
}

fn fixture(name: &str, body: &str) -> String {
    let path = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join(name);
    std::fs::write(&path, body).unwrap();
    path.to_string_lossy().into_owned()
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn json(o: &Output) -> serde_json::Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

const X2: &str = r#"{"kind":"cotangent","ell":2}"#;
/// First member of the helix class whose sequences are all strong.
const CLASS_II: &str = "[[0,0],[0,1],[1,1],[0,2],[1,2],[1,3]]";

#[test]
fn unknown_subcommand_exits_two() {
    assert_eq!(exseq(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn check_reports_class_ii_strong() {
    let spec = fixture("check_x2.json", X2);
    let classify_seq = fixture("check_seq.json", CLASS_II);
    let label = exseq(&["classify-x2", "--sequence", &classify_seq]);
    assert!(label.status.success(), "{}", String::from_utf8_lossy(&label.stderr));
    assert_eq!(json(&label)["label"]["class"], "II");
    let out = exseq(&["check", "--spec", &spec, "--sequence", &classify_seq]);
    assert!(out.status.success());
    let report = json(&out);
    assert_eq!(report["exceptional_set"], true);
    assert_eq!(report["strong"], true);
    assert_eq!(report["maximal"], true);
}

#[test]
fn malformed_spec_names_the_json_pointer() {
    let spec = fixture("bad_spec.json", r#"{"kind":"toric","ell":1,"v":1,"c":[0,"x"]}"#);
    let seq = fixture("bad_seq_ok.json", "[[0,0]]");
    let out = exseq(&["check", "--spec", &spec, "--sequence", &seq]);
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"/c/1\""));
    let seq = fixture("bad_seq.json", "[[0,0],[1,true]]");
    let spec = fixture("good_spec.json", X2);
    let out = exseq(&["check", "--spec", &spec, "--sequence", &seq]);
    assert!(String::from_utf8_lossy(&out.stderr).contains("\"/1/1\""));
}

#[test]
fn enumeration_is_byte_stable() {
    let spec = fixture("enum_x2.json", X2);
    let a = exseq(&["enumerate", "--spec", &spec, "--window", "5"]);
    let b = exseq(&["enumerate", "--spec", &spec, "--window", "5"]);
    assert!(a.status.success());
    assert_eq!(a.stdout, b.stdout);
    let lines: Vec<serde_json::Value> = stdout(&a).lines().map(|l| serde_json::from_str(l).unwrap()).collect();
    assert!(!lines.is_empty());
    assert!(lines.iter().all(|l| l["bundles"].as_array().unwrap().len() == 6));
}

#[test]
fn reduce_ends_in_orlov_type() {
    let seq = fixture("reduce_seq.json", CLASS_II);
    let out = exseq(&["reduce", "--sequence", &seq]);
    assert!(out.status.success());
    assert_eq!(json(&out)["orlov"], "rows");
}

#[test]
fn rouquier_on_x2_is_exact() {
    let spec = fixture("rouquier_x2.json", X2);
    let report = json(&exseq(&["rouquier", "--spec", &spec]));
    assert_eq!(report["dim"], 3);
    assert_eq!(report["i0"], 0);
    assert_eq!(report["rouquier"], serde_json::json!({"kind": "exact", "value": 3}));
}

#[test]
fn loci_render_marks_origin_and_canonical() {
    let spec = fixture("loci_f2.json", r#"{"kind":"toric","ell":1,"v":1,"c":[0,-2]}"#);
    let ascii = stdout(&exseq(&["loci", "--spec", &spec, "--window", "4"]));
    assert!(ascii.contains('O') && ascii.contains('K'));
    let svg = stdout(&exseq(&["loci", "--spec", &spec, "--window", "3", "--format", "svg"]));
    assert!(svg.starts_with("<svg") && svg.contains("H^2"));
}

#[test]
fn poset_and_out_flag() {
    let spec = fixture("poset_x2.json", X2);
    let seq = fixture("poset_seq.json", CLASS_II);
    let dest = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("poset_out.json");
    let out = exseq(&["poset", "--spec", &spec, "--sequence", &seq, "--out", dest.to_str().unwrap()]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(dest).unwrap()).unwrap();
    assert!(report["exceptional_orders"].as_u64().unwrap() >= 1);
}

#[test]
fn verify_paper_single_section() {
    let out = exseq(&["verify-paper", "--section", "x2-rewrite-sequence"]);
    assert!(out.status.success());
    assert!(stdout(&out).starts_with("[PASS] criterion  9"));
    assert_eq!(exseq(&["verify-paper", "--section", "99"]).status.code(), Some(1));
}

#[test]
fn thread_count_from_environment() {
    let spec = fixture("threads_x2.json", X2);
    let out = Command::new(env!("CARGO_BIN_EXE_exseq"))
        .args(["rouquier", "--spec", &spec])
        .env("EXSEQ_THREADS", "2")
        .output()
        .unwrap();
    assert!(out.status.success());
    let bad = Command::new(env!("CARGO_BIN_EXE_exseq"))
        .args(["rouquier", "--spec", &spec])
        .env("EXSEQ_THREADS", "many")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(1));
}
