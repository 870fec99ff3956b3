use std::process::{Command, Output};

use curvclass::corpus::CORPUS_NAMES;

fn curvclass(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_curvclass"))
        .args(args)
        .output()
        .expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn eval_prints_exact_components() {
    let r = curvclass(&["eval", "product_example", "--tensor", "riemann", "--point", "1,1,1,1"]);
    assert_eq!(r.status.code(), Some(0));
    assert!(stdout(&r).lines().any(|l| l == "R_1212 = 1/2"), "{}", stdout(&r));

    let s = curvclass(&["eval", "product_example", "--tensor", "ricci", "--point", "1,1,1,1"]);
    assert!(stdout(&s).lines().any(|l| l == "S_11 = -1/2"));

    let k = curvclass(&["eval", "product_example", "--tensor", "scalar", "--point", "1,1,1,1"]);
    assert_eq!(stdout(&k).trim(), "kappa = -2");
}

#[test]
fn eval_at_a_pole_is_degenerate() {
    let r = curvclass(&["eval", "product_example", "--tensor", "riemann", "--point", "0,1,1,1"]);
    assert_eq!(r.status.code(), Some(3));
}

#[test]
fn corpus_listing_and_show_round_trip() {
    let list = curvclass(&["corpus", "list"]);
    let names: Vec<String> = stdout(&list).lines().map(str::to_owned).collect();
    assert_eq!(names, CORPUS_NAMES);

    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("flat.tomlish");
    std::fs::write(&path, stdout(&curvclass(&["corpus", "show", "flat"]))).unwrap();
    let r = curvclass(&[
        "eval",
        path.to_str().unwrap(),
        "--tensor",
        "riemann",
        "--point",
        "1,2,3,4",
    ]);
    assert_eq!(r.status.code(), Some(0));
    assert_eq!(stdout(&r).trim(), "all components of riemann vanish");
}

#[test]
fn unknown_inputs_are_usage_errors() {
    assert_eq!(curvclass(&["frobnicate"]).status.code(), Some(1));
    assert_eq!(curvclass(&["verify", "no_such_manifest"]).status.code(), Some(1));
    assert_eq!(
        curvclass(&["analyze", "flat", "--structures", "sgk,bogus"])
            .status
            .code(),
        Some(1)
    );
}

#[test]
fn analyze_writes_json_report() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("report.json");
    let r = curvclass(&["analyze", "conformal_sphere", "--json", path.to_str().unwrap()]);
    assert_eq!(r.status.code(), Some(0), "{}", stdout(&r));
    let doc: serde_json::Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    for key in [
        "manifest",
        "curvature",
        "structures",
        "theorems",
        "excluded_loci",
        "numeric_checks",
    ] {
        assert!(doc.get(key).is_some(), "missing {key}");
    }
}

#[test]
fn every_corpus_entry_verifies() {
    for name in CORPUS_NAMES {
        let r = curvclass(&["verify", name]);
        assert_eq!(r.status.code(), Some(0), "{name}:\n{}", stdout(&r));
    }
}

#[test]
fn flipped_curvature_sign_fails_verification() {
    let r = curvclass(&["verify", "product_example", "--flip-riemann-sign"]);
    assert_eq!(r.status.code(), Some(2));
}
