use std::path::PathBuf;
use std::process::{Command, Output};

fn data(name: &str) -> String {
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../data").join(name);
    root.to_string_lossy().into_owned()
}

fn fhs(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_fhs")).args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).expect("utf-8 output")
}

fn scratch(name: &str, text: &str) -> String {
    let p = std::env::temp_dir().join(format!("fhs-cli-{}-{name}", std::process::id()));
    std::fs::write(&p, text).unwrap();
    p.to_string_lossy().into_owned()
}

#[test]
fn validate_reports_status() {
    let o = fhs(&["validate", &data("nodal-cubic.fhs")]);
    assert_eq!(o.status.code(), Some(0));
    assert!(stdout(&o).starts_with("valid; special: yes; etale: yes\n"));
    let o = fhs(&["validate", &data("punctured-elliptic-2.sharp")]);
    assert!(stdout(&o).starts_with("valid; special: yes; etale: no\n"));
}

#[test]
fn esv_on_the_cubics() {
    let o = fhs(&["esv", &data("nodal-cubic.sharp")]);
    assert_eq!(o.status.code(), Some(0));
    let out = stdout(&o);
    assert!(out.starts_with("fingerprint (vec 0, torus 1, lattice 1)\ncertificate PASS"), "{out}");
    let out = stdout(&fhs(&["esv", &data("cuspidal-cubic.sharp")]));
    assert!(out.starts_with("fingerprint (vec 1, torus 0, lattice 0)\ncertificate PASS"), "{out}");
}

#[test]
fn k0_prints_both_polynomials() {
    let out = stdout(&fhs(&["k0", &data("elliptic.fhs")]));
    assert_eq!(out, "f(t) coefficients: [0, 0]\ng(u,v) coefficients: [(0,1):1, (1,0):1]\n");
}

#[test]
fn fw_certificates() {
    for points in ["1", "2"] {
        let o = fhs(&[
            "fw",
            &data(&format!("fw-elliptic-{points}.lie")),
            "--z",
            &data(&format!("fw-elliptic-{points}-z.subspace")),
            "--level-one",
            &data(&format!("fw-elliptic-{points}.fhs")),
        ]);
        assert_eq!(o.status.code(), Some(0));
        assert!(stdout(&o).contains("certificate PASS"));
    }
}

#[test]
fn shipped_corpus_is_current() {
    let o = fhs(&["corpus", &data(""), "--check"]);
    assert_eq!(o.status.code(), Some(0), "{}", stdout(&o));
}

#[test]
fn output_is_byte_deterministic() {
    let runs: Vec<Vec<String>> = vec![
        vec!["validate".into(), data("generic-level2.fhs")],
        vec!["decompose".into(), data("generic-level2.fhs")],
        vec!["k0".into(), data("generic-level2.fhs")],
        vec!["hom".into(), data("elliptic.fhs"), data("elliptic.fhs")],
        vec!["ext".into(), data("elliptic.fhs"), "--tate".into(), "1".into()],
        vec!["jacobian".into(), data("nodal-cubic.fhs"), "--p".into(), "1".into()],
        vec!["esv".into(), data("surface-d2.sharp")],
        vec!["sharp".into(), data("surface-d2.sharp")],
        vec!["shift-level".into(), data("elliptic.fhs"), "--via".into(), "iota".into()],
        vec!["twist".into(), data("elliptic.fhs"), "--k".into(), "-1".into()],
        vec!["--json".into(), "validate".into(), data("elliptic.mhs")],
    ];
    for args in runs {
        let a: Vec<&str> = args.iter().map(String::as_str).collect();
        let (x, y) = (fhs(&a), fhs(&a));
        assert_eq!(x.status.code(), Some(0), "{a:?}: {}", String::from_utf8_lossy(&x.stderr));
        assert_eq!(x.stdout, y.stdout, "{a:?}");
    }
}

#[test]
fn emitted_documents_feed_back_in() {
    let raised = stdout(&fhs(&["shift-level", &data("elliptic.fhs"), "--via", "tau", "--k", "2"]));
    let p = scratch("raised.fhs", &raised);
    let o = fhs(&["shift-level", &p, "--via", "tau", "--k", "2", "--down"]);
    assert_eq!(o.status.code(), Some(0));
    let back = scratch("back.fhs", &stdout(&o));
    assert_eq!(stdout(&fhs(&["validate", &back])), stdout(&fhs(&["validate", &data("elliptic.fhs")])));
}

#[test]
fn exit_codes() {
    assert_eq!(fhs(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(fhs(&["ext", &data("elliptic.fhs")]).status.code(), Some(2));
    assert_eq!(fhs(&["validate", "/nonexistent/x.fhs"]).status.code(), Some(2));
    let bad = std::fs::read_to_string(data("nodal-cubic.fhs")).unwrap().replacen("\"1\"", "\"1/0\"", 1);
    let o = fhs(&["validate", &scratch("bad.fhs", &bad)]);
    assert_eq!(o.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&o.stderr).contains("zero denominator"));
    // esv needs de Rham data, not a bare object
    let o = fhs(&["esv", &data("elliptic.fhs")]);
    assert_eq!(o.status.code(), Some(1));
}
