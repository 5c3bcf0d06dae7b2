use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    let mut c = Command::new(env!("CARGO_BIN_EXE_coherekit"));
    c.env_remove("COHEREKIT_THREADS");
    c
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(o: &Output) -> String {
    String::from_utf8(o.stdout.clone()).unwrap()
}

fn stderr(o: &Output) -> String {
    String::from_utf8(o.stderr.clone()).unwrap()
}

fn json(o: &Output) -> Value {
    assert!(o.status.success(), "stderr: {}", stderr(o));
    serde_json::from_slice(&o.stdout).unwrap()
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_string()
}

fn qubit(re: [[f64; 2]; 2], im: [[f64; 2]; 2]) -> String {
    serde_json::json!({ "dim": 2, "re": re, "im": im }).to_string()
}

const PLUS: &str = r#"{"dim":2,"re":[[0.5,0.5],[0.5,0.5]],"im":[[0,0],[0,0]]}"#;

/// Row `(a, b)` of a figure CSV, as its value fields.
fn csv_row<'a>(csv: &'a str, a: &str, b: &str) -> Vec<&'a str> {
    let prefix = format!("{a},{b},");
    let line = csv
        .lines()
        .find(|l| l.starts_with(&prefix))
        .unwrap_or_else(|| panic!("no row {a},{b}"));
    line[prefix.len()..].split(',').collect()
}

fn g(x: f64) -> f64 {
    let up = (x + 1.0) / 2.0;
    let down = (x - 1.0) / 2.0;
    let t = |v: f64| if v <= 0.0 { 0.0 } else { v * v.log2() };
    t(up) - t(down)
}

#[test]
fn measure_on_plus_state() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "plus.json", PLUS);
    let v = json(&run(&["measure", &f, "l1"]));
    assert_eq!(v["measure"], "l1");
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-15);
    let v = json(&run(&["measure", &f, "robustness"]));
    assert!((v["value"].as_f64().unwrap() - 1.0).abs() < 1e-4);
    assert_eq!(v["certificate"].as_array().unwrap().len(), 2);
    assert_eq!(v["flagged_upper_bound"], false);
}

#[test]
fn diagonal_state_has_zero_coherence() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "diag.json", &qubit([[0.3, 0.0], [0.0, 0.7]], [[0.0; 2]; 2]));
    for m in ["l1", "relent", "tsallis:0.5", "tsallis:2", "robustness", "weight", "tracenorm", "geometric"] {
        let v = json(&run(&["measure", &f, m]));
        assert!(v["value"].as_f64().unwrap().abs() < 1e-4, "{m}: {v}");
    }
}

#[test]
fn gap_of_bloch_state() {
    let dir = tempfile::tempdir().unwrap();
    let f = write(dir.path(), "b.json", &qubit([[0.5, 0.15], [0.15, 0.5]], [[0.0, 0.2], [-0.2, 0.0]]));
    let v = json(&run(&["gap", &f, "l1"]));
    assert!((v["gap"].as_f64().unwrap() - 0.2).abs() < 1e-12);
    assert!((v["value_rho"].as_f64().unwrap() - 0.5).abs() < 1e-12);
    assert!((v["value_re_rho"].as_f64().unwrap() - 0.3).abs() < 1e-12);
    let real = write(dir.path(), "r.json", &qubit([[0.6, 0.2], [0.2, 0.4]], [[0.0; 2]; 2]));
    for m in ["l1", "relent", "robustness"] {
        let v = json(&run(&["gap", &real, m]));
        assert_eq!(v["gap"].as_f64().unwrap(), 0.0, "{m}");
    }
}

#[test]
fn stdin_input_and_csv_format() {
    use std::io::Write;
    let mut child = bin()
        .args(["measure", "-", "l1", "--format", "csv"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    child.stdin.take().unwrap().write_all(PLUS.as_bytes()).unwrap();
    let out = child.wait_with_output().unwrap();
    assert!(out.status.success());
    assert_eq!(stdout(&out), "measure,value,iterations,flagged_upper_bound\nl1,1,0,false\n");
}

#[test]
fn exit_codes_name_the_problem() {
    let dir = tempfile::tempdir().unwrap();
    let bad_json = write(dir.path(), "bad.json", "{\"dim\": 2");
    let o = run(&["measure", &bad_json, "l1"]);
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("parse error"));

    let not_psd = write(dir.path(), "neg.json", &qubit([[0.5, 0.9], [0.9, 0.5]], [[0.0; 2]; 2]));
    let o = run(&["measure", &not_psd, "l1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("positive semidefinite"));

    let trace = write(dir.path(), "tr.json", &qubit([[1.0, 0.0], [0.0, 1.0]], [[0.0; 2]; 2]));
    let o = run(&["gap", &trace, "l1"]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("trace"));

    let plus = write(dir.path(), "plus.json", PLUS);
    assert_eq!(run(&["measure", &plus, "nonsense"]).status.code(), Some(2));
    assert_eq!(run(&["measure", &plus, "tsallis:1"]).status.code(), Some(2));
    assert_eq!(run(&["measure", "/no/such/file", "l1"]).status.code(), Some(2));
    assert_eq!(run(&["fig1", "--steps", "1"]).status.code(), Some(2));
    assert_eq!(run(&["frobnicate"]).status.code(), Some(2));

    let o = bin().args(["fig1", "--steps", "3"]).env("COHEREKIT_THREADS", "zero").output().unwrap();
    assert_eq!(o.status.code(), Some(2));
    assert!(stderr(&o).contains("COHEREKIT_THREADS"));
}

#[test]
fn fig1_rows() {
    let o = run(&["fig1", "--steps", "21"]);
    assert!(o.status.success());
    let csv = stdout(&o);
    assert!(csv.starts_with("x,y,gap\n"));
    assert_eq!(csv.lines().count(), 1 + 21 * 21);
    assert_eq!(csv_row(&csv, "0", "0"), ["0"]);
    assert_eq!(csv_row(&csv, "0", "0.5"), ["0.5"]);
    assert_eq!(csv_row(&csv, "0.3", "0.4"), ["0.2"]);
    assert_eq!(csv_row(&csv, "0.9", "0.9"), [""]);
}

#[test]
fn fig2_rows() {
    let csv = stdout(&run(&["fig2", "--steps", "5"]));
    assert!(csv.starts_with("re_alpha,im_alpha,gap_pipeline,gap_closed_form\n"));
    assert_eq!(csv_row(&csv, "0", "0"), ["0", "0"]);
    let at_i = csv_row(&csv, "0", "1");
    for v in at_i {
        assert!((v.parse::<f64>().unwrap() - 2.0).abs() < 1e-9);
    }
    for re in ["-2", "-1", "0", "1", "2"] {
        assert_eq!(csv_row(&csv, re, "0"), ["0", "0"]);
    }
}

#[test]
fn fig3_reports_both_formulas() {
    let csv = stdout(&run(&["fig3", "--steps", "7"]));
    assert!(csv.starts_with("re_zeta,im_zeta,gap_pipeline,gap_paper_formula,discrepancy\n"));
    assert_eq!(csv_row(&csv, "0", "0"), ["0", "0", "0"]);
    assert_eq!(csv_row(&csv, "1", "0"), ["0", "0", "0"]);
    let row: Vec<f64> = csv_row(&csv, "0", "0.5").iter().map(|v| v.parse().unwrap()).collect();
    let sh = 1f64.sinh();
    let pipeline = g((1.0 + sh * sh).sqrt());
    let printed = g(1.0 + sh * sh);
    assert!((row[0] - pipeline).abs() < 1e-9, "{row:?}");
    assert!((row[1] - printed).abs() < 1e-9, "{row:?}");
    assert!((row[2] - (printed - pipeline)).abs() < 1e-9);
    assert!(row[2] > 0.1);
}

#[test]
fn figures_are_byte_stable() {
    let dir = tempfile::tempdir().unwrap();
    for fig in ["fig1", "fig2", "fig3"] {
        let a = dir.path().join(format!("{fig}-a.csv"));
        let b = dir.path().join(format!("{fig}-b.csv"));
        assert!(run(&[fig, "--steps", "31", "--out", a.to_str().unwrap()]).status.success());
        let o = bin()
            .args([fig, "--steps", "31", "--out", b.to_str().unwrap()])
            .env("COHEREKIT_THREADS", "1")
            .output()
            .unwrap();
        assert!(o.status.success());
        assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap(), "{fig}");
    }
}

#[test]
fn figure_json_format() {
    let v = json(&run(&["fig1", "--steps", "3", "--format", "json"]));
    assert_eq!(v["columns"], serde_json::json!(["x", "y", "gap"]));
    assert_eq!(v["rows"].as_array().unwrap().len(), 9);
    assert!(v["rows"][0][2].is_null());
}

#[test]
fn gaussian_measure_on_coherent_state() {
    let dir = tempfile::tempdir().unwrap();
    // α = i: mean (2 Re α, 2 Im α), vacuum covariance.
    let f = write(dir.path(), "coh.json", r#"{"modes":1,"mean":[0,2],"cov":[[1,0],[0,1]]}"#);
    let v = json(&run(&["gaussian-measure", &f]));
    assert!((v["c_gr"].as_f64().unwrap() - g(3.0)).abs() < 1e-9);
    assert!((v["gr_real_gap"]["gap"].as_f64().unwrap() - 2.0).abs() < 1e-9);
    let bad = write(dir.path(), "bad.json", r#"{"modes":1,"mean":[0,0],"cov":[[0.5,0],[0,0.5]]}"#);
    let o = run(&["gaussian-measure", &bad]);
    assert_eq!(o.status.code(), Some(3));
    assert!(stderr(&o).contains("uncertainty"));
}

#[test]
fn verify_filter_and_determinism() {
    let a = run(&["verify", "--filter", "theorem5", "--trials", "20", "--seed", "9"]);
    let b = bin()
        .args(["verify", "--filter", "theorem5", "--trials", "20", "--seed", "9"])
        .env("COHEREKIT_THREADS", "1")
        .output()
        .unwrap();
    assert_eq!(a.stdout, b.stdout);
    let v = json(&a);
    assert_eq!(v["pass"], true);
    let ids: Vec<&str> = v["checks"].as_array().unwrap().iter().map(|c| c["check_id"].as_str().unwrap()).collect();
    assert_eq!(ids, ["gaussian.theorem5"]);
    assert_eq!(v["checks"][0]["trials"], 20);
    assert_eq!(run(&["verify", "--filter", "no-such-check"]).status.code(), Some(2));
    assert_eq!(run(&["verify", "--filter", "theorem5", "--trials", "0"]).status.code(), Some(2));
}
