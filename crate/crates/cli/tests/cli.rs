use std::path::{Path, PathBuf};

use assert_cmd::Command;
use serde_json::Value;

fn fixture(name: &str) -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures").join(name)
}

fn semialg() -> Command {
    let mut cmd = Command::cargo_bin("semialg").unwrap();
    cmd.env("SEMIALG_THREADS", "2");
    cmd
}

fn run_json(args: &[&str]) -> Value {
    let out = semialg().args(args).output().unwrap();
    assert!(out.status.success(), "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).unwrap()
}

fn strip_version(mut v: Value) -> String {
    v.as_object_mut().unwrap().remove("version");
    serde_json::to_string_pretty(&v).unwrap() + "\n"
}

/// Compares against `tests/golden/<name>.json`; set `SEMIALG_BLESS=1` to
/// rewrite the file instead.
fn golden(name: &str, args: &[&str]) {
    let got = strip_version(run_json(args));
    let path = Path::new(env!("CARGO_MANIFEST_DIR")).join("tests/golden").join(format!("{name}.json"));
    if std::env::var_os("SEMIALG_BLESS").is_some() {
        std::fs::write(&path, &got).unwrap();
        return;
    }
    let want = std::fs::read_to_string(&path).unwrap_or_else(|_| panic!("missing golden file {}", path.display()));
    assert_eq!(got, want, "golden mismatch for {name}");
}

#[test]
fn golden_parse() {
    golden("parse", &["parse", "--poly", "(x + y)^2 - 1", "--poly", "3/2*x*y^2", "--vars", "x,y"]);
}

#[test]
fn golden_roots() {
    golden("roots", &["roots", "--poly", "x^3 - 2*x"]);
}

#[test]
fn golden_thom() {
    golden("thom", &["thom", "--poly", "x^3 - 3*x + 1"]);
}

#[test]
fn golden_signcond1d() {
    golden("signcond1d", &["signcond1d", "--problem", fixture("signcond.json").to_str().unwrap()]);
}

#[test]
fn golden_cad2d() {
    golden("cad2d", &["cad2d", "--problem", fixture("cad_parabola.json").to_str().unwrap()]);
}

const GRAPH: &str = r#"{"arity":2,"node":{"op":"atom","poly":"y - x^2","rel":"eq0"}}"#;

#[test]
fn golden_growth_check() {
    golden("growth_check", &["growth-check", "--poly", "y - x^2", "--vars", "x,y", "--selector", GRAPH, "--p", "2", "--x-min", "1", "--x-max", "64"]);
}

#[test]
fn golden_dist() {
    golden("dist", &["dist", "--points", "0,0;3,4", "--point", "-1,1", "--vars", "x,y"]);
}

#[test]
fn golden_residual() {
    golden("residual", &["residual", "--ineq", "x^2 - 1", "--eq", "x + y", "--point", "2,-1", "--vars", "x,y"]);
}

#[test]
fn golden_bounds() {
    golden("bounds", &["bounds", "--d", "2", "--n", "1"]);
}

#[test]
fn golden_estimate_loja() {
    golden("estimate_loja", &["estimate-loja", "--problem", fixture("loja_example.json").to_str().unwrap()]);
}

#[test]
fn golden_estimate_errorbound() {
    golden("estimate_errorbound", &["estimate-errorbound", "--problem", fixture("errorbound_cubic.json").to_str().unwrap()]);
}

#[test]
fn golden_newton_slope() {
    golden("newton_slope", &["newton-slope", "--poly", "y^3 - e^2", "--vars", "e,y"]);
}

#[test]
fn golden_sos_rate() {
    golden("sos_rate", &["sos-rate", "--c", "1", "--f-norm", "1", "--deg-f", "4", "--n", "2", "--rho", "2", "--t", "10"]);
}

#[test]
fn bounds_reports_loja_bound() {
    let v = run_json(&["bounds", "--d", "2", "--n", "1"]);
    assert_eq!(v["result"]["loja_bound"], "18446744073709551616");
    assert_eq!(v["command"], "bounds");
    assert!(v["version"].is_string());
}

#[test]
fn signcond1d_lists_seven_cells_in_order() {
    let v = run_json(&["signcond1d", "--poly", "x", "--poly", "x^2 - 1"]);
    let cells = v["result"]["cells"].as_array().unwrap();
    assert_eq!(cells.len(), 7);
    let signs: Vec<Value> = cells.iter().map(|c| c["signs"].clone()).collect();
    let want: Vec<Value> = [[-1, 1], [-1, 0], [-1, -1], [0, -1], [1, -1], [1, 0], [1, 1]]
        .iter()
        .map(|s| serde_json::json!(s))
        .collect();
    assert_eq!(signs, want);
}

#[test]
fn estimate_loja_example_is_near_four() {
    let v = run_json(&["estimate-loja", "--example-paper", "--d", "2", "--n", "2"]);
    let e = v["result"]["exponent"].as_f64().unwrap();
    assert!((e - 4.0).abs() < 0.2, "{e}");
    assert_eq!(v["result"]["within_bound"], true);
}

#[test]
fn same_seed_same_bytes() {
    let problem = fixture("errorbound_cubic.json");
    let args = ["estimate-errorbound", "--problem", problem.to_str().unwrap()];
    let a = semialg().args(args).output().unwrap().stdout;
    let b = semialg().env("SEMIALG_THREADS", "1").args(args).output().unwrap().stdout;
    assert_eq!(a, b);
}

#[test]
fn dump_spec_round_trips() {
    let dir = tempfile::tempdir().unwrap();
    let problem = fixture("errorbound_cubic.json");
    let runs: [&[&str]; 3] = [
        &["estimate-errorbound", "--problem", problem.to_str().unwrap(), "--bins", "12"],
        &["signcond1d", "--poly", "x^3 - x", "--poly", "x - 1/2"],
        &["growth-check", "--poly", "y - x^2", "--vars", "x,y", "--selector", GRAPH, "--p", "2", "--x-min", "-4", "--x-max", "-1"],
    ];
    for (i, args) in runs.iter().enumerate() {
        let dumped = semialg().args(*args).arg("--dump-spec").output().unwrap();
        assert!(dumped.status.success());
        let path = dir.path().join(format!("spec{i}.json"));
        std::fs::write(&path, &dumped.stdout).unwrap();

        let direct = semialg().args(*args).output().unwrap().stdout;
        let replay = semialg().arg(args[0]).arg("--problem").arg(&path).output().unwrap().stdout;
        assert_eq!(direct, replay, "{args:?}");

        let again = semialg().arg(args[0]).arg("--problem").arg(&path).arg("--dump-spec").output().unwrap().stdout;
        assert_eq!(again, dumped.stdout);
    }
}

#[test]
fn out_and_csv_files() {
    let dir = tempfile::tempdir().unwrap();
    let out = dir.path().join("report.json");
    let csv = dir.path().join("env.csv");
    semialg()
        .args(["estimate-errorbound", "--problem", fixture("errorbound_cubic.json").to_str().unwrap()])
        .arg("--out")
        .arg(&out)
        .arg("--csv")
        .arg(&csv)
        .assert()
        .success()
        .stdout("");
    let report: Value = serde_json::from_str(&std::fs::read_to_string(&out).unwrap()).unwrap();
    let rows = report["result"]["rows"].as_u64().unwrap() as usize;
    let text = std::fs::read_to_string(&csv).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next(), Some("eps,phi,count"));
    assert_eq!(lines.count(), rows);
}

#[test]
fn malformed_problem_file_names_the_pointer() {
    let out = semialg().args(["bounds", "--problem", fixture("bad_type.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/params/d"));

    let out = semialg().args(["roots", "--problem", fixture("bad_poly.json").to_str().unwrap()]).output().unwrap();
    assert_eq!(out.status.code(), Some(1));
    assert!(String::from_utf8_lossy(&out.stderr).contains("/polys/1"));
}

#[test]
fn exit_codes() {
    semialg().arg("frobnicate").assert().code(1);
    semialg().args(["roots"]).assert().code(1);
    semialg().args(["roots", "--poly", "x^2 +"]).assert().code(1);
    semialg().args(["bounds", "--d", "0", "--n", "1"]).assert().code(1);
    semialg().args(["estimate-loja", "--problem", fixture("thin_region.json").to_str().unwrap()]).assert().code(2);
    semialg().args(["bounds", "--d", "3", "--n", "2"]).assert().code(0);
    semialg().arg("--help").assert().code(0);
}
