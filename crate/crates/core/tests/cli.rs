use std::fs;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};
use stabkit::cli::{run, EXIT_INPUT, EXIT_NUMERICAL, EXIT_OK};
use tempfile::TempDir;

struct Run {
    code: i32,
    stdout: String,
    stderr: String,
}

impl Run {
    fn json(&self) -> Value {
        serde_json::from_str(&self.stdout).unwrap_or_else(|e| panic!("{e}: {}", self.stdout))
    }
}

fn stabkit(args: &[&str]) -> Run {
    let mut out = Vec::new();
    let mut err = Vec::new();
    let argv = std::iter::once("stabkit").chain(args.iter().copied());
    let code = run(argv, &mut out, &mut err);
    Run { code, stdout: String::from_utf8(out).unwrap(), stderr: String::from_utf8(err).unwrap() }
}

fn write(dir: &Path, name: &str, v: &Value) -> String {
    let p: PathBuf = dir.join(name);
    fs::write(&p, v.to_string()).unwrap();
    p.to_str().unwrap().to_string()
}

#[test]
fn two_to_one_points_are_unstable() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "p.json", &json!({"points": [[0, 0, 1], [1, 0, 0]], "multiplicities": [2, 1]}));
    let r = stabkit(&["points", "classify", &f, "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let v = r.json();
    assert_eq!(v["schema_version"], 1);
    assert_eq!(v["seed"], 0);
    assert_eq!(v["result"]["class"], "Unstable");
    assert_eq!(v["result"]["witness"], 0);
}

#[test]
fn empty_weight_list_is_a_schema_error() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "w.json", &json!({"dim": 2, "weights": []}));
    let r = stabkit(&["hm", &f]);
    assert_eq!(r.code, EXIT_INPUT);
    assert!(r.stderr.contains("weight list is empty"));
    let v = r.json();
    assert_eq!(v["error"]["kind"], "input");
    assert_eq!(v["error"]["pointer"], "/weights");
}

#[test]
fn type_errors_carry_a_pointer() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "w.json", &json!({"dim": 2, "weights": [[1, 0], [0, "x"]]}));
    let r = stabkit(&["hm", &f]);
    assert_eq!(r.code, EXIT_INPUT);
    assert_eq!(r.json()["error"]["pointer"], "/weights/1/1");
}

#[test]
fn missing_file_and_bad_flags_exit_two() {
    assert_eq!(stabkit(&["hm", "/nonexistent/input.json"]).code, EXIT_INPUT);
    assert_eq!(stabkit(&["hm"]).code, EXIT_INPUT);
    assert_eq!(stabkit(&["frobnicate"]).code, EXIT_INPUT);
}

#[test]
fn unconverged_balancing_is_a_numerical_abort() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "phi.json", &json!({"family": "bump", "amp": 0.3, "center": 0.25}));
    let r = stabkit(&["metric", "balance", "--r", "8", "--phi", &f, "--max-iter", "1"]);
    assert_eq!(r.code, EXIT_NUMERICAL);
    assert_eq!(r.json()["error"]["kind"], "numerical");
}

#[test]
fn suite_is_byte_reproducible() {
    let a = stabkit(&["points", "suite", "--count", "30", "--seed", "7", "--json"]);
    let b = stabkit(&["points", "suite", "--count", "30", "--seed", "7", "--json"]);
    assert_eq!(a.code, EXIT_OK);
    assert_eq!(a.stdout, b.stdout);
    let c = stabkit(&["points", "suite", "--count", "30", "--seed", "8", "--json"]);
    assert_ne!(a.stdout, c.stdout);
    assert_eq!(a.json()["seed"], 7);
}

#[test]
fn suite_reports_one_row_per_config() {
    let dir = TempDir::new().unwrap();
    let csv = dir.path().join("suite.csv");
    let r = stabkit(&["points", "suite", "--count", "200", "--json", "--csv", csv.to_str().unwrap()]);
    let v = r.json();
    assert_eq!(v["result"]["rows"].as_array().unwrap().len(), 200);
    assert_eq!(v["result"]["agreed"], 200);
    let text = fs::read_to_string(csv).unwrap();
    assert_eq!(text.lines().count(), 201);
    assert!(text.starts_with("index,multiplicities,class,outcome,iterations,final_moment_norm,agrees"));
}

#[test]
fn flow_writes_trace_csv() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "h.json", &json!({"kind": "hyperbola", "x": [1.0, 0.0], "y": [0.5, 0.0], "a": 1.0}));
    let csv = dir.path().join("trace.csv");
    let r = stabkit(&["flow", &f, "--json", "--csv", csv.to_str().unwrap()]);
    assert_eq!(r.code, EXIT_OK);
    let v = r.json();
    assert_eq!(v["result"]["status"], "Balanced");
    assert!(v["result"]["conserved_drift"].as_f64().unwrap() < 1e-12);
    let text = fs::read_to_string(csv).unwrap();
    assert!(text.starts_with("iter,moment_norm,step\n"));
    assert!(text.lines().count() > 2);
}

#[test]
fn unknown_instance_kind_is_rejected() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "i.json", &json!({"kind": "torus", "x": 1}));
    assert_eq!(stabkit(&["flow", &f]).code, EXIT_INPUT);
}

#[test]
fn empty_batch_is_an_empty_report() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &json!({"command": "hm", "inputs": []}));
    let r = stabkit(&["batch", &m, "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let v = r.json();
    assert_eq!(v["result"]["rows"], json!([]));
    assert_eq!(v["result"]["summary"]["total"], 0);
}

#[test]
fn batch_isolates_failing_rows() {
    let dir = TempDir::new().unwrap();
    write(dir.path(), "good.json", &json!({"dim": 1, "weights": [[1], [-1]]}));
    let m = write(
        dir.path(),
        "m.json",
        &json!({"command": "hm", "inputs": ["good.json", {"dim": 2, "weights": []}, "missing.json", {"dim": 1, "weights": [[2]]}]}),
    );
    let r = stabkit(&["batch", &m, "--json"]);
    assert_eq!(r.code, EXIT_OK);
    let rows = r.json()["result"]["rows"].clone();
    let ok: Vec<bool> = rows.as_array().unwrap().iter().map(|r| r["ok"].as_bool().unwrap()).collect();
    assert_eq!(ok, [true, false, false, true]);
    assert_eq!(rows[0]["result"]["class"], "Stable");
    assert_eq!(rows[1]["error"]["pointer"], "/weights");
    assert_eq!(rows[3]["result"]["class"], "Unstable");
}

#[test]
fn batch_rejects_unknown_command() {
    let dir = TempDir::new().unwrap();
    let m = write(dir.path(), "m.json", &json!({"command": "nope", "inputs": [{}]}));
    let r = stabkit(&["batch", &m]);
    assert_eq!(r.code, EXIT_INPUT);
    assert_eq!(r.json()["error"]["pointer"], "/command");
}

#[test]
fn slope_commands_are_exact() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", &json!({"family": "curve", "genus": 0, "degree": 1}));
    let v = stabkit(&["slope", "mu", "--family", &f, "--c", "1/2", "--json"]).json();
    assert_eq!(v["result"]["mu_c"], "2/3");
    let v = stabkit(&["df", "--family", &f, "--c", "1", "--json"]).json();
    assert_eq!(v["result"]["df"], "0");
    let v = stabkit(&["slope", "chow", "--family", &f, "--c", "1", "--json"]).json();
    assert_eq!(v["result"]["ch_c"], "2");
    assert_eq!(v["result"]["ch_x"], "2");
    let csv = dir.path().join("w.csv");
    let r = stabkit(&["weights", "--family", &f, "--r-max", "20", "--json", "--csv", csv.to_str().unwrap()]);
    let entries = r.json()["result"]["entries"].clone();
    assert!(entries.as_array().unwrap().iter().all(|e| e["difference"] == "0"));
    assert!(fs::read_to_string(csv).unwrap().starts_with("r,k,w,predicted,difference"));
}

#[test]
fn bad_rational_is_input_error() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "f.json", &json!({"family": "curve", "genus": 0, "degree": 1}));
    assert_eq!(stabkit(&["slope", "mu", "--family", &f, "--c", "one"]).code, EXIT_INPUT);
    assert_eq!(stabkit(&["slope", "mu", "--family", &f, "--c", "3"]).code, EXIT_INPUT);
}

#[test]
fn text_mode_prints_one_line_per_field() {
    let dir = TempDir::new().unwrap();
    let f = write(dir.path(), "h.json", &json!({"degree": 2, "nvars": 3, "monomials": [[2, 0, 0], [0, 2, 0], [0, 0, 2]]}));
    let r = stabkit(&["hypersurface", &f]);
    assert_eq!(r.code, EXIT_OK);
    assert!(r.stdout.lines().any(|l| l == "class: Stable"), "{}", r.stdout);
}
