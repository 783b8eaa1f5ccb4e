use std::path::{Path, PathBuf};
use std::process::{Command, Output};

use serde_json::Value;
use tempfile::TempDir;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_gatesplit"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exit code")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).unwrap_or_else(|e| {
        panic!("stdout is not JSON ({e}): {}", String::from_utf8_lossy(&o.stdout))
    })
}

fn write(dir: &TempDir, name: &str, contents: &str) -> PathBuf {
    let p = dir.path().join(name);
    std::fs::write(&p, contents).unwrap();
    p
}

fn corpus(dir: &TempDir, args: &[&str]) -> PathBuf {
    let out = run(&[&["gates"], args].concat());
    assert_eq!(code(&out), 0, "{}", String::from_utf8_lossy(&out.stderr));
    write(dir, &format!("{}.json", args.join("_")), std::str::from_utf8(&out.stdout).unwrap())
}

fn p(path: &Path) -> &str {
    path.to_str().unwrap()
}

/// Gate file JSON written out by hand.
fn gate_file(dims: &[usize], rows: &[Vec<(f64, f64)>]) -> String {
    let rows: Vec<Value> = rows
        .iter()
        .map(|r| Value::Array(r.iter().map(|&(a, b)| serde_json::json!([a, b])).collect()))
        .collect();
    serde_json::json!({ "dims": dims, "matrix": rows }).to_string()
}

fn kron(a: &[Vec<(f64, f64)>], b: &[Vec<(f64, f64)>]) -> Vec<Vec<(f64, f64)>> {
    let (m, n) = (a.len(), b.len());
    (0..m * n)
        .map(|i| {
            (0..m * n)
                .map(|j| {
                    let (x, y) = (a[i / n][j / n], b[i % n][j % n]);
                    (x.0 * y.0 - x.1 * y.1, x.0 * y.1 + x.1 * y.0)
                })
                .collect()
        })
        .collect()
}

fn hadamard() -> Vec<Vec<(f64, f64)>> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    vec![vec![(h, 0.0), (h, 0.0)], vec![(h, 0.0), (-h, 0.0)]]
}

fn pauli_x() -> Vec<Vec<(f64, f64)>> {
    vec![vec![(0.0, 0.0), (1.0, 0.0)], vec![(1.0, 0.0), (0.0, 0.0)]]
}

fn diag_phase(theta: f64) -> Vec<Vec<(f64, f64)>> {
    vec![vec![(1.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (theta.cos(), theta.sin())]]
}

#[test]
fn check_cnot_is_not_separable() {
    let dir = TempDir::new().unwrap();
    let f = corpus(&dir, &["cnot"]);
    let out = run(&["check", p(&f)]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["result"]["oracle"]["verdict"], "NotSeparable");
    assert_eq!(v["result"]["oracle"]["violating_cut"], "{1}|{2}");
    assert!(v["result"]["structure_check"]["site"].is_null());
    assert!(v["input_digest"].as_str().unwrap().starts_with("sha256:"));
    assert_eq!(v["tolerances"]["schmidt"], 1e-9);
}

#[test]
fn check_planted_product_is_separable() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "hx.json", &gate_file(&[2, 2], &kron(&hadamard(), &pauli_x())));
    let out = run(&["check", p(&f)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["oracle"]["verdict"], "Separable");
    assert_eq!(v["result"]["oracle"]["factors"].as_array().unwrap().len(), 2);
}

#[test]
fn size_mismatch_is_an_input_error() {
    let dir = TempDir::new().unwrap();
    let id3: Vec<Vec<(f64, f64)>> =
        (0..3).map(|i| (0..3).map(|j| (f64::from(u8::from(i == j)), 0.0)).collect()).collect();
    let f = write(&dir, "bad.json", &gate_file(&[2, 2], &id3));
    let out = run(&["check", p(&f)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("matrix size 3 ≠ 4"));
    assert!(out.stdout.is_empty());
}

#[test]
fn malformed_and_non_unitary_inputs() {
    let dir = TempDir::new().unwrap();
    let f = write(&dir, "junk.json", "{\"matrix\": [1, 2");
    assert_eq!(code(&run(&["check", p(&f)])), 2);
    let scaled = gate_file(&[2], &[vec![(2.0, 0.0), (0.0, 0.0)], vec![(0.0, 0.0), (1.0, 0.0)]]);
    let f = write(&dir, "scaled.json", &scaled);
    assert_eq!(code(&run(&["check", p(&f)])), 2);
    assert_ne!(code(&run(&["check", "--no-validate", p(&f)])), 2);
    assert_eq!(code(&run(&["check", p(&dir.path().join("missing.json"))])), 2);
}

#[test]
fn separate_reports_factors_and_phase() {
    let dir = TempDir::new().unwrap();
    let t = diag_phase(std::f64::consts::FRAC_PI_4);
    let s = diag_phase(std::f64::consts::FRAC_PI_2);
    let f = write(&dir, "tsx.json", &gate_file(&[2, 2, 2], &kron(&kron(&t, &s), &pauli_x())));
    let out = run(&["separate", "--tol", "1e-9", p(&f)]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    assert_eq!(v["result"]["factors"].as_array().unwrap().len(), 3);
    assert!(v["result"]["residual"].as_f64().unwrap() <= 1e-9);
    let phase = v["result"]["global_phase"].as_array().unwrap();
    let modulus = phase[0].as_f64().unwrap().hypot(phase[1].as_f64().unwrap());
    assert!((modulus - 1.0).abs() < 1e-12);

    let id = write(&dir, "id.json", &gate_file(&[2, 2], &kron(&diag_phase(0.0), &diag_phase(0.0))));
    let v = json(&run(&["separate", p(&id)]));
    assert_eq!(v["result"]["global_phase"], serde_json::json!([1.0, 0.0]));
    for factor in v["result"]["factors"].as_array().unwrap() {
        assert_eq!(factor["matrix"], serde_json::json!([[[1.0, 0.0], [0.0, 0.0]], [[0.0, 0.0], [1.0, 0.0]]]));
    }
}

#[test]
fn separate_swap_reports_flat_coefficients() {
    let dir = TempDir::new().unwrap();
    let f = corpus(&dir, &["swap"]);
    let out = run(&["separate", p(&f)]);
    assert_eq!(code(&out), 3);
    let v = json(&out);
    assert_eq!(v["result"]["violating_cut"], "{1}|{2}");
    for c in v["result"]["schmidt"][0]["coefficients"].as_array().unwrap() {
        assert!((c.as_f64().unwrap() - 1.0).abs() <= 1e-10);
    }
}

#[test]
fn approx_exit_codes() {
    let dir = TempDir::new().unwrap();
    // exp(i·0.01·Z⊗Z) = diag(e^{0.01i}, e^{-0.01i}, e^{-0.01i}, e^{0.01i})
    let phases = [0.01f64, -0.01, -0.01, 0.01];
    let rows: Vec<Vec<(f64, f64)>> = (0..4)
        .map(|i| (0..4).map(|j| if i == j { (phases[i].cos(), phases[i].sin()) } else { (0.0, 0.0) }).collect())
        .collect();
    let small = write(&dir, "zz.json", &gate_file(&[2, 2], &rows));
    let out = run(&["approx", p(&small), "--epsilon", "0.05"]);
    assert_eq!(code(&out), 0);
    let v = json(&out);
    let measured = v["result"]["measured"].as_f64().unwrap();
    assert!((measured - 2.0 * 0.005f64.sin()).abs() < 1e-12);
    assert!((v["result"]["bound"].as_f64().unwrap() - 0.01).abs() < 1e-12);

    let cnot = corpus(&dir, &["cnot"]);
    let out = run(&["approx", p(&cnot), "--epsilon", "0.1"]);
    assert_eq!(code(&out), 4);
    let v = json(&out);
    assert!(v["result"]["measured"].as_f64().unwrap() > 0.5);
    assert!(v["result"]["bound"].as_f64().unwrap() >= v["result"]["measured"].as_f64().unwrap());
    assert_eq!(v["result"]["certificate"]["pass"], false);

    let product = corpus(&dir, &["random-product", "2", "7"]);
    let out = run(&["approx", p(&product), "--epsilon", "1e-6", "--norm", "fro"]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["result"]["measured"].as_f64().unwrap() <= 1e-8);

    assert_eq!(code(&run(&["approx", p(&cnot), "--epsilon", "0"])), 2);
    assert_eq!(code(&run(&["approx", p(&cnot), "--epsilon", "-0.5"])), 2);
    assert_eq!(code(&run(&["approx", p(&cnot), "--t", "0"])), 2);
    assert_eq!(code(&run(&["approx", p(&cnot), "--norm", "max"])), 2);
    assert_eq!(code(&run(&["approx", p(&cnot)])), 0);
}

#[test]
fn corpus_round_trips_through_check() {
    let dir = TempDir::new().unwrap();
    let cases: [(&[&str], i32); 8] = [
        (&["cnot"], 3),
        (&["cz"], 3),
        (&["swap"], 3),
        (&["iswap"], 3),
        (&["toffoli"], 3),
        (&["random-product", "3", "42"], 0),
        (&["random-product", "1", "5"], 0),
        (&["random-unitary", "2", "9"], 3),
    ];
    for (args, expected) in cases {
        let f = corpus(&dir, args);
        let out = run(&["check", p(&f)]);
        assert_eq!(code(&out), expected, "{args:?}: {}", String::from_utf8_lossy(&out.stderr));
    }
}

#[test]
fn corpus_matrices() {
    let v: Value = serde_json::from_slice(&run(&["gates", "cz"]).stdout).unwrap();
    assert_eq!(v["dims"], serde_json::json!([2, 2]));
    for i in 0..4 {
        for j in 0..4 {
            let want = if i != j { 0.0 } else if i == 3 { -1.0 } else { 1.0 };
            assert_eq!(v["matrix"][i][j], serde_json::json!([want, 0.0]));
        }
    }
    let v: Value = serde_json::from_slice(&run(&["gates", "cnot"]).stdout).unwrap();
    assert_eq!(v["matrix"][2][3], serde_json::json!([1.0, 0.0]));
    assert_eq!(v["matrix"][3][2], serde_json::json!([1.0, 0.0]));
    assert_eq!(v["matrix"][2][2], serde_json::json!([0.0, 0.0]));
}

#[test]
fn gates_argument_errors() {
    assert_eq!(code(&run(&["gates", "bogus"])), 2);
    assert_eq!(code(&run(&["gates", "random-product"])), 2);
    assert_eq!(code(&run(&["gates", "random-unitary", "2"])), 2);
    assert_eq!(code(&run(&["gates", "random-unitary", "2", "-1"])), 2);
}

#[test]
fn output_is_deterministic() {
    let a = run(&["gates", "random-unitary", "3", "1234"]).stdout;
    let b = run(&["gates", "random-unitary", "3", "1234"]).stdout;
    assert_eq!(a, b);
    assert_ne!(a, run(&["gates", "random-unitary", "3", "1235"]).stdout);

    let dir = TempDir::new().unwrap();
    let f = corpus(&dir, &["random-product", "3", "11"]);
    let strip = |o: Output| {
        let mut v = json(&o);
        v.as_object_mut().unwrap().remove("wall_time_ms");
        serde_json::to_string(&v).unwrap()
    };
    for cmd in ["check", "separate", "approx"] {
        assert_eq!(strip(run(&[cmd, p(&f)])), strip(run(&[cmd, p(&f)])));
    }
}

#[test]
fn stdin_input() {
    let gate = run(&["gates", "random-product", "2", "3"]).stdout;
    let mut child = bin()
        .args(["check", "-"])
        .stdin(std::process::Stdio::piped())
        .stdout(std::process::Stdio::piped())
        .spawn()
        .unwrap();
    use std::io::Write;
    child.stdin.take().unwrap().write_all(&gate).unwrap();
    let out = child.wait_with_output().unwrap();
    assert_eq!(code(&out), 0);
}

#[test]
fn non_qubit_dims_skip_structure_check() {
    let dir = TempDir::new().unwrap();
    let id6: Vec<Vec<(f64, f64)>> =
        (0..6).map(|i| (0..6).map(|j| (f64::from(u8::from(i == j)), 0.0)).collect()).collect();
    let f = write(&dir, "id6.json", &gate_file(&[2, 3], &id6));
    let out = run(&["check", p(&f)]);
    assert_eq!(code(&out), 0);
    assert!(json(&out)["result"].get("structure_check").is_none());
    let f = write(&dir, "id6_nodims.json", &serde_json::json!({"matrix": serde_json::from_str::<Value>(&gate_file(&[6], &id6)).unwrap()["matrix"]}).to_string());
    let out = run(&["check", p(&f)]);
    assert_eq!(code(&out), 2);
    assert!(String::from_utf8_lossy(&out.stderr).contains("dims required"));
}
