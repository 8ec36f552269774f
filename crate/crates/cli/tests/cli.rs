use std::io::Write;
use std::process::{Command, Output, Stdio};

use serde_json::{json, Value};

fn jacobi(args: &[&str], stdin: Option<&str>) -> Output {
    let mut child = Command::new(env!("CARGO_BIN_EXE_jacobi"))
        .args(args)
        .stdin(Stdio::piped())
        .stdout(Stdio::piped())
        .stderr(Stdio::piped())
        .spawn()
        .unwrap();
    let mut pipe = child.stdin.take().unwrap();
    pipe.write_all(stdin.unwrap_or("").as_bytes()).unwrap();
    drop(pipe);
    child.wait_with_output().unwrap()
}

fn doc(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap()
}

fn close(a: &Value, b: &Value, tol: f64) -> bool {
    match (a, b) {
        (Value::Array(x), Value::Array(y)) => x.len() == y.len() && x.iter().zip(y).all(|(p, q)| close(p, q, tol)),
        _ => (a.as_f64().unwrap() - b.as_f64().unwrap()).abs() <= tol,
    }
}

#[test]
fn check_j2() {
    let j2 = "[[0,0,1,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0]]";
    let out = jacobi(&["check"], Some(j2));
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d["symplectic"], true);
    assert!(d["residual"].as_f64().unwrap() < 1e-14);
}

#[test]
fn check_perturbed_j2_fails() {
    // a symmetric shear of J stays symplectic; a rescaled entry does not
    let m = json!({ "matrix": [[0,0,1.001,0],[0,0,0,1],[-1,0,0,0],[0,-1,0,0]] });
    let out = jacobi(&["check"], Some(&m.to_string()));
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(doc(&out)["symplectic"], false);
}

#[test]
fn check_embedded_element() {
    let e = json!({ "element": { "m": [[2,1],[1,1]], "lambda": [0.5], "mu": [-1], "kappa": 3 } });
    let out = jacobi(&["check"], Some(&e.to_string()));
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(doc(&out)["degree"], 2);
}

#[test]
fn odd_shape_is_usage_error() {
    let out = jacobi(&["check"], Some("[[1,0,0],[0,1,0],[0,0,1]]"));
    assert_eq!(out.status.code(), Some(2));
    assert!(String::from_utf8_lossy(&out.stderr).contains("bad shape"));
}

#[test]
fn malformed_input_is_usage_error() {
    assert_eq!(jacobi(&["check"], Some("[[1,")).status.code(), Some(2));
    assert_eq!(jacobi(&["check"], Some("[[1,0],[0]]")).status.code(), Some(2));
    assert_eq!(jacobi(&["commutators", "--n", "0"], None).status.code(), Some(2));
    assert_eq!(jacobi(&["invariance", "--tol", "-1"], None).status.code(), Some(2));
}

#[test]
fn decompose_identity_and_j() {
    for variant in ["plain", "modified"] {
        let out = jacobi(&["decompose", "--variant", variant], Some("[[1,0,0,0],[0,1,0,0],[0,0,1,0],[0,0,0,1]]"));
        assert_eq!(out.status.code(), Some(0));
        let d = doc(&out);
        assert!(close(&d["x"], &json!([[0, 0], [0, 0]]), 0.0));
        assert!(close(&d["y"], &json!([[1, 0], [0, 1]]), 0.0));
        assert!(close(&d["unitary"]["x"], &json!([[1, 0], [0, 1]]), 0.0));
        assert!(close(&d["unitary"]["y"], &json!([[0, 0], [0, 0]]), 0.0));
    }
    // J = (0, 1; -1, 0) is the pure rotation X = 0, Y = 1
    let d = doc(&jacobi(&["decompose"], Some("[[0,1],[-1,0]]")));
    assert!(close(&d["y"], &json!([[1]]), 1e-15));
    assert!(close(&d["unitary"]["y"], &json!([[1]]), 1e-15));
}

#[test]
fn decompose_roundtrip_residual_and_rejection() {
    let m = json!([[2, 1, 0, 0], [1, 1, 0, 0], [0, 0, 1, -1], [0, 0, -1, 2]]);
    let d = doc(&jacobi(&["decompose", "--variant", "modified"], Some(&m.to_string())));
    assert!(d["residual"].as_f64().unwrap() < 1e-10);
    let out = jacobi(&["decompose"], Some("[[1,1],[0,2]]"));
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn act_identity_keeps_point() {
    let pt = json!({ "v": [[[0.3, 1.2], [0.1, 0.2]], [[0.1, 0.2], [-0.4, 0.9]]], "u": [[0.5, -1], [2, 0.25]] });
    let input = json!({ "element": { "lambda": [0, 0] }, "point": pt });
    let d = doc(&jacobi(&["act", "--space", "vu"], Some(&input.to_string())));
    assert!(close(&d["point"]["v"], &pt["v"], 1e-15));
    assert!(close(&d["point"]["u"], &pt["u"], 1e-15));
}

#[test]
fn heisenberg_translation_on_vu() {
    // u -> u + λv + μ, v fixed
    let input = json!({
        "element": { "lambda": [2], "mu": [-1], "kappa": 5 },
        "point": { "v": [[[0.5, 2]]], "u": [[1, 1]] },
    });
    let d = doc(&jacobi(&["act"], Some(&input.to_string())));
    assert!(close(&d["point"]["v"], &json!([[[0.5, 2]]]), 1e-15));
    assert!(close(&d["point"]["u"], &json!([[1, 5]]), 1e-15));
}

#[test]
fn chained_acts_equal_act_of_product() {
    // g = (M, 0), h = (I, λ); g·h = (M, λ)
    let m = json!([[2, 1], [1, 1]]);
    let pt = json!({ "x": [[0.2]], "y": [[1.5]], "p": [0.3], "q": [-0.7], "kappa": 0.1 });
    let h = json!({ "element": { "lambda": [0.4], "mu": [1.1], "kappa": -0.3 }, "point": pt });
    let first = doc(&jacobi(&["act", "--space", "extended"], Some(&h.to_string())))["point"].clone();
    let g = json!({ "element": { "m": m }, "point": first });
    let chained = doc(&jacobi(&["act", "--space", "extended"], Some(&g.to_string())))["point"].clone();
    let gh = json!({ "element": { "m": m, "lambda": [0.4], "mu": [1.1], "kappa": -0.3 }, "point": pt });
    let direct = doc(&jacobi(&["act", "--space", "extended"], Some(&gh.to_string())))["point"].clone();
    for k in ["x", "y", "p", "q", "kappa"] {
        let (a, b) = (&chained[k], &direct[k]);
        assert!(close(a, b, 1e-12), "{k}: {a} vs {b}");
    }
}

#[test]
fn commutators_n1() {
    let d = doc(&jacobi(&["commutators", "--n", "1"], None));
    let gens: Vec<&str> = d["generators"].as_array().unwrap().iter().map(|g| g.as_str().unwrap()).collect();
    assert_eq!(gens.len(), 6);
    let c = &d["constants"];
    assert_eq!(c.as_array().unwrap().len(), 6);
    let idx = |name: &str| gens.iter().position(|g| *g == name).unwrap();
    assert_eq!(c[idx("P1")][idx("Q1")][idx("R")], 2.0);
    assert_eq!(c[idx("Q1")][idx("P1")][idx("R")], -2.0);
}

#[test]
fn invariance_metric_extended_passes() {
    let args = ["invariance", "--object", "metric_extended", "--n", "1", "--samples", "1000", "--seed", "42"];
    let out = jacobi(&args, None);
    assert_eq!(out.status.code(), Some(0));
    let d = doc(&out);
    assert_eq!(d["pass"], true);
    assert_eq!(d["samples"], 1000);
}

#[test]
fn invariance_negative_control_exits_one() {
    let out = jacobi(&["invariance", "--object", "negative_control", "--samples", "50"], None);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(jacobi(&["invariance", "--object", "torsion"], None).status.code(), Some(2));
}

#[test]
fn sqrt_diff_at_identity_halves() {
    let input = json!({ "a": [[1, 0], [0, 1]], "da": [[2, 1], [1, -4]] });
    let d = doc(&jacobi(&["sqrt-diff"], Some(&input.to_string())));
    assert!(close(&d["dsqrt"], &json!([[1, 0.5], [0.5, -2]]), 1e-14));
    assert!(close(&d["sqrt"], &json!([[1, 0], [0, 1]]), 1e-14));
    let bad = json!({ "a": [[1, 0], [0, -1]], "da": [[1, 0], [0, 1]] });
    assert_eq!(jacobi(&["sqrt-diff"], Some(&bad.to_string())).status.code(), Some(1));
}

#[test]
fn metric_from_input() {
    // at the base point with alpha = 1, gamma = 2: dx = 1 gives 1, dp = 1 gives 2
    let input = json!({
        "point": { "x": [[0]], "y": [[1]], "p": [0], "q": [0] },
        "t1": { "dx": [[1]], "d1": [1] },
        "t2": { "dx": [[1]], "d1": [1] },
        "params": { "alpha": 1, "gamma": 2 },
    });
    let d = doc(&jacobi(&["metric", "--input", "-"], Some(&input.to_string())));
    assert!((d["value"].as_f64().unwrap() - 3.0).abs() < 1e-14, "{d}");
}

#[test]
fn output_file_and_reruns_are_byte_identical() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("out.json");
    let p = path.to_str().unwrap();
    for args in [
        vec!["invariance", "--object", "kahler_ball", "--n", "2", "--samples", "100", "--seed", "7"],
        vec!["metric", "--object", "metric_group", "--n", "2", "--seed", "3"],
        vec!["oneforms", "--n", "2", "--seed", "3"],
        vec!["commutators", "--n", "2"],
    ] {
        let a = jacobi(&args, None);
        let b = jacobi(&args, None);
        assert_eq!(a.stdout, b.stdout);
        let mut with_file = args.clone();
        with_file.extend(["--output", p]);
        assert!(jacobi(&with_file, None).status.success());
        assert_eq!(std::fs::read(&path).unwrap(), a.stdout);
    }
}

#[test]
fn input_from_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = dir.path().join("m.json");
    std::fs::write(&path, "[[0,1],[-1,0]]").unwrap();
    let out = jacobi(&["check", "--input", path.to_str().unwrap()], None);
    assert_eq!(out.status.code(), Some(0));
    let missing = jacobi(&["check", "--input", "/nonexistent/m.json"], None);
    assert_eq!(missing.status.code(), Some(2));
}
