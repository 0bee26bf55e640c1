use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn valgeo(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_valgeo")).args(args).output().expect("binary runs")
}

fn json(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).unwrap_or_else(|e| panic!("{e}: {}", String::from_utf8_lossy(&out.stdout)))
}

fn body(name: &str, text: &str) -> String {
    let dir: PathBuf = [env!("CARGO_TARGET_TMPDIR"), "cli-bodies"].iter().collect();
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, text).unwrap();
    path.to_string_lossy().into_owned()
}

fn floats(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn verify_exact_passes() {
    let out = valgeo(&["verify", "exact", "--dim", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    assert_eq!(v["result"]["pass"], true);
    let names: Vec<&str> = v["result"]["reports"].as_array().unwrap().iter().map(|r| r["identity"].as_str().unwrap()).collect();
    assert!(names.len() >= 6, "{names:?}");
    assert_eq!(v["config"]["global"]["dim"], 3);
}

#[test]
fn intrinsic_cube_monte_carlo() {
    let cube = body("cube3.json", r#"{"gen": "cube", "dim": 3}"#);
    let out = valgeo(&["intrinsic", "--body", &cube, "--samples", "100000", "--seed", "7"]);
    assert_eq!(out.status.code(), Some(0));
    let v = json(&out);
    let values = floats(&v["result"]["values"]);
    let se = floats(&v["result"]["stderr"]);
    for (k, want) in [1.0, 3.0, 3.0, 1.0].into_iter().enumerate() {
        assert!((values[k] - want).abs() <= 4.0 * se[k] + 1e-12, "k={k}: {} ± {}", values[k], se[k]);
    }
    assert_eq!(v["config"]["global"]["seed"], 7);
}

#[test]
fn intrinsic_exact_is_flagged() {
    let tri = body("tri.json", r#"{"dim": 2, "vertices": [[0, 0], [3, 0], [0, 4]]}"#);
    let v = json(&valgeo(&["intrinsic", "--body", &tri]));
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(floats(&v["result"]["values"]), vec![1.0, 6.0, 6.0]);
}

#[test]
fn convolve_matches_sum_volume() {
    let a = body("conv_a.json", r#"{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1], [1, 1]]}"#);
    let b = body("conv_b.json", r#"{"dim": 2, "vertices": [[0, 0], [2, 0], [2, 2], [0, 2]]}"#);
    let k = body("conv_k.json", r#"{"dim": 2, "vertices": [[0, 0], [1, 0], [0, 1]]}"#);
    let v = json(&valgeo(&["convolve", "--a", &a, "--b", &b, "--eval", &k]));
    // [0,3]^2 plus the unit triangle is this pentagon
    let pentagon = [(0.0, 0.0), (4.0, 0.0), (4.0, 3.0), (3.0, 4.0), (0.0, 4.0)];
    let mut area = 0.0;
    for i in 0..pentagon.len() {
        let (p, q) = (pentagon[i], pentagon[(i + 1) % pentagon.len()]);
        area += p.0 * q.1 - q.0 * p.1;
    }
    let area = area / 2.0;
    let value = v["result"]["value"].as_f64().unwrap();
    assert!((value - area).abs() < 1e-6 * area, "{value} vs {area}");
    assert_eq!(v["result"]["exact"], true);
}

#[test]
fn mixed_volume_of_squares() {
    let a = body("mv_a.json", r#"{"gen": "cube", "dim": 2}"#);
    let b = body("mv_b.json", r#"{"gen": "cube", "dim": 2, "scale": 2}"#);
    let v = json(&valgeo(&["mixed-volume", "--body", &a, "--body", &b]));
    assert!((v["result"]["value"].as_f64().unwrap() - 2.0).abs() < 1e-12);
}

#[test]
fn minkowski_outputs_a_body() {
    let a = body("mk_a.json", r#"{"dim": 2, "vertices": [[0, 0], [1, 0]]}"#);
    let b = body("mk_b.json", r#"{"dim": 2, "vertices": [[0, 0], [0, 1]]}"#);
    let v = json(&valgeo(&["minkowski", "--a", &a, "--b", &b]));
    assert_eq!(v["result"]["body"]["vertices"].as_array().unwrap().len(), 4);
    assert!((v["result"]["volume"].as_f64().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn product_with_volume_is_fubini() {
    let a = body("pr_a.json", r#"{"gen": "cube", "dim": 2}"#);
    let k = body("pr_k.json", r#"{"gen": "cube", "dim": 2, "scale": 2}"#);
    let v = json(&valgeo(&["product", "--a", &a, "--eval", &k, "--samples", "20000"]));
    let (x, se) = (v["result"]["value"].as_f64().unwrap(), v["result"]["stderr"].as_f64().unwrap());
    assert!((x - 4.0).abs() <= 4.0 * se, "{x} ± {se}");
}

#[test]
fn dualize_and_coproduct_are_exact() {
    let v = json(&valgeo(&["dualize", "--dim", "2", "--coeffs", "1,0,0"]));
    assert_eq!(v["result"]["dual"]["coeffs"][2]["q"], "1/1");
    let v = json(&valgeo(&["coproduct", "--dim", "2", "--degree", "0"]));
    assert_eq!(v["result"]["exact"], true);
    assert_eq!(v["result"]["tensor"]["entries"][0][2]["q"], "1/1");
}

#[test]
fn output_is_deterministic_across_threads() {
    let cube = body("det_cube.json", r#"{"gen": "cube", "dim": 3}"#);
    let args = ["intrinsic", "--body", &cube, "--samples", "20000", "--seed", "3"];
    let one = valgeo(&[&args[..], &["--threads", "1"]].concat());
    let two = valgeo(&[&args[..], &["--threads", "2"]].concat());
    let again = valgeo(&[&args[..], &["--threads", "1"]].concat());
    assert_eq!(one.stdout, two.stdout);
    assert_eq!(one.stdout, again.stdout);
}

#[test]
fn out_flag_writes_the_report() {
    let path = body("report.json", "");
    let out = valgeo(&["verify", "exact", "--dim", "2", "--out", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["result"]["pass"], true);
}

#[test]
fn malformed_body_exits_2_with_position() {
    let bad = body("bad.json", "{\"dim\": 2,\n \"vertices\": [[0, 0], [1, 0]],\n \"color\": 3}");
    let out = valgeo(&["intrinsic", "--body", &bad]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("color") && err.contains("line 3"), "{err}");

    let broken = body("broken.json", "{\"gen\": \"cube\",\n \"dim\": }");
    let err = String::from_utf8_lossy(&valgeo(&["intrinsic", "--body", &broken]).stderr).into_owned();
    assert!(err.contains("line 2"), "{err}");
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(valgeo(&["frobnicate"]).status.code(), Some(2));
    assert_eq!(valgeo(&["verify", "exact"]).status.code(), Some(2));
    assert_eq!(valgeo(&["dualize", "--dim", "2", "--coeffs", "1,2"]).status.code(), Some(2));
    assert_eq!(valgeo(&["intrinsic", "--body", "/nonexistent.json"]).status.code(), Some(2));
    let sq = body("dim_sq.json", r#"{"gen": "cube", "dim": 2}"#);
    assert_eq!(valgeo(&["intrinsic", "--body", &sq, "--dim", "3"]).status.code(), Some(2));
}

#[test]
fn failed_verification_exits_1() {
    let out = valgeo(&["verify", "kinematic", "--dim", "2", "--samples", "2000", "--z-max", "0"]);
    assert_eq!(out.status.code(), Some(1));
    assert_eq!(json(&out)["result"]["pass"], false);
    let out = valgeo(&["verify", "kinematic", "--dim", "2", "--samples", "20000"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}

#[test]
fn verify_convolution_and_additive() {
    let out = valgeo(&["verify", "convolution", "--dim", "3", "--count", "3"]);
    assert_eq!(out.status.code(), Some(0));
    let out = valgeo(&["verify", "additive", "--dim", "2", "--samples", "20000", "--seed", "5"]);
    assert_eq!(out.status.code(), Some(0), "{}", String::from_utf8_lossy(&out.stdout));
}
