use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_bimetric"))
}

fn scene(name: &str) -> String {
    let p: PathBuf = [env!("CARGO_MANIFEST_DIR"), "..", "..", "scenes", name].iter().collect();
    p.to_string_lossy().into_owned()
}

fn run(args: &[&str]) -> (i32, Value, String) {
    let out: Output = bin().args(args).output().expect("binary runs");
    let code = out.status.code().expect("exit code");
    let stderr = String::from_utf8_lossy(&out.stderr).into_owned();
    let json = serde_json::from_slice(&out.stdout).unwrap_or(Value::Null);
    (code, json, stderr)
}

fn temp_scene(tag: &str, edit: impl FnOnce(&mut Value)) -> String {
    let mut v: Value = serde_json::from_str(&std::fs::read_to_string(scene("torus_bump.json")).unwrap()).unwrap();
    edit(&mut v);
    let path = std::env::temp_dir().join(format!("bimetric-cli-{tag}-{}.json", std::process::id()));
    std::fs::write(&path, v.to_string()).unwrap();
    path.to_string_lossy().into_owned()
}

fn series(v: &Value) -> Vec<f64> {
    v.as_array().unwrap().iter().map(|x| x.as_f64().unwrap()).collect()
}

#[test]
fn expand_flat_curvature() {
    let (code, json, _) = run(&["expand", "--scene", &scene("euclidean4.json"), "--point", "0,0,0,0", "--quantity", "r"]);
    assert_eq!(code, 0);
    assert_eq!(json["schema"], 1);
    assert_eq!(series(&json["data"]["r"]), vec![0.0, 0.0, 0.0]);
    assert_eq!(json["scene"]["id"], "euclidean4");
    assert_eq!(json["scene"]["digest"].as_str().unwrap().len(), 64);
}

#[test]
fn expand_sphere_curvature() {
    let (code, json, _) = run(&["expand", "--scene", &scene("sphere4.json"), "--point", "0.1,0.2,0,0", "--quantity", "r"]);
    assert_eq!(code, 0);
    assert!((series(&json["data"]["r"])[0] - 12.0).abs() <= 1e-8);
}

#[test]
fn expand_several_quantities_and_order() {
    let (code, json, _) = run(&[
        "expand", "--scene", "random_smooth", "--point", "0.5,1,1.5,2", "--order", "3", "--quantity", "a4", "c", "ginv",
    ]);
    assert_eq!(code, 0);
    assert_eq!(json["params"]["order"], 3);
    assert_eq!(json["data"]["a4"]["total"].as_array().unwrap().len(), 4);
    assert_eq!(json["data"]["ginv"].as_array().unwrap().len(), 4);
    assert!(json["data"]["c"]["closed_form"].is_array());
}

#[test]
fn missing_scene_is_a_config_error() {
    let (code, json, err) = run(&["expand", "--scene", "no/such/scene.json", "--point", "0,0,0,0", "--quantity", "r"]);
    assert_eq!(code, 2);
    assert!(json.is_null());
    assert!(err.contains("error"), "{err}");
}

#[test]
fn wrong_point_length_is_a_config_error() {
    let (code, _, _) = run(&["expand", "--scene", "euclidean4", "--point", "0,0", "--quantity", "r"]);
    assert_eq!(code, 2);
}

#[test]
fn singular_metric_is_a_numeric_error() {
    let path = temp_scene("singular", |v| v["base"]["11"] = Value::from("x1"));
    let (code, json, err) = run(&["expand", "--scene", &path, "--point", "0,1,1,1", "--quantity", "r"]);
    assert_eq!(code, 3, "{err}");
    assert!(json["params"]["error"].is_string());
}

#[test]
fn unknown_tolerance_is_a_config_error() {
    let (code, _, _) = run(&["verify", "--suite", "oracle", "--scene", "euclidean4", "--seed", "1", "--tol", "bogus=1e-3"]);
    assert_eq!(code, 2);
}

#[test]
fn flat_oracle_suite_has_zero_gaps() {
    let (code, json, _) = run(&["verify", "--suite", "oracle", "--scene", &scene("euclidean4.json"), "--seed", "3"]);
    assert_eq!(code, 0);
    let checks = json["checks"].as_array().unwrap();
    assert!(!checks.is_empty());
    assert!(checks.iter().all(|c| c["residual"] == 0.0 && c["status"] == "pass"));
}

#[test]
fn covariance_suite_passes_on_random_scene() {
    let (code, json, _) = run(&["verify", "--suite", "covariance", "--scene", &scene("random_smooth.json"), "--seed", "7"]);
    assert_eq!(code, 0);
    for c in json["checks"].as_array().unwrap() {
        assert!(c["residual"].as_f64().unwrap() <= 1e-7);
    }
    assert_eq!(json["params"]["tolerances"]["covariance"], 1e-7);
}

#[test]
fn appendix_suite_never_gates() {
    let (code, json, _) = run(&["verify", "--suite", "appendix", "--scene", "sphere4_stereo", "--seed", "2", "--points", "2"]);
    assert_eq!(code, 0);
    assert!(json["checks"].as_array().unwrap().iter().all(|c| c["status"] == "info"));
    assert_eq!(json["data"]["records"].as_array().unwrap().len(), 2 * 14);
}

#[test]
fn tight_tolerance_fails_with_worst_offender() {
    let (code, json, err) = run(&[
        "verify", "--suite", "oracle", "--scene", "random_smooth", "--seed", "4", "--points", "1", "--tol", "oracle=1e-30",
    ]);
    assert_eq!(code, 1);
    assert!(json["summary"]["worst"].is_string());
    assert_eq!(json["params"]["tolerance_overrides"][0][0], "oracle");
    assert!(err.contains("worst"));
}

#[test]
fn unseeded_runs_print_their_seed() {
    let (code, json, err) = run(&["verify", "--suite", "invariants", "--scene", "random_smooth", "--points", "1"]);
    assert_eq!(code, 0);
    let seed = json["params"]["seed"].as_u64().unwrap();
    assert!(err.contains(&format!("seed: {seed}")), "{err}");
}

#[test]
fn reports_are_deterministic_apart_from_timing() {
    let args = ["verify", "--suite", "intertwining", "--scene", "random_smooth", "--seed", "11", "--threads", "2"];
    let (_, mut a, _) = run(&args);
    let (_, mut b, _) = run(&args);
    a.as_object_mut().unwrap().remove("timing");
    b.as_object_mut().unwrap().remove("timing");
    assert_eq!(a, b);
}

#[test]
fn out_flag_writes_file() {
    let path = std::env::temp_dir().join(format!("bimetric-cli-out-{}.json", std::process::id()));
    let p = path.to_string_lossy().into_owned();
    let out = bin()
        .args(["scene", "euclidean4", "--out", &p])
        .output()
        .unwrap();
    assert!(out.status.success());
    assert!(out.stdout.is_empty());
    let v: Value = serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
    assert_eq!(v["data"]["dim"], 4);
}

#[test]
fn wres_rejects_open_charts() {
    let (code, _, _) = run(&["wres", "--scene", "euclidean4", "--grid", "4"]);
    assert_eq!(code, 2);
}

#[test]
fn wres_without_perturbation_has_zero_variations() {
    let path = temp_scene("flat", |v| v["perturbation"] = serde_json::json!({}));
    let (code, json, _) = run(&["wres", "--scene", &path, "--grid", "6"]);
    assert_eq!(code, 0);
    assert_eq!(json["data"]["variations"]["first_variation"], 0.0);
    assert_eq!(json["data"]["variations"]["second_variation"], 0.0);
}

#[test]
fn wres_with_zero_weight_is_zero() {
    let path = temp_scene("zero", |v| v["probes"]["f0"] = Value::from("0"));
    let (code, json, _) = run(&["wres", "--scene", &path, "--grid", "6"]);
    assert_eq!(code, 0);
    assert_eq!(series(&json["data"]["variations"]["series"]), vec![0.0, 0.0, 0.0]);
}

#[test]
fn scene_fixtures_round_trip() {
    for name in ["euclidean4", "sphere4", "conformally_flat", "torus_bump", "random_smooth"] {
        let (code, json, _) = run(&["scene", &scene(&format!("{name}.json"))]);
        assert_eq!(code, 0, "{name}");
        assert_eq!(json["data"]["dim"], 4);
    }
}
