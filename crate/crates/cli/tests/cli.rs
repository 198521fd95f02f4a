use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn run_in(cache: &Path, args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_lojacobi"))
        .args(args)
        .env("LOJACOBI_CACHE_DIR", cache)
        .output()
        .expect("spawn lojacobi")
}

fn json_in(cache: &Path, args: &[&str]) -> (i32, Value) {
    let out = run_in(cache, args);
    let v: Value = serde_json::from_slice(&out.stdout)
        .unwrap_or_else(|e| panic!("{args:?}: bad json ({e}): {}", String::from_utf8_lossy(&out.stderr)));
    (out.status.code().unwrap(), v)
}

fn json(args: &[&str]) -> (i32, Value) {
    let dir = tempfile::tempdir().unwrap();
    json_in(dir.path(), args)
}

fn code(args: &[&str]) -> i32 {
    let dir = tempfile::tempdir().unwrap();
    run_in(dir.path(), args).status.code().unwrap()
}

#[test]
fn envelope_fields() {
    let (c, v) = json(&["basis", "--k", "0"]);
    assert_eq!(c, 0);
    assert_eq!(v["schema"], 1);
    assert_eq!(v["command"], "basis");
    assert_eq!(v["status"], "pass");
    assert!(v["provenance"]["version"].is_string());
    assert!(v["provenance"]["timestamp"].is_string());
}

#[test]
fn basis_k1_reference() {
    let (c, v) = json(&["basis", "--k", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["dimension"], 4);
    let polys: Vec<&str> = v["results"]["blocks"]
        .as_array()
        .unwrap()
        .iter()
        .flat_map(|b| b["vectors"].as_array().unwrap())
        .map(|f| f["polynomial"].as_str().unwrap())
        .collect();
    let mut sorted = polys.clone();
    sorted.sort();
    assert_eq!(sorted, ["w", "wb", "z", "zb"]);
}

#[test]
fn basis_empty_block() {
    let (c, v) = json(&["basis", "--k", "1", "--m", "0"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["dimension"], 0);
    assert_eq!(v["results"]["blocks"][0]["vectors"].as_array().unwrap().len(), 0);
}

#[test]
fn basis_generated_k5() {
    let (c, v) = json(&["basis", "--k", "5", "--source", "generated"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["dimension"], 36);
}

#[test]
fn reference_source_stops_at_k4() {
    assert_eq!(code(&["basis", "--k", "5"]), 2);
    assert_eq!(code(&["inertia", "--k", "5"]), 2);
}

#[test]
fn usage_errors_exit_2() {
    assert_eq!(code(&["inertia"]), 2);
    assert_eq!(code(&["inertia", "--k", "x"]), 2);
    assert_eq!(code(&["inertia", "--k", "7"]), 2);
    assert_eq!(code(&["inertia", "--k", "5", "--source", "generated", "--golden"]), 2);
    assert_eq!(code(&["verify-all", "--max-k", "5"]), 2);
    assert_eq!(code(&["decay", "--lambda", "-5"]), 2);
    assert_eq!(code(&["decay", "--lambda", "nope"]), 2);
    assert_eq!(code(&["frobnicate"]), 2);
}

#[test]
fn charpoly_k2_golden() {
    let (c, v) = json(&["charpoly", "--k", "2", "--golden"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["degree"], 27);
    assert_eq!(v["results"]["golden"]["match"], true);
    assert_eq!(v["results"]["oracle"]["passed"], true);
}

#[test]
fn matrix_k1_golden() {
    let (c, v) = json(&["matrix", "--k", "1", "--golden"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["hermitian"], true);
    assert_eq!(v["results"]["golden"]["printed_matrix_match"], true);
    assert_eq!(v["results"]["entries"].as_array().unwrap().len(), 12);
}

#[test]
fn inertia_k3() {
    let (c, v) = json(&["inertia", "--k", "3", "--golden"]);
    assert_eq!(c, 0);
    let i = &v["results"]["inertia"];
    assert_eq!((i["plus"].as_u64(), i["zero"].as_u64(), i["minus"].as_u64()), (Some(40), Some(8), Some(0)));
    assert_eq!(v["results"]["oracle"]["agree"], true);
}

#[test]
fn inertia_generated_matches_reference() {
    let (_, a) = json(&["inertia", "--k", "2"]);
    let (_, b) = json(&["inertia", "--k", "2", "--source", "generated"]);
    assert_eq!(a["results"]["inertia"], b["results"]["inertia"]);
}

#[test]
fn spectrum_k0() {
    let (c, v) = json(&["spectrum", "--k", "0", "--golden"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["with_multiplicity"], serde_json::json!(["-10", "0", "0"]));
}

#[test]
fn cache_hit_and_determinism() {
    let dir = tempfile::tempdir().unwrap();
    let (_, first) = json_in(dir.path(), &["charpoly", "--k", "2"]);
    let (_, second) = json_in(dir.path(), &["charpoly", "--k", "2"]);
    assert_eq!(first["provenance"]["cache"]["state"], "stored");
    assert_eq!(second["provenance"]["cache"]["state"], "hit");
    assert_eq!(first["results"], second["results"]);
}

#[test]
fn corrupted_cache_is_rebuilt() {
    let dir = tempfile::tempdir().unwrap();
    json_in(dir.path(), &["inertia", "--k", "1"]);
    let path = dir.path().join("L1_paper.json");
    std::fs::write(&path, "{\"garbage\": true}").unwrap();
    let (c, v) = json_in(dir.path(), &["inertia", "--k", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["provenance"]["cache"]["state"], "stored");
}

#[test]
fn text_format() {
    let dir = tempfile::tempdir().unwrap();
    let out = run_in(dir.path(), &["inertia", "--k", "0", "--format", "text"]);
    let s = String::from_utf8(out.stdout).unwrap();
    assert!(s.lines().any(|l| l.starts_with("status") && l.ends_with("pass")));
    assert!(s.lines().any(|l| l.starts_with("results.inertia.minus") && l.ends_with('1')));
}

#[test]
fn geometry_checks() {
    for check in ["connections", "killing", "groups", "frames"] {
        let (c, v) = json(&["geometry", "--check", check, "--points", "10", "--configurations", "10"]);
        assert_eq!(c, 0, "{check}");
        assert_eq!(v["status"], "pass", "{check}");
    }
    let (_, v) = json(&["geometry", "--check", "killing"]);
    assert_eq!(v["results"]["killing"]["rank"], 17);
    assert_eq!(v["results"]["killing"]["kernel_dimension"], 4);
}

#[test]
fn decay_default() {
    let (c, v) = json(&["decay"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["listed_roots"], serde_json::json!(["0", "-1", "-3/2", "-5/2", "-3", "-4"]));
}

#[test]
fn decay_lambda_zero() {
    let (c, v) = json(&["decay", "--lambda", "0"]);
    assert_eq!(c, 0);
    assert_eq!(v["results"]["roots"]["plus"]["exact"], "0");
    assert_eq!(v["results"]["roots"]["minus"]["exact"], "-4");
}

#[test]
fn decay_ode_demo() {
    let (c, v) = json(&["decay", "--ode-demo", "-15/4"]);
    assert_eq!(c, 0);
    let fits = v["results"]["ode_demo"]["fits"].as_array().unwrap();
    assert_eq!(fits.len(), 2);
    for (fit, target) in fits.iter().zip([-1.5, -2.5]) {
        assert!((fit["exponent"].as_f64().unwrap() - target).abs() < 1e-3);
    }
}

#[test]
fn verify_all_partial_coverage() {
    let (c, v) = json(&["verify-all", "--max-k", "1"]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "partial");
}

#[test]
fn verify_all_default() {
    let (c, v) = json(&["verify-all"]);
    assert_eq!(c, 0);
    assert_eq!(v["status"], "pass");
    assert_eq!(v["results"]["total_kernel"], 17);
    assert_eq!(v["results"]["criteria"].as_array().unwrap().len(), 14);
}
