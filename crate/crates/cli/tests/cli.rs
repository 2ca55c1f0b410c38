use std::path::Path;
use std::process::{Command, Output};

use serde_json::Value;

fn contactlab(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_contactlab"))
        .args(args)
        .env_remove("CONTACTLAB_TOL")
        .output()
        .expect("binary runs")
}

fn report(out: &Output) -> Value {
    serde_json::from_slice(&out.stdout).expect("stdout is one JSON document")
}

fn check<'a>(r: &'a Value, id: &str) -> &'a Value {
    r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .find(|c| c["id"] == id)
        .unwrap_or_else(|| panic!("no check {id}"))
}

fn write(dir: &Path, name: &str, text: &str) -> String {
    let p = dir.join(name);
    std::fs::write(&p, text).unwrap();
    p.to_str().unwrap().to_owned()
}

const HEIS3: &str = r#"{
  "schema": 1, "name": "h3", "m": 1,
  "structure_constants": [[0, 1, 2, -1.0]],
  "eta": [0, 0, 1],
  "J": [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
}"#;

#[test]
fn validate_builtin_passes() {
    let out = contactlab(&["validate", "heisenberg3"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["pass"], true);
    assert_eq!(r["schema"], 1);
    assert!(!out.stderr.is_empty());
}

#[test]
fn validate_model_file() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "h3.json", HEIS3);
    let out = contactlab(&["validate", "--model", &path]);
    assert_eq!(out.status.code(), Some(0));
    assert_eq!(report(&out)["model"], "h3");
}

#[test]
fn broken_jacobi_fails_with_id() {
    let dir = tempfile::tempdir().unwrap();
    // [e, f] = -xi, [f, xi] = e, [xi, e] = e is not a Lie algebra
    let text = r#"{
      "schema": 1, "name": "broken", "m": 1,
      "structure_constants": [[0, 1, 2, -1.0], [1, 2, 0, 1.0], [2, 0, 0, 1.0]],
      "eta": [0, 0, 1],
      "J": [[0, -1, 0], [1, 0, 0], [0, 0, 0]]
    }"#;
    let path = write(dir.path(), "broken.json", text);
    let out = contactlab(&["validate", &path]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(r["pass"], false);
    assert_eq!(check(&r, "jacobi")["pass"], false);
}

#[test]
fn truncated_json_is_structural() {
    let dir = tempfile::tempdir().unwrap();
    let path = write(dir.path(), "cut.json", &HEIS3[..60]);
    let out = contactlab(&["validate", &path]);
    assert_eq!(out.status.code(), Some(2));
    let err = String::from_utf8_lossy(&out.stderr);
    assert!(err.contains("line"), "{err}");
    assert!(out.stdout.is_empty());
}

#[test]
fn unknown_model_and_bad_flags_are_structural() {
    assert_eq!(
        contactlab(&["validate", "no-such-model"]).status.code(),
        Some(2)
    );
    assert_eq!(
        contactlab(&["decompose", "--dim", "x"]).status.code(),
        Some(2)
    );
    assert_eq!(contactlab(&["frobnicate"]).status.code(), Some(2));
}

#[test]
fn decompose_dim5() {
    let out = contactlab(&[
        "decompose",
        "--dim",
        "5",
        "--count",
        "200",
        "--tol",
        "1e-10",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for c in r["checks"].as_array().unwrap() {
        assert!(c["max_violation"].as_f64().unwrap() <= 1e-10, "{c}");
        assert_ne!(c["vacuous"], true);
    }
}

#[test]
fn decompose_is_byte_identical() {
    let a = contactlab(&["decompose", "--dim", "7", "--seed", "11", "--count", "20"]);
    let b = contactlab(&["decompose", "--dim", "7", "--seed", "11", "--count", "20"]);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout);
}

#[test]
fn decompose_dim3_reports_vacuous() {
    let out = contactlab(&["decompose", "--dim", "3", "--count", "10"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    for id in ["b_m_third", "inv_b_20", "inv_b_11a", "phi_iso"] {
        assert_eq!(check(&r, id)["vacuous"], true, "{id}");
    }
    assert!(String::from_utf8_lossy(&out.stderr).contains("vacuous"));
}

#[test]
fn decompose_even_dim_is_usage_error() {
    assert_eq!(
        contactlab(&["decompose", "--dim", "4"]).status.code(),
        Some(2)
    );
}

#[test]
fn su2_tanaka_webster() {
    let out = contactlab(&["connection", "--model", "su2", "--data", "tw"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert_eq!(r["properties"]["nice"], true);
    assert_eq!(r["properties"]["cr"], true);
    assert!(
        check(&r, "dirac_tanaka_webster")["max_violation"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
}

#[test]
fn heis5_random_round_trip() {
    let out = contactlab(&[
        "connection",
        "--model",
        "heis5",
        "--data",
        "random",
        "--seed",
        "3",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(
        check(&r, "extract_round_trip")["max_violation"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
    for c in r["checks"].as_array().unwrap() {
        if c["id"].as_str().unwrap().starts_with("adapted_") {
            assert_eq!(c["pass"], true, "{c}");
        }
    }
}

#[test]
fn heis5_lc_equivalent() {
    let out = contactlab(&["connection", "--model", "heis5", "--data", "lc-equivalent"]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["properties"]["dirac_difference_max"].as_f64().unwrap() <= 1e-10);
    assert!(
        check(&r, "dirac_lc_equivalent")["max_violation"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
}

#[test]
fn noncr_model_has_no_cr_verdict() {
    let out = contactlab(&[
        "connection",
        "--model",
        "noncr5",
        "--data",
        "random",
        "--seed",
        "2",
    ]);
    assert_eq!(out.status.code(), Some(0));
    let r = report(&out);
    assert!(r["properties"]["cr"].is_null());
    assert!(check(&r, "fixed_T02")["pass"] == true);
}

#[test]
fn inadmissible_data_names_the_slot() {
    let dir = tempfile::tempdir().unwrap();
    // a single entry B(e1; e1, xi) is not a contact (1,1)_s form
    let text = r#"{"schema": 1, "omega": [], "B": [[0, 0, 2, 1.0]], "Phi": null}"#;
    let path = write(dir.path(), "bad.json", text);
    let out = contactlab(&["connection", "--model", "heis5", "--data", &path]);
    assert_eq!(out.status.code(), Some(1));
    let r = report(&out);
    assert_eq!(check(&r, "data_B")["pass"], false);
}

#[test]
fn data_file_lc_equivalent() {
    let dir = tempfile::tempdir().unwrap();
    let text = r#"{"schema": 1, "omega": [], "B": [], "Phi": [[0,0.5,0,0,0],[-0.5,0,0,0,0],[0,0,0,0.5,0],[0,0,-0.5,0,0],[0,0,0,0,0]]}"#;
    let path = write(dir.path(), "data.json", text);
    // Phi = -J/2 is the lc-equivalent class
    let out = contactlab(&["connection", "--model", "heis5", "--data", &path]);
    assert_eq!(
        out.status.code(),
        Some(0),
        "{}",
        String::from_utf8_lossy(&out.stderr)
    );
    assert!(
        report(&out)["properties"]["dirac_difference_max"]
            .as_f64()
            .unwrap()
            <= 1e-10
    );
}

#[test]
fn env_tolerance_and_out_file() {
    let dir = tempfile::tempdir().unwrap();
    let out_path = dir.path().join("r.json");
    let out = Command::new(env!("CARGO_BIN_EXE_contactlab"))
        .args(["validate", "su2", "--out", out_path.to_str().unwrap()])
        .env("CONTACTLAB_TOL", "1e-7")
        .output()
        .unwrap();
    assert_eq!(out.status.code(), Some(0));
    let r: Value = serde_json::from_str(&std::fs::read_to_string(&out_path).unwrap()).unwrap();
    assert_eq!(check(&r, "jacobi")["tolerance"], 1e-7);
    assert_eq!(r, report(&out));

    let bad = Command::new(env!("CARGO_BIN_EXE_contactlab"))
        .args(["validate", "su2"])
        .env("CONTACTLAB_TOL", "abc")
        .output()
        .unwrap();
    assert_eq!(bad.status.code(), Some(2));
}

#[test]
fn checks_filter() {
    let out = contactlab(&["validate", "su2", "--checks", "nijenhuis,nabla_f"]);
    let r = report(&out);
    let ids: Vec<_> = r["checks"]
        .as_array()
        .unwrap()
        .iter()
        .map(|c| c["id"].as_str().unwrap().to_owned())
        .collect();
    assert_eq!(
        ids,
        [
            "nabla_f_02",
            "nabla_f_closed",
            "nabla_f_endo",
            "nabla_f_split",
            "nabla_f_vanishing_parts",
            "nijenhuis_02_bianchi",
            "nijenhuis_split",
            "nijenhuis_trace_free"
        ]
    );
}
