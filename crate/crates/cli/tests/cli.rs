use std::path::PathBuf;
use std::process::{Command, Output};

use serde_json::Value;

fn dimer(args: &[&str]) -> Output {
    Command::new(env!("CARGO_BIN_EXE_dimer"))
        .args(args)
        .env_remove("DIMER_SEED")
        .output()
        .expect("binary runs")
}

fn code(o: &Output) -> i32 {
    o.status.code().expect("exited normally")
}

fn json(o: &Output) -> Value {
    serde_json::from_slice(&o.stdout).expect("stdout is JSON")
}

fn scratch(name: &str, contents: &str) -> PathBuf {
    let dir = std::env::temp_dir().join(format!("dimer-cli-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join(name);
    std::fs::write(&path, contents).unwrap();
    path
}

#[test]
fn charpoly_of_the_conifold() {
    let o = dimer(&["charpoly", "--example", "conifold"]);
    assert_eq!(code(&o), 0);
    let terms = json(&o);
    let terms = terms.as_array().unwrap();
    assert_eq!(terms.len(), 4);
    let mut support: Vec<(i64, i64)> = terms
        .iter()
        .map(|t| {
            assert_eq!(t["coeff"], 1);
            (t["hx"].as_i64().unwrap(), t["hy"].as_i64().unwrap())
        })
        .collect();
    support.sort();
    assert_eq!(support, vec![(0, 0), (0, 1), (1, 0), (1, 1)]);
}

#[test]
fn validate_honeycomb() {
    let o = dimer(&["validate", "--example", "honeycomb"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["valid"], true);
}

#[test]
fn missing_file_is_invalid_input() {
    assert_eq!(code(&dimer(&["check", "nonexistent.json"])), 2);
}

#[test]
fn unknown_flags_and_subcommands_are_invalid_input() {
    assert_eq!(code(&dimer(&["check", "--example", "conifold", "--frobnicate"])), 2);
    assert_eq!(code(&dimer(&["frobnicate"])), 2);
    assert_eq!(code(&dimer(&["check", "--example", "no-such-model"])), 2);
    assert_eq!(code(&dimer(&["check"])), 2);
}

#[test]
fn malformed_documents_are_invalid_input() {
    let p = scratch("bad.json", r#"{"vertices": [], "edges": [], "rotation": {}, "extra": 1}"#);
    assert_eq!(code(&dimer(&["quiver", p.to_str().unwrap()])), 2);
    let p = scratch("broken.json", "{not json");
    assert_eq!(code(&dimer(&["validate", p.to_str().unwrap()])), 2);
}

#[test]
fn sphere_map_fails_validation() {
    let digon = r#"{
        "vertices": [{"id": "b", "color": "black"}, {"id": "w", "color": "white"}],
        "edges": [{"id": "x", "black": "b", "white": "w", "offset": [0, 0]},
                  {"id": "y", "black": "b", "white": "w", "offset": [1, 0]}],
        "rotation": {"b": ["x", "y"], "w": ["x", "y"]}
    }"#;
    let p = scratch("digon.json", digon);
    let o = dimer(&["validate", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
    assert_eq!(json(&o)["valid"], false);
    assert_eq!(code(&dimer(&["matchings", p.to_str().unwrap()])), 2);

    let parallel = digon.replace("[1, 0]", "[0, 0]");
    let p = scratch("parallel.json", &parallel);
    assert_eq!(code(&dimer(&["validate", p.to_str().unwrap()])), 2);
}

#[test]
fn check_verdicts() {
    let o = dimer(&["check", "--example", "conifold"]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["agree"], true);
    let o = dimer(&["check", "--example", "degenerate"]);
    assert_eq!(code(&o), 3);
    assert_eq!(json(&o)["non_degenerate"], false);
}

#[test]
fn file_and_example_agree() {
    let o = dimer(&["matchings", "--example", "conifold"]);
    let m = dimer_core::catalog::named("conifold").unwrap();
    let p = scratch("conifold.json", &dimer_core::io::model_to_json(&m));
    let f = dimer(&["matchings", p.to_str().unwrap()]);
    assert_eq!(o.stdout, f.stdout);
    assert_eq!(json(&o)["count"], 4);
}

#[test]
fn svg_is_deterministic() {
    for args in [
        &["render", "--example", "conifold"][..],
        &["render", "--example", "honeycomb", "--overlay", "domain"][..],
        &["polygon", "--example", "c3-z3", "--svg"][..],
        &["fixed-points", "--example", "conifold", "--svg"][..],
    ] {
        let a = dimer(args);
        let b = dimer(args);
        assert_eq!(code(&a), 0, "{args:?}");
        assert!(a.stdout.starts_with(b"<svg"));
        assert_eq!(a.stdout, b.stdout, "{args:?}");
    }
}

#[test]
fn matching_overlay_thickens_one_edge() {
    let o = dimer(&["render", "--example", "conifold", "--overlay", "matching"]);
    let svg = String::from_utf8(o.stdout).unwrap();
    assert_eq!(svg.matches("<g class=\"edge").count(), 4);
    assert_eq!(svg.matches("<g class=\"edge matched\"").count(), 1);
}

#[test]
fn seed_flag_and_environment() {
    let a = dimer(&["theta", "--example", "conifold", "--seed", "7"]);
    let b = Command::new(env!("CARGO_BIN_EXE_dimer"))
        .args(["theta", "--example", "conifold"])
        .env("DIMER_SEED", "7")
        .output()
        .unwrap();
    assert_eq!(code(&a), 0);
    assert_eq!(a.stdout, b.stdout);
    let t = json(&a);
    assert_eq!(t["seed"], 7);
    assert_eq!(t["matching_rep_stable"], true);
}

#[test]
fn fixed_points_and_theta_file() {
    let o = dimer(&["fixed-points", "--example", "conifold"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["count"], 2);
    assert_eq!(r["certificate"]["passed"], true);
    assert!(r["transitions"].as_array().unwrap().iter().all(|t| t["det"] == 1));

    let q = dimer_core::quiver::quiver_of(&dimer_core::catalog::conifold());
    let theta = format!(r#"{{"{}": "-3/2", "{}": "3/2"}}"#, q.vertices[0], q.vertices[1]);
    let p = scratch("theta.json", &theta);
    let o = dimer(&["fixed-points", "--example", "conifold", "--theta", p.to_str().unwrap()]);
    assert_eq!(code(&o), 0);
    assert_eq!(json(&o)["count"], 2);

    let p = scratch("theta-bad.json", r#"{"f0": "1"}"#);
    let o = dimer(&["fixed-points", "--example", "conifold", "--theta", p.to_str().unwrap()]);
    assert_eq!(code(&o), 2);
}

#[test]
fn toric_report() {
    let o = dimer(&["toric", "--example", "conifold"]);
    assert_eq!(code(&o), 0);
    let r = json(&o);
    assert_eq!(r["hilbert_basis"].as_array().unwrap().len(), 4);
    assert_eq!(r["relations"], serde_json::json!([[0, 2, 1, 3]]));
    assert_eq!(code(&dimer(&["toric", "--example", "degenerate"])), 3);
}

#[test]
fn rcharge_and_quiver_reports() {
    let r = json(&dimer(&["rcharge", "--example", "honeycomb"]));
    assert!(r["edges"].as_object().unwrap().values().all(|v| v == "2/3"));
    let q = json(&dimer(&["quiver", "--example", "conifold"]));
    assert_eq!(q["vertices"].as_array().unwrap().len(), 2);
    assert_eq!(q["arrows"].as_array().unwrap().len(), 4);
    for rel in q["relations"].as_array().unwrap() {
        assert_eq!(rel["plus"].as_array().unwrap().len(), 3);
        assert_eq!(rel["minus"].as_array().unwrap().len(), 3);
    }
}

#[test]
fn out_of_range_reference_is_invalid_input() {
    assert_eq!(code(&dimer(&["charpoly", "--example", "conifold", "--ref", "9"])), 2);
}
