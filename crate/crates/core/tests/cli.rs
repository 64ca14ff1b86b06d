//! End-to-end checks of the command-line interface: report exit semantics,
//! the export/ingest round trip, document-driven monodromy and toricness
//! checks, and exact retraction evaluation.

use std::path::PathBuf;
use std::process::{Command, Output};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_skelfan"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn stdout(out: &Output) -> String {
    String::from_utf8_lossy(&out.stdout).into_owned()
}

fn tmp(name: &str) -> PathBuf {
    let mut p = std::env::temp_dir();
    p.push(format!("skelfan-test-{}-{name}", std::process::id()));
    p
}

#[test]
fn scenario_reports_succeed() {
    for name in ["quartic-k3", "k3-collision", "quintic-local", "fermat-li"] {
        let out = run(&["scenario", name]);
        assert!(out.status.success(), "{name}: {}", stdout(&out));
        assert!(stdout(&out).contains("0 failed"), "{name}");
    }
}

#[test]
fn quintic_scenario_with_small_grid() {
    let out = run(&["scenario", "quintic", "--samples", "4", "--json"]);
    assert!(out.status.success());
    let report: serde_json::Value = serde_json::from_str(&stdout(&out)).unwrap();
    let records = report["records"].as_array().unwrap();
    assert!(records
        .iter()
        .any(|r| r["name"].as_str().unwrap().contains("gamma_234_34")));
    assert!(stdout(&out).contains("[[1,0,0],[0,1,0],[5,0,1]]"));
}

#[test]
fn unknown_scenario_is_a_usage_error() {
    let out = run(&["scenario", "nosuch"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn export_monodromy_roundtrip() {
    let path = tmp("quintic.json");
    let out = run(&["export", "quintic", path.to_str().unwrap()]);
    assert!(out.status.success());

    let out = run(&["monodromy", path.to_str().unwrap(), "gamma_234_24"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[[1,0,0],[5,1,0],[0,0,1]]"));

    // identical report when the exported document is ingested again
    let text = std::fs::read_to_string(&path).unwrap();
    let doc = skelfan::spec_doc::parse(&text).unwrap();
    let data = skelfan::spec_doc::to_scenario(&doc).unwrap();
    let report_a = skelfan::scenarios::base_report(&data).unwrap().to_json();
    let (outputs, _) = skelfan::scenarios::quintic::quintic(4).unwrap();
    let report_b = skelfan::scenarios::base_report(&outputs.data)
        .unwrap()
        .to_json();
    assert_eq!(report_a, report_b);

    let out = run(&["monodromy", path.to_str().unwrap(), "nonexistent"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn trivial_loop_gives_identity() {
    let path = tmp("quartic-id.json");
    assert!(run(&["export", "quartic-k3", path.to_str().unwrap()])
        .status
        .success());
    // the loop around the untouched component has trivial monodromy
    let out = run(&["monodromy", path.to_str().unwrap(), "gamma_4"]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("[[1,0],[0,1]]"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn every_exportable_scenario_roundtrips() {
    for name in [
        "quartic-k3",
        "k3-combined",
        "k3-dispersion",
        "k3-collision",
        "quintic",
    ] {
        let path = tmp(&format!("rt-{name}.json"));
        assert!(run(&["export", name, path.to_str().unwrap()]).status.success());
        let text = std::fs::read_to_string(&path).unwrap();
        let doc = skelfan::spec_doc::parse(&text).unwrap();
        let data = skelfan::spec_doc::to_scenario(&doc).unwrap();
        let again = skelfan::spec_doc::to_json(&skelfan::spec_doc::from_scenario(&data));
        assert_eq!(text, again, "{name}: document not stable under round trip");
        let report_a = skelfan::scenarios::base_report(&data).unwrap().to_json();
        let report_b = skelfan::scenarios::base_report(
            &skelfan::spec_doc::to_scenario(&skelfan::spec_doc::parse(&again).unwrap()).unwrap(),
        )
        .unwrap()
        .to_json();
        assert_eq!(report_a, report_b, "{name}: report not identical");
        std::fs::remove_file(&path).ok();
    }
}

#[test]
fn check_toric_from_document() {
    let path = tmp("quartic.json");
    assert!(run(&["export", "quartic-k3", path.to_str().unwrap()])
        .status
        .success());
    let out = run(&[
        "check-toric",
        path.to_str().unwrap(),
        "component v1 (untouched model)",
    ]);
    assert!(out.status.success());
    assert!(stdout(&out).contains("certified"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn check_toric_without_fan_cannot_certify() {
    let path = tmp("nofan.json");
    let doc = serde_json::json!({
        "schema": 1,
        "name": "custom",
        "complex": {
            "vertices": [
                {"name": "v1", "multiplicity": 1},
                {"name": "v2", "multiplicity": 1}
            ],
            "faces": [[0, 1]]
        },
        "strata": [{
            "id": "blown-up component",
            "ambient_dim": 3,
            "J_size": 1,
            "lambda": [],
            "cartier": [true],
            "connected_intersections": true
        }]
    });
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = run(&["check-toric", path.to_str().unwrap(), "blown-up component"]);
    assert_eq!(out.status.code(), Some(1));
    assert!(stdout(&out).contains("cannot certify"));
    std::fs::remove_file(&path).ok();
}

#[test]
fn corrupted_stratum_fails_nefness_with_witness() {
    // lambda edited so a conormal summand stops being nef: the checker must
    // report the failing wall
    let path = tmp("badlambda.json");
    let doc = serde_json::json!({
        "schema": 1,
        "name": "custom",
        "complex": {
            "vertices": [
                {"name": "v1", "multiplicity": 1},
                {"name": "v2", "multiplicity": 1},
                {"name": "v3", "multiplicity": 1}
            ],
            "faces": [[0, 1, 2]]
        },
        "strata": [{
            "id": "corrupted",
            "ambient_dim": 3,
            "fanZ": {
                "dim": 2,
                "rays": [[1, 0], [0, 1], [-1, -1]],
                "maximal_cones": [[0, 1], [1, 2], [0, 2]]
            },
            "J_size": 2,
            "lambda": [[-1, 0, 0]],
            "cartier": [true, true],
            "connected_intersections": true
        }]
    });
    std::fs::write(&path, serde_json::to_string_pretty(&doc).unwrap()).unwrap();
    let out = run(&["check-toric", path.to_str().unwrap(), "corrupted"]);
    assert_eq!(out.status.code(), Some(1));
    let text = stdout(&out);
    assert!(text.contains("negative on wall"), "{text}");
    std::fs::remove_file(&path).ok();
}

#[test]
fn malformed_document_is_a_parse_error() {
    let path = tmp("broken.json");
    std::fs::write(&path, "{ not json").unwrap();
    let out = run(&["monodromy", path.to_str().unwrap(), "x"]);
    assert_eq!(out.status.code(), Some(2));
    std::fs::remove_file(&path).ok();
}

#[test]
fn retract_eval_exact_values() {
    let out = run(&["retract", "eval", "quintic-vertex", "0", "1/3", "1"]);
    assert!(out.status.success());
    assert_eq!(stdout(&out).trim(), "3/4 7/12 0");

    let out = run(&["retract", "eval", "quintic-combinatorial", "0", "0", "1"]);
    assert_eq!(stdout(&out).trim(), "0 0 0");

    let out = run(&["retract", "eval", "wing(0)", "0", "1"]);
    assert_eq!(stdout(&out).trim(), "0 0");

    let out = run(&["retract", "eval", "wing(1/4)", "3/4", "1/8"]);
    assert_eq!(stdout(&out).trim(), "5/8 0");

    let out = run(&["retract", "eval", "kappa", "0", "1/3", "4/3"]);
    assert_eq!(stdout(&out).trim(), "0 1/3 1");

    // the flow apex is rejected
    let out = run(&["retract", "eval", "quintic-vertex", "-1", "0", "0"]);
    assert_eq!(out.status.code(), Some(1));

    // outside the domain
    let out = run(&["retract", "eval", "wing(0)", "5", "5"]);
    assert_eq!(out.status.code(), Some(1));

    // unknown map
    let out = run(&["retract", "eval", "nosuch", "0"]);
    assert_eq!(out.status.code(), Some(2));
}
