//! One test per acceptance property. Each prints a PASS/FAIL line with the
//! worst residual before asserting.

use std::process::Command;

use walker_cli::suites::{self, SuiteReport};

const SEED: u64 = 42;

fn check(label: &str, report: &SuiteReport) {
    for line in report.lines() {
        println!("  {line}");
    }
    println!("{} {label}", if report.passed() { "PASS" } else { "FAIL" });
    assert!(report.passed(), "{label} failed: {:#?}", report.properties);
}

#[test]
fn cross_product_identity() {
    check("cross product identity", &suites::cross(SEED));
}

#[test]
fn connection_matches_metric_compatibility() {
    check("connection correctness", &suites::connection(SEED));
}

#[test]
fn curvature_matches_connection_oracle() {
    check("curvature correctness", &suites::curvature(SEED));
}

#[test]
fn frenet_oracle_with_unit_torsion() {
    check("frenet hand oracle, kappa = 1 and tau = -1", &suites::frenet_oracle_a());
}

#[test]
fn frenet_oracle_with_zero_torsion() {
    check("frenet hand oracle, zero torsion", &suites::frenet_oracle_b());
}

#[test]
fn pairing_identity_on_corpus() {
    check("position/binormal pairing identity", &suites::pairing(SEED));
}

#[test]
fn cylinders_are_flat() {
    check("cylinder flatness", &suites::cylinder_flatness(SEED));
}

#[test]
fn totally_geodesic_conditions() {
    check("totally geodesic conditions", &suites::totally_geodesic(SEED));
}

#[test]
fn construction_pipeline() {
    check("construction pipeline", &suites::construction_example());
}

#[test]
fn parser_and_differentiation() {
    check("parser and symbolic differentiation", &suites::parser());
}

#[test]
fn verify_all_is_deterministic() {
    let dir = tempfile::tempdir().unwrap();
    let run = |name: &str| {
        let out = dir.path().join(name);
        let status = Command::new(env!("CARGO_BIN_EXE_walker"))
            .args(["verify", "all", "--seed", "42", "--out"])
            .arg(&out)
            .output()
            .unwrap();
        assert_eq!(status.status.code(), Some(0), "{}", String::from_utf8_lossy(&status.stdout));
        std::fs::read(out.join("summary.json")).unwrap()
    };
    let (first, second) = (run("first"), run("second"));
    let same = first == second;
    println!("{} verify all determinism ({} bytes)", if same { "PASS" } else { "FAIL" }, first.len());
    assert!(same);
    let summary: serde_json::Value = serde_json::from_slice(&first).unwrap();
    assert_eq!(summary["seed"], 42);
}
