use std::path::Path;

use serde_json::{json, Map, Value};
use walker_core::construction::{build_example, ConstructionRow};
use walker_core::curve_geometry::frenet_apparatus;
use walker_core::surface_geometry::{shape_operator, totally_geodesic_residual, CylinderCase};
use walker_core::GeometryError;

use crate::config::RunConfig;
use crate::output::{fmt_worst, num, write_csv, write_json, Cell};
use crate::suites::{self, SuiteReport};
use crate::{CliError, EXIT_FAILURE};

const FRENET_COLUMNS: [&str; 19] = [
    "t", "x", "y", "z", "T1", "T2", "T3", "N1", "N2", "N3", "B1", "B2", "B3", "kappa", "tau", "eps1", "eps2", "eps3",
    "status",
];

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
}

fn max_abs(values: impl Iterator<Item = f64>) -> f64 {
    values.fold(0.0, |m, v| m.max(v.abs()))
}

pub fn cmd_frenet(cfg: &RunConfig) -> Result<i32, CliError> {
    let metric = cfg.metric()?;
    let (curve, samples) = cfg.curve()?;
    let (a, b) = curve.domain();
    let tol = cfg.tol();
    let mut rows = Vec::with_capacity(samples);
    let mut failures: Vec<(f64, &'static str)> = Vec::new();
    let mut windows: Vec<Value> = Vec::new();
    let mut open: Option<(f64, f64, &'static str)> = None;
    let (mut kappa_min, mut kappa_max, mut tau_max, mut torsion_free) = (f64::INFINITY, 0.0_f64, 0.0_f64, 0usize);
    for t in linspace(a, b, samples) {
        match frenet_apparatus(&metric, &curve, t) {
            Ok(fr) => {
                if let Some((start, end, code)) = open.take() {
                    windows.push(json!({"t_start": num(start), "t_end": num(end), "code": code}));
                }
                kappa_min = kappa_min.min(fr.kappa);
                kappa_max = kappa_max.max(fr.kappa);
                tau_max = tau_max.max(fr.tau.abs());
                torsion_free += usize::from(fr.tau.abs() <= tol);
                let mut row: Vec<Cell> = vec![t.into(), fr.pos.x.into(), fr.pos.y.into(), fr.pos.z.into()];
                for v in [fr.tangent, fr.normal, fr.binormal] {
                    row.extend([v.x, v.y, v.z].map(Cell::from));
                }
                row.extend([fr.kappa, fr.tau, fr.eps1.value(), fr.eps2.value(), fr.eps3.value()].map(Cell::from));
                row.push("ok".into());
                rows.push(row);
            }
            Err(e) => {
                let code = e.code();
                failures.push((t, code));
                open = Some(match open {
                    Some((start, _, first)) => (start, t, first),
                    None => (t, t, code),
                });
                let mut row: Vec<Cell> = vec![t.into()];
                match curve.position(t) {
                    Ok(p) => row.extend([p.x, p.y, p.z].map(Cell::from)),
                    Err(_) => row.extend([code; 3].map(Cell::from)),
                }
                row.extend(std::iter::repeat_n(Cell::from(code), 15));
                rows.push(row);
            }
        }
    }
    if let Some((start, end, code)) = open {
        windows.push(json!({"t_start": num(start), "t_end": num(end), "code": code}));
    }
    let dir = cfg.output_dir();
    write_csv(&dir.join("frenet.csv"), &FRENET_COLUMNS, &rows)?;
    let defined = samples - failures.len();
    let summary = json!({
        "command": "frenet",
        "samples": samples,
        "undefined_samples": failures.len(),
        "failing_windows": windows,
        "kappa_min": if defined > 0 { num(kappa_min) } else { Value::Null },
        "kappa_max": if defined > 0 { num(kappa_max) } else { Value::Null },
        "max_abs_tau": num(tau_max),
        "torsion_free_samples": torsion_free,
        "tol": num(tol),
    });
    write_json(&dir.join("summary.json"), &summary)?;
    if failures.is_empty() {
        println!("frenet: {samples} samples, kappa in [{}, {}], max |tau| = {}", fmt_worst(kappa_min), fmt_worst(kappa_max), fmt_worst(tau_max));
        Ok(0)
    } else {
        let (t, code) = failures[0];
        eprintln!("frenet: frame undefined at {} of {samples} samples (first at t = {t}: {code})", failures.len());
        Ok(EXIT_FAILURE)
    }
}

const SURFACE_COLUMNS: [&str; 8] = ["u", "v", "status", "det_s", "gauss", "ambient_k", "h_max", "tg_residual"];

pub fn cmd_surface_check(cfg: &RunConfig) -> Result<i32, CliError> {
    let metric = cfg.metric()?;
    let (patch, n) = cfg.surface()?;
    let (case, phi) = patch.cylinder_profile().expect("configured surfaces are cylinders");
    let ((x0, x1), (p0, p1)) = patch.ranges();
    let tol = cfg.tol();
    let mut rows = Vec::with_capacity(n * n);
    let (mut det_max, mut gauss_max, mut h_max, mut tg_max) = (0.0_f64, 0.0_f64, 0.0_f64, 0.0_f64);
    let (mut degenerate, mut mismatches) = (0usize, 0usize);
    for u in linspace(x0, x1, n) {
        for v in linspace(p0, p1, n) {
            let tg = totally_geodesic_residual(&metric, case, phi, v).map_err(|e| CliError::from_geometry("totally_geodesic_residual", e))?;
            tg_max = tg_max.max(tg.abs());
            let mut row: Vec<Cell> = vec![u.into(), v.into()];
            match shape_operator(&metric, &patch, u, v) {
                Ok(sd) => {
                    let h = max_abs(sd.h.iter().copied());
                    det_max = det_max.max(sd.det_s.abs());
                    gauss_max = gauss_max.max(sd.gauss.abs());
                    h_max = h_max.max(h);
                    mismatches += usize::from((tg.abs() <= tol) != (h <= tol));
                    row.push("ok".into());
                    row.extend([sd.det_s, sd.gauss, sd.ambient_k, h].map(Cell::from));
                }
                Err(e @ (GeometryError::DegenerateTangentPlane { .. } | GeometryError::DegenerateInducedMetric { .. } | GeometryError::DegeneratePlane { .. })) => {
                    degenerate += 1;
                    row.extend(std::iter::repeat_n(Cell::from(e.code()), 5));
                }
                Err(e) => return Err(CliError::from_geometry("shape_operator", e)),
            }
            row.push(tg.into());
            rows.push(row);
        }
    }
    let dir = cfg.output_dir();
    write_csv(&dir.join("surface.csv"), &SURFACE_COLUMNS, &rows)?;
    let summary = json!({
        "command": "surface-check",
        "case": match case { CylinderCase::One => 1, CylinderCase::Two => 2 },
        "rows": rows.len(),
        "degenerate_rows": degenerate,
        "max_abs_det_s": num(det_max),
        "max_abs_gauss": num(gauss_max),
        "max_abs_h": num(h_max),
        "max_abs_tg_residual": num(tg_max),
        "tg_h_mismatches": mismatches,
        "tol": num(tol),
    });
    write_json(&dir.join("summary.json"), &summary)?;
    if degenerate == rows.len() {
        eprintln!("surface-check: tangent plane degenerate at every grid point");
        return Ok(EXIT_FAILURE);
    }
    println!(
        "surface-check: max |detS| = {}, max |K| = {}, max |tg_residual| = {}, degenerate rows {degenerate}/{}",
        fmt_worst(det_max),
        fmt_worst(gauss_max),
        fmt_worst(tg_max),
        rows.len()
    );
    Ok(0)
}

fn construction_stage(e: &GeometryError) -> &'static str {
    match e {
        GeometryError::DenominatorVanishes { .. } => "example_h_prime",
        GeometryError::SmallTangentComponent { .. } => "tangent_components",
        GeometryError::Numerics(_) => "integrate_h",
        GeometryError::NullVelocity { .. }
        | GeometryError::NullAcceleration { .. }
        | GeometryError::VanishingAcceleration { .. }
        | GeometryError::IrregularCurve { .. } => "frenet_frame",
        _ => "build_example",
    }
}

pub fn cmd_construct(cfg: &RunConfig) -> Result<i32, CliError> {
    let input = cfg.construction()?;
    let result = build_example(&input).map_err(|e| CliError::from_geometry(construction_stage(&e), e))?;
    let dir = cfg.output_dir();

    let report: Vec<Vec<Cell>> = result.rows.iter().map(|r| r.values().map(Cell::from).to_vec()).collect();
    write_csv(&dir.join("report.csv"), &ConstructionRow::COLUMNS, &report)?;
    let curve: Vec<Vec<Cell>> = result.rows.iter().map(|r| [r.y, r.x, r.y, r.z].map(Cell::from).to_vec()).collect();
    write_csv(&dir.join("curve.csv"), &["t", "x", "y", "z"], &curve)?;
    let offsets = [-1.0, -0.5, 0.0, 0.5, 1.0];
    let cylinder: Vec<Vec<Cell>> = result
        .rows
        .iter()
        .flat_map(|r| offsets.iter().map(move |dx| [input.x0 + dx, r.y, r.phi].map(Cell::from).to_vec()))
        .collect();
    write_csv(&dir.join("cylinder.csv"), &["x", "y", "z"], &cylinder)?;

    let s = &result.summary;
    let max_abs: Map<String, Value> = s.max_abs.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
    let summary = json!({
        "command": "construct",
        "input": {
            "f": input.f,
            "epsilon": input.eps.as_int(),
            "y0": num(input.y0),
            "r0": num(input.r0),
            "x0": num(input.x0),
            "range": [num(input.range.0), num(input.range.1)],
            "samples": input.samples,
        },
        "max_abs": max_abs,
        "kappa_constancy": num(s.kappa_constancy),
        "c_constancy": num(s.c_constancy),
        "b2_closed_constancy": num(s.b2_closed_constancy),
        "b2_frame_vs_closed": num(s.b2_defect),
        "b3_frame_max": num(s.b3_frame_max),
        "ansatz_defect_max": num(s.ansatz_defect_max),
        "vacuous_cylinder_samples": s.vacuous_samples,
    });
    write_json(&dir.join("summary.json"), &summary)?;
    println!("construct: {} samples written to {}", result.rows.len(), dir.display());
    for (name, v) in &s.max_abs {
        println!("  max |{name}| = {}", fmt_worst(*v));
    }
    Ok(0)
}

/// Runs `suite` (or every suite for `"all"`), prints one line per property
/// and writes `summary.json`.
pub fn cmd_verify(suite: &str, seed: u64, out_dir: &Path) -> Result<i32, CliError> {
    let reports = suites::run(suite, seed).ok_or_else(|| CliError::UnknownSuite(suite.to_owned()))?;
    for line in reports.iter().flat_map(SuiteReport::lines) {
        println!("{line}");
    }
    let passed = reports.iter().all(SuiteReport::passed);
    write_json(&out_dir.join("summary.json"), &suites::summary_json(&reports, seed))?;
    println!("{}: {suite}", if passed { "PASS" } else { "FAIL" });
    Ok(if passed { 0 } else { EXIT_FAILURE })
}
