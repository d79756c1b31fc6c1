//! Property suites run by `walker verify`. Each suite reports, per property,
//! the worst observed residual next to its tolerance. Random inputs come from
//! a ChaCha stream derived from the seed, so reports are reproducible.

use std::fmt::Display;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::{json, Map, Value};
use walker_core::construction::{build_example, ConstructionInput};
use walker_core::curve_geometry::{frenet_apparatus, orthonormality_defect, pairing_residual, CurveSpec};
use walker_core::field_expr::{ExprAst, ScalarField1};
use walker_core::manifold::det3;
use walker_core::numerics::{central_5pt, derivative_fd, FdOrder};
use walker_core::surface_geometry::{second_fundamental, shape_operator, totally_geodesic_residual, CylinderCase, SurfacePatch};
use walker_core::{construction, GeometryError, Point3, Sign, Vec3, WalkerMetric};

use crate::output::num;

pub const CROSS_TOL: f64 = 1e-9;
pub const CONNECTION_TOL: f64 = 1e-6;
pub const CURVATURE_TOL: f64 = 1e-5;
pub const FRENET_TOL: f64 = 1e-8;
pub const PLANARITY_TOL: f64 = 1e-10;
pub const PAIRING_TOL: f64 = 1e-6;
pub const DET_S_TOL: f64 = 1e-10;
pub const GAUSS_TOL: f64 = 1e-7;
pub const TG_TOL: f64 = 1e-8;
pub const H_LOG_TOL: f64 = 1e-8;
pub const B2_CONSTANT_TOL: f64 = 1e-8;
pub const EVAL_REL_TOL: f64 = 1e-12;
pub const DERIVATIVE_TOL: f64 = 1e-6;

pub const SUITES: [&str; 8] = ["cross", "connection", "curvature", "frenet", "pairing", "cylinder", "construction", "parser"];

#[derive(Debug, Clone, PartialEq)]
pub struct Property {
    pub name: &'static str,
    pub passed: bool,
    pub worst: f64,
    pub tol: f64,
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SuiteReport {
    pub suite: &'static str,
    pub properties: Vec<Property>,
    /// Reported values without a pass/fail gate.
    pub diagnostics: Vec<(&'static str, f64)>,
}

impl SuiteReport {
    fn new(suite: &'static str) -> SuiteReport {
        SuiteReport { suite, properties: Vec::new(), diagnostics: Vec::new() }
    }

    pub fn passed(&self) -> bool {
        self.properties.iter().all(|p| p.passed)
    }

    pub fn property(&self, name: &str) -> Option<&Property> {
        self.properties.iter().find(|p| p.name == name)
    }

    fn merge(mut self, other: SuiteReport) -> SuiteReport {
        self.properties.extend(other.properties);
        self.diagnostics.extend(other.diagnostics);
        self
    }

    /// One line per property, as printed by `walker verify`.
    pub fn lines(&self) -> Vec<String> {
        self.properties
            .iter()
            .map(|p| {
                let mut line = format!(
                    "{} {}/{} worst={:.3e} tol={:.0e}",
                    if p.passed { "PASS" } else { "FAIL" },
                    self.suite,
                    p.name,
                    p.worst,
                    p.tol
                );
                if let Some(note) = &p.note {
                    line.push_str(&format!(" ({note})"));
                }
                line
            })
            .collect()
    }
}

/// Running maximum that remembers the first error and any non-finite value.
#[derive(Default)]
struct Worst {
    value: f64,
    nonfinite: bool,
    error: Option<String>,
}

impl Worst {
    fn add(&mut self, v: f64) {
        if v.is_finite() {
            self.value = self.value.max(v.abs());
        } else {
            self.nonfinite = true;
        }
    }

    fn fail(&mut self, e: impl Display) {
        if self.error.is_none() {
            self.error = Some(e.to_string());
        }
    }

    fn check(&mut self, r: Result<f64, GeometryError>) {
        match r {
            Ok(v) => self.add(v),
            Err(e) => self.fail(e),
        }
    }

    fn property(self, name: &'static str, tol: f64) -> Property {
        let worst = if self.nonfinite { f64::NAN } else { self.value };
        Property { name, passed: self.error.is_none() && worst <= tol, worst, tol, note: self.error }
    }
}

fn rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut r = ChaCha8Rng::seed_from_u64(seed);
    r.set_stream(stream);
    r
}

fn random_vec(r: &mut ChaCha8Rng, scale: f64) -> Vec3 {
    Vec3::new(r.gen_range(-scale..scale), r.gen_range(-scale..scale), r.gen_range(-scale..scale))
}

fn random_sign(r: &mut ChaCha8Rng) -> Sign {
    if r.gen_bool(0.5) {
        Sign::Plus
    } else {
        Sign::Minus
    }
}

fn metric(eps: Sign, f: &str) -> WalkerMetric {
    WalkerMetric::parse(eps, f).expect("suite fields parse")
}

fn linspace(a: f64, b: f64, n: usize) -> impl Iterator<Item = f64> {
    (0..n).map(move |i| if i + 1 == n { b } else { a + (b - a) * i as f64 / (n - 1) as f64 })
}

/// Runs a named suite; `None` for an unknown name.
pub fn run(name: &str, seed: u64) -> Option<Vec<SuiteReport>> {
    let one = |r: SuiteReport| Some(vec![r]);
    match name {
        "cross" => one(cross(seed)),
        "connection" => one(connection(seed)),
        "curvature" => one(curvature(seed)),
        "frenet" => one(frenet_oracle_a().merge(frenet_oracle_b())),
        "pairing" => one(pairing(seed)),
        "cylinder" => one(cylinder_flatness(seed).merge(totally_geodesic(seed))),
        "construction" => one(construction_example()),
        "parser" => one(parser()),
        "all" => Some(SUITES.iter().flat_map(|s| run(s, seed).unwrap()).collect()),
        _ => None,
    }
}

pub fn summary_json(reports: &[SuiteReport], seed: u64) -> Value {
    let mut suites = Map::new();
    for r in reports {
        let properties: Vec<Value> = r
            .properties
            .iter()
            .map(|p| json!({"name": p.name, "passed": p.passed, "worst": num(p.worst), "tol": num(p.tol), "note": p.note}))
            .collect();
        let diagnostics: Map<String, Value> = r.diagnostics.iter().map(|(k, v)| (k.to_string(), num(*v))).collect();
        suites.insert(r.suite.to_owned(), json!({"passed": r.passed(), "properties": properties, "diagnostics": diagnostics}));
    }
    json!({"seed": seed, "passed": reports.iter().all(SuiteReport::passed), "suites": suites})
}

/// `g(u ×_f v, w) = det(u, v, w)` at random points for `f = y² + z`.
pub fn cross(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 1);
    let mut identity = Worst::default();
    let mut antisymmetry = Worst::default();
    for eps in [Sign::Plus, Sign::Minus] {
        let m = metric(eps, "y^2 + z");
        for _ in 0..1000 {
            let p = Point3::from(random_vec(&mut r, 3.0));
            let (u, v, w) = (random_vec(&mut r, 3.0), random_vec(&mut r, 3.0), random_vec(&mut r, 3.0));
            let res = m.cross_f(&p, &u, &v).and_then(|c| {
                let lhs = m.metric_dot(&p, &c, &w)?;
                let f = m.field().value(p.y, p.z)?.abs();
                let scale = 1.0 + (1.0 + f) * u.amax() * v.amax() * w.amax();
                Ok((lhs - det3(&u, &v, &w)).abs() / scale)
            });
            identity.check(res);
            antisymmetry.check(m.cross_f(&p, &u, &v).and_then(|a| Ok((a + m.cross_f(&p, &v, &u)?).amax())));
        }
    }
    let mut report = SuiteReport::new("cross");
    report.properties.push(identity.property("identity", CROSS_TOL));
    report.properties.push(antisymmetry.property("antisymmetry", 0.0));
    report
}

const CONNECTION_FIELDS: [&str; 5] = ["y^2 + z", "sin(y) + z^2", "exp(y/2)*cos(z)", "y^3 - y*z", "1 + y*z^2"];

/// Metric compatibility `d/dt⟨X,Y⟩ = ⟨∇X,Y⟩ + ⟨X,∇Y⟩` along random quadratic
/// curves, the Koszul formula from finite differences of the metric, and
/// symmetry.
pub fn connection(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 2);
    let mut compat = Worst::default();
    let mut koszul = Worst::default();
    let mut symmetry = Worst::default();
    for i in 0..50 {
        let m = metric(random_sign(&mut r), CONNECTION_FIELDS[i % CONNECTION_FIELDS.len()]);
        let [p0, a, b, x0, x1, x2, y0, y1, y2] = [(); 9].map(|_| random_vec(&mut r, 1.0));
        let t0: f64 = r.gen_range(-0.5..0.5);
        let gamma = |t: f64| Point3::from(p0 + a * t + b * (t * t));
        let xf = |t: f64| x0 + x1 * t + x2 * (t * t);
        let yf = |t: f64| y0 + y1 * t + y2 * (t * t);
        let res = (|| {
            let lhs = central_5pt(|t| Ok::<_, GeometryError>([m.metric_dot(&gamma(t), &xf(t), &yf(t))?]), t0, 1e-3)?[0];
            let p = gamma(t0);
            let vel = a + b * (2.0 * t0);
            let dx = x1 + x2 * (2.0 * t0) + m.christoffel_apply(&p, &vel, &xf(t0))?;
            let dy = y1 + y2 * (2.0 * t0) + m.christoffel_apply(&p, &vel, &yf(t0))?;
            let rhs = m.metric_dot(&p, &dx, &yf(t0))? + m.metric_dot(&p, &xf(t0), &dy)?;
            Ok((lhs - rhs).abs())
        })();
        compat.check(res);
        koszul.check(koszul_defect(&m, &gamma(t0), &xf(t0), &yf(t0)));
        symmetry.check(
            m.christoffel_apply(&gamma(t0), &x0, &y0)
                .and_then(|g| Ok((g - m.christoffel_apply(&gamma(t0), &y0, &x0)?).amax())),
        );
    }
    let mut report = SuiteReport::new("connection");
    report.properties.push(compat.property("metric_compatibility", CONNECTION_TOL));
    report.properties.push(koszul.property("koszul", CONNECTION_TOL));
    report.properties.push(symmetry.property("symmetry", 0.0));
    report
}

/// `Γ(u,v)` against `½ g^{kl}(∂_i g_jl + ∂_j g_il − ∂_l g_ij) u^i v^j` with the
/// metric derivatives taken by finite differences.
fn koszul_defect(m: &WalkerMetric, p: &Point3, u: &Vec3, v: &Vec3) -> Result<f64, GeometryError> {
    let mut dg = [nalgebra::Matrix3::<f64>::zeros(); 3];
    for (k, slot) in dg.iter_mut().enumerate() {
        let e = Vec3::ith(k, 1.0);
        let d = central_5pt(|s| m.matrix(&(p + e * s)).map(|g| <[f64; 9]>::try_from(g.as_slice()).unwrap()), 0.0, 1e-3)?;
        *slot = nalgebra::Matrix3::from_column_slice(&d);
    }
    let g_inv = m.matrix(p)?.try_inverse().ok_or(GeometryError::InvalidInput("singular metric".into()))?;
    let mut lowered = Vec3::zeros();
    for l in 0..3 {
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..3 {
                s += 0.5 * (dg[i][(j, l)] + dg[j][(i, l)] - dg[l][(i, j)]) * u[i] * v[j];
            }
        }
        lowered[l] = s;
    }
    Ok((g_inv * lowered - m.christoffel_apply(p, u, v)?).amax())
}

const AFFINE_FIELDS: [&str; 3] = ["2*y + z^3", "y*sin(z) + exp(z)", "z^2 - 3*y*z"];

/// `R(u,v)w` against `D_uΓ(v,w) − D_vΓ(u,w) + Γ(u,Γ(v,w)) − Γ(v,Γ(u,w))`
/// for `f = y³ + sin(z)`; exact zero when `f` is affine in `y`.
pub fn curvature(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 3);
    let mut oracle = Worst::default();
    let mut affine = Worst::default();
    for i in 0..50 {
        let eps = if i % 2 == 0 { Sign::Plus } else { Sign::Minus };
        let m = metric(eps, "y^3 + sin(z)");
        let p = Point3::from(random_vec(&mut r, 1.5));
        let (u, v, w) = (random_vec(&mut r, 1.0), random_vec(&mut r, 1.0), random_vec(&mut r, 1.0));
        let res = (|| {
            let along = |dir: Vec3, a: Vec3| {
                central_5pt(|s| m.christoffel_apply(&(p + dir * s), &a, &w).map(|g| [g.x, g.y, g.z]), 0.0, 1e-3)
                    .map(|d| Vec3::new(d[0], d[1], d[2]))
            };
            let quad = m.christoffel_apply(&p, &u, &m.christoffel_apply(&p, &v, &w)?)?
                - m.christoffel_apply(&p, &v, &m.christoffel_apply(&p, &u, &w)?)?;
            let expected = along(u, v)? - along(v, u)? + quad;
            Ok((m.riemann_apply(&p, &u, &v, &w)? - expected).amax())
        })();
        oracle.check(res);
        let flat_in_y = metric(eps, AFFINE_FIELDS[i % AFFINE_FIELDS.len()]);
        affine.check(flat_in_y.riemann_apply(&p, &u, &v, &w).map(|x| x.amax()));
    }
    let mut report = SuiteReport::new("curvature");
    report.properties.push(oracle.property("connection_oracle", CURVATURE_TOL));
    report.properties.push(affine.property("affine_in_y_is_flat", 0.0));
    report
}

fn frame_check(
    report: &mut SuiteReport,
    prefix: [&'static str; 5],
    m: &WalkerMetric,
    c: &CurveSpec,
    ts: &[f64],
    expect: impl Fn(f64) -> (f64, f64, [i64; 3], Vec3),
) {
    let (mut kappa, mut tau, mut signs, mut ortho, mut binormal) =
        (Worst::default(), Worst::default(), Worst::default(), Worst::default(), Worst::default());
    for &t in ts {
        match frenet_apparatus(m, c, t) {
            Ok(fr) => {
                let (k, tt, s, b) = expect(t);
                kappa.add(fr.kappa - k);
                tau.add(fr.tau - tt);
                signs.add(f64::from(u8::from([fr.eps1, fr.eps2, fr.eps3].map(Sign::as_int) != s)));
                ortho.check(orthonormality_defect(m, &fr));
                binormal.add((fr.binormal - b).amax());
            }
            Err(e) => {
                for w in [&mut kappa, &mut tau, &mut signs, &mut ortho, &mut binormal] {
                    w.fail(&e);
                }
            }
        }
    }
    let [pk, pt, ps, po, pb] = prefix;
    report.properties.push(kappa.property(pk, FRENET_TOL));
    report.properties.push(tau.property(pt, FRENET_TOL));
    report.properties.push(signs.property(ps, 0.0));
    report.properties.push(ortho.property(po, FRENET_TOL));
    report.properties.push(binormal.property(pb, FRENET_TOL));
}

/// `γ(t) = (t/2 − t³/6, t²/2, t)` in the flat metric: κ = 1, τ = −1.
pub fn frenet_oracle_a() -> SuiteReport {
    let m = WalkerMetric::flat(Sign::Plus);
    let c = CurveSpec::parse("t/2 - t^3/6", "t^2/2", "t", (-0.9, 0.9)).expect("oracle curve");
    let ts: Vec<f64> = linspace(-0.9, 0.9, 37).collect();
    let mut report = SuiteReport::new("frenet");
    frame_check(
        &mut report,
        ["oracle_a.kappa", "oracle_a.tau", "oracle_a.signs", "oracle_a.orthonormality", "oracle_a.binormal"],
        &m,
        &c,
        &ts,
        |t| (1.0, -1.0, [1, 1, -1], Vec3::new(0.5 * (1.0 + t * t), -t, -1.0)),
    );
    report
}

/// `γ(t) = (t², 0, t)` in the flat metric: κ = 1/(4 t^{3/2}), τ = 0, B = (0, −1, 0).
pub fn frenet_oracle_b() -> SuiteReport {
    let m = WalkerMetric::flat(Sign::Plus);
    let c = CurveSpec::parse("t^2", "0", "t", (0.5, 2.0)).expect("oracle curve");
    let ts: Vec<f64> = linspace(0.5, 2.0, 31).collect();
    let mut report = SuiteReport::new("frenet");
    frame_check(
        &mut report,
        ["oracle_b.kappa", "oracle_b.tau", "oracle_b.signs", "oracle_b.orthonormality", "oracle_b.binormal"],
        &m,
        &c,
        &ts,
        |t| (0.25 * t.powf(-1.5), 0.0, [1, -1, 1], Vec3::new(0.0, -1.0, 0.0)),
    );
    let mut at_one = Worst::default();
    at_one.check(frenet_apparatus(&m, &c, 1.0).map(|fr| fr.kappa - 0.25));
    report.properties.push(at_one.property("oracle_b.kappa_at_1", FRENET_TOL));
    let mut planar = Worst::default();
    planar.check(construction::planarity_check(&m, &c, &ts));
    report.properties.push(planar.property("oracle_b.planarity", PLANARITY_TOL));
    report
}

/// Curve/metric pairs whose Frenet frame exists on the whole domain.
pub const PAIRING_CORPUS: [(i64, &str, [&str; 3], (f64, f64)); 10] = [
    (1, "0", ["t/2 - t^3/6", "t^2/2", "t"], (-0.9, 0.9)),
    (1, "0", ["t^2", "0", "t"], (0.5, 2.0)),
    (1, "y^2", ["t/2 - t^3/6", "t^2/2", "t + 1"], (-0.9, 0.9)),
    (-1, "sin(y) + z", ["t^2/3", "cos(t)", "2*t + t^3/5"], (-1.0, 1.0)),
    (1, "sin(y) + z", ["sin(t)", "t", "t^2/2"], (-1.0, 1.0)),
    (-1, "y*z", ["t", "t^2", "1 + t/2"], (-1.0, 1.0)),
    (1, "exp(y/2)", ["cos(t)", "sin(t)", "t"], (0.0, 2.0)),
    (-1, "2", ["t^3/3", "t", "t^2/2"], (0.3, 1.5)),
    (1, "y^3 + sin(z)", ["t^2", "sin(t)", "t"], (0.2, 1.5)),
    (-1, "1 + y^2*z", ["exp(t/2)", "t^2", "t"], (0.2, 1.0)),
];

/// The position/binormal pairing identity at random parameters.
pub fn pairing(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 6);
    let mut worst = Worst::default();
    for (eps, f, [x, y, z], domain) in PAIRING_CORPUS {
        let m = metric(Sign::from_int(eps).unwrap(), f);
        let c = match CurveSpec::parse(x, y, z, domain) {
            Ok(c) => c,
            Err(e) => {
                worst.fail(e);
                continue;
            }
        };
        for _ in 0..20 {
            let t = r.gen_range(domain.0..domain.1);
            worst.check(pairing_residual(&m, &c, t));
        }
    }
    let mut report = SuiteReport::new("pairing");
    report.properties.push(worst.property("pairing_residual", PAIRING_TOL));
    report
}

/// A random profile `φ` in `var` and a random field `f(y, z)`.
fn random_pair(r: &mut ChaCha8Rng, var: &str) -> (String, String, Sign) {
    let mut c = || r.gen_range(-1.0..1.0_f64);
    let phi = format!("({:.3}) + ({:.3})*{var} + ({:.3})*{var}^2 + ({:.3})*sin({var})", c(), c(), c(), c());
    let f = format!("({:.3})*y^2 + ({:.3})*sin(z) + ({:.3})*y*z + ({:.3})*exp(y/3)", c(), c(), c(), c());
    (phi, f, random_sign(r))
}

fn cylinder_of(case: CylinderCase, phi: &str) -> (SurfacePatch, ScalarField1) {
    let field = ScalarField1::parse(phi, case.profile_variable()).expect("suite profiles parse");
    (SurfacePatch::cylinder(case, field.clone()), field)
}

const GRID: usize = 10;
const PROFILE_SLOPE_MIN: f64 = 1e-3;

/// Both cylinder families are flat: `det S = 0` and `K = 0`.
pub fn cylinder_flatness(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 7);
    let (mut det, mut gauss, mut delta) = (Worst::default(), Worst::default(), Worst::default());
    let mut skipped = 0usize;
    for _ in 0..20 {
        for case in [CylinderCase::One, CylinderCase::Two] {
            let (phi, f, eps) = random_pair(&mut r, case.profile_variable());
            let m = metric(eps, &f);
            let (patch, profile) = cylinder_of(case, &phi);
            for x in linspace(-1.0, 1.0, GRID) {
                for p in linspace(-1.0, 1.0, GRID) {
                    if case == CylinderCase::One && profile.jet(p).map_or(true, |j| j.d1.abs() < PROFILE_SLOPE_MIN) {
                        skipped += 1;
                        continue;
                    }
                    match shape_operator(&m, &patch, x, p) {
                        Ok(sd) => {
                            det.add(sd.det_s);
                            gauss.add(sd.gauss);
                            delta.add(f64::from(u8::from(sd.delta != eps)));
                        }
                        Err(e) => {
                            det.fail(&e);
                            gauss.fail(&e);
                        }
                    }
                }
            }
        }
    }
    let mut report = SuiteReport::new("cylinder");
    report.properties.push(det.property("flatness.det_s", DET_S_TOL));
    report.properties.push(gauss.property("flatness.gauss", GAUSS_TOL));
    report.properties.push(delta.property("flatness.delta_is_epsilon", 0.0));
    report.diagnostics.push(("flatness.skipped_points", skipped as f64));
    report
}

/// `(case, ε, f, φ)` with vanishing second fundamental form.
const TOTALLY_GEODESIC: [(CylinderCase, i64, &str, &str); 5] = [
    (CylinderCase::One, 1, "y^2", "ln(y + sqrt(y^2 + 1))"),
    (CylinderCase::Two, 1, "y", "z^2/4"),
    (CylinderCase::Two, -1, "y^2", "sin(z)"),
    (CylinderCase::One, -1, "z^2 + 3", "2*y + 1"),
    (CylinderCase::Two, 1, "z^3", "0.5*z - 1"),
];

/// The totally-geodesic residual vanishes exactly where `h` does.
pub fn totally_geodesic(seed: u64) -> SuiteReport {
    let mut r = rng(seed, 8);
    let mut corpus: Vec<(CylinderCase, Sign, String, String)> = TOTALLY_GEODESIC
        .iter()
        .map(|&(case, eps, f, phi)| (case, Sign::from_int(eps).unwrap(), f.to_owned(), phi.to_owned()))
        .collect();
    for _ in 0..10 {
        for case in [CylinderCase::One, CylinderCase::Two] {
            let (phi, f, eps) = random_pair(&mut r, case.profile_variable());
            corpus.push((case, eps, f, phi));
        }
    }
    let (mut mismatch, mut affine) = (Worst::default(), Worst::default());
    let (mut geodesic_points, mut curved_points) = (0usize, 0usize);
    for (i, (case, eps, f, phi)) in corpus.iter().enumerate() {
        let m = metric(*eps, f);
        let (patch, profile) = cylinder_of(*case, phi);
        let exact = i >= 3 && i < TOTALLY_GEODESIC.len();
        for x in linspace(-1.0, 1.0, GRID) {
            for p in linspace(-1.0, 1.0, GRID) {
                if *case == CylinderCase::One && profile.jet(p).map_or(true, |j| j.d1.abs() < PROFILE_SLOPE_MIN) {
                    continue;
                }
                let point = (|| {
                    let res = totally_geodesic_residual(&m, *case, &profile, p)?;
                    let h = second_fundamental(&m, &patch, x, p)?.h.amax();
                    Ok((res.abs(), h))
                })();
                match point {
                    Ok((res, h)) => {
                        let zero = res <= TG_TOL;
                        if zero {
                            geodesic_points += 1;
                        } else {
                            curved_points += 1;
                        }
                        mismatch.add(f64::from(u8::from(zero != (h <= TG_TOL))));
                        if exact {
                            affine.add(res.max(h));
                        }
                    }
                    Err::<_, GeometryError>(e) => mismatch.fail(e),
                }
            }
        }
    }
    let mut report = SuiteReport::new("cylinder");
    report.properties.push(mismatch.property("totally_geodesic.residual_iff_h", 0.0));
    report.properties.push(affine.property("totally_geodesic.affine_exact", 0.0));
    report.diagnostics.push(("totally_geodesic.zero_points", geodesic_points as f64));
    report.diagnostics.push(("totally_geodesic.nonzero_points", curved_points as f64));
    report
}

pub fn construction_input() -> ConstructionInput {
    ConstructionInput { f: "2".into(), eps: Sign::Plus, y0: 0.0, r0: 1.0, x0: 0.0, range: (0.0, 2.0), samples: 2000 }
}

/// The example pipeline with `f = 2`, whose profile is `h = ln(1 + y)`.
pub fn construction_example() -> SuiteReport {
    let mut report = SuiteReport::new("construction");
    let input = construction_input();
    let result = match build_example(&input) {
        Ok(r) => r,
        Err(e) => {
            let mut w = Worst::default();
            w.fail(e);
            report.properties.push(w.property("build", 0.0));
            return report;
        }
    };
    let mut count = Worst::default();
    count.add(result.rows.len() as f64 - input.samples as f64);
    report.properties.push(count.property("sample_count", 0.0));
    let mut initial = Worst::default();
    initial.add(result.rows[0].h.abs() + (result.rows[0].hprime - 1.0).abs());
    report.properties.push(initial.property("initial_conditions", 0.0));
    let mut h = Worst::default();
    for row in &result.rows {
        h.add(row.h - row.y.ln_1p());
    }
    report.properties.push(h.property("h_matches_log", H_LOG_TOL));
    let nonfinite = result.rows.iter().flat_map(|r| r.values()).filter(|v| !v.is_finite()).count();
    let mut finite = Worst::default();
    finite.add(nonfinite as f64);
    report.properties.push(finite.property("report_finite", 0.0));
    let mut b2 = Worst::default();
    b2.add(result.summary.b2_closed_constancy);
    report.properties.push(b2.property("b2_closed_constant", B2_CONSTANT_TOL));

    let s = &result.summary;
    report.diagnostics.extend(s.max_abs.iter().copied());
    report.diagnostics.push(("kappa_constancy", s.kappa_constancy));
    report.diagnostics.push(("c_constancy", s.c_constancy));
    report.diagnostics.push(("b2_frame_vs_closed", s.b2_defect));
    report.diagnostics.push(("ansatz_defect_max", s.ansatz_defect_max));
    report
}

type Hand = fn(f64, f64) -> f64;

/// Expressions in `y, z` with hand-written evaluations.
pub const PARSER_CORPUS: [(&str, Hand); 30] = [
    ("1 + 2*3", |_, _| 7.0),
    ("2^3^2", |_, _| 512.0),
    ("-2^2", |_, _| -4.0),
    ("(1 - 4)/2", |_, _| -1.5),
    ("2^-1", |_, _| 0.5),
    ("y", |y, _| y),
    ("y*z - z", |y, z| y * z - z),
    ("y^2 + z^2", |y, z| y * y + z * z),
    ("y/z", |y, z| y / z),
    ("-y^3 + 2*z", |y, z| -(y * y * y) + 2.0 * z),
    ("sin(y) + cos(z)", |y, z| y.sin() + z.cos()),
    ("exp(y*z)", |y, z| (y * z).exp()),
    ("ln(y)", |y, _| y.ln()),
    ("sqrt(y^2 + z^2)", |y, z| (y * y + z * z).sqrt()),
    ("sin(y)^2 + cos(y)^2", |y, _| y.sin() * y.sin() + y.cos() * y.cos()),
    ("y^z", |y, z| y.powf(z)),
    ("ln(exp(z))", |_, z| z),
    ("exp(ln(y))", |y, _| y),
    ("1e-3*y + 2.5E2", |y, _| 1e-3 * y + 250.0),
    ("y*(z + 1)*(z - 1)", |y, z| y * (z + 1.0) * (z - 1.0)),
    ("sin(cos(y*z))", |y, z| (y * z).cos().sin()),
    ("sqrt(exp(y))", |y, _| (0.5 * y).exp()),
    ("(y + z)^3", |y, z| (y + z) * (y + z) * (y + z)),
    ("y - z - 1", |y, z| (y - z) - 1.0),
    ("y / z / 2", |y, z| (y / z) / 2.0),
    ("3*y^2*z", |y, z| 3.0 * y * y * z),
    ("z^2/(1 + y^2)", |y, z| z * z / (1.0 + y * y)),
    ("-(y + z)", |y, z| -(y + z)),
    ("cos(y)*exp(-z)", |y, z| y.cos() * (-z).exp()),
    ("ln(1 + y^2) - sqrt(y)", |y, _| (1.0 + y * y).ln() - y.sqrt()),
];

const PARSER_POINTS: [(f64, f64); 2] = [(0.7, -1.3), (1.9, 0.4)];

/// Evaluation against hand values, symbolic against numerical derivatives,
/// and print/parse round trips.
pub fn parser() -> SuiteReport {
    let (mut eval, mut deriv, mut round_trip) = (Worst::default(), Worst::default(), Worst::default());
    for (text, hand) in PARSER_CORPUS {
        let ast = match ExprAst::parse(text, &["y", "z"]) {
            Ok(a) => a,
            Err(e) => {
                eval.fail(format!("{text}: {e}"));
                continue;
            }
        };
        let printed = ast.to_string();
        let reparsed = ExprAst::parse(&printed, &["y", "z"]);
        let derivatives = [ast.differentiate_index(0), ast.differentiate_index(1)];
        for (y, z) in PARSER_POINTS {
            match ast.eval(&[y, z]) {
                Ok(v) => {
                    let expected = hand(y, z);
                    eval.add((v - expected).abs() / expected.abs().max(1.0));
                }
                Err(e) => eval.fail(format!("{text}: {e}")),
            }
            for (k, d) in derivatives.iter().enumerate() {
                let symbolic = d.eval(&[y, z]);
                let numeric = |s: f64| {
                    let mut p = [y, z];
                    p[k] = s;
                    ast.eval(&p).unwrap_or(f64::NAN)
                };
                match symbolic {
                    Ok(ds) => deriv.add((ds - derivative_fd(numeric, [y, z][k], FdOrder::First)).abs() / (1.0 + ds.abs())),
                    Err(e) => deriv.fail(format!("d/d{} {text}: {e}", ["y", "z"][k])),
                }
            }
            let same = match &reparsed {
                Ok(r) => r.to_string() == printed && r.eval(&[y, z]).ok().map(f64::to_bits) == ast.eval(&[y, z]).ok().map(f64::to_bits),
                Err(_) => false,
            };
            round_trip.add(f64::from(u8::from(!same)));
        }
    }
    let mut report = SuiteReport::new("parser");
    report.properties.push(eval.property("eval_vs_hand", EVAL_REL_TOL));
    report.properties.push(deriv.property("derivative_vs_fd", DERIVATIVE_TOL));
    report.properties.push(round_trip.property("round_trip", 0.0));
    report
}
