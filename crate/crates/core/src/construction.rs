//! Cylinder equation for zero-torsion curves and the constructive example
//! family `γ(y) = (x₀, y, h(y))` with
//!
//! ```text
//! 1/h′(y) = (ε/2) ∫_{y₀}^{y} f(τ) dτ + r₀,    h(y₀) = 0,
//! φ(y)    = −2 h(y) / t₃(y).
//! ```
//!
//! Every identity the construction relies on is evaluated numerically and
//! reported as a residual column; none of them is assumed.

use std::sync::Arc;

use crate::curve_geometry::{
    along_step, frame_core, frenet_apparatus, kinematics, position_pairing, CurveJet,
    CurveSpec, FrameCore,
};
use crate::error::{GeometryError, Result};
use crate::field_expr::{ScalarField1, ScalarField2};
use crate::manifold::{Point3, Sign, Vec3, WalkerMetric};
use crate::numerics::{central_5pt, central_5pt_second, try_integrate_1d, try_solve_ode_1d};

/// Quadrature tolerance for the `h′` denominator.
pub const H_PRIME_TOL: f64 = 1e-12;
/// Minimum admissible magnitude of the `h′` denominator.
pub const DENOMINATOR_MIN: f64 = 1e-8;
/// Minimum admissible magnitude of `t₃`.
pub const T3_MIN: f64 = 1e-10;
/// Below this total size the cylinder equation carries no information.
pub const VACUOUS_TOL: f64 = 1e-12;

/// `(C₁, C₂, C₃) = (⟨∇_T ∂y, B⟩, ⟨∇_T ∂z, B⟩, d/ds(γ • AB))`.
pub fn osculating_coefficients(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<(f64, f64, f64)> {
    let core = frame_core(m, c, t)?;
    let (c1, c2) = transport_direct(m, &core);
    let rate = central_5pt(|s| frame_core(m, c, s).map(|f| [position_pairing(m, &f)]), t, along_step(t))?[0];
    Ok((c1, c2, rate / core.kin.speed))
}

fn transport_direct(m: &WalkerMetric, core: &FrameCore) -> (f64, f64) {
    let kin = &core.kin;
    let f = kin.field.value;
    let dy = m.christoffel_with(&kin.field, &kin.tangent, &Vec3::y());
    let dz = m.christoffel_with(&kin.field, &kin.tangent, &Vec3::z());
    (m.dot_with(f, &dy, &core.binormal), m.dot_with(f, &dz, &core.binormal))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CylinderResidual {
    /// `y C₁ + z C₂ − C₃`.
    pub residual: f64,
    /// All three coefficients vanish, so the equation reads `0 = 0`.
    pub vacuous: bool,
}

pub fn cylinder_residual(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<CylinderResidual> {
    let (c1, c2, c3) = osculating_coefficients(m, c, t)?;
    let p = c.position(t)?;
    Ok(CylinderResidual {
        residual: p.y * c1 + p.z * c2 - c3,
        vacuous: c1.abs() + c2.abs() + c3.abs() <= VACUOUS_TOL,
    })
}

/// `d/ds(γ • AB) − y C₁ − z C₂`, which equals `⟨γ, ∇_T B⟩` and so vanishes
/// wherever the torsion does.
pub fn cylinder_identity_defect(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<f64> {
    let (c1, c2, c3) = osculating_coefficients(m, c, t)?;
    let p = c.position(t)?;
    Ok(c3 - p.y * c1 - p.z * c2)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TransportProducts {
    /// `(⟨∇_T ∂y, B⟩, ⟨∇_T ∂z, B⟩)` from the connection and the frame.
    pub direct: (f64, f64),
    /// The closed forms `½ t₃ f_y B₃` and `−½ t₃ f_y B₂ + (½ ∂z f_y + t₃ B₃) B₃`.
    pub closed_form: (f64, f64),
    pub defect: f64,
}

pub fn transport_products(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<TransportProducts> {
    let core = frame_core(m, c, t)?;
    let direct = transport_direct(m, &core);
    let (t3, f, b) = (core.kin.tangent.z, core.kin.field, core.binormal);
    let closed_form = (0.5 * t3 * f.d_y * b.z, -0.5 * t3 * f.d_y * b.y + (0.5 * f.d_yz + t3 * b.z) * b.z);
    let defect = (direct.0 - closed_form.0).abs().max((direct.1 - closed_form.1).abs());
    Ok(TransportProducts { direct, closed_form, defect })
}

/// The minors `(D₁₂, D₁₃, D₂₃)` of the columns `T` and `∇_T T`.
fn minors(t: &Vec3, a: &Vec3) -> [f64; 3] {
    [t.x * a.y - t.y * a.x, t.x * a.z - t.z * a.x, t.y * a.z - t.z * a.y]
}

/// The three zero-torsion conditions for constant κ, i.e. the components of
/// `∇_T (T ×_f ∇_T T)` with the second one divided by `−ε`:
///
/// ```text
/// (i)   (D₁₂ − f D₂₃)′ + ½ f_y (−ε t₃ D₁₃ + t₂ D₂₃) + ½ t₃ f_z D₂₃
/// (ii)  D₁₃′ + ½ t₃ f_y D₂₃
/// (iii) D₂₃′
/// ```
pub fn zero_torsion_conditions(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<[f64; 3]> {
    let core = frame_core(m, c, t)?;
    let rate = central_5pt(
        |s| {
            kinematics(m, c, s).map(|k| {
                let [d12, d13, d23] = minors(&k.tangent, &k.accel);
                [d12 - k.field.value * d23, d13, d23]
            })
        },
        t,
        along_step(t),
    )?;
    let kin = &core.kin;
    let [_, d13, d23] = minors(&kin.tangent, &kin.accel);
    let (t2, t3) = (kin.tangent.y, kin.tangent.z);
    let (f_y, f_z) = (kin.field.d_y, kin.field.d_z);
    let eps = m.eps().value();
    let [r1, r2, r3] = rate.map(|r| r / kin.speed);
    Ok([
        r1 + 0.5 * f_y * (-eps * t3 * d13 + t2 * d23) + 0.5 * t3 * f_z * d23,
        r2 + 0.5 * t3 * f_y * d23,
        r3,
    ])
}

/// Real roots of `ε₁λ² − 2Cλ = ±κ²` over both branches, sorted by magnitude.
pub fn lambda_roots(kappa: f64, c: f64, eps1: Sign) -> Result<Vec<f64>> {
    let e1 = eps1.value();
    let mut roots = Vec::with_capacity(4);
    for branch in [1.0, -1.0] {
        // ε₁λ² − 2Cλ − branch·κ² = 0
        let disc = c * c + branch * e1 * kappa * kappa;
        if disc < 0.0 {
            continue;
        }
        let root = disc.sqrt();
        for lambda in [(c + root) / e1, (c - root) / e1] {
            if !roots.contains(&lambda) {
                roots.push(lambda);
            }
        }
    }
    if roots.is_empty() {
        return Err(GeometryError::NoRealRoot);
    }
    roots.sort_by(|a, b| a.abs().total_cmp(&b.abs()).then(a.total_cmp(b)));
    Ok(roots)
}

/// `max |γ(t) • (AB)(t) − γ(t₀) • (AB)(t₀)|` over the samples, for the flat
/// metric `f ≡ 0`.
pub fn planarity_check(m: &WalkerMetric, c: &CurveSpec, samples: &[f64]) -> Result<f64> {
    if !m.field().is_identically_zero() {
        return Err(GeometryError::FlatMetricRequired);
    }
    let Some((&first, rest)) = samples.split_first() else {
        return Ok(0.0);
    };
    let base = position_pairing(m, &frame_core(m, c, first)?);
    rest.iter().try_fold(0.0_f64, |worst, &t| {
        let value = position_pairing(m, &frame_core(m, c, t)?);
        Ok(worst.max((value - base).abs()))
    })
}

/// `h′(y) = 1 / ((ε/2) ∫_{y₀}^{y} f + r₀)`.
pub fn example_h_prime(f: &ScalarField1, eps: Sign, y0: f64, r0: f64, y: f64) -> Result<f64> {
    let integral = try_integrate_1d(|s| f.value(s).map_err(GeometryError::from), y0, y, H_PRIME_TOL)?;
    let denom = 0.5 * eps.value() * integral + r0;
    if denom.abs() < DENOMINATOR_MIN {
        return Err(GeometryError::DenominatorVanishes { y, value: denom });
    }
    Ok(1.0 / denom)
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionInput {
    /// `f` as an expression in `y` alone.
    pub f: String,
    pub eps: Sign,
    pub y0: f64,
    pub r0: f64,
    pub x0: f64,
    pub range: (f64, f64),
    pub samples: usize,
}

impl ConstructionInput {
    fn validate(&self) -> Result<ScalarField1> {
        let f = ScalarField1::parse(&self.f, "y")?;
        if f.expr().as_const() == Some(0.0) {
            return Err(GeometryError::InvalidInput("f must be nonzero".into()));
        }
        if self.r0 == 0.0 || !self.r0.is_finite() {
            return Err(GeometryError::InvalidInput("r0 must be a nonzero real".into()));
        }
        let (a, b) = self.range;
        if !(a.is_finite() && b.is_finite() && a < b) {
            return Err(GeometryError::InvalidInput(format!("invalid range [{a}, {b}]")));
        }
        if self.samples < 2 {
            return Err(GeometryError::InvalidInput("at least two samples are required".into()));
        }
        if !(self.y0.is_finite() && self.x0.is_finite()) {
            return Err(GeometryError::InvalidInput("y0 and x0 must be finite".into()));
        }
        Ok(f)
    }
}

/// One sample of the example pipeline. Field names match the report columns.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ConstructionRow {
    pub y: f64,
    pub h: f64,
    pub hprime: f64,
    pub x: f64,
    pub z: f64,
    pub t2: f64,
    pub t3: f64,
    pub kappa: f64,
    pub tau: f64,
    pub lambda: f64,
    pub c_est: f64,
    pub b_frame: [f64; 3],
    pub b1_closed: f64,
    pub b2_closed: f64,
    pub phi: f64,
    pub res_cylinder: f64,
    pub zero_torsion: [f64; 3],
    pub profile_geodesic: f64,
    pub transport_defect: f64,
    /// `t₂A₃ − t₃A₂`: how far the sample is from `(A₂, A₃) ∥ (t₂, t₃)`.
    pub ansatz_defect: f64,
    pub cylinder_vacuous: bool,
}

impl ConstructionRow {
    pub const COLUMNS: [&'static str; 23] = [
        "y",
        "h",
        "hprime",
        "x",
        "z",
        "t2",
        "t3",
        "kappa",
        "tau",
        "lambda",
        "C_est",
        "B1_frame",
        "B2_frame",
        "B3_frame",
        "B1_closed",
        "B2_closed",
        "phi",
        "res_cylinder",
        "res_27i",
        "res_27ii",
        "res_27iii",
        "res_tg000",
        "defect_eq24",
    ];

    /// Values in [`Self::COLUMNS`] order.
    pub fn values(&self) -> [f64; 23] {
        [
            self.y,
            self.h,
            self.hprime,
            self.x,
            self.z,
            self.t2,
            self.t3,
            self.kappa,
            self.tau,
            self.lambda,
            self.c_est,
            self.b_frame[0],
            self.b_frame[1],
            self.b_frame[2],
            self.b1_closed,
            self.b2_closed,
            self.phi,
            self.res_cylinder,
            self.zero_torsion[0],
            self.zero_torsion[1],
            self.zero_torsion[2],
            self.profile_geodesic,
            self.transport_defect,
        ]
    }
}

/// Residual columns summarized by their maximum absolute value.
pub const RESIDUAL_COLUMNS: [&str; 7] =
    ["tau", "res_cylinder", "res_27i", "res_27ii", "res_27iii", "res_tg000", "defect_eq24"];

#[derive(Debug, Clone, PartialEq)]
pub struct ConstructionSummary {
    /// `(column, max |value|)` for each of [`RESIDUAL_COLUMNS`].
    pub max_abs: Vec<(&'static str, f64)>,
    pub kappa_constancy: f64,
    pub c_constancy: f64,
    pub b2_closed_constancy: f64,
    /// `max |B₂(frame) − B₂(closed form)|`.
    pub b2_defect: f64,
    pub b3_frame_max: f64,
    pub ansatz_defect_max: f64,
    pub vacuous_samples: usize,
}

#[derive(Debug, Clone)]
pub struct ConstructionResult {
    pub rows: Vec<ConstructionRow>,
    pub summary: ConstructionSummary,
    pub metric: WalkerMetric,
    pub curve: CurveSpec,
}

impl ConstructionResult {
    pub fn column(&self, name: &str) -> Option<Vec<f64>> {
        let index = ConstructionRow::COLUMNS.iter().position(|c| *c == name)?;
        Some(self.rows.iter().map(|r| r.values()[index]).collect())
    }
}

/// `h` and `h′` along the example curve, anchored at the RK4 samples.
struct Profile {
    f: ScalarField1,
    eps: f64,
    grid: Vec<f64>,
    denom: Vec<f64>,
    h: Vec<f64>,
    step: f64,
}

impl Profile {
    fn nearest(&self, y: f64) -> usize {
        let k = ((y - self.grid[0]) / self.step).round();
        (k.max(0.0) as usize).min(self.grid.len() - 1)
    }

    fn denominator_from(&self, k: usize, y: f64) -> Result<f64> {
        let integral =
            try_integrate_1d(|s| self.f.value(s).map_err(GeometryError::from), self.grid[k], y, H_PRIME_TOL)?;
        let d = self.denom[k] + 0.5 * self.eps * integral;
        if d.abs() < DENOMINATOR_MIN {
            return Err(GeometryError::DenominatorVanishes { y, value: d });
        }
        Ok(d)
    }

    fn h_prime(&self, y: f64) -> Result<f64> {
        Ok(1.0 / self.denominator_from(self.nearest(y), y)?)
    }

    fn h(&self, y: f64) -> Result<f64> {
        let k = self.nearest(y);
        let delta = try_integrate_1d(|s| Ok::<_, GeometryError>(1.0 / self.denominator_from(k, s)?), self.grid[k], y, H_PRIME_TOL)?;
        Ok(self.h[k] + delta)
    }

    fn jet(&self, x0: f64, y: f64) -> Result<CurveJet> {
        let hp = self.h_prime(y)?;
        let hpp = -0.5 * self.eps * self.f.value(y)? * hp * hp;
        Ok(CurveJet { pos: Point3::new(x0, y, self.h(y)?), vel: Vec3::new(0.0, 1.0, hp), acc: Vec3::new(0.0, 0.0, hpp) })
    }

    fn t3(&self, y: f64) -> Result<f64> {
        let hp = self.h_prime(y)?;
        let f = self.f.value(y)?;
        Ok(hp / (self.eps + hp * hp * f).abs().sqrt())
    }

    fn phi(&self, y: f64) -> Result<f64> {
        Ok(-2.0 * self.h(y)? / self.t3(y)?)
    }
}

/// `h` on `[a, b]` by RK4 from `h(y₀) = 0`, with `steps` equal steps on the range.
fn integrate_h(f: &ScalarField1, input: &ConstructionInput, steps: usize) -> Result<(Vec<f64>, Vec<f64>, f64)> {
    let (a, b) = input.range;
    let (eps, y0, r0) = (input.eps, input.y0, input.r0);
    let rhs = |y: f64, _h: f64| example_h_prime(f, eps, y0, r0, y);
    let grid_step = (b - a) / steps as f64;
    let h_a = if y0 == a {
        0.0
    } else {
        let n = (((y0 - a).abs() / grid_step).ceil() as usize).max(2);
        if y0 < a {
            try_solve_ode_1d(rhs, y0, 0.0, a, n)?.last().1
        } else {
            // integrate the reflected equation from −y₀ to −a
            try_solve_ode_1d(|s, h| rhs(-s, h).map(|v| -v), -y0, 0.0, -a, n)?.last().1
        }
    };
    let path = try_solve_ode_1d(rhs, a, h_a, b, steps)?;
    Ok((path.params().to_vec(), path.values().to_vec(), path.step()))
}

fn check_denominators(grid: &[f64], denom: &[f64]) -> Result<()> {
    for k in 1..grid.len() {
        if denom[k - 1].signum() != denom[k].signum() {
            // linear estimate of the crossing
            let y = grid[k - 1] - denom[k - 1] * (grid[k] - grid[k - 1]) / (denom[k] - denom[k - 1]);
            return Err(GeometryError::DenominatorVanishes { y, value: 0.0 });
        }
    }
    Ok(())
}

/// Runs the example pipeline over `input.samples` equally spaced values of `y`.
pub fn build_example(input: &ConstructionInput) -> Result<ConstructionResult> {
    let f1 = input.validate()?;
    let metric = WalkerMetric::new(input.eps, ScalarField2::parse(&input.f)?);
    let eps = input.eps.value();
    let (a, b) = input.range;
    let steps = input.samples - 1;

    let mut probe = Vec::with_capacity(input.samples + 1);
    let mut probe_denoms = Vec::with_capacity(input.samples + 1);
    if input.y0 < a || input.y0 > b {
        probe.push(input.y0);
        probe_denoms.push(input.r0);
    }
    for k in 0..input.samples {
        let y = a + (b - a) * k as f64 / steps as f64;
        probe.push(y);
        probe_denoms.push(1.0 / example_h_prime(&f1, input.eps, input.y0, input.r0, y)?);
    }
    let mut order: Vec<usize> = (0..probe.len()).collect();
    order.sort_by(|&i, &j| probe[i].total_cmp(&probe[j]));
    let sorted: Vec<f64> = order.iter().map(|&i| probe[i]).collect();
    let sorted_d: Vec<f64> = order.iter().map(|&i| probe_denoms[i]).collect();
    check_denominators(&sorted, &sorted_d)?;

    let (grid, h, step) = integrate_h(&f1, input, steps)?;
    let denom = grid
        .iter()
        .map(|&y| example_h_prime(&f1, input.eps, input.y0, input.r0, y).map(|hp| 1.0 / hp))
        .collect::<Result<Vec<_>>>()?;
    let profile = Arc::new(Profile { f: f1.clone(), eps, grid, denom, h, step });

    let x0 = input.x0;
    let jet_profile = Arc::clone(&profile);
    let curve = CurveSpec::from_jet(move |y| jet_profile.jet(x0, y), (a, b))?;

    let mut rows = Vec::with_capacity(input.samples);
    for (k, &y) in profile.grid.iter().enumerate() {
        let h = profile.h[k];
        let hprime = 1.0 / profile.denom[k];
        let f = f1.value(y)?;
        let t2 = 1.0 / (eps + hprime * hprime * f).abs().sqrt();
        let t3 = hprime * t2;
        if t3.abs() < T3_MIN {
            return Err(GeometryError::SmallTangentComponent { y, t3 });
        }
        let core = frame_core(&metric, &curve, y)?;
        let frame = frenet_apparatus(&metric, &curve, y)?;
        let accel = core.kin.accel;
        let lambda = accel.z / t3;
        let c_est = -t3 * accel.x;
        let e2k = core.eps2.value() * core.kappa;
        let cyl = cylinder_residual(&metric, &curve, y)?;
        let zero_torsion = zero_torsion_conditions(&metric, &curve, y)?;
        let products = transport_products(&metric, &curve, y)?;
        let profile_geodesic = profile_geodesic_residual(&profile, &f1, eps, y)?;
        rows.push(ConstructionRow {
            y,
            h,
            hprime,
            x: x0,
            z: h,
            t2,
            t3,
            kappa: core.kappa,
            tau: frame.tau,
            lambda,
            c_est,
            b_frame: [core.binormal.x, core.binormal.y, core.binormal.z],
            b1_closed: c_est / (e2k * hprime),
            b2_closed: eps * c_est / e2k,
            phi: -2.0 * h / t3,
            res_cylinder: cyl.residual,
            zero_torsion,
            profile_geodesic,
            transport_defect: products.defect,
            ansatz_defect: core.kin.tangent.y * accel.z - core.kin.tangent.z * accel.y,
            cylinder_vacuous: cyl.vacuous,
        });
    }
    let summary = summarize(&rows);
    Ok(ConstructionResult { rows, summary, metric, curve })
}

/// `φ″ + (ε/2) φ′³ f_y(y, φ(y))` for `φ = −2h/t₃`, with φ differentiated by
/// five-point stencils.
fn profile_geodesic_residual(profile: &Profile, f: &ScalarField1, eps: f64, y: f64) -> Result<f64> {
    let step = 1e-3 * (1.0 + y.abs());
    let d1 = central_5pt(|s| profile.phi(s).map(|v| [v]), y, step)?[0];
    let d2 = central_5pt_second(|s| profile.phi(s), y, step)?;
    let f_y = f.jet(y)?.d1;
    Ok(d2 + 0.5 * eps * d1.powi(3) * f_y)
}

fn spread(values: impl Iterator<Item = f64>) -> f64 {
    let (lo, hi) = values.fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| (lo.min(v), hi.max(v)));
    hi - lo
}

fn summarize(rows: &[ConstructionRow]) -> ConstructionSummary {
    let max_abs = RESIDUAL_COLUMNS
        .iter()
        .map(|&name| {
            let index = ConstructionRow::COLUMNS.iter().position(|c| *c == name).unwrap();
            (name, rows.iter().map(|r| r.values()[index].abs()).fold(0.0, f64::max))
        })
        .collect();
    ConstructionSummary {
        max_abs,
        kappa_constancy: spread(rows.iter().map(|r| r.kappa)),
        c_constancy: spread(rows.iter().map(|r| r.c_est)),
        b2_closed_constancy: spread(rows.iter().map(|r| r.b2_closed)),
        b2_defect: rows.iter().map(|r| (r.b_frame[1] - r.b2_closed).abs()).fold(0.0, f64::max),
        b3_frame_max: rows.iter().map(|r| r.b_frame[2].abs()).fold(0.0, f64::max),
        ansatz_defect_max: rows.iter().map(|r| r.ansatz_defect.abs()).fold(0.0, f64::max),
        vacuous_samples: rows.iter().filter(|r| r.cylinder_vacuous).count(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn flat() -> WalkerMetric {
        WalkerMetric::flat(Sign::Plus)
    }

    fn parabola() -> CurveSpec {
        CurveSpec::parse("t^2", "0", "t", (0.5, 2.0)).unwrap()
    }

    fn helix_like() -> CurveSpec {
        CurveSpec::parse("t/2 - t^3/6", "t^2/2", "t", (-0.9, 0.9)).unwrap()
    }

    #[test]
    fn coefficients_vanish_for_flat_planar_curve() {
        let (c1, c2, c3) = osculating_coefficients(&flat(), &parabola(), 1.0).unwrap();
        assert_eq!((c1, c2), (0.0, 0.0));
        assert!(c3.abs() <= 1e-12);
        let r = cylinder_residual(&flat(), &parabola(), 1.0).unwrap();
        assert!(r.vacuous);
        assert!(r.residual.abs() <= 1e-12);
    }

    #[test]
    fn coefficients_with_curved_metric() {
        let m = WalkerMetric::parse(Sign::Plus, "y^2").unwrap();
        let c = CurveSpec::parse("t/2 - t^3/6", "t^2/2", "t + 1", (-0.9, 0.9)).unwrap();
        let core = frame_core(&m, &c, 0.0).unwrap();
        let (c1, _, _) = osculating_coefficients(&m, &c, 0.0).unwrap();
        // ½ t₃ f_y B₃ with f_y = 2y = 0 at t = 0
        assert_eq!(c1, 0.5 * core.kin.tangent.z * 0.0 * core.binormal.z);
        let constant = WalkerMetric::parse(Sign::Minus, "3").unwrap();
        let (c1, c2, _) = osculating_coefficients(&constant, &c, 0.4).unwrap();
        assert_eq!((c1, c2), (0.0, 0.0));
    }

    #[test]
    fn cylinder_residual_detects_torsion() {
        // f ≡ 0: residual = −d/ds(γ • AB) = −t²/2
        let r = cylinder_residual(&flat(), &helix_like(), 0.5).unwrap();
        assert!(!r.vacuous);
        assert_abs_diff_eq!(r.residual, -0.125, epsilon = 1e-9);
        assert!(r.residual.abs() > 1e-3);
    }

    #[test]
    fn cylinder_identity_holds_for_zero_torsion() {
        let d = cylinder_identity_defect(&flat(), &parabola(), 1.3).unwrap();
        assert!(d.abs() <= 1e-10);
    }

    #[test]
    fn transport_products_flat_and_b3_zero() {
        let p = transport_products(&flat(), &helix_like(), 0.3).unwrap();
        assert_eq!(p.direct, (0.0, 0.0));
        // the closed form keeps t₃B₃² even when f ≡ 0
        let core = frame_core(&flat(), &helix_like(), 0.3).unwrap();
        assert_abs_diff_eq!(p.defect, core.kin.tangent.z * core.binormal.z.powi(2), epsilon = 1e-14);
        // B₃ = 0 on the parabola: first components vanish for any f_y
        let m = WalkerMetric::parse(Sign::Plus, "y^2 + 1").unwrap();
        let c = CurveSpec::parse("t^2", "2 + t", "t", (0.5, 2.0)).unwrap();
        let core = frame_core(&m, &c, 1.0).unwrap();
        let p = transport_products(&m, &c, 1.0).unwrap();
        if core.binormal.z == 0.0 {
            assert_eq!(p.direct.0, 0.0);
            assert_eq!(p.closed_form.0, 0.0);
        }
        assert_abs_diff_eq!(p.direct.0, p.closed_form.0, epsilon = 1e-14);
    }

    #[test]
    fn zero_torsion_conditions_on_helix_like_curve() {
        // D₂₃ = −1, D₁₃ = t, D₁₂ = (1 + t²)/2 with unit speed
        for t in [-0.6, 0.0, 0.45] {
            let [ri, rii, riii] = zero_torsion_conditions(&flat(), &helix_like(), t).unwrap();
            assert_abs_diff_eq!(ri, t, epsilon = 1e-9);
            assert_abs_diff_eq!(rii, 1.0, epsilon = 1e-9);
            assert_abs_diff_eq!(riii, 0.0, epsilon = 1e-9);
        }
        let geodesic = CurveSpec::parse("0", "t", "0", (0.0, 1.0)).unwrap();
        assert!(matches!(
            zero_torsion_conditions(&flat(), &geodesic, 0.5),
            Err(GeometryError::VanishingAcceleration { .. })
        ));
    }

    #[test]
    fn zero_torsion_conditions_are_components_of_transported_product() {
        let m = WalkerMetric::parse(Sign::Minus, "sin(y) + z^2").unwrap();
        let c = CurveSpec::parse("t^2/3", "cos(t)", "2*t + t^3/5", (-1.0, 1.0)).unwrap();
        let eps = m.eps().value();
        for t in [-0.5, 0.3] {
            let r = zero_torsion_conditions(&m, &c, t).unwrap();
            let product = |s: f64| {
                let k = kinematics(&m, &c, s)?;
                Ok(m.cross_with(k.field.value, &k.tangent, &k.accel))
            };
            let d = crate::curve_geometry::covariant_derivative_along(&m, &c, product, t).unwrap();
            assert_abs_diff_eq!(r[0], d.x, epsilon = 1e-7);
            assert_abs_diff_eq!(r[1], d.y / -eps, epsilon = 1e-7);
            assert_abs_diff_eq!(r[2], d.z, epsilon = 1e-7);
        }
    }

    #[test]
    fn lambda_root_examples() {
        let roots = lambda_roots(0.7, 0.0, Sign::Plus).unwrap();
        assert_eq!(roots, vec![-0.7, 0.7]);
        let roots = lambda_roots(0.0, 1.5, Sign::Plus).unwrap();
        assert_eq!(roots, vec![0.0, 3.0]);
        let roots = lambda_roots(0.0, 1.5, Sign::Minus).unwrap();
        assert_eq!(roots, vec![0.0, -3.0]);
        assert!(lambda_roots(1.0, 0.0, Sign::Plus).unwrap().len() == 2);
    }

    #[test]
    fn lambda_roots_contain_ansatz_value() {
        // A = (−C/t₃, λt₂, λt₃) with T = (0, t₂, t₃) of sign ε₁: κ² = |−2Cλ + ε₁λ²|
        for (eps, f, t2, lambda, c) in [(1.0, 2.0, 0.6, 0.8, -0.3), (-1.0, 3.0, 0.2, -1.4, 0.9), (1.0, -1.0, 1.3, 0.25, 0.4)] {
            let q: f64 = eps * t2 * t2 + f;
            let t3 = 1.0 / q.abs().sqrt();
            let t2 = t2 * t3;
            let eps1 = eps * t2 * t2 + f * t3 * t3;
            let a = Vec3::new(-c / t3, lambda * t2, lambda * t3);
            let aa = 2.0 * a.x * a.z + eps * a.y * a.y + f * a.z * a.z;
            let roots = lambda_roots(aa.abs().sqrt(), c, Sign::of(eps1)).unwrap();
            assert!(roots.iter().any(|r| (r - lambda).abs() <= 1e-9), "{roots:?} vs {lambda}");
        }
    }

    #[test]
    fn planarity_examples() {
        let samples: Vec<f64> = (0..=20).map(|i| 0.5 + 1.5 * i as f64 / 20.0).collect();
        assert!(planarity_check(&flat(), &parabola(), &samples).unwrap() <= 1e-10);
        let shifted = CurveSpec::parse("t^2", "5", "t", (0.5, 2.0)).unwrap();
        assert!(planarity_check(&flat(), &shifted, &samples).unwrap() <= 1e-10);
        let core = frame_core(&flat(), &shifted, 1.0).unwrap();
        assert_abs_diff_eq!(position_pairing(&flat(), &core), -5.0, epsilon = 1e-14);
        let window: Vec<f64> = (0..=10).map(|i| 0.05 * i as f64).collect();
        assert!(planarity_check(&flat(), &helix_like(), &window).unwrap() > 1e-2);
        let curved = WalkerMetric::parse(Sign::Plus, "y").unwrap();
        assert_eq!(planarity_check(&curved, &parabola(), &samples), Err(GeometryError::FlatMetricRequired));
    }

    #[test]
    fn h_prime_examples() {
        let two = ScalarField1::parse("2", "y").unwrap();
        assert_abs_diff_eq!(example_h_prime(&two, Sign::Plus, 0.0, 1.0, 1.0).unwrap(), 0.5, epsilon = 1e-15);
        assert_eq!(example_h_prime(&two, Sign::Plus, 0.0, 1.0, 0.0).unwrap(), 1.0);
        assert!(matches!(
            example_h_prime(&two, Sign::Plus, 0.0, -1.0, 1.0),
            Err(GeometryError::DenominatorVanishes { y, .. }) if y == 1.0
        ));
    }

    fn two_input(samples: usize) -> ConstructionInput {
        ConstructionInput { f: "2".into(), eps: Sign::Plus, y0: 0.0, r0: 1.0, x0: 0.0, range: (0.0, 2.0), samples }
    }

    #[test]
    fn build_example_matches_closed_form() {
        let result = build_example(&two_input(201)).unwrap();
        assert_eq!(result.rows.len(), 201);
        assert_eq!(result.rows[0].h, 0.0);
        assert_eq!(result.rows[0].hprime, 1.0);
        for row in &result.rows {
            assert!((row.h - row.y.ln_1p()).abs() <= 1e-8, "y = {}", row.y);
            assert!(row.values().iter().all(|v| v.is_finite()));
        }
        assert!(result.summary.b2_closed_constancy <= 1e-8);
    }

    #[test]
    fn build_example_rejects_bad_input() {
        let mut input = two_input(10);
        input.r0 = -1.0;
        assert!(matches!(build_example(&input), Err(GeometryError::DenominatorVanishes { .. })));
        let mut input = two_input(10);
        input.f = "0".into();
        assert_eq!(build_example(&input).unwrap_err(), GeometryError::InvalidInput("f must be nonzero".into()));
        let mut input = two_input(10);
        input.r0 = 0.0;
        assert!(build_example(&input).is_err());
        let mut input = two_input(10);
        input.f = "y*z".into();
        assert!(matches!(build_example(&input), Err(GeometryError::Expr(_))));
    }

    #[test]
    fn build_example_with_interior_anchor() {
        let mut input = two_input(101);
        input.y0 = 1.0;
        input.r0 = 2.0;
        // 1/h′ = y − 1 + 2 = y + 1 again, now with h(1) = 0
        let result = build_example(&input).unwrap();
        for row in &result.rows {
            assert!((row.h - (row.y.ln_1p() - 2f64.ln())).abs() <= 1e-8);
        }
    }
}
