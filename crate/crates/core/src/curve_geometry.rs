//! Frenet–Serret apparatus of non-null curves.
//!
//! Every derivative along a curve is taken with respect to arc length `s`:
//! a parameter derivative is divided by the speed `|γ′(t)|`. With this
//! convention the unit-tangent components can be fed directly into the
//! Christoffel terms and κ, τ do not depend on the parametrization.
//!
//! Frame conventions: `ε₁ = ⟨T,T⟩`, `ε₂ = sign⟨∇_T T, ∇_T T⟩`,
//! `N = ∇_T T / (ε₂ κ)`, `B = (ε₂/κ) T ×_f ∇_T T`, `ε₃ = ⟨B,B⟩` and
//! `τ = ⟨∇_T B, N⟩`, so that
//!
//! ```text
//! ∇_T T =  ε₂ κ N
//! ∇_T N = −ε₁ κ T − ε₃ τ B
//! ∇_T B =  ε₂ τ N
//! ```

use std::fmt;
use std::sync::Arc;

use crate::error::{GeometryError, Result};
use crate::field_expr::{FieldJet2, ScalarField1};
use crate::manifold::{classify, euclid_dot, CausalClass, Point3, Sign, Vec3, WalkerMetric, NULL_TOL};
use crate::numerics::{central_5pt, derivative_fd, FdOrder};

/// Below this magnitude the acceleration counts as vanishing.
pub const GEODESIC_TOL: f64 = 1e-12;

/// Number of points at which [`CurveSpec`] constructors check regularity.
const REGULARITY_SAMPLES: usize = 33;

/// Relative step of the five-point stencils used for fields along a curve.
pub fn along_step(t: f64) -> f64 {
    1e-4 * (1.0 + t.abs())
}

/// Position, velocity and acceleration (coordinate second derivative) of a
/// curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CurveJet {
    pub pos: Point3,
    pub vel: Vec3,
    pub acc: Vec3,
}

type PointFn = dyn Fn(f64) -> [f64; 3] + Send + Sync;
type JetFn = dyn Fn(f64) -> Result<CurveJet> + Send + Sync;

#[derive(Clone)]
enum CurveSource {
    Expr(Box<[ScalarField1; 3]>),
    Callback(Arc<PointFn>),
    Jet(Arc<JetFn>),
}

/// A parametrized path `t ↦ (x(t), y(t), z(t))` on a parameter domain.
#[derive(Clone)]
pub struct CurveSpec {
    source: CurveSource,
    domain: (f64, f64),
}

impl fmt::Debug for CurveSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.source {
            CurveSource::Expr(c) => {
                write!(f, "CurveSpec(({}, {}, {}) on {:?})", c[0].expr(), c[1].expr(), c[2].expr(), self.domain)
            }
            _ => write!(f, "CurveSpec(<closure> on {:?})", self.domain),
        }
    }
}

impl CurveSpec {
    /// Parses three component expressions in the variable `t`. Derivatives
    /// are symbolic.
    pub fn parse(x: &str, y: &str, z: &str, domain: (f64, f64)) -> Result<CurveSpec> {
        let comps = [x, y, z].map(|s| ScalarField1::parse(s, "t"));
        let [x, y, z] = comps;
        Self::checked(CurveSource::Expr(Box::new([x?, y?, z?])), domain)
    }

    /// A curve given by a position callback; derivatives by central differences.
    pub fn from_fn(f: impl Fn(f64) -> [f64; 3] + Send + Sync + 'static, domain: (f64, f64)) -> Result<CurveSpec> {
        Self::checked(CurveSource::Callback(Arc::new(f)), domain)
    }

    /// A curve whose callback supplies exact derivatives.
    pub fn from_jet(
        f: impl Fn(f64) -> Result<CurveJet> + Send + Sync + 'static,
        domain: (f64, f64),
    ) -> Result<CurveSpec> {
        Self::checked(CurveSource::Jet(Arc::new(f)), domain)
    }

    fn checked(source: CurveSource, domain: (f64, f64)) -> Result<CurveSpec> {
        let (lo, hi) = domain;
        if !(lo.is_finite() && hi.is_finite() && lo <= hi) {
            return Err(GeometryError::InvalidInput(format!("invalid parameter domain [{lo}, {hi}]")));
        }
        let curve = CurveSpec { source, domain };
        for i in 0..REGULARITY_SAMPLES {
            let t = lo + (hi - lo) * i as f64 / (REGULARITY_SAMPLES - 1) as f64;
            let jet = curve.jet(t)?;
            if jet.vel.norm() <= 1e-12 {
                return Err(GeometryError::IrregularCurve { t });
            }
        }
        Ok(curve)
    }

    pub fn domain(&self) -> (f64, f64) {
        self.domain
    }

    pub fn position(&self, t: f64) -> Result<Point3> {
        match &self.source {
            CurveSource::Expr(c) => Ok(Point3::new(c[0].value(t)?, c[1].value(t)?, c[2].value(t)?)),
            CurveSource::Callback(f) => Ok(Point3::from(f(t))),
            CurveSource::Jet(f) => Ok(f(t)?.pos),
        }
    }

    pub fn jet(&self, t: f64) -> Result<CurveJet> {
        match &self.source {
            CurveSource::Expr(c) => {
                let [x, y, z] = [c[0].jet(t)?, c[1].jet(t)?, c[2].jet(t)?];
                Ok(CurveJet {
                    pos: Point3::new(x.value, y.value, z.value),
                    vel: Vec3::new(x.d1, y.d1, z.d1),
                    acc: Vec3::new(x.d2, y.d2, z.d2),
                })
            }
            CurveSource::Callback(f) => {
                let comp = |i: usize, order| derivative_fd(|s| f(s)[i], t, order);
                Ok(CurveJet {
                    pos: Point3::from(f(t)),
                    vel: Vec3::new(comp(0, FdOrder::First), comp(1, FdOrder::First), comp(2, FdOrder::First)),
                    acc: Vec3::new(comp(0, FdOrder::Second), comp(1, FdOrder::Second), comp(2, FdOrder::Second)),
                })
            }
            CurveSource::Jet(f) => f(t),
        }
    }
}

/// First-order data of a non-null curve at one parameter value.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Kinematics {
    pub t: f64,
    pub pos: Point3,
    pub vel: Vec3,
    pub speed: f64,
    pub eps1: Sign,
    pub tangent: Vec3,
    /// `∇_T T` with respect to arc length.
    pub accel: Vec3,
    pub field: FieldJet2,
}

pub fn kinematics(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<Kinematics> {
    let jet = c.jet(t)?;
    let field = m.f_jet(&jet.pos)?;
    let (v, a) = (jet.vel, jet.acc);
    if v.norm() <= 1e-12 {
        return Err(GeometryError::IrregularCurve { t });
    }
    let q = m.dot_with(field.value, &v, &v);
    if classify(q, &v, NULL_TOL) == CausalClass::Null {
        return Err(GeometryError::NullVelocity { t });
    }
    let speed = q.abs().sqrt();
    let eps1 = Sign::of(q);
    let f_rate = field.d_y * v.y + field.d_z * v.z;
    let q_rate = 2.0 * (a.x * v.z + v.x * a.z)
        + 2.0 * m.eps().value() * v.y * a.y
        + f_rate * v.z * v.z
        + 2.0 * field.value * v.z * a.z;
    let speed_rate = eps1.value() * q_rate / (2.0 * speed);
    let tangent = v / speed;
    let tangent_rate = a / speed - v * (speed_rate / (speed * speed));
    let accel = tangent_rate / speed + m.christoffel_with(&field, &tangent, &tangent);
    Ok(Kinematics { t, pos: jet.pos, vel: v, speed, eps1, tangent, accel, field })
}

/// `|γ′(t)| = √|⟨γ′, γ′⟩|`.
pub fn speed(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<f64> {
    Ok(kinematics(m, c, t)?.speed)
}

pub fn unit_tangent(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<Vec3> {
    Ok(kinematics(m, c, t)?.tangent)
}

/// `∇_T T` with respect to arc length.
pub fn acceleration(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<Vec3> {
    Ok(kinematics(m, c, t)?.accel)
}

/// `∇_T ξ` for a vector field `ξ` along the curve, given by its coordinate
/// components as a function of the curve parameter. Component derivatives
/// come from a five-point stencil.
pub fn covariant_derivative_along(
    m: &WalkerMetric,
    c: &CurveSpec,
    xi: impl Fn(f64) -> Result<Vec3>,
    t: f64,
) -> Result<Vec3> {
    let kin = kinematics(m, c, t)?;
    let rate = central_5pt(|s| xi(s).map(|v| [v.x, v.y, v.z]), t, along_step(t))?;
    Ok(covariant_from_rate(m, &kin, &xi(t)?, &Vec3::from(rate)))
}

/// `∇_T ξ` from the parameter derivative of the components of `ξ`.
pub fn covariant_from_rate(m: &WalkerMetric, kin: &Kinematics, xi: &Vec3, xi_rate: &Vec3) -> Vec3 {
    xi_rate / kin.speed + m.christoffel_with(&kin.field, &kin.tangent, xi)
}

/// κ and ε₂ from `κ² = |2A₁A₃ + εA₂² + f A₃²|`.
pub fn curvature_kappa(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<(f64, Sign)> {
    kappa_from(m, &kinematics(m, c, t)?)
}

fn kappa_from(m: &WalkerMetric, kin: &Kinematics) -> Result<(f64, Sign)> {
    let a = &kin.accel;
    let aa = 2.0 * a.x * a.z + m.eps().value() * a.y * a.y + kin.field.value * a.z * a.z;
    if a.amax() <= GEODESIC_TOL && aa.abs() <= GEODESIC_TOL {
        return Err(GeometryError::VanishingAcceleration { t: kin.t });
    }
    if classify(aa, a, NULL_TOL) == CausalClass::Null {
        return Err(GeometryError::NullAcceleration { t: kin.t });
    }
    Ok((aa.abs().sqrt(), Sign::of(aa)))
}

/// The Frenet frame at one parameter value, without torsion.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameCore {
    pub kin: Kinematics,
    pub kappa: f64,
    pub eps2: Sign,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub eps3: Sign,
}

pub fn frame_core(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<FrameCore> {
    let kin = kinematics(m, c, t)?;
    let (kappa, eps2) = kappa_from(m, &kin)?;
    let normal = kin.accel / (eps2.value() * kappa);
    let binormal = m.cross_with(kin.field.value, &kin.tangent, &kin.accel) * (eps2.value() / kappa);
    let eps3 = Sign::of(m.dot_with(kin.field.value, &binormal, &binormal));
    Ok(FrameCore { kin, kappa, eps2, normal, binormal, eps3 })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrenetFrame {
    pub t: f64,
    pub pos: Point3,
    pub tangent: Vec3,
    pub normal: Vec3,
    pub binormal: Vec3,
    pub kappa: f64,
    pub tau: f64,
    pub eps1: Sign,
    pub eps2: Sign,
    pub eps3: Sign,
}

pub fn frenet_apparatus(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<FrenetFrame> {
    let core = frame_core(m, c, t)?;
    let tau = torsion_from(m, c, &core)?;
    Ok(FrenetFrame {
        t,
        pos: core.kin.pos,
        tangent: core.kin.tangent,
        normal: core.normal,
        binormal: core.binormal,
        kappa: core.kappa,
        tau,
        eps1: core.kin.eps1,
        eps2: core.eps2,
        eps3: core.eps3,
    })
}

/// `∇_T B`, with `B` differentiated by a five-point stencil.
pub fn binormal_derivative(m: &WalkerMetric, c: &CurveSpec, core: &FrameCore) -> Result<Vec3> {
    let t = core.kin.t;
    let rate = central_5pt(
        |s| frame_core(m, c, s).map(|f| [f.binormal.x, f.binormal.y, f.binormal.z]),
        t,
        along_step(t),
    )?;
    Ok(covariant_from_rate(m, &core.kin, &core.binormal, &Vec3::from(rate)))
}

/// `∇_T N`, with `N` differentiated by a five-point stencil.
pub fn normal_derivative(m: &WalkerMetric, c: &CurveSpec, core: &FrameCore) -> Result<Vec3> {
    let t = core.kin.t;
    let rate = central_5pt(
        |s| frame_core(m, c, s).map(|f| [f.normal.x, f.normal.y, f.normal.z]),
        t,
        along_step(t),
    )?;
    Ok(covariant_from_rate(m, &core.kin, &core.normal, &Vec3::from(rate)))
}

fn torsion_from(m: &WalkerMetric, c: &CurveSpec, core: &FrameCore) -> Result<f64> {
    let db = binormal_derivative(m, c, core)?;
    Ok(m.dot_with(core.kin.field.value, &db, &core.normal))
}

/// `τ = ⟨∇_T B, N⟩`.
pub fn torsion(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<f64> {
    torsion_from(m, c, &frame_core(m, c, t)?)
}

/// Component magnitudes (max-abs) of the three Frenet–Serret residuals
/// `∇_T T − ε₂κN`, `∇_T N + ε₁κT + ε₃τB` and `∇_T B − ε₂τN`.
pub fn frenet_residuals(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<[f64; 3]> {
    let core = frame_core(m, c, t)?;
    let tau = torsion_from(m, c, &core)?;
    let (e1, e2, e3) = (core.kin.eps1.value(), core.eps2.value(), core.eps3.value());
    let r_t = core.kin.accel - core.normal * (e2 * core.kappa);
    let r_n = normal_derivative(m, c, &core)? + core.kin.tangent * (e1 * core.kappa) + core.binormal * (e3 * tau);
    let r_b = binormal_derivative(m, c, &core)? - core.normal * (e2 * tau);
    Ok([r_t.amax(), r_n.amax(), r_b.amax()])
}

/// Largest deviation of the frame's pairwise products from the pattern
/// `diag(ε₁, ε₂, ε₃)`.
pub fn orthonormality_defect(m: &WalkerMetric, frame: &FrenetFrame) -> Result<f64> {
    let f = m.field().value(frame.pos.y, frame.pos.z)?;
    let vs = [frame.tangent, frame.normal, frame.binormal];
    let signs = [frame.eps1, frame.eps2, frame.eps3];
    let mut worst = 0.0_f64;
    for i in 0..3 {
        for j in i..3 {
            let target = if i == j { signs[i].value() } else { 0.0 };
            worst = worst.max((m.dot_with(f, &vs[i], &vs[j]) - target).abs());
        }
    }
    Ok(worst)
}

/// `γ • A B` at the frame's base point: the position vector field paired with
/// the binormal through the metric matrix.
pub fn position_pairing(m: &WalkerMetric, core: &FrameCore) -> f64 {
    let p = core.kin.pos;
    let ab = metric_lower(m.eps().value(), core.kin.field.value, &core.binormal);
    euclid_dot(&p.coords, &ab)
}

/// `A v` for the metric matrix with entries `ε` and `f`.
pub fn metric_lower(eps: f64, f: f64, v: &Vec3) -> Vec3 {
    Vec3::new(v.z, eps * v.y, v.x + f * v.z)
}

/// `d/ds(γ • AB) − ⟨∇_T γ, B⟩ − ⟨γ, ∇_T B⟩`, which vanishes for every curve
/// by metric compatibility. Here `γ` is the position vector field and
/// `∇_T γ = T + y ∇_T ∂y + z ∇_T ∂z`.
pub fn pairing_residual(m: &WalkerMetric, c: &CurveSpec, t: f64) -> Result<f64> {
    let core = frame_core(m, c, t)?;
    let kin = &core.kin;
    let rate = central_5pt(|s| frame_core(m, c, s).map(|f| [position_pairing(m, &f)]), t, along_step(t))?[0];
    let lhs = rate / kin.speed;
    let gamma = kin.pos.coords;
    let d_gamma = kin.tangent + m.christoffel_with(&kin.field, &kin.tangent, &gamma);
    let d_b = binormal_derivative(m, c, &core)?;
    let f = kin.field.value;
    Ok(lhs - m.dot_with(f, &d_gamma, &core.binormal) - m.dot_with(f, &gamma, &d_b))
}
