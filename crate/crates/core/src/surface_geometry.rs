//! Immersed surface patches: unit normal, second fundamental form, shape
//! operator and Gauss curvature, plus the two graph cylinders with null
//! axis `∂x`.
//!
//! With `η` the unit normal of sign `δ = ⟨η,η⟩` and `G` the first fundamental
//! form, the second fundamental form is `h(X,Y) = δ ⟨∇_X Y, η⟩`, the shape
//! operator is `S = δ G⁻¹ h` (so that `⟨SX, Y⟩ = δ h(X,Y)`), and the Gauss
//! curvature is `K = K^M(Φ_u, Φ_v) + δ det S`.

use std::fmt;
use std::sync::Arc;

use nalgebra::Matrix2;

use crate::error::{GeometryError, Result};
use crate::field_expr::{ExprAst, ExprError, ScalarField1};
use crate::manifold::{classify, CausalClass, Point3, Sign, Vec3, WalkerMetric, NULL_TOL};
use crate::numerics::{derivative_fd, fd_step, FdOrder};

/// Which graph cylinder: `Φ(x,y) = (x, y, φ(y))` or `Φ(x,z) = (x, φ(z), z)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CylinderCase {
    One,
    Two,
}

impl CylinderCase {
    pub fn from_int(v: i64) -> Option<CylinderCase> {
        match v {
            1 => Some(CylinderCase::One),
            2 => Some(CylinderCase::Two),
            _ => None,
        }
    }

    /// Name of the profile variable: `y` for Case 1, `z` for Case 2.
    pub fn profile_variable(self) -> &'static str {
        match self {
            CylinderCase::One => "y",
            CylinderCase::Two => "z",
        }
    }
}

#[derive(Debug, Clone)]
struct ExprJet2 {
    value: ExprAst,
    du: ExprAst,
    dv: ExprAst,
    duu: ExprAst,
    duv: ExprAst,
    dvv: ExprAst,
}

impl ExprJet2 {
    fn parse(text: &str) -> std::result::Result<ExprJet2, ExprError> {
        let value = ExprAst::parse(text, &["u", "v"])?;
        let du = value.differentiate_index(0);
        let dv = value.differentiate_index(1);
        let duu = du.differentiate_index(0);
        let duv = du.differentiate_index(1);
        let dvv = dv.differentiate_index(1);
        Ok(ExprJet2 { value, du, dv, duu, duv, dvv })
    }

    fn eval(&self, u: f64, v: f64) -> std::result::Result<[f64; 6], ExprError> {
        let p = [u, v];
        Ok([
            self.value.eval(&p)?,
            self.du.eval(&p)?,
            self.dv.eval(&p)?,
            self.duu.eval(&p)?,
            self.duv.eval(&p)?,
            self.dvv.eval(&p)?,
        ])
    }
}

type PatchFn = dyn Fn(f64, f64) -> [f64; 3] + Send + Sync;

#[derive(Clone)]
enum PatchKind {
    Cylinder { case: CylinderCase, phi: ScalarField1 },
    Expr(Box<[ExprJet2; 3]>),
    Callback(Arc<PatchFn>),
}

/// An immersion `(u, v) ↦ (x, y, z)` on a parameter rectangle.
#[derive(Clone)]
pub struct SurfacePatch {
    kind: PatchKind,
    u_range: (f64, f64),
    v_range: (f64, f64),
}

impl fmt::Debug for SurfacePatch {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            PatchKind::Cylinder { case, phi } => write!(f, "SurfacePatch({case:?}, φ = {})", phi.expr()),
            PatchKind::Expr(c) => write!(f, "SurfacePatch(({}, {}, {}))", c[0].value, c[1].value, c[2].value),
            PatchKind::Callback(_) => f.write_str("SurfacePatch(<closure>)"),
        }
    }
}

/// Point, first partials and covariant second partials `∇_{Φ_i} Φ_j`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PatchJet {
    pub point: Point3,
    pub du: Vec3,
    pub dv: Vec3,
    pub cov_uu: Vec3,
    pub cov_uv: Vec3,
    pub cov_vv: Vec3,
}

impl SurfacePatch {
    /// Case 1 cylinder `Φ(x, y) = x(1,0,0) + (0, y, φ(y))`; φ in the variable `y`.
    pub fn cylinder_case1(phi: ScalarField1) -> SurfacePatch {
        SurfacePatch {
            kind: PatchKind::Cylinder { case: CylinderCase::One, phi },
            u_range: (-1.0, 1.0),
            v_range: (-1.0, 1.0),
        }
    }

    /// Case 2 cylinder `Φ(x, z) = x(1,0,0) + (0, φ(z), z)`; φ in the variable `z`.
    pub fn cylinder_case2(phi: ScalarField1) -> SurfacePatch {
        SurfacePatch {
            kind: PatchKind::Cylinder { case: CylinderCase::Two, phi },
            u_range: (-1.0, 1.0),
            v_range: (-1.0, 1.0),
        }
    }

    pub fn cylinder(case: CylinderCase, phi: ScalarField1) -> SurfacePatch {
        match case {
            CylinderCase::One => Self::cylinder_case1(phi),
            CylinderCase::Two => Self::cylinder_case2(phi),
        }
    }

    /// A generic patch from component expressions in `u`, `v`, with
    /// symbolic partials.
    pub fn parse(x: &str, y: &str, z: &str) -> Result<SurfacePatch> {
        let comps = [ExprJet2::parse(x)?, ExprJet2::parse(y)?, ExprJet2::parse(z)?];
        Ok(SurfacePatch { kind: PatchKind::Expr(Box::new(comps)), u_range: (-1.0, 1.0), v_range: (-1.0, 1.0) })
    }

    /// A generic patch from a position callback; partials by finite differences.
    pub fn from_fn(f: impl Fn(f64, f64) -> [f64; 3] + Send + Sync + 'static) -> SurfacePatch {
        SurfacePatch { kind: PatchKind::Callback(Arc::new(f)), u_range: (-1.0, 1.0), v_range: (-1.0, 1.0) }
    }

    pub fn with_ranges(mut self, u_range: (f64, f64), v_range: (f64, f64)) -> SurfacePatch {
        self.u_range = u_range;
        self.v_range = v_range;
        self
    }

    pub fn ranges(&self) -> ((f64, f64), (f64, f64)) {
        (self.u_range, self.v_range)
    }

    pub fn cylinder_profile(&self) -> Option<(CylinderCase, &ScalarField1)> {
        match &self.kind {
            PatchKind::Cylinder { case, phi } => Some((*case, phi)),
            _ => None,
        }
    }

    pub fn point(&self, u: f64, v: f64) -> Result<Point3> {
        Ok(match &self.kind {
            PatchKind::Cylinder { case: CylinderCase::One, phi } => Point3::new(u, v, phi.value(v)?),
            PatchKind::Cylinder { case: CylinderCase::Two, phi } => Point3::new(u, phi.value(v)?, v),
            PatchKind::Expr(c) => {
                let p = [u, v];
                Point3::new(c[0].value.eval(&p)?, c[1].value.eval(&p)?, c[2].value.eval(&p)?)
            }
            PatchKind::Callback(f) => Point3::from(f(u, v)),
        })
    }

    pub fn jet(&self, m: &WalkerMetric, u: f64, v: f64) -> Result<PatchJet> {
        let eps = m.eps().value();
        match &self.kind {
            PatchKind::Cylinder { case: CylinderCase::One, phi } => {
                let p = phi.jet(v)?;
                let point = Point3::new(u, v, p.value);
                let f = m.f_jet(&point)?;
                let cov_vv = Vec3::new(
                    p.d1 * (f.d_y + 0.5 * p.d1 * f.d_z),
                    -0.5 * eps * p.d1 * p.d1 * f.d_y,
                    p.d2,
                );
                Ok(PatchJet {
                    point,
                    du: Vec3::x(),
                    dv: Vec3::new(0.0, 1.0, p.d1),
                    cov_uu: Vec3::zeros(),
                    cov_uv: Vec3::zeros(),
                    cov_vv,
                })
            }
            PatchKind::Cylinder { case: CylinderCase::Two, phi } => {
                let p = phi.jet(v)?;
                let point = Point3::new(u, p.value, v);
                let f = m.f_jet(&point)?;
                let cov_vv = Vec3::new(p.d1 * f.d_y + 0.5 * f.d_z, p.d2 - 0.5 * eps * f.d_y, 0.0);
                Ok(PatchJet {
                    point,
                    du: Vec3::x(),
                    dv: Vec3::new(0.0, p.d1, 1.0),
                    cov_uu: Vec3::zeros(),
                    cov_uv: Vec3::zeros(),
                    cov_vv,
                })
            }
            PatchKind::Expr(c) => {
                let [x, y, z] = [c[0].eval(u, v)?, c[1].eval(u, v)?, c[2].eval(u, v)?];
                let col = |i: usize| Vec3::new(x[i], y[i], z[i]);
                self.covariant(m, col(0).into(), col(1), col(2), col(3), col(4), col(5))
            }
            PatchKind::Callback(f) => {
                let comp = |i: usize| {
                    let du = derivative_fd(|s| f(s, v)[i], u, FdOrder::First);
                    let dv = derivative_fd(|s| f(u, s)[i], v, FdOrder::First);
                    let duu = derivative_fd(|s| f(s, v)[i], u, FdOrder::Second);
                    let dvv = derivative_fd(|s| f(u, s)[i], v, FdOrder::Second);
                    let (hu, hv) = (fd_step(u, FdOrder::Second), fd_step(v, FdOrder::Second));
                    let duv = (f(u + hu, v + hv)[i] - f(u + hu, v - hv)[i] - f(u - hu, v + hv)[i]
                        + f(u - hu, v - hv)[i])
                        / (4.0 * hu * hv);
                    [du, dv, duu, duv, dvv]
                };
                let [x, y, z] = [comp(0), comp(1), comp(2)];
                let col = |i: usize| Vec3::new(x[i], y[i], z[i]);
                self.covariant(m, Point3::from(f(u, v)), col(0), col(1), col(2), col(3), col(4))
            }
        }
    }

    #[allow(clippy::too_many_arguments)]
    fn covariant(
        &self,
        m: &WalkerMetric,
        point: Point3,
        du: Vec3,
        dv: Vec3,
        duu: Vec3,
        duv: Vec3,
        dvv: Vec3,
    ) -> Result<PatchJet> {
        let f = m.f_jet(&point)?;
        Ok(PatchJet {
            point,
            du,
            dv,
            cov_uu: duu + m.christoffel_with(&f, &du, &du),
            cov_uv: duv + m.christoffel_with(&f, &du, &dv),
            cov_vv: dvv + m.christoffel_with(&f, &dv, &dv),
        })
    }
}

/// `η = (Φ_u ×_f Φ_v) / |Φ_u ×_f Φ_v|` and `δ = ⟨η, η⟩`.
pub fn unit_normal(m: &WalkerMetric, s: &SurfacePatch, u: f64, v: f64) -> Result<(Vec3, Sign)> {
    let jet = s.jet(m, u, v)?;
    normal_from(m, &jet, u, v)
}

fn normal_from(m: &WalkerMetric, jet: &PatchJet, u: f64, v: f64) -> Result<(Vec3, Sign)> {
    let f = m.field().value(jet.point.y, jet.point.z)?;
    let c = m.cross_with(f, &jet.du, &jet.dv);
    let q = m.dot_with(f, &c, &c);
    if c.norm() <= 1e-12 || classify(q, &c, NULL_TOL) == CausalClass::Null {
        return Err(GeometryError::DegenerateTangentPlane { u, v });
    }
    Ok((c / q.abs().sqrt(), Sign::of(q)))
}

/// Normal and second fundamental form in the patch basis `(Φ_u, Φ_v)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SecondFundamental {
    pub normal: Vec3,
    pub delta: Sign,
    pub h: Matrix2<f64>,
}

pub fn second_fundamental(m: &WalkerMetric, s: &SurfacePatch, u: f64, v: f64) -> Result<SecondFundamental> {
    let jet = s.jet(m, u, v)?;
    second_from(m, &jet, u, v)
}

fn second_from(m: &WalkerMetric, jet: &PatchJet, u: f64, v: f64) -> Result<SecondFundamental> {
    let (normal, delta) = normal_from(m, jet, u, v)?;
    let f = m.field().value(jet.point.y, jet.point.z)?;
    let pair = |w: &Vec3| delta.value() * m.dot_with(f, w, &normal);
    let (huu, huv, hvv) = (pair(&jet.cov_uu), pair(&jet.cov_uv), pair(&jet.cov_vv));
    Ok(SecondFundamental { normal, delta, h: Matrix2::new(huu, huv, huv, hvv) })
}

/// Everything extracted from a patch at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ShapeData {
    pub normal: Vec3,
    pub delta: Sign,
    pub first: Matrix2<f64>,
    pub h: Matrix2<f64>,
    pub shape: Matrix2<f64>,
    pub det_s: f64,
    /// Ambient sectional curvature of the tangent plane.
    pub ambient_k: f64,
    /// Intrinsic Gauss curvature `K^M + δ det S`.
    pub gauss: f64,
}

pub fn shape_operator(m: &WalkerMetric, s: &SurfacePatch, u: f64, v: f64) -> Result<ShapeData> {
    let jet = s.jet(m, u, v)?;
    let second = second_from(m, &jet, u, v)?;
    let f = m.field().value(jet.point.y, jet.point.z)?;
    let g = |a: &Vec3, b: &Vec3| m.dot_with(f, a, b);
    let (e, ff, gg) = (g(&jet.du, &jet.du), g(&jet.du, &jet.dv), g(&jet.dv, &jet.dv));
    let first = Matrix2::new(e, ff, ff, gg);
    let det = first.determinant();
    let scale = 1.0 + e.abs().max(ff.abs()).max(gg.abs());
    if det.abs() <= 1e-12 * scale * scale {
        return Err(GeometryError::DegenerateInducedMetric { u, v, det });
    }
    let inverse = Matrix2::new(gg, -ff, -ff, e) / det;
    let shape = inverse * second.h * second.delta.value();
    let det_s = shape.determinant();
    let ambient_k = m.sectional(&jet.point, &jet.du, &jet.dv)?;
    Ok(ShapeData {
        normal: second.normal,
        delta: second.delta,
        first,
        h: second.h,
        shape,
        det_s,
        ambient_k,
        gauss: ambient_k + second.delta.value() * det_s,
    })
}

pub fn gauss_curvature(m: &WalkerMetric, s: &SurfacePatch, u: f64, v: f64) -> Result<f64> {
    Ok(shape_operator(m, s, u, v)?.gauss)
}

/// Left-hand side of the totally-geodesic condition of a graph cylinder:
///
/// * Case 1: `φ″(y) + (ε/2) φ′(y)³ f_y(y, φ(y))`
/// * Case 2: `(ε/2) f_y(φ(z), z) − φ″(z)`
pub fn totally_geodesic_residual(m: &WalkerMetric, case: CylinderCase, phi: &ScalarField1, param: f64) -> Result<f64> {
    let p = phi.jet(param)?;
    let eps = m.eps().value();
    Ok(match case {
        CylinderCase::One => {
            let f = m.field().jet(param, p.value)?;
            p.d2 + 0.5 * eps * p.d1.powi(3) * f.d_y
        }
        CylinderCase::Two => {
            let f = m.field().jet(p.value, param)?;
            0.5 * eps * f.d_y - p.d2
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn phi(text: &str, var: &str) -> ScalarField1 {
        ScalarField1::parse(text, var).unwrap()
    }

    #[test]
    fn cylinder_normals() {
        let m = WalkerMetric::flat(Sign::Plus);
        let c1 = SurfacePatch::cylinder_case1(phi("2*y", "y"));
        let (eta, delta) = unit_normal(&m, &c1, 0.3, 0.7).unwrap();
        assert!((eta - Vec3::new(0.5, -1.0, 0.0)).amax() < 1e-15);
        assert_eq!(delta, Sign::Plus);

        let c2 = SurfacePatch::cylinder_case2(phi("sin(z)", "z"));
        let (eta, delta) = unit_normal(&m, &c2, 0.0, 0.4).unwrap();
        assert!((eta - Vec3::new(0.4f64.cos(), -1.0, 0.0)).amax() < 1e-15);
        assert_eq!(delta, Sign::Plus);

        let flat_profile = SurfacePatch::cylinder_case1(phi("3", "y"));
        assert!(matches!(unit_normal(&m, &flat_profile, 0.0, 0.0), Err(GeometryError::DegenerateTangentPlane { .. })));
    }

    #[test]
    fn delta_matches_epsilon() {
        for eps in [Sign::Plus, Sign::Minus] {
            let m = WalkerMetric::parse(eps, "y^2 + z").unwrap();
            let c1 = SurfacePatch::cylinder_case1(phi("y + y^3", "y"));
            let c2 = SurfacePatch::cylinder_case2(phi("z^2", "z"));
            assert_eq!(unit_normal(&m, &c1, 0.1, 0.5).unwrap().1, eps);
            assert_eq!(unit_normal(&m, &c2, 0.1, 0.5).unwrap().1, eps);
        }
    }

    #[test]
    fn case1_second_fundamental_form() {
        let m = WalkerMetric::parse(Sign::Minus, "sin(y) + z^2").unwrap();
        let c1 = SurfacePatch::cylinder_case1(phi("y^2 + y", "y"));
        let sf = second_fundamental(&m, &c1, 0.2, 0.4).unwrap();
        assert_eq!(sf.h[(0, 0)], 0.0);
        assert_eq!(sf.h[(0, 1)], 0.0);

        let flat = WalkerMetric::flat(Sign::Plus);
        let parabolic = SurfacePatch::cylinder_case1(phi("y^2", "y"));
        let sf = second_fundamental(&flat, &parabolic, 0.0, 1.0).unwrap();
        assert_abs_diff_eq!(sf.h[(1, 1)], 1.0, epsilon = 1e-15);
        let shape = shape_operator(&flat, &parabolic, 0.0, 1.0).unwrap();
        assert!(shape.det_s.abs() <= 1e-10);
        // one null coordinate direction: S ≠ 0 but S² = 0
        assert!(shape.shape.norm() > 0.1);
        assert!((shape.shape * shape.shape).norm() <= 1e-12);
    }

    #[test]
    fn case2_totally_geodesic_profile() {
        // φ'' = (ε/2) f_y with f = y, ε = 1: φ = z²/4
        let m = WalkerMetric::parse(Sign::Plus, "y").unwrap();
        let c2 = SurfacePatch::cylinder_case2(phi("z^2/4", "z"));
        for z in [-0.5, 0.0, 0.8] {
            let sf = second_fundamental(&m, &c2, 0.0, z).unwrap();
            assert!(sf.h.amax() <= 1e-15);
            assert_eq!(totally_geodesic_residual(&m, CylinderCase::Two, c2.cylinder_profile().unwrap().1, z).unwrap(), 0.0);
        }
    }

    #[test]
    fn totally_geodesic_residual_examples() {
        let m = WalkerMetric::parse(Sign::Plus, "z").unwrap();
        assert_eq!(totally_geodesic_residual(&m, CylinderCase::One, &phi("2*y - 1", "y"), 0.3).unwrap(), 0.0);
        let flat = WalkerMetric::flat(Sign::Plus);
        assert_eq!(totally_geodesic_residual(&flat, CylinderCase::Two, &phi("0", "z"), 0.3).unwrap(), 0.0);
        let ysq = WalkerMetric::parse(Sign::Plus, "y^2").unwrap();
        assert_eq!(totally_geodesic_residual(&ysq, CylinderCase::One, &phi("y", "y"), 1.0).unwrap(), 1.0);
    }

    #[test]
    fn totally_geodesic_case1_has_zero_shape_operator() {
        // φ'' = −y φ'³ solved by φ = asinh(y) for f = y², ε = 1
        let m = WalkerMetric::parse(Sign::Plus, "y^2").unwrap();
        let c1 = SurfacePatch::cylinder_case1(phi("ln(y + sqrt(y^2 + 1))", "y"));
        for y in [-0.7, 0.2, 1.1] {
            let shape = shape_operator(&m, &c1, 0.5, y).unwrap();
            assert!(shape.shape.amax() <= 1e-8);
        }
    }

    #[test]
    fn cylinder_closed_forms_match_generic_patch() {
        let m = WalkerMetric::parse(Sign::Minus, "y^2*z + sin(z)").unwrap();
        let closed = SurfacePatch::cylinder_case1(phi("y^3/3 + y", "y"));
        let generic = SurfacePatch::parse("u", "v", "v^3/3 + v").unwrap();
        let a = closed.jet(&m, 0.3, 0.6).unwrap();
        let b = generic.jet(&m, 0.3, 0.6).unwrap();
        assert!((a.cov_vv - b.cov_vv).amax() < 1e-14);

        let closed = SurfacePatch::cylinder_case2(phi("cos(z)", "z"));
        let generic = SurfacePatch::parse("u", "cos(v)", "v").unwrap();
        let a = closed.jet(&m, -0.2, 0.9).unwrap();
        let b = generic.jet(&m, -0.2, 0.9).unwrap();
        assert!((a.cov_vv - b.cov_vv).amax() < 1e-14);
    }

    #[test]
    fn callback_patch_uses_finite_differences() {
        let m = WalkerMetric::parse(Sign::Plus, "y^2").unwrap();
        let exact = SurfacePatch::parse("u*v", "u + v^2", "v").unwrap();
        let fd = SurfacePatch::from_fn(|u, v| [u * v, u + v * v, v]);
        let a = shape_operator(&m, &exact, 0.4, 0.8).unwrap();
        let b = shape_operator(&m, &fd, 0.4, 0.8).unwrap();
        assert!((a.h - b.h).amax() < 1e-6);
        assert!((a.gauss - b.gauss).abs() < 1e-5);
    }

    #[test]
    fn degenerate_tangent_plane_of_generic_patch() {
        let m = WalkerMetric::flat(Sign::Plus);
        let ok = SurfacePatch::parse("u", "u", "v").unwrap();
        assert!(shape_operator(&m, &ok, 0.0, 0.0).is_ok());
        // span{∂x, ∂x + ∂y} contains the null direction ∂x and is orthogonal to it
        let lightlike = SurfacePatch::parse("u + v", "v", "0").unwrap();
        assert!(matches!(shape_operator(&m, &lightlike, 0.0, 0.0), Err(GeometryError::DegenerateTangentPlane { .. })));
    }
}
