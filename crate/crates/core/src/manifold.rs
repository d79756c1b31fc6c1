//! The strict Walker 3-manifold `g_f = ε dy² + 2 dx dz + f(y,z) dz²`.
//!
//! All tensors are expressed in the coordinate frame `(∂x, ∂y, ∂z)`. The only
//! non-vanishing Christoffel symbols are
//!
//! ```text
//! ∇_{∂y} ∂z = ½ f_y ∂x
//! ∇_{∂z} ∂z = ½ f_z ∂x − (ε/2) f_y ∂y
//! ```
//!
//! and the curvature is carried entirely by `f_yy`:
//!
//! ```text
//! R(∂y, ∂z) ∂y =  ½ f_yy ∂x
//! R(∂y, ∂z) ∂z = −(ε/2) f_yy ∂y
//! ```

use std::fmt;

use nalgebra::{Matrix3, Vector3};

use crate::error::{GeometryError, Result};
use crate::field_expr::{ExprError, FieldJet2, ScalarField2};

pub type Vec3 = Vector3<f64>;
pub type Point3 = nalgebra::Point3<f64>;

/// Default relative tolerance of [`WalkerMetric::causal_class`].
pub const NULL_TOL: f64 = 1e-9;

/// A sign `±1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    /// Sign of `x`; zero maps to `Plus`.
    pub fn of(x: f64) -> Sign {
        if x < 0.0 {
            Sign::Minus
        } else {
            Sign::Plus
        }
    }

    pub fn from_int(v: i64) -> Option<Sign> {
        match v {
            1 => Some(Sign::Plus),
            -1 => Some(Sign::Minus),
            _ => None,
        }
    }

    pub fn as_int(self) -> i64 {
        match self {
            Sign::Plus => 1,
            Sign::Minus => -1,
        }
    }
}

impl std::ops::Mul for Sign {
    type Output = Sign;
    fn mul(self, rhs: Sign) -> Sign {
        if self == rhs {
            Sign::Plus
        } else {
            Sign::Minus
        }
    }
}

impl fmt::Display for Sign {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.as_int())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CausalClass {
    Spacelike,
    Timelike,
    Null,
}

/// Standard 3×3 determinant of the component columns `u, v, w`.
pub fn det3(u: &Vec3, v: &Vec3, w: &Vec3) -> f64 {
    u.dot(&v.cross(w))
}

/// Euclidean dot product of coordinate components.
pub fn euclid_dot(u: &Vec3, v: &Vec3) -> f64 {
    u.dot(v)
}

#[derive(Debug, Clone)]
pub struct WalkerMetric {
    eps: Sign,
    f: ScalarField2,
}

impl WalkerMetric {
    pub fn new(eps: Sign, f: ScalarField2) -> WalkerMetric {
        WalkerMetric { eps, f }
    }

    pub fn parse(eps: Sign, f: &str) -> std::result::Result<WalkerMetric, ExprError> {
        Ok(WalkerMetric::new(eps, ScalarField2::parse(f)?))
    }

    pub fn flat(eps: Sign) -> WalkerMetric {
        WalkerMetric::new(eps, ScalarField2::constant(0.0))
    }

    pub fn eps(&self) -> Sign {
        self.eps
    }

    pub fn field(&self) -> &ScalarField2 {
        &self.f
    }

    pub fn f_jet(&self, p: &Point3) -> Result<FieldJet2> {
        Ok(self.f.jet(p.y, p.z)?)
    }

    /// The metric matrix `A` at `p`.
    pub fn matrix(&self, p: &Point3) -> Result<Matrix3<f64>> {
        let f = self.f.value(p.y, p.z)?;
        Ok(Self::matrix_with(self.eps, f))
    }

    fn matrix_with(eps: Sign, f: f64) -> Matrix3<f64> {
        Matrix3::new(0.0, 0.0, 1.0, 0.0, eps.value(), 0.0, 1.0, 0.0, f)
    }

    pub fn metric_dot(&self, p: &Point3, u: &Vec3, v: &Vec3) -> Result<f64> {
        let f = self.f.value(p.y, p.z)?;
        Ok(self.dot_with(f, u, v))
    }

    /// `⟨u, v⟩` for a known value `f` of the field at the base point.
    pub fn dot_with(&self, f: f64, u: &Vec3, v: &Vec3) -> f64 {
        u.x * v.z + u.z * v.x + self.eps.value() * u.y * v.y + f * u.z * v.z
    }

    pub fn causal_class(&self, p: &Point3, u: &Vec3, tol: f64) -> Result<CausalClass> {
        if *u == Vec3::zeros() {
            return Err(GeometryError::ZeroVector);
        }
        let q = self.metric_dot(p, u, u)?;
        Ok(classify(q, u, tol))
    }

    /// `∇_u v` for constant-coefficient fields at `p`: the symmetric bilinear
    /// Christoffel term `Γ_p(u, v)`.
    pub fn christoffel_apply(&self, p: &Point3, u: &Vec3, v: &Vec3) -> Result<Vec3> {
        Ok(self.christoffel_with(&self.f_jet(p)?, u, v))
    }

    pub fn christoffel_with(&self, f: &FieldJet2, u: &Vec3, v: &Vec3) -> Vec3 {
        let mixed = u.y * v.z + u.z * v.y;
        let zz = u.z * v.z;
        Vec3::new(
            mixed * 0.5 * f.d_y + zz * 0.5 * f.d_z,
            -zz * 0.5 * self.eps.value() * f.d_y,
            0.0,
        )
    }

    /// `R(u, v) w` at `p`.
    pub fn riemann_apply(&self, p: &Point3, u: &Vec3, v: &Vec3, w: &Vec3) -> Result<Vec3> {
        let f = self.f_jet(p)?;
        let area = u.y * v.z - u.z * v.y;
        Ok(Vec3::new(
            area * w.y * 0.5 * f.d_yy,
            -area * w.z * 0.5 * self.eps.value() * f.d_yy,
            0.0,
        ))
    }

    /// The product `×_f` characterized by `⟨u ×_f v, w⟩ = det(u, v, w)`.
    pub fn cross_f(&self, p: &Point3, u: &Vec3, v: &Vec3) -> Result<Vec3> {
        let f = self.f.value(p.y, p.z)?;
        Ok(self.cross_with(f, u, v))
    }

    pub fn cross_with(&self, f: f64, u: &Vec3, v: &Vec3) -> Vec3 {
        let d12 = u.x * v.y - u.y * v.x;
        let d13 = u.x * v.z - u.z * v.x;
        let d23 = u.y * v.z - u.z * v.y;
        Vec3::new(d12 - f * d23, -self.eps.value() * d13, d23)
    }

    /// Ambient sectional curvature `⟨R(u,v)v, u⟩ / (⟨u,u⟩⟨v,v⟩ − ⟨u,v⟩²)`.
    pub fn sectional(&self, p: &Point3, u: &Vec3, v: &Vec3) -> Result<f64> {
        let f = self.f.value(p.y, p.z)?;
        let gram = self.dot_with(f, u, u) * self.dot_with(f, v, v) - self.dot_with(f, u, v).powi(2);
        let scale = (1.0 + u.norm_squared()) * (1.0 + v.norm_squared());
        if gram.abs() <= 1e-12 * scale {
            return Err(GeometryError::DegeneratePlane { gram });
        }
        let r = self.riemann_apply(p, u, v, v)?;
        Ok(self.dot_with(f, &r, u) / gram)
    }
}

/// Causal character of a vector with squared norm `q`, null when
/// `|q| ≤ tol·(|u|² + 1)` in the Euclidean auxiliary norm.
pub fn classify(q: f64, u: &Vec3, tol: f64) -> CausalClass {
    if q.abs() <= tol * (u.norm_squared() + 1.0) {
        CausalClass::Null
    } else if q > 0.0 {
        CausalClass::Spacelike
    } else {
        CausalClass::Timelike
    }
}
