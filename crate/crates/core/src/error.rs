use thiserror::Error;

use crate::field_expr::ExprError;
use crate::numerics::NumericsError;

pub type Result<T, E = GeometryError> = std::result::Result<T, E>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum GeometryError {
    #[error(transparent)]
    Expr(#[from] ExprError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
    #[error("zero vector has no causal character")]
    ZeroVector,
    #[error("null velocity at t = {t}")]
    NullVelocity { t: f64 },
    #[error("curve is not regular at t = {t} (zero velocity)")]
    IrregularCurve { t: f64 },
    #[error("null acceleration at t = {t}: Frenet frame undefined")]
    NullAcceleration { t: f64 },
    #[error("vanishing acceleration at t = {t} (geodesic point)")]
    VanishingAcceleration { t: f64 },
    #[error("degenerate plane: Gram determinant {gram:e}")]
    DegeneratePlane { gram: f64 },
    #[error("degenerate tangent plane at ({u}, {v}): normal direction is null")]
    DegenerateTangentPlane { u: f64, v: f64 },
    #[error("degenerate induced metric at ({u}, {v}): det = {det:e}")]
    DegenerateInducedMetric { u: f64, v: f64, det: f64 },
    #[error("denominator vanishes at y = {y} (value {value:e})")]
    DenominatorVanishes { y: f64, value: f64 },
    #[error("tangent component t3 = {t3:e} too small at y = {y}")]
    SmallTangentComponent { y: f64, t3: f64 },
    #[error("no real root in either branch")]
    NoRealRoot,
    #[error("operation requires the flat metric f = 0")]
    FlatMetricRequired,
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl GeometryError {
    /// Short machine-readable tag, used in CSV rows that could not be computed.
    pub fn code(&self) -> &'static str {
        match self {
            GeometryError::Expr(_) => "ERR_EXPR",
            GeometryError::Numerics(_) => "ERR_NUMERICS",
            GeometryError::ZeroVector => "ERR_ZERO_VECTOR",
            GeometryError::NullVelocity { .. } => "ERR_NULL_VELOCITY",
            GeometryError::IrregularCurve { .. } => "ERR_IRREGULAR",
            GeometryError::NullAcceleration { .. } => "ERR_NULL_ACCELERATION",
            GeometryError::VanishingAcceleration { .. } => "ERR_VANISHING_ACCELERATION",
            GeometryError::DegeneratePlane { .. } => "ERR_DEGENERATE_PLANE",
            GeometryError::DegenerateTangentPlane { .. } => "ERR_DEGENERATE_TANGENT_PLANE",
            GeometryError::DegenerateInducedMetric { .. } => "ERR_DEGENERATE_METRIC",
            GeometryError::DenominatorVanishes { .. } => "ERR_DENOMINATOR",
            GeometryError::SmallTangentComponent { .. } => "ERR_SMALL_T3",
            GeometryError::NoRealRoot => "ERR_NO_ROOT",
            GeometryError::FlatMetricRequired => "ERR_NOT_FLAT",
            GeometryError::InvalidInput(_) => "ERR_INPUT",
        }
    }
}
