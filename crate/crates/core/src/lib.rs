//! Differential geometry of strict Walker 3-manifolds
//! `g_f = ε dy² + 2 dx dz + f(y,z) dz²`: curves, their Frenet frames,
//! cylinder surfaces and the zero-torsion construction.

pub mod construction;
pub mod curve_geometry;
pub mod error;
pub mod field_expr;
pub mod manifold;
pub mod numerics;
pub mod surface_geometry;

pub use error::{GeometryError, Result};
pub use manifold::{Point3, Sign, Vec3, WalkerMetric};
