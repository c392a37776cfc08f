//! Numerical convex geometry around L_p affine surface areas: evaluable
//! convex bodies, spherical quadrature, the as_p functionals for all real
//! p != -n, floating and surface bodies with their polar-volume limits,
//! and a verification harness for the related affine isoperimetric
//! inequalities.
//!
//! Every evaluation is a pure function of immutable bodies and grids, so
//! concurrent read-only use is safe; summation orders are fixed, keeping
//! results bit-for-bit reproducible.

// negated comparisons are deliberate: `!(x > 0.0)` rejects NaN where
// `x <= 0.0` would let it through
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod asa;
pub mod bodies;
pub mod error;
pub mod floating;
pub mod inequalities;
pub mod quadrature;

pub use asa::{AsaMethod, AsaValue, PExponent};
pub use bodies::{
    BoundaryPoint, CircularArc, ConvexBody, Direction, Halfspace, LinearMap, PlanarSupport,
    PolarResult, Polygon2,
};
pub use error::{Error, Result};
pub use floating::{CapCut, InnerBodyApprox, LimitEstimate};
pub use inequalities::{BodyEnsemble, InequalityReport, Verdict};
pub use quadrature::{
    grid_circle, grid_mc, grid_sphere3, integrate, sphere_area, unit_ball_volume, IntegralResult,
    Integration, SphereGrid,
};
