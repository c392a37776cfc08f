//! Serializable body descriptions: the JSON schema used by body
//! specification files. Parsing validates dimensions and numeric fields
//! and produces a [`ConvexBody`].

use super::{CircularArc, ConvexBody, Halfspace};
use crate::error::{Error, Result};
use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum BodySpec {
    /// Euclidean unit ball of the given dimension.
    Ball { dimension: usize },
    Ellipsoid {
        semi_axes: Vec<f64>,
        #[serde(default, skip_serializing_if = "Option::is_none")]
        orientation: Option<Vec<Vec<f64>>>,
    },
    /// h(theta) = a0 + sum_k cos[k-1] cos(k theta) + sin[k-1] sin(k theta)
    PlanarSupport {
        a0: f64,
        #[serde(default)]
        cos: Vec<f64>,
        #[serde(default)]
        sin: Vec<f64>,
    },
    PiecewiseArc { arcs: Vec<ArcSpec> },
    /// The rounded intersection body K(R, eps).
    RoundedIntersection {
        big_radius: f64,
        corner_radius: f64,
    },
    HalfspacePolytope { halfspaces: Vec<HalfspaceSpec> },
    Cube { dimension: usize },
    CrossPolytope { dimension: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArcSpec {
    pub center: [f64; 2],
    pub radius: f64,
    pub theta_from: f64,
    pub theta_to: f64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HalfspaceSpec {
    pub normal: [f64; 2],
    pub offset: f64,
}

impl BodySpec {
    pub fn to_body(&self) -> Result<ConvexBody> {
        match self {
            BodySpec::Ball { dimension } => ConvexBody::unit_ball(*dimension),
            BodySpec::Ellipsoid {
                semi_axes,
                orientation,
            } => match orientation {
                None => ConvexBody::ellipsoid(semi_axes.clone()),
                Some(rows) => {
                    let n = semi_axes.len();
                    if rows.len() != n || rows.iter().any(|r| r.len() != n) {
                        return Err(Error::InvalidBody(
                            "orientation matrix shape does not match semi_axes".into(),
                        ));
                    }
                    let flat: Vec<f64> = rows.iter().flatten().copied().collect();
                    ConvexBody::ellipsoid_oriented(
                        semi_axes.clone(),
                        DMatrix::from_row_slice(n, n, &flat),
                    )
                }
            },
            BodySpec::PlanarSupport { a0, cos, sin } => {
                ConvexBody::planar_support(*a0, cos.clone(), sin.clone())
            }
            BodySpec::PiecewiseArc { arcs } => ConvexBody::piecewise_arc(
                arcs.iter()
                    .map(|a| CircularArc {
                        center: a.center,
                        radius: a.radius,
                        theta_from: a.theta_from,
                        theta_to: a.theta_to,
                    })
                    .collect(),
            ),
            BodySpec::RoundedIntersection {
                big_radius,
                corner_radius,
            } => ConvexBody::rounded_intersection(*big_radius, *corner_radius),
            BodySpec::HalfspacePolytope { halfspaces } => {
                let hs: Vec<Halfspace> = halfspaces
                    .iter()
                    .map(|h| {
                        let norm = (h.normal[0] * h.normal[0] + h.normal[1] * h.normal[1]).sqrt();
                        if norm <= 0.0 || !norm.is_finite() {
                            return Err(Error::InvalidBody("zero halfspace normal".into()));
                        }
                        Ok(Halfspace {
                            normal: [h.normal[0] / norm, h.normal[1] / norm],
                            offset: h.offset / norm,
                        })
                    })
                    .collect::<Result<_>>()?;
                ConvexBody::halfspace_polytope(&hs)
            }
            BodySpec::Cube { dimension } => ConvexBody::cube(*dimension),
            BodySpec::CrossPolytope { dimension } => ConvexBody::cross_polytope(*dimension),
        }
    }

    pub fn from_body(body: &ConvexBody) -> BodySpec {
        match body {
            ConvexBody::Ellipsoid(e) => {
                let n = e.dim();
                let q = e.orientation();
                let is_identity = (0..n).all(|i| {
                    (0..n).all(|j| (q[(i, j)] - if i == j { 1.0 } else { 0.0 }).abs() < 1e-14)
                });
                BodySpec::Ellipsoid {
                    semi_axes: e.semi_axes().to_vec(),
                    orientation: if is_identity {
                        None
                    } else {
                        Some(
                            (0..n)
                                .map(|i| (0..n).map(|j| q[(i, j)]).collect())
                                .collect(),
                        )
                    },
                }
            }
            ConvexBody::PlanarSupport(p) => BodySpec::PlanarSupport {
                a0: p.a0(),
                cos: p.cos_coeffs().to_vec(),
                sin: p.sin_coeffs().to_vec(),
            },
            ConvexBody::PiecewiseArc(a) => BodySpec::PiecewiseArc {
                arcs: a
                    .arcs()
                    .iter()
                    .map(|arc| ArcSpec {
                        center: arc.center,
                        radius: arc.radius,
                        theta_from: arc.theta_from,
                        theta_to: arc.theta_to,
                    })
                    .collect(),
            },
            ConvexBody::HalfspacePolytope(p) => BodySpec::HalfspacePolytope {
                halfspaces: p
                    .edge_halfspaces()
                    .iter()
                    .map(|h| HalfspaceSpec {
                        normal: h.normal,
                        offset: h.offset,
                    })
                    .collect(),
            },
            ConvexBody::Cube { dimension } => BodySpec::Cube {
                dimension: *dimension,
            },
            ConvexBody::CrossPolytope { dimension } => BodySpec::CrossPolytope {
                dimension: *dimension,
            },
        }
    }
}
