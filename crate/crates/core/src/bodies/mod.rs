//! Convex body representations with evaluable support function, inverse
//! Gauss map, curvature function, radial function, polar duality, volume,
//! and linear images.
//!
//! The representation is support-function-centric: smooth planar bodies
//! store a Fourier profile of h, arc bodies store their boundary arcs, and
//! boundary parametrizations are always derived on the fly.

mod arcs;
mod planar;
mod polygon;
pub mod schema;

pub use arcs::{CircularArc, PiecewiseArc};
pub use planar::{PlanarSupport, CONVEXITY_CHECK_GRID, DEFAULT_FIT_HARMONICS, FIT_SAMPLES};
pub use polygon::{clip_polygon, shoelace, Halfspace, Polygon2};

use crate::error::{Error, Result};
use crate::quadrature::{unit_ball_volume, SphereGrid};
use nalgebra::{DMatrix, SVD};

/// A unit vector on S^{n-1}; always normalized on construction.
#[derive(Debug, Clone, PartialEq)]
pub struct Direction {
    coords: Vec<f64>,
}

impl Direction {
    pub fn new(coords: Vec<f64>) -> Result<Self> {
        if coords.len() < 2 {
            return Err(Error::Config(format!(
                "directions need dimension >= 2, got {}",
                coords.len()
            )));
        }
        let norm2: f64 = coords.iter().map(|c| c * c).sum();
        if !norm2.is_finite() || norm2 <= 0.0 {
            return Err(Error::Config("direction must be a nonzero finite vector".into()));
        }
        let norm = norm2.sqrt();
        Ok(Direction {
            coords: coords.into_iter().map(|c| c / norm).collect(),
        })
    }

    pub(crate) fn new_unchecked(coords: Vec<f64>) -> Self {
        Direction { coords }
    }

    pub fn from_angle(theta: f64) -> Self {
        Direction {
            coords: vec![theta.cos(), theta.sin()],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Polar angle, meaningful for n = 2.
    pub fn angle(&self) -> f64 {
        debug_assert_eq!(self.coords.len(), 2);
        self.coords[1].atan2(self.coords[0])
    }

    pub fn dot(&self, other: &[f64]) -> f64 {
        self.coords
            .iter()
            .zip(other.iter())
            .map(|(a, b)| a * b)
            .sum()
    }
}

/// A boundary point together with its outer normal, support value, and
/// curvature function value f_K = 1/kappa.
#[derive(Debug, Clone)]
pub struct BoundaryPoint {
    pub position: Vec<f64>,
    pub normal: Direction,
    pub support_value: f64,
    pub curvature_fn: f64,
}

/// A non-degenerate linear transformation.
#[derive(Debug, Clone)]
pub struct LinearMap {
    pub matrix: DMatrix<f64>,
    pub determinant: f64,
}

impl LinearMap {
    pub fn new(matrix: DMatrix<f64>) -> Result<Self> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() < 2 {
            return Err(Error::Config(format!(
                "linear map must be square of dimension >= 2, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        if matrix.iter().any(|x| !x.is_finite()) {
            return Err(Error::Config("linear map has non-finite entries".into()));
        }
        let determinant = matrix.clone().lu().determinant();
        if determinant.abs() < 1e-12 {
            return Err(Error::Config(format!(
                "linear map is degenerate (det = {determinant:.3e})"
            )));
        }
        Ok(LinearMap {
            matrix,
            determinant,
        })
    }

    pub fn diagonal(entries: &[f64]) -> Result<Self> {
        Self::new(DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
            entries,
        )))
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }
}

/// An ellipsoid T(B_2^n) with T = Q diag(a), stored with the derived
/// shape matrix A = T T^t used by the closed-form support and curvature.
#[derive(Debug, Clone, PartialEq)]
pub struct Ellipsoid {
    semi_axes: Vec<f64>,
    orientation: DMatrix<f64>,
    shape: DMatrix<f64>,
    inv_transform: DMatrix<f64>,
    det_shape: f64,
}

impl Ellipsoid {
    pub fn new(semi_axes: Vec<f64>) -> Result<Self> {
        let n = semi_axes.len();
        Self::with_orientation(semi_axes, DMatrix::identity(n, n))
    }

    pub fn with_orientation(semi_axes: Vec<f64>, orientation: DMatrix<f64>) -> Result<Self> {
        let n = semi_axes.len();
        if n < 2 {
            return Err(Error::InvalidBody(format!(
                "ellipsoid needs dimension >= 2, got {n}"
            )));
        }
        if semi_axes.iter().any(|a| !a.is_finite() || *a <= 0.0) {
            return Err(Error::InvalidBody("ellipsoid semi-axes must be positive".into()));
        }
        if orientation.nrows() != n || orientation.ncols() != n {
            return Err(Error::InvalidBody("orientation matrix has wrong shape".into()));
        }
        let qtq = orientation.transpose() * &orientation;
        let id = DMatrix::<f64>::identity(n, n);
        if (&qtq - &id).amax() > 1e-8 {
            return Err(Error::InvalidBody(
                "orientation matrix is not orthogonal".into(),
            ));
        }
        let diag2 = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            semi_axes.iter().map(|a| a * a),
        ));
        let shape = &orientation * diag2 * orientation.transpose();
        let inv_diag = DMatrix::from_diagonal(&nalgebra::DVector::from_iterator(
            n,
            semi_axes.iter().map(|a| 1.0 / a),
        ));
        let inv_transform = inv_diag * orientation.transpose();
        let det_shape = semi_axes.iter().map(|a| a * a).product();
        Ok(Ellipsoid {
            semi_axes,
            orientation,
            shape,
            inv_transform,
            det_shape,
        })
    }

    pub fn semi_axes(&self) -> &[f64] {
        &self.semi_axes
    }

    pub fn orientation(&self) -> &DMatrix<f64> {
        &self.orientation
    }

    pub fn dim(&self) -> usize {
        self.semi_axes.len()
    }

    fn shape_apply(&self, u: &[f64]) -> Vec<f64> {
        (0..u.len())
            .map(|i| {
                u.iter()
                    .enumerate()
                    .map(|(j, uj)| self.shape[(i, j)] * uj)
                    .sum()
            })
            .collect()
    }

    pub fn support(&self, u: &[f64]) -> f64 {
        let au = self.shape_apply(u);
        au.iter()
            .zip(u.iter())
            .map(|(a, b)| a * b)
            .sum::<f64>()
            .sqrt()
    }

    pub fn radial(&self, u: &[f64]) -> f64 {
        let n = u.len();
        let mut norm2 = 0.0;
        for i in 0..n {
            let mut acc = 0.0;
            for (j, uj) in u.iter().enumerate() {
                acc += self.inv_transform[(i, j)] * uj;
            }
            norm2 += acc * acc;
        }
        1.0 / norm2.sqrt()
    }

    /// f_E(u) = det(A) / h_E(u)^{n+1}.
    pub fn curvature_function(&self, u: &[f64]) -> f64 {
        let h = self.support(u);
        self.det_shape / h.powi(self.dim() as i32 + 1)
    }

    pub fn boundary(&self, u: &[f64]) -> Vec<f64> {
        let h = self.support(u);
        self.shape_apply(u).into_iter().map(|x| x / h).collect()
    }

    pub fn polar(&self) -> Ellipsoid {
        Ellipsoid::with_orientation(
            self.semi_axes.iter().map(|a| 1.0 / a).collect(),
            self.orientation.clone(),
        )
        .expect("polar of a valid ellipsoid is valid")
    }

    pub fn volume(&self) -> f64 {
        unit_ball_volume(self.dim()) * self.semi_axes.iter().product::<f64>()
    }

    /// Shape matrix entries (A00, A01, A11) for the planar fast path.
    fn planar_shape(&self) -> (f64, f64, f64) {
        (self.shape[(0, 0)], self.shape[(0, 1)], self.shape[(1, 1)])
    }
}

/// A convex body with the origin in its interior.
#[derive(Debug, Clone)]
pub enum ConvexBody {
    Ellipsoid(Ellipsoid),
    PlanarSupport(PlanarSupport),
    PiecewiseArc(PiecewiseArc),
    HalfspacePolytope(Polygon2),
    Cube { dimension: usize },
    CrossPolytope { dimension: usize },
}

/// Result of a polar-body construction: the polar in an evaluable
/// representation, the construction route, and the fit residual carried
/// so downstream tolerances can widen.
#[derive(Debug, Clone)]
pub struct PolarResult {
    pub body: ConvexBody,
    pub method: &'static str,
    pub fit_residual: f64,
}

const GOLDEN: f64 = 0.618_033_988_749_894_9;

impl ConvexBody {
    pub fn ellipsoid(semi_axes: Vec<f64>) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::new(semi_axes)?))
    }

    pub fn ellipsoid_oriented(semi_axes: Vec<f64>, orientation: DMatrix<f64>) -> Result<Self> {
        Ok(ConvexBody::Ellipsoid(Ellipsoid::with_orientation(
            semi_axes,
            orientation,
        )?))
    }

    pub fn unit_ball(dimension: usize) -> Result<Self> {
        Self::ellipsoid(vec![1.0; dimension])
    }

    pub fn unit_disc() -> Self {
        ConvexBody::PlanarSupport(PlanarSupport::disc())
    }

    pub fn planar_support(a0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        Ok(ConvexBody::PlanarSupport(PlanarSupport::new(
            a0, cos_coeffs, sin_coeffs,
        )?))
    }

    pub fn piecewise_arc(arcs: Vec<CircularArc>) -> Result<Self> {
        Ok(ConvexBody::PiecewiseArc(PiecewiseArc::new(arcs)?))
    }

    /// The rounded intersection body K(R, eps): four arcs of radius R
    /// joined tangentially by four corner arcs of radius eps.
    pub fn rounded_intersection(big_radius: f64, corner_radius: f64) -> Result<Self> {
        Ok(ConvexBody::PiecewiseArc(PiecewiseArc::rounded_intersection(
            big_radius,
            corner_radius,
        )?))
    }

    pub fn halfspace_polytope(halfspaces: &[Halfspace]) -> Result<Self> {
        Ok(ConvexBody::HalfspacePolytope(Polygon2::from_halfspaces(
            halfspaces,
        )?))
    }

    pub fn cube(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidBody("cube needs dimension >= 2".into()));
        }
        Ok(ConvexBody::Cube { dimension })
    }

    pub fn cross_polytope(dimension: usize) -> Result<Self> {
        if dimension < 2 {
            return Err(Error::InvalidBody("cross-polytope needs dimension >= 2".into()));
        }
        Ok(ConvexBody::CrossPolytope { dimension })
    }

    pub fn kind_name(&self) -> &'static str {
        match self {
            ConvexBody::Ellipsoid(_) => "ellipsoid",
            ConvexBody::PlanarSupport(_) => "planar-support",
            ConvexBody::PiecewiseArc(_) => "piecewise-arc",
            ConvexBody::HalfspacePolytope(_) => "halfspace-polytope",
            ConvexBody::Cube { .. } => "cube",
            ConvexBody::CrossPolytope { .. } => "cross-polytope",
        }
    }

    pub fn dimension(&self) -> usize {
        match self {
            ConvexBody::Ellipsoid(e) => e.dim(),
            ConvexBody::PlanarSupport(_) => 2,
            ConvexBody::PiecewiseArc(_) => 2,
            ConvexBody::HalfspacePolytope(_) => 2,
            ConvexBody::Cube { dimension } => *dimension,
            ConvexBody::CrossPolytope { dimension } => *dimension,
        }
    }

    /// Kinds with an invertible Gauss map and positive curvature function.
    pub fn is_c2_plus(&self) -> bool {
        matches!(
            self,
            ConvexBody::Ellipsoid(_) | ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_)
        )
    }

    pub fn is_polytope(&self) -> bool {
        matches!(
            self,
            ConvexBody::HalfspacePolytope(_) | ConvexBody::Cube { .. } | ConvexBody::CrossPolytope { .. }
        )
    }

    fn check_dim(&self, u: &Direction, op: &'static str) -> Result<()> {
        if u.dim() != self.dimension() {
            return Err(Error::Config(format!(
                "{op}: direction dimension {} does not match body dimension {}",
                u.dim(),
                self.dimension()
            )));
        }
        Ok(())
    }

    /// Support function h_K(u) = max over K of <x, u>.
    pub fn support(&self, u: &Direction) -> f64 {
        match self {
            ConvexBody::Ellipsoid(e) => e.support(u.coords()),
            ConvexBody::PlanarSupport(p) => p.eval(u.angle()).0,
            ConvexBody::PiecewiseArc(a) => a.support_angle(u.angle()),
            ConvexBody::HalfspacePolytope(p) => p.support([u.coords()[0], u.coords()[1]]),
            ConvexBody::Cube { .. } => u.coords().iter().map(|c| c.abs()).sum(),
            ConvexBody::CrossPolytope { .. } => {
                u.coords().iter().map(|c| c.abs()).fold(0.0, f64::max)
            }
        }
    }

    /// Inverse Gauss map: the boundary point whose outer normal is u.
    pub fn boundary_point(&self, u: &Direction) -> Result<BoundaryPoint> {
        self.check_dim(u, "boundary_point")?;
        match self {
            ConvexBody::Ellipsoid(e) => {
                let position = e.boundary(u.coords());
                Ok(BoundaryPoint {
                    support_value: e.support(u.coords()),
                    curvature_fn: e.curvature_function(u.coords()),
                    position,
                    normal: u.clone(),
                })
            }
            ConvexBody::PlanarSupport(p) => {
                let theta = u.angle();
                let (h, dh, ddh) = p.eval(theta);
                let (c, s) = (theta.cos(), theta.sin());
                Ok(BoundaryPoint {
                    position: vec![h * c - dh * s, h * s + dh * c],
                    normal: u.clone(),
                    support_value: h,
                    curvature_fn: h + ddh,
                })
            }
            ConvexBody::PiecewiseArc(a) => {
                let theta = u.angle();
                let x = a.boundary(theta);
                Ok(BoundaryPoint {
                    position: vec![x[0], x[1]],
                    normal: u.clone(),
                    support_value: a.support_angle(theta),
                    curvature_fn: a.curvature_radius(theta),
                })
            }
            _ => Err(Error::UnsupportedKind {
                op: "boundary_point",
                kind: self.kind_name(),
            }),
        }
    }

    /// Curvature function f_K(u), the reciprocal Gauss curvature at the
    /// boundary point with outer normal u.
    pub fn curvature_function(&self, u: &Direction) -> Result<f64> {
        self.check_dim(u, "curvature_function")?;
        match self {
            ConvexBody::Ellipsoid(e) => Ok(e.curvature_function(u.coords())),
            ConvexBody::PlanarSupport(p) => {
                let (h, _, ddh) = p.eval(u.angle());
                Ok(h + ddh)
            }
            ConvexBody::PiecewiseArc(a) => Ok(a.curvature_radius(u.angle())),
            _ => Err(Error::UnsupportedKind {
                op: "curvature_function",
                kind: self.kind_name(),
            }),
        }
    }

    /// Radial function: the largest t with t*u in K.
    pub fn radial(&self, u: &Direction) -> f64 {
        match self {
            ConvexBody::Ellipsoid(e) => e.radial(u.coords()),
            ConvexBody::Cube { .. } => {
                1.0 / u.coords().iter().map(|c| c.abs()).fold(0.0, f64::max)
            }
            ConvexBody::CrossPolytope { .. } => {
                1.0 / u.coords().iter().map(|c| c.abs()).sum::<f64>()
            }
            ConvexBody::HalfspacePolytope(p) => p.radial([u.coords()[0], u.coords()[1]]),
            ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_) => {
                let (x, _) = self.radial_hit(u.angle());
                (x[0] * x[0] + x[1] * x[1]).sqrt()
            }
        }
    }

    /// Boundary point hit by the ray in direction theta together with its
    /// normal angle, for the planar smooth kinds. Solved by bisection on
    /// the position angle, which is monotone in the normal angle.
    pub(crate) fn radial_hit(&self, theta: f64) -> ([f64; 2], f64) {
        let u = [theta.cos(), theta.sin()];
        let cross_at = |phi: f64| -> f64 {
            let x = self.planar_boundary(phi);
            x[0] * u[1] - x[1] * u[0]
        };
        let mut lo = theta - std::f64::consts::FRAC_PI_2;
        let mut hi = theta + std::f64::consts::FRAC_PI_2;
        // cross > 0 at lo, < 0 at hi
        for _ in 0..80 {
            let mid = 0.5 * (lo + hi);
            if cross_at(mid) > 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
            if hi - lo < 1e-14 {
                break;
            }
        }
        let phi = 0.5 * (lo + hi);
        (self.planar_boundary(phi), phi)
    }

    /// (h, h', f) at normal angle theta for planar C^2_+ kinds.
    pub(crate) fn planar_eval(&self, theta: f64) -> (f64, f64, f64) {
        match self {
            ConvexBody::PlanarSupport(p) => {
                let (h, dh, ddh) = p.eval(theta);
                (h, dh, h + ddh)
            }
            ConvexBody::PiecewiseArc(a) => {
                let (h, dh) = a.support_and_derivative(theta);
                (h, dh, a.curvature_radius(theta))
            }
            ConvexBody::Ellipsoid(e) => {
                debug_assert_eq!(e.dim(), 2);
                let (a00, a01, a11) = e.planar_shape();
                let (c, s) = (theta.cos(), theta.sin());
                let q = a00 * c * c + 2.0 * a01 * c * s + a11 * s * s;
                let h = q.sqrt();
                let dq = 2.0 * c * s * (a11 - a00) + 2.0 * a01 * (c * c - s * s);
                let dh = dq / (2.0 * h);
                (h, dh, e.det_shape / (h * h * h))
            }
            _ => panic!("planar_eval on non-smooth kind {}", self.kind_name()),
        }
    }

    /// Boundary parametrization x(theta) = h u + h' u_perp for planar
    /// C^2_+ kinds.
    pub(crate) fn planar_boundary(&self, theta: f64) -> [f64; 2] {
        match self {
            ConvexBody::PiecewiseArc(a) => a.boundary(theta),
            _ => {
                let (h, dh, _) = self.planar_eval(theta);
                let (c, s) = (theta.cos(), theta.sin());
                [h * c - dh * s, h * s + dh * c]
            }
        }
    }

    /// Normal angles where the planar profile loses smoothness.
    pub(crate) fn planar_breakpoints(&self) -> Vec<f64> {
        match self {
            ConvexBody::PiecewiseArc(a) => a.breakpoints(),
            _ => Vec::new(),
        }
    }

    /// Support function of the polar body: h_Ko(v) = max_u <u,v>/h_K(u),
    /// realized by closed forms where available and by a grid scan with
    /// golden-section refinement otherwise.
    pub fn polar_support(&self, v: &Direction, grid: &SphereGrid) -> Result<f64> {
        self.check_dim(v, "polar_support")?;
        if grid.dimension != self.dimension() {
            return Err(Error::Config(format!(
                "polar_support grid dimension {} does not match body dimension {}",
                grid.dimension,
                self.dimension()
            )));
        }
        if grid.node_count() < 8 {
            return Err(Error::Config(format!(
                "polar_support grid too coarse ({} nodes)",
                grid.node_count()
            )));
        }
        match self {
            ConvexBody::Ellipsoid(e) => Ok(1.0 / e.radial(v.coords())),
            ConvexBody::Cube { .. } => {
                Ok(v.coords().iter().map(|c| c.abs()).fold(0.0, f64::max))
            }
            ConvexBody::CrossPolytope { .. } => Ok(v.coords().iter().map(|c| c.abs()).sum()),
            ConvexBody::HalfspacePolytope(p) => {
                // exact: polar vertices are n_i / c_i over the edges
                Ok(p.edge_halfspaces()
                    .iter()
                    .map(|hs| (hs.normal[0] * v.coords()[0] + hs.normal[1] * v.coords()[1]) / hs.offset)
                    .fold(f64::NEG_INFINITY, f64::max))
            }
            ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_) => {
                let theta_v = v.angle();
                let score = |phi: f64| {
                    let (h, _, _) = self.planar_eval(phi);
                    (phi - theta_v).cos() / h
                };
                let mut best = f64::NEG_INFINITY;
                let mut best_phi = theta_v;
                for u in &grid.nodes {
                    let phi = u.angle();
                    let s = score(phi);
                    if s > best {
                        best = s;
                        best_phi = phi;
                    }
                }
                let gap = 2.0 * std::f64::consts::PI / grid.node_count() as f64;
                Ok(golden_max(score, best_phi - gap, best_phi + gap, 1e-13))
            }
        }
    }

    /// Polar body K with exact closed forms where available and a Fourier
    /// fit to sampled h_Ko = 1/rho_K for the smooth planar kinds.
    pub fn polar_body(&self) -> Result<PolarResult> {
        match self {
            ConvexBody::Ellipsoid(e) => Ok(PolarResult {
                body: ConvexBody::Ellipsoid(e.polar()),
                method: "closed-form",
                fit_residual: 0.0,
            }),
            ConvexBody::Cube { dimension } => Ok(PolarResult {
                body: ConvexBody::CrossPolytope {
                    dimension: *dimension,
                },
                method: "closed-form",
                fit_residual: 0.0,
            }),
            ConvexBody::CrossPolytope { dimension } => Ok(PolarResult {
                body: ConvexBody::Cube {
                    dimension: *dimension,
                },
                method: "closed-form",
                fit_residual: 0.0,
            }),
            ConvexBody::HalfspacePolytope(p) => Ok(PolarResult {
                body: ConvexBody::HalfspacePolytope(p.polar()?),
                method: "vertex-duality",
                fit_residual: 0.0,
            }),
            ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_) => {
                let n_samples = FIT_SAMPLES;
                let mut samples = Vec::with_capacity(n_samples);
                for j in 0..n_samples {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / n_samples as f64;
                    let (x, _) = self.radial_hit(theta);
                    let rho = (x[0] * x[0] + x[1] * x[1]).sqrt();
                    samples.push(1.0 / rho);
                }
                let fit = PlanarSupport::fit_from_samples(&samples, DEFAULT_FIT_HARMONICS)
                    .map_err(|e| match e {
                        Error::InvalidBody(msg) => Error::InvalidBody(format!(
                            "polar fit of this {} is not a valid profile at \
                             {DEFAULT_FIT_HARMONICS} harmonics ({msg}); boundary \
                             features may be too sharp for the Fourier \
                             representation, use as_{{n^2/p}} duality instead of \
                             an explicit polar",
                            self.kind_name()
                        )),
                        other => other,
                    })?;
                let fit_residual = fit.fit_residual();
                Ok(PolarResult {
                    body: ConvexBody::PlanarSupport(fit),
                    method: "fourier-fit",
                    fit_residual,
                })
            }
        }
    }

    /// Volume |K|, exact for closed-form kinds and by the radial quadrature
    /// |K| = (1/n) integral rho^n d sigma otherwise.
    pub fn volume(&self, grid: &SphereGrid) -> f64 {
        match self {
            ConvexBody::Ellipsoid(e) => e.volume(),
            ConvexBody::Cube { dimension } => 2.0_f64.powi(*dimension as i32),
            ConvexBody::CrossPolytope { dimension } => {
                2.0_f64.powi(*dimension as i32) / factorial(*dimension)
            }
            ConvexBody::HalfspacePolytope(p) => p.area(),
            ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_) => {
                assert_eq!(
                    grid.dimension, 2,
                    "planar volume quadrature needs a circle grid"
                );
                let n = self.dimension() as f64;
                let out = grid.integrate(|u| self.radial(u).powf(n));
                out.value().expect("radial function is finite").value / n
            }
        }
    }

    /// T(K) for the kinds with a closed-form or refittable image.
    pub fn linear_image(&self, map: &LinearMap) -> Result<ConvexBody> {
        if map.dim() != self.dimension() {
            return Err(Error::Config(format!(
                "linear map dimension {} does not match body dimension {}",
                map.dim(),
                self.dimension()
            )));
        }
        match self {
            ConvexBody::Ellipsoid(e) => {
                let diag = DMatrix::from_diagonal(&nalgebra::DVector::from_row_slice(
                    e.semi_axes(),
                ));
                let t_new = &map.matrix * e.orientation() * diag;
                let svd = SVD::new(t_new, true, false);
                let axes: Vec<f64> = svd.singular_values.iter().copied().collect();
                let u = svd.u.expect("SVD with u requested");
                Ok(ConvexBody::Ellipsoid(Ellipsoid::with_orientation(
                    axes, u,
                )?))
            }
            ConvexBody::PlanarSupport(p) => {
                let mt = map.matrix.transpose();
                let n_samples = FIT_SAMPLES;
                let mut samples = Vec::with_capacity(n_samples);
                for j in 0..n_samples {
                    let theta = 2.0 * std::f64::consts::PI * j as f64 / n_samples as f64;
                    let (c, s) = (theta.cos(), theta.sin());
                    let w = [
                        mt[(0, 0)] * c + mt[(0, 1)] * s,
                        mt[(1, 0)] * c + mt[(1, 1)] * s,
                    ];
                    let norm = (w[0] * w[0] + w[1] * w[1]).sqrt();
                    let angle = w[1].atan2(w[0]);
                    samples.push(p.eval(angle).0 * norm);
                }
                let fit = PlanarSupport::fit_from_samples(&samples, DEFAULT_FIT_HARMONICS)?;
                Ok(ConvexBody::PlanarSupport(fit))
            }
            _ => Err(Error::UnsupportedKind {
                op: "linear_image",
                kind: self.kind_name(),
            }),
        }
    }

    /// Relative residual of the curvature duality
    /// <y, N_K(y)> <x, N_Ko(x)> = (kappa_K(y) kappa_Ko(x))^{1/(n+1)}
    /// at the boundary point y with normal u and its polar contact point x.
    pub fn curvature_duality_check(&self, u: &Direction, grid: &SphereGrid) -> Result<f64> {
        self.check_dim(u, "curvature_duality_check")?;
        let y = self.boundary_point(u)?;
        let polar = self.polar_body()?;
        let n = self.dimension();
        let x = match self {
            ConvexBody::Ellipsoid(e) => {
                // the polar is {y : <A y, y> <= 1}, so its outer normal at
                // x = u / h_K(u) is A x (normalized), with A the original
                // shape matrix
                let h = self.support(u);
                let xu: Vec<f64> = u.coords().iter().map(|c| c / h).collect();
                let v = Direction::new(e.shape_apply(&xu))?;
                polar.body.boundary_point(&v)?
            }
            _ => {
                // planar: locate the polar boundary point radially aligned with u
                let (_, phi) = polar.body.radial_hit(u.angle());
                polar.body.boundary_point(&Direction::from_angle(phi))?
            }
        };
        let _ = grid;
        let lhs = dot_slice(&y.position, y.normal.coords())
            * dot_slice(&x.position, x.normal.coords());
        let kappa_product = (1.0 / y.curvature_fn) * (1.0 / x.curvature_fn);
        let rhs = kappa_product.powf(1.0 / (n as f64 + 1.0));
        Ok((lhs - rhs).abs() / rhs)
    }

    /// Centroid of the body. Exact for symmetric kinds and polygons,
    /// boundary-integral quadrature for the smooth planar kinds.
    pub fn centroid(&self, grid: &SphereGrid) -> Result<Vec<f64>> {
        match self {
            ConvexBody::Ellipsoid(_) | ConvexBody::Cube { .. } | ConvexBody::CrossPolytope { .. } => {
                Ok(vec![0.0; self.dimension()])
            }
            ConvexBody::HalfspacePolytope(p) => {
                let c = p.centroid();
                Ok(vec![c[0], c[1]])
            }
            ConvexBody::PlanarSupport(_) | ConvexBody::PiecewiseArc(_) => {
                let area = self.volume(grid);
                let mx = grid
                    .integrate(|u| {
                        let theta = u.angle();
                        let x = self.planar_boundary(theta);
                        let f = self.planar_eval(theta).2;
                        0.5 * x[0] * x[0] * theta.cos() * f
                    })
                    .value()
                    .expect("finite integrand")
                    .value;
                let my = grid
                    .integrate(|u| {
                        let theta = u.angle();
                        let x = self.planar_boundary(theta);
                        let f = self.planar_eval(theta).2;
                        0.5 * x[1] * x[1] * theta.sin() * f
                    })
                    .value()
                    .expect("finite integrand")
                    .value;
                Ok(vec![mx / area, my / area])
            }
        }
    }

    /// The body translated so that its centroid sits at the origin.
    pub fn recentered(&self, grid: &SphereGrid) -> Result<ConvexBody> {
        let c = self.centroid(grid)?;
        if c.iter().all(|x| x.abs() < 1e-15) {
            return Ok(self.clone());
        }
        match self {
            ConvexBody::PlanarSupport(p) => Ok(ConvexBody::PlanarSupport(
                p.translated([-c[0], -c[1]])?,
            )),
            ConvexBody::PiecewiseArc(a) => {
                let arcs = a
                    .arcs()
                    .iter()
                    .map(|arc| CircularArc {
                        center: [arc.center[0] - c[0], arc.center[1] - c[1]],
                        ..*arc
                    })
                    .collect();
                Ok(ConvexBody::PiecewiseArc(PiecewiseArc::new(arcs)?))
            }
            ConvexBody::HalfspacePolytope(p) => Ok(ConvexBody::HalfspacePolytope(
                Polygon2::from_vertices(p.translated([-c[0], -c[1]]).vertices().to_vec())?,
            )),
            _ => Ok(self.clone()),
        }
    }

    /// The polygon view of planar polytope kinds, used by the floating
    /// body machinery.
    pub fn as_polygon(&self) -> Option<Polygon2> {
        match self {
            ConvexBody::HalfspacePolytope(p) => Some(p.clone()),
            ConvexBody::Cube { dimension: 2 } => Some(Polygon2::square(1.0)),
            _ => None,
        }
    }
}

pub(crate) fn dot_slice(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b.iter()).map(|(x, y)| x * y).sum()
}

fn factorial(n: usize) -> f64 {
    (1..=n).map(|k| k as f64).product()
}

/// Golden-section search for the maximum of a unimodal function.
fn golden_max<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    let mut c = b - GOLDEN * (b - a);
    let mut d = a + GOLDEN * (b - a);
    let mut fc = f(c);
    let mut fd = f(d);
    while (b - a).abs() > tol {
        if fc > fd {
            b = d;
            d = c;
            fd = fc;
            c = b - GOLDEN * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + GOLDEN * (b - a);
            fd = f(d);
        }
    }
    let mid = 0.5 * (a + b);
    f(mid).max(fc).max(fd)
}
