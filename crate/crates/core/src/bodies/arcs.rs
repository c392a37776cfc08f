//! Planar convex bodies whose boundary is a closed chain of circular arcs,
//! indexed by the outer normal angle. Includes the rounded intersection
//! body built from four large arcs joined tangentially by four small
//! corner arcs.

use crate::error::{Error, Result};

/// One circular boundary arc covering the outer normal angles
/// [theta_from, theta_to].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularArc {
    pub center: [f64; 2],
    pub radius: f64,
    pub theta_from: f64,
    pub theta_to: f64,
}

impl CircularArc {
    fn endpoint(&self, theta: f64) -> [f64; 2] {
        [
            self.center[0] + self.radius * theta.cos(),
            self.center[1] + self.radius * theta.sin(),
        ]
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PiecewiseArc {
    arcs: Vec<CircularArc>,
    /// Normal angle at which the chain starts; the chain covers
    /// [start, start + 2 pi).
    start: f64,
}

const JUNCTION_TOL: f64 = 1e-9;

impl PiecewiseArc {
    /// Builds a body from arcs ordered by increasing normal angle. The
    /// spans must tile a full turn and consecutive arcs must join
    /// continuously (which, with positive radii, makes the chain the
    /// boundary of a convex body).
    pub fn new(arcs: Vec<CircularArc>) -> Result<Self> {
        if arcs.is_empty() {
            return Err(Error::InvalidBody("no arcs given".into()));
        }
        let start = arcs[0].theta_from;
        let mut cursor = start;
        for (i, arc) in arcs.iter().enumerate() {
            if !arc.radius.is_finite() || arc.radius <= 0.0 {
                return Err(Error::InvalidBody(format!(
                    "arc {i} has non-positive radius {}",
                    arc.radius
                )));
            }
            if (arc.theta_from - cursor).abs() > JUNCTION_TOL {
                return Err(Error::InvalidBody(format!(
                    "arc {i} starts at angle {} but previous arc ends at {}",
                    arc.theta_from, cursor
                )));
            }
            if arc.theta_to <= arc.theta_from {
                return Err(Error::InvalidBody(format!(
                    "arc {i} has non-increasing angular span"
                )));
            }
            cursor = arc.theta_to;
        }
        if (cursor - start - 2.0 * std::f64::consts::PI).abs() > JUNCTION_TOL {
            return Err(Error::InvalidBody(format!(
                "arc spans cover {} instead of a full turn",
                cursor - start
            )));
        }
        for i in 0..arcs.len() {
            let a = &arcs[i];
            let b = &arcs[(i + 1) % arcs.len()];
            let pa = a.endpoint(a.theta_to);
            let pb = b.endpoint(b.theta_from);
            let gap = ((pa[0] - pb[0]).powi(2) + (pa[1] - pb[1]).powi(2)).sqrt();
            if gap > JUNCTION_TOL * (1.0 + a.radius.max(b.radius)) {
                return Err(Error::InvalidBody(format!(
                    "arcs {i} and {} do not join continuously (gap {gap:.3e})",
                    (i + 1) % arcs.len()
                )));
            }
        }
        let body = PiecewiseArc { arcs, start };
        // interior-origin check on a modest angular grid
        let mut h_min = f64::INFINITY;
        for j in 0..1024 {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / 1024.0;
            h_min = h_min.min(body.support_angle(theta));
        }
        if h_min <= 0.0 {
            return Err(Error::InvalidBody(format!(
                "origin is not interior (min support {h_min:.3e})"
            )));
        }
        Ok(body)
    }

    /// The intersection of four discs of radius `big_radius` centered at
    /// (+-(R-1), 0) and (0, +-(R-1)), with the four corners replaced by
    /// arcs of radius `corner_radius` placed tangentially.
    pub fn rounded_intersection(big_radius: f64, corner_radius: f64) -> Result<Self> {
        let r = big_radius;
        let eps = corner_radius;
        if !(r > 1.0) || !(eps > 0.0) || eps >= r {
            return Err(Error::Geometry(format!(
                "rounded intersection needs R > 1 and 0 < eps < R, got R = {r}, eps = {eps}"
            )));
        }
        // Junction normal angle t solves (R - eps)(sin t - cos t)... the
        // corner-arc center e = c1 + (R - eps) u(t) must land on the
        // diagonal, with c1 = (-(R-1), 0):
        //   -(R-1) + (R - eps) cos t = (R - eps) sin t
        let ratio = (r - 1.0) / (std::f64::consts::SQRT_2 * (r - eps));
        if ratio >= 1.0 {
            return Err(Error::Geometry(format!(
                "tangency failure: corner radius {eps} too large for R = {r}"
            )));
        }
        let t = ratio.acos() - std::f64::consts::FRAC_PI_4;
        if t <= 0.0 {
            return Err(Error::Geometry(format!(
                "tangency failure: junction angle {t} not positive (R = {r}, eps = {eps})"
            )));
        }
        let d = -(r - 1.0) + (r - eps) * t.cos();
        let pi = std::f64::consts::PI;
        let half = pi / 2.0;
        let mut arcs = Vec::with_capacity(8);
        // quadrant-by-quadrant: big arc around axis direction k*pi/2,
        // then the corner arc up to the next big arc
        for q in 0..4 {
            let phi = half * q as f64;
            let (c, s) = (phi.cos(), phi.sin());
            // rotate (-(R-1), 0) by phi
            arcs.push(CircularArc {
                center: [-(r - 1.0) * c, -(r - 1.0) * s],
                radius: r,
                theta_from: phi - t,
                theta_to: phi + t,
            });
            // rotate (d, d) by phi
            arcs.push(CircularArc {
                center: [d * c - d * s, d * s + d * c],
                radius: eps,
                theta_from: phi + t,
                theta_to: phi + half - t,
            });
        }
        // chain starts at -t
        Self::new(arcs)
    }

    pub fn arcs(&self) -> &[CircularArc] {
        &self.arcs
    }

    fn wrap(&self, theta: f64) -> f64 {
        let two_pi = 2.0 * std::f64::consts::PI;
        let mut t = (theta - self.start).rem_euclid(two_pi) + self.start;
        if t >= self.start + two_pi {
            t -= two_pi;
        }
        t
    }

    pub fn arc_at(&self, theta: f64) -> &CircularArc {
        let t = self.wrap(theta);
        for arc in &self.arcs {
            if t <= arc.theta_to {
                return arc;
            }
        }
        self.arcs.last().unwrap()
    }

    pub fn support_angle(&self, theta: f64) -> f64 {
        let arc = self.arc_at(theta);
        arc.center[0] * theta.cos() + arc.center[1] * theta.sin() + arc.radius
    }

    /// (h, h') at normal angle theta, valid inside the arc spans.
    pub fn support_and_derivative(&self, theta: f64) -> (f64, f64) {
        let arc = self.arc_at(theta);
        let (c, s) = (theta.cos(), theta.sin());
        (
            arc.center[0] * c + arc.center[1] * s + arc.radius,
            -arc.center[0] * s + arc.center[1] * c,
        )
    }

    /// Curvature function (radius of curvature in the plane) at theta.
    pub fn curvature_radius(&self, theta: f64) -> f64 {
        self.arc_at(theta).radius
    }

    pub fn boundary(&self, theta: f64) -> [f64; 2] {
        let arc = self.arc_at(theta);
        arc.endpoint(self.wrap(theta))
    }

    /// Exact area: (1/2) sum over arcs of the shoelace integral of
    /// x cross x' = h f with h = <c, u> + r and f = r.
    pub fn area_exact(&self) -> f64 {
        let mut area = 0.0;
        for arc in &self.arcs {
            let (a, b) = (arc.theta_from, arc.theta_to);
            let ju = [b.sin() - a.sin(), a.cos() - b.cos()];
            area += 0.5
                * (arc.radius * arc.radius * (b - a)
                    + arc.radius * (arc.center[0] * ju[0] + arc.center[1] * ju[1]));
        }
        area
    }

    /// Normal angles of the arc junctions within [start, start + 2 pi).
    pub fn breakpoints(&self) -> Vec<f64> {
        self.arcs.iter().map(|a| a.theta_from).collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn circle(radius: f64) -> PiecewiseArc {
        PiecewiseArc::new(vec![CircularArc {
            center: [0.0, 0.0],
            radius,
            theta_from: 0.0,
            theta_to: 2.0 * std::f64::consts::PI,
        }])
        .unwrap()
    }

    #[test]
    fn circle_support_and_area() {
        let c = circle(2.0);
        assert_relative_eq!(c.support_angle(1.1), 2.0);
        assert_relative_eq!(c.area_exact(), 4.0 * std::f64::consts::PI, epsilon = 1e-12);
        assert_relative_eq!(c.curvature_radius(0.3), 2.0);
    }

    #[test]
    fn rounded_intersection_geometry() {
        let k = PiecewiseArc::rounded_intersection(100.0, 0.01).unwrap();
        assert_eq!(k.arcs().len(), 8);
        // support along an axis is exactly 1
        assert_relative_eq!(k.support_angle(0.0), 1.0, epsilon = 1e-12);
        assert_relative_eq!(k.support_angle(std::f64::consts::FRAC_PI_2), 1.0, epsilon = 1e-12);
        // support is continuous across a junction
        let t = k.arcs()[0].theta_to;
        assert_relative_eq!(
            k.support_angle(t - 1e-9),
            k.support_angle(t + 1e-9),
            epsilon = 1e-7
        );
        // the big arcs carry radius of curvature R
        assert_relative_eq!(k.curvature_radius(0.0), 100.0);
        // the corner arcs carry radius eps
        assert_relative_eq!(k.curvature_radius(std::f64::consts::FRAC_PI_4), 0.01);
    }

    #[test]
    fn rounded_intersection_rejects_bad_parameters() {
        assert!(PiecewiseArc::rounded_intersection(1.0, 0.01).is_err());
        assert!(PiecewiseArc::rounded_intersection(10.0, 20.0).is_err());
    }

    #[test]
    fn rejects_discontinuous_chain() {
        let bad = vec![
            CircularArc {
                center: [0.0, 0.0],
                radius: 1.0,
                theta_from: 0.0,
                theta_to: std::f64::consts::PI,
            },
            CircularArc {
                center: [0.5, 0.0],
                radius: 1.0,
                theta_from: std::f64::consts::PI,
                theta_to: 2.0 * std::f64::consts::PI,
            },
        ];
        assert!(PiecewiseArc::new(bad).is_err());
    }
}
