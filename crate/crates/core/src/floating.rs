//! Floating bodies K_delta and surface bodies K_{f,s} in the plane, their
//! polar-volume deficits, and the limit extrapolations that recover L_p
//! affine surface areas. Also the closed-form cube counterexample showing
//! divergence of the floating-body limit for B_infinity^n.
//!
//! Construction is restricted to n = 2, where the halfspace intersection
//! is an exact polygon and the polar polygon is exact, keeping the deficit
//! error well below the extrapolation signal.

use crate::bodies::{Direction, ConvexBody, Halfspace, Polygon2};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, unit_ball_volume, SphereGrid};
use crate::asa::{asa_sphere_form, PExponent};
use std::sync::OnceLock;

/// c_n = 2 (|B_2^{n-1}| / (n+1))^{2/(n+1)}, the floating-body constant.
pub fn floating_constant(n: usize) -> f64 {
    2.0 * (unit_ball_volume(n - 1) / (n as f64 + 1.0)).powf(2.0 / (n as f64 + 1.0))
}

/// beta_n = 2 |B_2^{n-1}|^{2/(n-1)}, the surface-body constant.
pub fn surface_constant(n: usize) -> f64 {
    2.0 * unit_ball_volume(n - 1).powf(2.0 / (n as f64 - 1.0))
}

/// One resolved cap cut: the hyperplane at distance `offset_drop` below
/// the support plane in `direction` carries exactly `measure` of the cap
/// quantity (area for floating bodies, weighted boundary measure for
/// surface bodies).
#[derive(Debug, Clone)]
pub struct CapCut {
    pub direction: Direction,
    pub offset_drop: f64,
    pub measure: f64,
}

/// Polygonal inner approximation of K_delta or K_{f,s}.
#[derive(Debug, Clone)]
pub struct InnerBodyApprox {
    pub halfspaces: Vec<Halfspace>,
    pub polygon: Polygon2,
    pub parameter: f64,
    pub direction_count: usize,
}

impl InnerBodyApprox {
    pub fn vertices(&self) -> &[[f64; 2]] {
        self.polygon.vertices()
    }

    /// Checks every vertex against every defining support constraint of
    /// the outer body, within the stated slack.
    pub fn contained_in(&self, body: &ConvexBody, slack: f64) -> bool {
        self.halfspaces.iter().all(|hs| {
            let u = Direction::new_unchecked(vec![hs.normal[0], hs.normal[1]]);
            let h = body.support(&u);
            self.polygon
                .vertices()
                .iter()
                .all(|v| v[0] * hs.normal[0] + v[1] * hs.normal[1] <= h + slack)
        })
    }
}

/// A sequence of (parameter, ratio) samples with the extrapolated limit.
/// `fitted_exponent` is the log-log slope of the ratio against the
/// parameter (0 for a convergent family, negative when the ratio blows
/// up); `correction_exponent` is the fitted order of the correction term
/// used by the Richardson step.
#[derive(Debug, Clone)]
pub struct LimitEstimate {
    pub samples: Vec<(f64, f64)>,
    pub extrapolated: f64,
    pub fitted_exponent: f64,
    pub correction_exponent: f64,
    pub target: Option<f64>,
    pub relative_gap: Option<f64>,
}

const AREA_MATCH_REL: f64 = 1e-12;

fn gl64() -> &'static (Vec<f64>, Vec<f64>) {
    static GL: OnceLock<(Vec<f64>, Vec<f64>)> = OnceLock::new();
    GL.get_or_init(|| gauss_legendre(64))
}

/// Integrates g over the normal-angle interval [a, b] along the boundary,
/// splitting at the profile breakpoints of arc bodies.
fn boundary_integral<F: FnMut(f64) -> f64>(body: &ConvexBody, a: f64, b: f64, mut g: F) -> f64 {
    let mut cuts = vec![a, b];
    let two_pi = 2.0 * std::f64::consts::PI;
    for bp in body.planar_breakpoints() {
        let mut t = bp + ((a - bp) / two_pi).floor() * two_pi;
        while t < b {
            if t > a {
                cuts.push(t);
            }
            t += two_pi;
        }
    }
    cuts.sort_by(|x, y| x.partial_cmp(y).unwrap());
    let (nodes, weights) = gl64();
    let mut total = 0.0;
    for w in cuts.windows(2) {
        let (lo, hi) = (w[0], w[1]);
        if hi - lo < 1e-15 {
            continue;
        }
        let mid = 0.5 * (lo + hi);
        let half = 0.5 * (hi - lo);
        let mut seg = 0.0;
        for (x, wgt) in nodes.iter().zip(weights.iter()) {
            seg += wgt * g(mid + half * x);
        }
        total += seg * half;
    }
    total
}

/// Area of a planar body by the exact polygon formula or the boundary
/// shoelace integral (1/2) oint h f d theta.
pub fn planar_area(body: &ConvexBody) -> Result<f64> {
    if body.dimension() != 2 {
        return Err(Error::Precondition(
            "planar_area requires a two-dimensional body".into(),
        ));
    }
    if let Some(poly) = body.as_polygon() {
        return Ok(poly.area());
    }
    if !body.is_c2_plus() {
        return Err(Error::UnsupportedKind {
            op: "planar_area",
            kind: body.kind_name(),
        });
    }
    Ok(0.5
        * boundary_integral(body, 0.0, 2.0 * std::f64::consts::PI, |t| {
            let (h, _, f) = body.planar_eval(t);
            h * f
        }))
}

/// Finds the normal angle phi on the given side of theta_u where the
/// boundary crosses the level <x, u> = c. The height is strictly monotone
/// on each half-loop, so bisection always converges.
fn chord_angle(body: &ConvexBody, theta_u: f64, c: f64, upper: bool) -> f64 {
    let u = [theta_u.cos(), theta_u.sin()];
    let height = |phi: f64| {
        let x = body.planar_boundary(phi);
        x[0] * u[0] + x[1] * u[1] - c
    };
    let (mut inner, mut outer) = if upper {
        (theta_u, theta_u + std::f64::consts::PI)
    } else {
        (theta_u, theta_u - std::f64::consts::PI)
    };
    // height > 0 near theta_u, < 0 near the antipode
    for _ in 0..80 {
        let mid = 0.5 * (inner + outer);
        if height(mid) > 0.0 {
            inner = mid;
        } else {
            outer = mid;
        }
        if (outer - inner).abs() < 1e-14 {
            break;
        }
    }
    0.5 * (inner + outer)
}

/// Area of the cap K intersect { <x,u> >= h - drop } for a smooth planar
/// body: shoelace of the boundary arc between the chord endpoints plus the
/// closing chord.
fn smooth_cap_area(body: &ConvexBody, theta_u: f64, h_u: f64, drop: f64) -> f64 {
    if drop <= 0.0 {
        return 0.0;
    }
    let c = h_u - drop;
    let phi2 = chord_angle(body, theta_u, c, true);
    let phi1 = chord_angle(body, theta_u, c, false);
    let arc = boundary_integral(body, phi1, phi2, |t| {
        let (h, _, f) = body.planar_eval(t);
        h * f
    });
    let x1 = body.planar_boundary(phi1);
    let x2 = body.planar_boundary(phi2);
    0.5 * (arc + (x2[0] * x1[1] - x2[1] * x1[0]))
}

/// Weighted boundary measure of the cut arc for a surface cap.
fn smooth_cap_boundary_measure<F: Fn(f64) -> f64>(
    body: &ConvexBody,
    theta_u: f64,
    h_u: f64,
    drop: f64,
    weight: &F,
) -> f64 {
    if drop <= 0.0 {
        return 0.0;
    }
    let c = h_u - drop;
    let phi2 = chord_angle(body, theta_u, c, true);
    let phi1 = chord_angle(body, theta_u, c, false);
    boundary_integral(body, phi1, phi2, |t| {
        let f = body.planar_eval(t).2;
        weight(t) * f
    })
}

fn polygon_cap_area(poly: &Polygon2, u: [f64; 2], level: f64) -> f64 {
    // keep <x, u> >= level, i.e. <x, -u> <= -level
    let cap = crate::bodies::clip_polygon(poly.vertices(), [-u[0], -u[1]], -level);
    crate::bodies::shoelace(&cap)
}

fn bisect_drop<A: FnMut(f64) -> f64>(
    mut measure_at: A,
    target: f64,
    width: f64,
) -> Result<f64> {
    let mut lo = 0.0;
    let mut hi = width;
    let m_hi = measure_at(hi);
    if m_hi < target {
        return Err(Error::Numeric(format!(
            "cap root-finder failed to bracket: measure({hi}) = {m_hi} < target {target}"
        )));
    }
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        let m = measure_at(mid);
        if (m - target).abs() <= AREA_MATCH_REL * target {
            return Ok(mid);
        }
        if m < target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-16 * width {
            break;
        }
    }
    Ok(0.5 * (lo + hi))
}

fn require_planar(body: &ConvexBody, op: &'static str) -> Result<()> {
    if body.dimension() != 2 {
        return Err(Error::Precondition(format!(
            "{op} is implemented for n = 2 only"
        )));
    }
    Ok(())
}

/// Solves for the offset drop whose cap cuts off area exactly `delta`.
pub fn cap_volume_offset(body: &ConvexBody, u: &Direction, delta: f64) -> Result<CapCut> {
    require_planar(body, "cap_volume_offset")?;
    let area = planar_area(body)?;
    if !(delta > 0.0 && delta < 0.5 * area) {
        return Err(Error::Precondition(format!(
            "cap volume {delta} outside (0, |K|/2) with |K| = {area}"
        )));
    }
    let theta_u = u.angle();
    let h_u = body.support(u);
    let width = h_u + body.support(&Direction::from_angle(theta_u + std::f64::consts::PI));
    let drop = match body.as_polygon() {
        Some(poly) => {
            let uu = [u.coords()[0], u.coords()[1]];
            bisect_drop(|d| polygon_cap_area(&poly, uu, h_u - d), delta, width)?
        }
        None => {
            if !body.is_c2_plus() {
                return Err(Error::UnsupportedKind {
                    op: "cap_volume_offset",
                    kind: body.kind_name(),
                });
            }
            bisect_drop(|d| smooth_cap_area(body, theta_u, h_u, d), delta, width)?
        }
    };
    Ok(CapCut {
        direction: u.clone(),
        offset_drop: drop,
        measure: delta,
    })
}

/// Solves for the offset drop whose cap cuts off weighted boundary
/// measure exactly `s`. The weight is a strictly positive function of the
/// outer normal angle. Polytope kinds are rejected: the facet orthogonal
/// to the cut direction lies inside every cap, so the cap measure is
/// bounded away from zero and the equation has no solution for small s.
pub fn surface_cap_offset<F: Fn(f64) -> f64>(
    body: &ConvexBody,
    u: &Direction,
    weight: &F,
    s: f64,
) -> Result<CapCut> {
    require_planar(body, "surface_cap_offset")?;
    if !body.is_c2_plus() {
        return Err(Error::UnsupportedKind {
            op: "surface_cap_offset",
            kind: body.kind_name(),
        });
    }
    let total = total_boundary_measure(body, weight);
    if !(s > 0.0 && s < 0.5 * total) {
        return Err(Error::Precondition(format!(
            "cap measure {s} outside (0, total/2) with total = {total}"
        )));
    }
    let theta_u = u.angle();
    let h_u = body.support(u);
    let width = h_u + body.support(&Direction::from_angle(theta_u + std::f64::consts::PI));
    let drop = bisect_drop(
        |d| smooth_cap_boundary_measure(body, theta_u, h_u, d, weight),
        s,
        width,
    )?;
    Ok(CapCut {
        direction: u.clone(),
        offset_drop: drop,
        measure: s,
    })
}

/// Total weighted boundary measure oint weight f_K d theta.
pub fn total_boundary_measure<F: Fn(f64) -> f64>(body: &ConvexBody, weight: &F) -> f64 {
    boundary_integral(body, 0.0, 2.0 * std::f64::consts::PI, |t| {
        weight(t) * body.planar_eval(t).2
    })
}

fn intersect_cuts(
    body: &ConvexBody,
    parameter: f64,
    cuts: Vec<(Direction, f64)>,
) -> Result<InnerBodyApprox> {
    let mut halfspaces = Vec::with_capacity(cuts.len());
    for (u, drop) in &cuts {
        let offset = body.support(u) - drop;
        if offset <= 0.0 {
            return Err(Error::Degenerate(format!(
                "cut parameter {parameter} pushes a support plane past the origin"
            )));
        }
        halfspaces.push(Halfspace {
            normal: [u.coords()[0], u.coords()[1]],
            offset,
        });
    }
    let polygon = Polygon2::from_halfspaces(&halfspaces).map_err(|e| match e {
        Error::Degenerate(m) => Error::Degenerate(m),
        other => other,
    })?;
    Ok(InnerBodyApprox {
        halfspaces,
        polygon,
        parameter,
        direction_count: cuts.len(),
    })
}

/// The floating body K_delta, discretized as the intersection of `ndirs`
/// equally spread cap halfspaces (an outer approximation of the true
/// floating body that refines as ndirs grows).
pub fn floating_body(body: &ConvexBody, delta: f64, ndirs: usize) -> Result<InnerBodyApprox> {
    require_planar(body, "floating_body")?;
    if ndirs < 64 {
        return Err(Error::Config(format!(
            "floating_body needs at least 64 directions, got {ndirs}"
        )));
    }
    let mut cuts = Vec::with_capacity(ndirs);
    for i in 0..ndirs {
        let u = Direction::from_angle(2.0 * std::f64::consts::PI * i as f64 / ndirs as f64);
        let cut = cap_volume_offset(body, &u, delta)?;
        cuts.push((cut.direction, cut.offset_drop));
    }
    intersect_cuts(body, delta, cuts)
}

/// The surface body K_{f,s} under the same discretization.
pub fn surface_body<F: Fn(f64) -> f64>(
    body: &ConvexBody,
    weight: &F,
    s: f64,
    ndirs: usize,
) -> Result<InnerBodyApprox> {
    require_planar(body, "surface_body")?;
    if ndirs < 64 {
        return Err(Error::Config(format!(
            "surface_body needs at least 64 directions, got {ndirs}"
        )));
    }
    let mut cuts = Vec::with_capacity(ndirs);
    for i in 0..ndirs {
        let u = Direction::from_angle(2.0 * std::f64::consts::PI * i as f64 / ndirs as f64);
        let cut = surface_cap_offset(body, &u, weight, s)?;
        cuts.push((cut.direction, cut.offset_drop));
    }
    intersect_cuts(body, s, cuts)
}

/// |K polar| to machine accuracy: closed forms where available, otherwise
/// the identity |K polar| = (1/n) integral h_K^{-n} d sigma on a dense
/// internal circle grid.
pub fn polar_volume_exact(body: &ConvexBody) -> Result<f64> {
    match body {
        ConvexBody::Ellipsoid(_)
        | ConvexBody::Cube { .. }
        | ConvexBody::CrossPolytope { .. } => {
            let polar = body.polar_body()?;
            // closed-form kinds only; the grid argument is unused there
            let grid = crate::quadrature::grid_circle(8)?;
            Ok(polar.body.volume(&grid))
        }
        ConvexBody::HalfspacePolytope(p) => Ok(p.polar()?.area()),
        _ => {
            let n = body.dimension() as f64;
            Ok(boundary_integral(
                body,
                0.0,
                2.0 * std::f64::consts::PI,
                |t| body.planar_eval(t).0.powf(-n),
            ) / n)
        }
    }
}

/// |inner polar| - |outer polar|, with the polygon polar computed exactly
/// and the outer polar volume from the polar body.
pub fn polar_volume_deficit(outer: &ConvexBody, inner: &InnerBodyApprox) -> Result<f64> {
    if !inner.polygon.contains_origin() {
        return Err(Error::Precondition(
            "inner approximation must contain the origin".into(),
        ));
    }
    let inner_polar = inner.polygon.polar()?.area();
    let outer_polar = polar_volume_exact(outer)?;
    Ok(inner_polar - outer_polar)
}

fn validate_schedule(schedule: &[f64]) -> Result<()> {
    if schedule.len() < 4 {
        return Err(Error::Config(format!(
            "limit schedule needs at least 4 values, got {}",
            schedule.len()
        )));
    }
    if schedule.iter().any(|d| !d.is_finite() || *d <= 0.0) {
        return Err(Error::Config("schedule values must be positive".into()));
    }
    if schedule.windows(2).any(|w| w[1] >= w[0]) {
        return Err(Error::Config("schedule must be strictly decreasing".into()));
    }
    Ok(())
}

/// Log-log slope of the ratio against the parameter, fitted by least
/// squares over all samples. Near zero for convergent families.
fn fitted_exponent(samples: &[(f64, f64)]) -> f64 {
    if samples.iter().any(|(_, r)| *r <= 0.0) {
        return f64::NAN;
    }
    let xs: Vec<f64> = samples.iter().map(|(d, _)| d.ln()).collect();
    let ys: Vec<f64> = samples.iter().map(|(_, r)| r.ln()).collect();
    let n = xs.len() as f64;
    let xm = xs.iter().sum::<f64>() / n;
    let ym = ys.iter().sum::<f64>() / n;
    let sxx: f64 = xs.iter().map(|x| (x - xm) * (x - xm)).sum();
    let sxy: f64 = xs
        .iter()
        .zip(ys.iter())
        .map(|(x, y)| (x - xm) * (y - ym))
        .sum();
    sxy / sxx
}

/// Richardson elimination assuming an O(parameter^gamma) correction, with
/// gamma fitted from the three finest samples.
fn richardson(samples: &[(f64, f64)]) -> (f64, f64) {
    let m = samples.len();
    let (d2, r2) = samples[m - 2];
    let (d3, r3) = samples[m - 1];
    let (_, r1) = samples[m - 3];
    let diff1 = r1 - r2;
    let diff2 = r2 - r3;
    let q = d2 / d3;
    if diff1 * diff2 <= 0.0 || q <= 1.0 {
        // no usable correction signal; keep the finest sample
        return (r3, f64::NAN);
    }
    let gamma = (diff1 / diff2).ln() / q.ln();
    let denom = q.powf(gamma) - 1.0;
    if !denom.is_finite() || denom.abs() < 1e-12 {
        return (r3, gamma);
    }
    (r3 + (r3 - r2) / denom, gamma)
}

fn build_estimate(samples: Vec<(f64, f64)>, target: Option<f64>) -> LimitEstimate {
    let (extrapolated, correction_exponent) = richardson(&samples);
    let fitted = fitted_exponent(&samples);
    let relative_gap = target.map(|t| (extrapolated - t).abs() / t.abs());
    LimitEstimate {
        samples,
        extrapolated,
        fitted_exponent: fitted,
        correction_exponent,
        target,
        relative_gap,
    }
}

/// Ratios c_n (|K_delta polar| - |K polar|) / delta^{2/(n+1)} along the
/// schedule, extrapolated to delta -> 0. For C^2_+ bodies the target is
/// as_{-n/(n+2)} of the polar body; polytopes get no target (the family
/// diverges there).
pub fn floating_limit(
    body: &ConvexBody,
    delta_schedule: &[f64],
    ndirs: usize,
    grid: &SphereGrid,
) -> Result<LimitEstimate> {
    require_planar(body, "floating_limit")?;
    if grid.dimension != 2 {
        return Err(Error::Config("floating_limit needs a circle grid".into()));
    }
    validate_schedule(delta_schedule)?;
    let n = body.dimension();
    let cn = floating_constant(n);
    let exponent = 2.0 / (n as f64 + 1.0);
    let mut samples = Vec::with_capacity(delta_schedule.len());
    for &delta in delta_schedule {
        let inner = floating_body(body, delta, ndirs)?;
        let deficit = polar_volume_deficit(body, &inner)?;
        samples.push((delta, cn * deficit / delta.powf(exponent)));
    }
    let target = if body.is_c2_plus() {
        // best effort: an arc body with razor-thin corners has no
        // representable polar, but its deficit ratios are still valid
        match body.polar_body() {
            Ok(polar) => {
                let p = PExponent::Finite(-(n as f64) / (n as f64 + 2.0));
                asa_sphere_form(&polar.body, p, grid)?.value
            }
            Err(_) => None,
        }
    } else {
        None
    };
    Ok(build_estimate(samples, target))
}

/// Ratios beta_n (|K_{f,s} polar| - |K polar|) / s^{2/(n-1)} along the
/// schedule, extrapolated to s -> 0. The target is the limiting integral
/// of 1 / (h^{n+1} f_K^{1/(n-1)} f^{2/(n-1)}) over outer normals.
pub fn surface_limit<F: Fn(f64) -> f64>(
    body: &ConvexBody,
    weight: &F,
    s_schedule: &[f64],
    ndirs: usize,
    grid: &SphereGrid,
) -> Result<LimitEstimate> {
    require_planar(body, "surface_limit")?;
    if !body.is_c2_plus() {
        return Err(Error::UnsupportedKind {
            op: "surface_limit",
            kind: body.kind_name(),
        });
    }
    if grid.dimension != 2 {
        return Err(Error::Config("surface_limit needs a circle grid".into()));
    }
    validate_schedule(s_schedule)?;
    // f > c > 0 hypothesis, checked on the grid
    for u in &grid.nodes {
        let w = weight(u.angle());
        if !(w > 0.0) || !w.is_finite() {
            return Err(Error::Precondition(format!(
                "surface weight must be strictly positive, got {w}"
            )));
        }
    }
    let n = body.dimension();
    let bn = surface_constant(n);
    let exponent = 2.0 / (n as f64 - 1.0);
    let mut samples = Vec::with_capacity(s_schedule.len());
    for &s in s_schedule {
        let inner = surface_body(body, weight, s, ndirs)?;
        let deficit = polar_volume_deficit(body, &inner)?;
        samples.push((s, bn * deficit / s.powf(exponent)));
    }
    let nf = n as f64;
    let target = grid
        .integrate(|u| {
            let t = u.angle();
            let (h, _, f) = body.planar_eval(t);
            1.0 / (h.powf(nf + 1.0) * f.powf(1.0 / (nf - 1.0)) * weight(t).powf(2.0 / (nf - 1.0)))
        })
        .value()
        .map(|r| r.value);
    Ok(build_estimate(samples, target))
}

/// Closed-form lower bound for the cube floating-body deficit, from the
/// corner-cutting body K_1: |K_1 polar| = (2^n/n!) n/(n - (n! delta)^{1/n}).
/// Returns (deficit lower bound, ratio against delta^{2/(n+1)}); the ratio
/// diverges like delta^{1/n - 2/(n+1)} as delta -> 0.
pub fn cube_counterexample(n: usize, delta: f64) -> Result<(f64, f64)> {
    if n < 2 {
        return Err(Error::Precondition("cube counterexample needs n >= 2".into()));
    }
    let nf = n as f64;
    let fact: f64 = (1..=n).map(|k| k as f64).product();
    if !(delta > 0.0) || (fact * delta).powf(1.0 / nf) >= nf {
        return Err(Error::Precondition(format!(
            "delta = {delta} too large: need (n! delta)^{{1/n}} < n"
        )));
    }
    let polar_volume = 2.0_f64.powi(n as i32) / fact;
    let cut = (fact * delta).powf(1.0 / nf);
    let k1_polar = polar_volume * nf / (nf - cut);
    let deficit = k1_polar - polar_volume;
    let ratio = deficit / delta.powf(2.0 / (nf + 1.0));
    Ok((deficit, ratio))
}
