//! L_p affine surface area kernels.
//!
//! The sphere form integrates f_K(u)^{n/(n+p)} h_K(u)^{-n(p-1)/(n+p)} over
//! S^{n-1}; the boundary form pushes the boundary integral of
//! kappa^{p/(n+p)} <x, N>^{-n(p-1)/(n+p)} to the sphere with the Jacobian
//! d mu = f_K d sigma. Both endpoints p = +-infinity collapse to
//! n |K polar|, and p = -n has its own sup-form functional.

use crate::bodies::{dot_slice, ConvexBody, Direction};
use crate::error::{Error, Result};
use crate::quadrature::{gauss_legendre, unit_ball_volume, Integration, SphereGrid};

/// Exponent for the as_p family: a real number or the (single) infinite
/// endpoint.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum PExponent {
    Finite(f64),
    Infinity,
}

impl PExponent {
    pub fn finite(&self) -> Option<f64> {
        match self {
            PExponent::Finite(p) => Some(*p),
            PExponent::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, PExponent::Infinity)
    }

    /// Rejects exponents within 1e-6 of the pole p = -n.
    pub fn validate(&self, dimension: usize) -> Result<()> {
        if let PExponent::Finite(p) = self {
            if !p.is_finite() {
                return Err(Error::Config(format!(
                    "non-finite exponent {p}; use PExponent::Infinity for the endpoint"
                )));
            }
            let pole = -(dimension as f64);
            if (p - pole).abs() < 1e-6 {
                return Err(Error::ExponentPole { p: *p, pole });
            }
        }
        Ok(())
    }
}

impl From<f64> for PExponent {
    fn from(p: f64) -> Self {
        if p.is_infinite() {
            PExponent::Infinity
        } else {
            PExponent::Finite(p)
        }
    }
}

impl std::fmt::Display for PExponent {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            PExponent::Finite(p) => write!(f, "{p}"),
            PExponent::Infinity => write!(f, "inf"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AsaMethod {
    SphereForm,
    BoundaryForm,
    SupForm,
    ClosedForm,
}

impl AsaMethod {
    pub fn name(&self) -> &'static str {
        match self {
            AsaMethod::SphereForm => "sphere-form",
            AsaMethod::BoundaryForm => "boundary-form",
            AsaMethod::SupForm => "sup-form",
            AsaMethod::ClosedForm => "closed-form",
        }
    }
}

/// A computed as_p value: finite with an error estimate, or divergent.
#[derive(Debug, Clone)]
pub struct AsaValue {
    pub p: PExponent,
    pub value: Option<f64>,
    pub error_estimate: f64,
    pub method: AsaMethod,
    pub caveat: Option<&'static str>,
}

impl AsaValue {
    fn finite(p: PExponent, value: f64, error_estimate: f64, method: AsaMethod) -> Self {
        AsaValue {
            p,
            value: Some(value),
            error_estimate,
            method,
            caveat: None,
        }
    }

    fn divergent(p: PExponent, method: AsaMethod) -> Self {
        AsaValue {
            p,
            value: None,
            error_estimate: f64::INFINITY,
            method,
            caveat: None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        self.value.is_none()
    }

    /// Relative error estimate, used by tolerance budgets.
    pub fn relative_error(&self) -> f64 {
        match self.value {
            Some(v) if v != 0.0 => (self.error_estimate / v).abs(),
            _ => 0.0,
        }
    }
}

/// as_p of the unit ball: n |B_2^n| for every p.
pub fn as_p_unit_ball(dimension: usize) -> f64 {
    dimension as f64 * unit_ball_volume(dimension)
}

fn check_grid(body: &ConvexBody, grid: &SphereGrid) -> Result<()> {
    if grid.dimension != body.dimension() {
        return Err(Error::Config(format!(
            "grid dimension {} does not match body dimension {}",
            grid.dimension,
            body.dimension()
        )));
    }
    Ok(())
}

fn sphere_exponents(n: f64, p: &PExponent) -> (f64, f64) {
    match p {
        PExponent::Finite(p) => (n / (n + p), -n * (p - 1.0) / (n + p)),
        PExponent::Infinity => (0.0, -n),
    }
}

/// Circle integral for arc bodies: the integrand jumps at the arc
/// junctions, so the uniform grid is replaced by composite Gauss rules on
/// each smooth span; the error estimate compares against half the nodes.
fn arc_circle_integral<F: Fn(f64) -> f64>(body: &ConvexBody, g: F) -> Integration {
    let mut cuts = body.planar_breakpoints();
    cuts.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let start = cuts.first().copied().unwrap_or(0.0);
    cuts.push(start + 2.0 * std::f64::consts::PI);
    let (n64, w64) = gauss_legendre(64);
    let (n32, w32) = gauss_legendre(32);
    let mut fine = 0.0;
    let mut coarse = 0.0;
    let mut nodes_used = 0;
    for w in cuts.windows(2) {
        let mid = 0.5 * (w[0] + w[1]);
        let half = 0.5 * (w[1] - w[0]);
        if half <= 0.0 {
            continue;
        }
        for (x, wt) in n64.iter().zip(w64.iter()) {
            let v = g(mid + half * x);
            if !v.is_finite() {
                return Integration::Divergent { nodes_used };
            }
            fine += wt * v * half;
            nodes_used += 1;
        }
        for (x, wt) in n32.iter().zip(w32.iter()) {
            coarse += wt * g(mid + half * x) * half;
        }
    }
    Integration::Value(crate::quadrature::IntegralResult {
        value: fine,
        error_estimate: (fine - coarse).abs(),
        nodes_used,
    })
}


/// as_p(K) through the S^{n-1} integral of f^{n/(n+p)} h^{-n(p-1)/(n+p)}.
/// Polytope kinds follow the degenerate-curvature conventions: 0 for
/// p > 0 and p < -n, n|K| at p = 0, and a divergence flag on (-n, 0).
pub fn asa_sphere_form(body: &ConvexBody, p: PExponent, grid: &SphereGrid) -> Result<AsaValue> {
    let n = body.dimension();
    p.validate(n)?;
    check_grid(body, grid)?;
    if p.is_infinite() {
        return asa_infinity(body, grid);
    }
    let pv = p.finite().unwrap();
    if body.is_polytope() {
        if pv == 0.0 {
            return Ok(AsaValue::finite(
                p,
                n as f64 * body.volume(grid),
                0.0,
                AsaMethod::ClosedForm,
            ));
        }
        if pv > 0.0 {
            let mut out = AsaValue::finite(p, 0.0, 0.0, AsaMethod::ClosedForm);
            out.caveat = Some("curvature vanishes a.e. on a polytope, so the integrand is 0");
            return Ok(out);
        }
        if pv > -(n as f64) {
            let mut out = AsaValue::divergent(p, AsaMethod::SphereForm);
            out.caveat = Some("polytope integrand is +inf on the curvature-degenerate set");
            return Ok(out);
        }
        let mut out = AsaValue::finite(p, 0.0, 0.0, AsaMethod::ClosedForm);
        out.caveat =
            Some("0-a.e. convention for polytopes with p < -n; not asserted by the theory");
        return Ok(out);
    }
    let (ef, eh) = sphere_exponents(n as f64, &p);
    let out = match body {
        ConvexBody::PiecewiseArc(_) => arc_circle_integral(body, |t| {
            let (h, _, f) = body.planar_eval(t);
            f.powf(ef) * h.powf(eh)
        }),
        _ => grid.integrate(|u| {
            let f = body
                .curvature_function(u)
                .expect("C2+ kinds have a curvature function");
            let h = body.support(u);
            f.powf(ef) * h.powf(eh)
        }),
    };
    Ok(match out {
        Integration::Value(r) => {
            AsaValue::finite(p, r.value, r.error_estimate, AsaMethod::SphereForm)
        }
        Integration::Divergent { .. } => AsaValue::divergent(p, AsaMethod::SphereForm),
    })
}

/// as_p(K) through the boundary integral, pushed to the sphere with the
/// Jacobian d mu_K = f_K d sigma; requires the inverse Gauss map.
pub fn asa_boundary_form(body: &ConvexBody, p: PExponent, grid: &SphereGrid) -> Result<AsaValue> {
    let n = body.dimension();
    p.validate(n)?;
    check_grid(body, grid)?;
    if !body.is_c2_plus() {
        return Err(Error::UnsupportedKind {
            op: "asa_boundary_form",
            kind: body.kind_name(),
        });
    }
    let nf = n as f64;
    let (ek, eh) = match p {
        PExponent::Finite(pv) => (pv / (nf + pv), -nf * (pv - 1.0) / (nf + pv)),
        PExponent::Infinity => (1.0, -nf),
    };
    let out = match body {
        ConvexBody::PiecewiseArc(_) => arc_circle_integral(body, |t| {
            let x = body.planar_boundary(t);
            let f = body.planar_eval(t).2;
            let kappa = 1.0 / f;
            let xn = x[0] * t.cos() + x[1] * t.sin();
            kappa.powf(ek) * xn.powf(eh) * f
        }),
        _ => grid.integrate(|u| {
            let bp = body.boundary_point(u).expect("C2+ kind");
            let kappa = 1.0 / bp.curvature_fn;
            let xn = dot_slice(&bp.position, u.coords());
            kappa.powf(ek) * xn.powf(eh) * bp.curvature_fn
        }),
    };
    Ok(match out {
        Integration::Value(r) => {
            AsaValue::finite(p, r.value, r.error_estimate, AsaMethod::BoundaryForm)
        }
        Integration::Divergent { .. } => AsaValue::divergent(p, AsaMethod::BoundaryForm),
    })
}

/// as_{+-inf}(K) = integral of h_K^{-n} = n |K polar|.
pub fn asa_infinity(body: &ConvexBody, grid: &SphereGrid) -> Result<AsaValue> {
    check_grid(body, grid)?;
    let n = body.dimension() as f64;
    let out = match body {
        ConvexBody::PiecewiseArc(_) => {
            arc_circle_integral(body, |t| body.planar_eval(t).0.powf(-n))
        }
        _ => grid.integrate(|u| body.support(u).powf(-n)),
    };
    Ok(match out {
        Integration::Value(r) => AsaValue::finite(
            PExponent::Infinity,
            r.value,
            r.error_estimate,
            AsaMethod::SphereForm,
        ),
        Integration::Divergent { .. } => {
            AsaValue::divergent(PExponent::Infinity, AsaMethod::SphereForm)
        }
    })
}

/// as_{-n}(K) = sup over the sphere of f_K^{1/2} h_K^{(n+1)/2}, by a grid
/// scan refined with golden-section search in the planar case. Divergent
/// for polytopes.
pub fn asa_minus_n(body: &ConvexBody, grid: &SphereGrid) -> Result<AsaValue> {
    check_grid(body, grid)?;
    let n = body.dimension();
    let p = PExponent::Finite(-(n as f64));
    if !body.is_c2_plus() {
        let mut out = AsaValue::divergent(p, AsaMethod::SupForm);
        out.caveat = Some("sup of <x,N>^{(n+1)/2} kappa^{-1/2} is unbounded on polytopes");
        return Ok(out);
    }
    let score = |u: &Direction| -> f64 {
        let f = body.curvature_function(u).expect("C2+ kind");
        let h = body.support(u);
        f.sqrt() * h.powf((n as f64 + 1.0) / 2.0)
    };
    let mut best = f64::NEG_INFINITY;
    let mut best_node = None;
    for u in &grid.nodes {
        let s = score(u);
        if s > best {
            best = s;
            best_node = Some(u.clone());
        }
    }
    let grid_best = best;
    if n == 2 {
        let theta0 = best_node.expect("non-empty grid").angle();
        let gap = 2.0 * std::f64::consts::PI / grid.node_count() as f64;
        let score_angle = |t: f64| score(&Direction::from_angle(t));
        best = golden_max_angle(score_angle, theta0 - gap, theta0 + gap, 1e-10).max(best);
    }
    Ok(AsaValue::finite(
        p,
        best,
        (best - grid_best).abs(),
        AsaMethod::SupForm,
    ))
}

fn golden_max_angle<F: Fn(f64) -> f64>(f: F, mut a: f64, mut b: f64, tol: f64) -> f64 {
    const GOLDEN: f64 = 0.618_033_988_749_894_9;
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
    f(0.5 * (a + b)).max(fc).max(fd)
}

/// The surface-body weight f_p at the boundary point with outer normal u:
/// f_p(y) = kappa^{(n^2+p)/(2(n+p))} <y, N>^{-(n-1)(n^2+2n+p)/(2(n+p))}.
pub fn f_p_weight(body: &ConvexBody, p: PExponent, u: &Direction) -> Result<f64> {
    let n = body.dimension() as f64;
    p.validate(body.dimension())?;
    let bp = body.boundary_point(u)?;
    let (ek, eh) = f_p_exponents(n, &p);
    let kappa = 1.0 / bp.curvature_fn;
    Ok(kappa.powf(ek) * bp.support_value.powf(-eh))
}

/// Exponents (on kappa and on <y, N>) of the f_p weight.
pub fn f_p_exponents(n: f64, p: &PExponent) -> (f64, f64) {
    match p {
        PExponent::Finite(p) => (
            (n * n + p) / (2.0 * (n + p)),
            (n - 1.0) * (n * n + 2.0 * n + p) / (2.0 * (n + p)),
        ),
        PExponent::Infinity => (0.5, (n - 1.0) / 2.0),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::quadrature::{grid_circle, grid_sphere3};
    use approx::assert_relative_eq;

    const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

    #[test]
    fn ball_normalization_all_p() {
        let grid = grid_circle(256).unwrap();
        let ball = ConvexBody::unit_disc();
        for p in [-6.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0] {
            let v = asa_sphere_form(&ball, PExponent::Finite(p), &grid).unwrap();
            assert_relative_eq!(v.value.unwrap(), TWO_PI, epsilon = 1e-12);
        }
        let v = asa_sphere_form(&ball, PExponent::Infinity, &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), TWO_PI, epsilon = 1e-12);
        let ball3 = ConvexBody::unit_ball(3).unwrap();
        let g3 = grid_sphere3(64, 32).unwrap();
        let v = asa_sphere_form(&ball3, PExponent::Finite(2.0), &g3).unwrap();
        assert_relative_eq!(v.value.unwrap(), as_p_unit_ball(3), epsilon = 1e-9);
    }

    #[test]
    fn pole_is_rejected() {
        let grid = grid_circle(64).unwrap();
        let ball = ConvexBody::unit_disc();
        assert!(matches!(
            asa_sphere_form(&ball, PExponent::Finite(-2.0), &grid),
            Err(Error::ExponentPole { .. })
        ));
        assert!(asa_sphere_form(&ball, PExponent::Finite(-2.0 + 1e-9), &grid).is_err());
    }

    #[test]
    fn p_zero_is_n_volume() {
        let grid = grid_circle(1024).unwrap();
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        let v = asa_sphere_form(&e, PExponent::Finite(0.0), &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), 2.0 * e.volume(&grid), epsilon = 1e-9);
        let b = ConvexBody::planar_support(1.0, vec![0.0, 0.07], vec![0.0, 0.02]).unwrap();
        let v = asa_sphere_form(&b, PExponent::Finite(0.0), &grid).unwrap();
        assert_relative_eq!(
            v.value.unwrap(),
            2.0 * b.volume(&grid),
            epsilon = 1e-8,
            max_relative = 1e-8
        );
    }

    #[test]
    fn ellipse_p1_affine_scaling_value() {
        // as_1(T B) = |det T|^{1/3} as_1(B) = 2 pi 2^{1/3}
        let grid = grid_circle(4096).unwrap();
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        let v = asa_sphere_form(&e, PExponent::Finite(1.0), &grid).unwrap();
        assert_relative_eq!(
            v.value.unwrap(),
            TWO_PI * 2.0_f64.powf(1.0 / 3.0),
            epsilon = 1e-10,
            max_relative = 1e-10
        );
    }

    #[test]
    fn infinity_is_n_polar_volume() {
        let grid = grid_circle(2048).unwrap();
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        let v = asa_infinity(&e, &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), std::f64::consts::PI, epsilon = 1e-10);
        let cube = ConvexBody::cube(2).unwrap();
        let v = asa_infinity(&cube, &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), 4.0, epsilon = 1e-3, max_relative = 1e-3);
    }

    #[test]
    fn forms_agree_on_smooth_bodies() {
        let grid = grid_circle(512).unwrap();
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        for p in [PExponent::Finite(3.0), PExponent::Finite(-1.0), PExponent::Infinity] {
            let a = asa_sphere_form(&e, p, &grid).unwrap().value.unwrap();
            let b = asa_boundary_form(&e, p, &grid).unwrap().value.unwrap();
            assert_relative_eq!(a, b, epsilon = 1e-8, max_relative = 1e-8);
        }
        let disc = ConvexBody::unit_disc();
        let v = asa_boundary_form(&disc, PExponent::Finite(2.0), &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), TWO_PI, epsilon = 1e-12);
    }

    #[test]
    fn polytope_conventions() {
        let grid = grid_circle(512).unwrap();
        let cube = ConvexBody::cube(2).unwrap();
        let v = asa_sphere_form(&cube, PExponent::Finite(1.0), &grid).unwrap();
        assert_eq!(v.value, Some(0.0));
        let v = asa_sphere_form(&cube, PExponent::Finite(0.0), &grid).unwrap();
        assert_relative_eq!(v.value.unwrap(), 8.0);
        let v = asa_sphere_form(&cube, PExponent::Finite(-1.0), &grid).unwrap();
        assert!(v.is_divergent());
        let v = asa_sphere_form(&cube, PExponent::Finite(-6.0), &grid).unwrap();
        assert_eq!(v.value, Some(0.0));
        assert!(v.caveat.is_some());
        assert!(asa_boundary_form(&cube, PExponent::Finite(1.0), &grid).is_err());
    }

    #[test]
    fn minus_n_values() {
        let grid = grid_circle(512).unwrap();
        let disc = ConvexBody::unit_disc();
        assert_relative_eq!(
            asa_minus_n(&disc, &grid).unwrap().value.unwrap(),
            1.0,
            epsilon = 1e-12
        );
        // 1D maximization oracle on a dense angular grid for the ellipse
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        let mut oracle = f64::NEG_INFINITY;
        for j in 0..1_000_000 {
            let t = TWO_PI * j as f64 / 1e6;
            let (h, _, f) = {
                let u = Direction::from_angle(t);
                let f = e.curvature_function(&u).unwrap();
                (e.support(&u), 0.0, f)
            };
            oracle = oracle.max(f.sqrt() * h.powf(1.5));
        }
        let v = asa_minus_n(&e, &grid).unwrap().value.unwrap();
        assert_relative_eq!(v, oracle, epsilon = 1e-9, max_relative = 1e-9);
        assert_relative_eq!(v, 2.0, epsilon = 1e-9);
        // cube diverges
        assert!(asa_minus_n(&ConvexBody::cube(2).unwrap(), &grid)
            .unwrap()
            .is_divergent());
    }

    #[test]
    fn f_p_weight_values() {
        let disc = ConvexBody::unit_disc();
        let u = Direction::from_angle(0.83);
        for p in [PExponent::Finite(-0.5), PExponent::Finite(2.0), PExponent::Infinity] {
            assert_relative_eq!(f_p_weight(&disc, p, &u).unwrap(), 1.0, epsilon = 1e-12);
        }
        // n = 2, p = 0: exponents (n^2+p)/(2(n+p)) = 1 and
        // (n-1)(n^2+2n+p)/(2(n+p)) = 2, so f_0 = kappa <y,N>^{-2}
        let (ek, eh) = f_p_exponents(2.0, &PExponent::Finite(0.0));
        assert_relative_eq!(ek, 1.0);
        assert_relative_eq!(eh, 2.0);
        // ellipse(2,1) at u = e1, p = 4: kappa = 2, <y,N> = 2:
        // f_4 = 2^{8/12} * 2^{-12/12} = 2^{-1/3}
        let e = ConvexBody::ellipsoid(vec![2.0, 1.0]).unwrap();
        let v = f_p_weight(&e, PExponent::Finite(4.0), &Direction::new(vec![1.0, 0.0]).unwrap())
            .unwrap();
        assert_relative_eq!(v, 2.0_f64.powf(-1.0 / 3.0), epsilon = 1e-12);
    }

    #[test]
    fn endpoint_continuity() {
        let grid = grid_circle(1024).unwrap();
        let e = ConvexBody::ellipsoid(vec![1.5, 1.0]).unwrap();
        let inf = asa_infinity(&e, &grid).unwrap().value.unwrap();
        for p in [1e6, -1e6] {
            let v = asa_sphere_form(&e, PExponent::Finite(p), &grid)
                .unwrap()
                .value
                .unwrap();
            assert_relative_eq!(v, inf, max_relative = 1e-3);
        }
    }
}
