//! Property tests for the geometric invariants: support/boundary
//! consistency, polar identities, the Cauchy volume formula, scaling and
//! affine laws of as_p, curvature duality, and floating-body nesting.

use lpasa::asa::{asa_sphere_form, PExponent};
use lpasa::floating::{floating_body, polar_volume_deficit};
use lpasa::quadrature::grid_circle;
use lpasa::{ConvexBody, Direction, LinearMap};
use proptest::prelude::*;

/// Coefficients scaled by 1/k^3 keep h + h'' strictly positive, so every
/// generated profile is a valid C^2_+ body.
fn arb_smooth_body() -> impl Strategy<Value = ConvexBody> {
    proptest::collection::vec((-0.2..0.2f64, -0.2..0.2f64), 1..6).prop_map(|coeffs| {
        let mut cos = vec![0.0; coeffs.len() + 1];
        let mut sin = vec![0.0; coeffs.len() + 1];
        for (i, (a, b)) in coeffs.into_iter().enumerate() {
            let k = i + 2;
            let damp = (k as f64).powi(3);
            cos[k - 1] = a / damp;
            sin[k - 1] = b / damp;
        }
        ConvexBody::planar_support(1.0, cos, sin).expect("damped profile is convex")
    })
}

fn arb_angle() -> impl Strategy<Value = f64> {
    0.0..(2.0 * std::f64::consts::PI)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn boundary_point_lies_on_support_plane(body in arb_smooth_body(), theta in arb_angle()) {
        let u = Direction::from_angle(theta);
        let bp = body.boundary_point(&u).unwrap();
        let dot = bp.position[0] * u.coords()[0] + bp.position[1] * u.coords()[1];
        prop_assert!((dot - body.support(&u)).abs() < 1e-8);
        prop_assert!(bp.curvature_fn > 0.0);
    }

    #[test]
    fn polar_support_is_reciprocal_radial(body in arb_smooth_body(), theta in arb_angle()) {
        let grid = grid_circle(512).unwrap();
        let v = Direction::from_angle(theta);
        let h_polar = body.polar_support(&v, &grid).unwrap();
        let rho = body.radial(&v);
        prop_assert!((h_polar * rho - 1.0).abs() < 1e-9,
            "h_polar = {h_polar}, rho = {rho}");
    }

    #[test]
    fn bipolar_recovers_the_body(body in arb_smooth_body()) {
        let polar = body.polar_body().unwrap();
        let bipolar = polar.body.polar_body().unwrap();
        let grid = grid_circle(64).unwrap();
        for u in &grid.nodes {
            let a = bipolar.body.support(u);
            let b = body.support(u);
            prop_assert!((a - b).abs() < 1e-6, "support {a} vs {b}");
        }
    }

    #[test]
    fn cauchy_volume_formula(body in arb_smooth_body()) {
        // (1/n) integral h f d sigma equals the radial-quadrature volume
        let grid = grid_circle(2048).unwrap();
        let vol = body.volume(&grid);
        let cauchy = grid
            .integrate(|u| {
                body.support(u) * body.curvature_function(u).unwrap()
            })
            .value()
            .unwrap()
            .value
            / 2.0;
        prop_assert!((vol - cauchy).abs() < 1e-8 * vol.max(1.0),
            "volume {vol} vs cauchy {cauchy}");
    }

    #[test]
    fn curvature_duality_residual_is_small(body in arb_smooth_body(), theta in arb_angle()) {
        let grid = grid_circle(512).unwrap();
        let residual = body
            .curvature_duality_check(&Direction::from_angle(theta), &grid)
            .unwrap();
        prop_assert!(residual < 1e-4, "residual {residual}");
    }

    #[test]
    fn as_p_scaling_law(lambda in 0.5..2.0f64, p in -1.5..4.0f64) {
        // as_p(lambda K) = lambda^{n(n-p)/(n+p)} as_p(K) on the ellipse
        let grid = grid_circle(2048).unwrap();
        let body = ConvexBody::ellipsoid(vec![1.3, 0.9]).unwrap();
        let scaled = body
            .linear_image(&LinearMap::diagonal(&[lambda, lambda]).unwrap())
            .unwrap();
        let base = asa_sphere_form(&body, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        let big = asa_sphere_form(&scaled, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        let expected = lambda.powf(2.0 * (2.0 - p) / (2.0 + p)) * base;
        prop_assert!((big - expected).abs() < 1e-6 * expected.abs().max(1.0),
            "lambda {lambda}, p {p}: {big} vs {expected}");
    }

    #[test]
    fn linear_image_scales_volume_by_determinant(
        a in 0.5..2.0f64,
        b in 0.5..2.0f64,
        body in arb_smooth_body(),
    ) {
        let grid = grid_circle(2048).unwrap();
        let map = LinearMap::diagonal(&[a, b]).unwrap();
        let image = body.linear_image(&map).unwrap();
        let scaled = image.volume(&grid);
        let expected = map.determinant.abs() * body.volume(&grid);
        prop_assert!((scaled - expected).abs() < 1e-8 * expected.max(1.0),
            "volume {scaled} vs {expected}");
    }
}

#[test]
fn floating_bodies_nest_and_deficits_are_positive() {
    let body = ConvexBody::planar_support(1.0, vec![0.0, 0.04], vec![0.0, 0.0, 0.01]).unwrap();
    let deltas = [4e-3, 1e-3, 2.5e-4];
    let mut previous: Option<lpasa::InnerBodyApprox> = None;
    for &delta in &deltas {
        let inner = floating_body(&body, delta, 128).unwrap();
        assert!(inner.contained_in(&body, 1e-10));
        let deficit = polar_volume_deficit(&body, &inner).unwrap();
        assert!(deficit > 0.0);
        if let Some(prev) = &previous {
            // smaller delta gives the larger floating body
            for v in prev.vertices() {
                for hs in &inner.halfspaces {
                    assert!(
                        v[0] * hs.normal[0] + v[1] * hs.normal[1] <= hs.offset + 1e-10,
                        "nesting violated at delta {delta}"
                    );
                }
            }
        }
        previous = Some(inner);
    }
}

#[test]
fn endpoint_continuity_toward_infinity() {
    let grid = grid_circle(2048).unwrap();
    let body = ConvexBody::ellipsoid(vec![1.4, 0.9]).unwrap();
    let inf = lpasa::asa::asa_infinity(&body, &grid).unwrap().value.unwrap();
    for p in [1e6, -1e6] {
        let v = asa_sphere_form(&body, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        assert!((v - inf).abs() / inf < 1e-3, "p = {p}: {v} vs {inf}");
    }
}
