//! Acceptance suite: one test per criterion, each printing a pass line
//! (run with `cargo test --test acceptance -- --nocapture` to see them).

use lpasa::asa::{asa_boundary_form, asa_sphere_form, PExponent};
use lpasa::floating::{cube_counterexample, floating_limit, surface_limit};
use lpasa::inequalities::{
    random_smooth_body, rounded_body_bounds, run_suite, SuiteConfig, Verdict,
};
use lpasa::quadrature::grid_circle;
use lpasa::{ConvexBody, Direction, LinearMap};
use std::time::Instant;

const TWO_PI: f64 = 2.0 * std::f64::consts::PI;

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

#[test]
fn c01_ball_normalization() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let ball = ConvexBody::unit_disc();
    for p in [-6.0, -1.0, -0.5, 0.0, 0.5, 1.0, 2.0, 5.0] {
        let v = asa_sphere_form(&ball, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        assert!(rel(v, TWO_PI) < 1e-8, "as_{p}(B) = {v}");
    }
    for p in [f64::INFINITY, f64::NEG_INFINITY] {
        let v = asa_sphere_form(&ball, PExponent::from(p), &grid)
            .unwrap()
            .value
            .unwrap();
        assert!(rel(v, TWO_PI) < 1e-8, "as_inf(B) = {v}");
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 1.0, "took {elapsed:?}");
    println!("criterion 01 ball normalization: PASS ({elapsed:?})");
}

#[test]
fn c02_form_equivalence_on_seeded_bodies() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let exponents = [-6.0, -1.0, 0.0, 0.5, 1.0, 2.0, 5.0];
    for i in 0..20 {
        let body = random_smooth_body(100 + i, 8, 0.25).unwrap();
        for p in exponents {
            let a = asa_sphere_form(&body, PExponent::Finite(p), &grid)
                .unwrap()
                .value
                .unwrap();
            let b = asa_boundary_form(&body, PExponent::Finite(p), &grid)
                .unwrap()
                .value
                .unwrap();
            assert!(
                rel(a, b) < 1e-6,
                "body {i}, p = {p}: sphere {a} vs boundary {b}"
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 30.0, "took {elapsed:?}");
    println!("criterion 02 form equivalence: PASS ({elapsed:?})");
}

#[test]
fn c03_affine_scaling_law() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let body = ConvexBody::ellipsoid(vec![1.2, 0.8]).unwrap();
    let map = LinearMap::diagonal(&[2.0, 1.5]).unwrap();
    let image = body.linear_image(&map).unwrap();
    for p in [-6.0, -1.0, 1.0, 2.0] {
        let base = asa_sphere_form(&body, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        let mapped = asa_sphere_form(&image, PExponent::Finite(p), &grid)
            .unwrap()
            .value
            .unwrap();
        let expected = map.determinant.abs().powf((2.0 - p) / (2.0 + p)) * base;
        assert!(
            rel(mapped, expected) < 1e-6,
            "p = {p}: as_p(TK) = {mapped}, |det|^((n-p)/(n+p)) as_p(K) = {expected}"
        );
    }
    let elapsed = start.elapsed();
    println!("criterion 03 affine scaling: PASS ({elapsed:?})");
}

#[test]
fn c04_duality_formula() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    // ellipses: exact closed-form polar
    for axes in [vec![2.0, 1.0], vec![1.5, 0.7]] {
        let body = ConvexBody::ellipsoid(axes.clone()).unwrap();
        let polar = body.polar_body().unwrap();
        for p in [-8.0, -1.0, 1.0, 2.0, 4.0] {
            let a = asa_sphere_form(&body, PExponent::Finite(p), &grid)
                .unwrap()
                .value
                .unwrap();
            let b = asa_sphere_form(&polar.body, PExponent::Finite(4.0 / p), &grid)
                .unwrap()
                .value
                .unwrap();
            assert!(
                rel(a, b) < 1e-3,
                "ellipse {axes:?}, p = {p}: {a} vs {b} (gap {})",
                rel(a, b)
            );
        }
    }
    // seeded smooth bodies: numeric polar fit
    for i in 0..10 {
        let body = random_smooth_body(300 + i, 8, 0.25).unwrap();
        let polar = body.polar_body().unwrap();
        for p in [1.0, 2.0, 4.0] {
            let a = asa_sphere_form(&body, PExponent::Finite(p), &grid)
                .unwrap()
                .value
                .unwrap();
            let b = asa_sphere_form(&polar.body, PExponent::Finite(4.0 / p), &grid)
                .unwrap()
                .value
                .unwrap();
            assert!(
                rel(a, b) < 1e-2,
                "body {i}, p = {p}: {a} vs {b} (gap {}, fit residual {})",
                rel(a, b),
                polar.fit_residual
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 120.0, "took {elapsed:?}");
    println!("criterion 04 duality formula: PASS ({elapsed:?})");
}

#[test]
fn c05_floating_body_limit() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let schedule: Vec<f64> = (0..7).map(|k| 1e-2 * 4.0_f64.powi(-k)).collect();

    let disc = ConvexBody::unit_disc();
    let est = floating_limit(&disc, &schedule, 2048, &grid).unwrap();
    assert!(rel(est.target.unwrap(), TWO_PI) < 1e-9);
    let gap = est.relative_gap.unwrap();
    assert!(gap < 0.02, "disc gap {gap}, samples {:?}", est.samples);

    let ellipse = ConvexBody::ellipsoid(vec![1.5, 1.0]).unwrap();
    let est = floating_limit(&ellipse, &schedule, 2048, &grid).unwrap();
    let gap_polar = est.relative_gap.unwrap();
    assert!(
        gap_polar < 0.05,
        "ellipse gap vs as_-1/2(polar) = {gap_polar}"
    );
    // the dual pairing: the same limit equals as_{-n(n+2)} of the body
    let cross = asa_sphere_form(&ellipse, PExponent::Finite(-8.0), &grid)
        .unwrap()
        .value
        .unwrap();
    let gap_cross = rel(est.extrapolated, cross);
    assert!(gap_cross < 0.05, "ellipse gap vs as_-8(K) = {gap_cross}");
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!("criterion 05 floating-body limit: PASS ({elapsed:?})");
}

#[test]
fn c06_cube_divergence() {
    let start = Instant::now();
    // closed form: log-log slope of the ratio over [1e-8, 1e-2]
    let mut logs = Vec::new();
    for j in 0..=12 {
        let delta = 1e-2 * 10.0_f64.powf(-(j as f64) / 2.0);
        let (_, ratio) = cube_counterexample(2, delta).unwrap();
        logs.push((delta.ln(), ratio.ln()));
    }
    let n = logs.len() as f64;
    let xm = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let ym = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let slope = logs.iter().map(|(x, y)| (x - xm) * (y - ym)).sum::<f64>()
        / logs.iter().map(|(x, _)| (x - xm) * (x - xm)).sum::<f64>();
    assert!(
        (slope - (-1.0 / 6.0)).abs() < 0.02,
        "closed-form slope {slope}"
    );
    // constructive square pipeline: strictly increasing ratios
    let square = ConvexBody::cube(2).unwrap();
    let schedule: Vec<f64> = (0..6).map(|k| 1e-2 * 4.0_f64.powi(-k)).collect();
    let grid = grid_circle(512).unwrap();
    let est = floating_limit(&square, &schedule, 512, &grid).unwrap();
    assert!(est.target.is_none());
    for w in est.samples.windows(2) {
        assert!(
            w[1].1 > w[0].1,
            "square ratios not increasing: {:?}",
            est.samples
        );
    }
    let elapsed = start.elapsed();
    println!("criterion 06 cube divergence: PASS ({elapsed:?})");
}

#[test]
fn c07_surface_body_limit() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let schedule = [0.8, 0.4, 0.2, 0.1];
    let bodies = [ConvexBody::unit_disc(), random_smooth_body(77, 6, 0.2).unwrap()];
    for (bi, body) in bodies.iter().enumerate() {
        for p in [-0.5, 0.0, 1.0, 2.0] {
            let pe = PExponent::Finite(p);
            let (ek, eh) = lpasa::asa::f_p_exponents(2.0, &pe);
            let weight = |theta: f64| {
                let u = Direction::from_angle(theta);
                let h = body.support(&u);
                let f = body.curvature_function(&u).unwrap();
                (1.0 / f).powf(ek) * h.powf(-eh)
            };
            let est = surface_limit(body, &weight, &schedule, 2048, &grid).unwrap();
            let target = asa_sphere_form(body, pe, &grid).unwrap().value.unwrap();
            let gap = rel(est.extrapolated, target);
            assert!(
                gap < 0.03,
                "body {bi}, p = {p}: extrapolated {} vs as_p {} (gap {gap})",
                est.extrapolated,
                target
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 300.0, "took {elapsed:?}");
    println!("criterion 07 surface-body limit: PASS ({elapsed:?})");
}

#[test]
fn c08_inequality_suite() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    let config = SuiteConfig::default();
    let reports = run_suite(&config, &grid).unwrap();
    assert!(reports.len() > 2000, "suite ran {} checks", reports.len());
    for r in &reports {
        assert!(
            !matches!(r.verdict, Verdict::Violated),
            "{} violated on {}: lhs {}, rhs {}, margin {}, tol {}",
            r.name,
            r.body_descriptor,
            r.lhs,
            r.rhs,
            r.margin,
            r.tolerance_used
        );
    }
    // ellipsoid equality cases are flagged as such (bodies 1 and 2; the
    // p < -n isoperimetric bound carries the strict constant c)
    for r in reports
        .iter()
        .filter(|r| r.body_descriptor.starts_with("body001") || r.body_descriptor.starts_with("body002"))
    {
        if r.name.starts_with("isoperimetric") && !r.name.contains("p=-8") {
            assert!(
                matches!(r.verdict, Verdict::EqualityCase),
                "{} on {} gave {:?} (margin {}, tol {})",
                r.name,
                r.body_descriptor,
                r.verdict,
                r.margin,
                r.tolerance_used
            );
        }
        if r.name.starts_with("santalo-product") {
            assert!(
                matches!(r.verdict, Verdict::EqualityCase),
                "{} on {} gave {:?} (margin {})",
                r.name,
                r.body_descriptor,
                r.verdict,
                r.margin
            );
        }
    }
    let elapsed = start.elapsed();
    assert!(elapsed.as_secs_f64() < 600.0, "took {elapsed:?}");
    println!(
        "criterion 08 inequality suite: PASS ({} checks, {elapsed:?})",
        reports.len()
    );
}

#[test]
fn c09_rounded_body_bounds() {
    let start = Instant::now();
    let grid = grid_circle(4096).unwrap();
    for p in [0.0, 1.0, 2.0, -1.0, -0.5, -4.0] {
        let r = rounded_body_bounds(100.0, 0.01, p, &grid).unwrap();
        assert!(
            matches!(r.verdict, Verdict::Holds) && r.margin > 0.0,
            "p = {p}: verdict {:?}, lhs {}, rhs {}, margin {}",
            r.verdict,
            r.lhs,
            r.rhs,
            r.margin
        );
    }
    let elapsed = start.elapsed();
    println!("criterion 09 rounded-body bounds: PASS ({elapsed:?})");
}

#[test]
fn c10_suite_determinism() {
    let start = Instant::now();
    let exe = env!("CARGO_BIN_EXE_lpasa");
    let dir = std::env::temp_dir();
    let out1 = dir.join(format!("lpasa-acc-suite-{}-1.csv", std::process::id()));
    let out2 = dir.join(format!("lpasa-acc-suite-{}-2.csv", std::process::id()));
    for out in [&out1, &out2] {
        let status = std::process::Command::new(exe)
            .args([
                "suite",
                "--seed",
                "7",
                "--grid",
                "circle:512",
                "--santalo-c",
                "0.25",
                "--format",
                "csv",
                "--out",
            ])
            .arg(out)
            .status()
            .expect("suite run");
        assert!(status.success(), "suite exited with {status}");
    }
    let a = std::fs::read(&out1).unwrap();
    let b = std::fs::read(&out2).unwrap();
    assert!(!a.is_empty());
    assert_eq!(a, b, "suite outputs differ between identical runs");
    std::fs::remove_file(&out1).ok();
    std::fs::remove_file(&out2).ok();
    let elapsed = start.elapsed();
    println!("criterion 10 suite determinism: PASS ({elapsed:?})");
}
