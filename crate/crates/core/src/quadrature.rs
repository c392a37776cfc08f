//! Quadrature over the unit sphere S^{n-1}.
//!
//! Three regimes are provided: a uniform (trapezoid) rule on the circle,
//! a Gauss-Legendre x uniform product rule on S^2, and seeded Monte Carlo
//! for higher dimensions. Every grid carries a coarser companion used to
//! report an error estimate by resolution halving; Monte Carlo grids report
//! the sample standard error instead.

use crate::bodies::Direction;
use crate::error::{Error, Result};
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Volume of the n-dimensional Euclidean unit ball.
pub fn unit_ball_volume(n: usize) -> f64 {
    // V_0 = 1, V_1 = 2, V_n = V_{n-2} * 2 pi / n
    match n {
        0 => 1.0,
        1 => 2.0,
        _ => unit_ball_volume(n - 2) * 2.0 * std::f64::consts::PI / n as f64,
    }
}

/// Surface area of S^{n-1}, i.e. n * |B_2^n|.
pub fn sphere_area(n: usize) -> f64 {
    n as f64 * unit_ball_volume(n)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GridScheme {
    /// Equally spaced angles on S^1 with uniform weights (trapezoid rule).
    CircleUniform,
    /// Gauss-Legendre in the polar cosine times uniform azimuth on S^2.
    Sphere3Product,
    /// Normalized Gaussian directions with equal weights.
    MonteCarlo,
}

impl GridScheme {
    pub fn name(&self) -> &'static str {
        match self {
            GridScheme::CircleUniform => "circle-uniform",
            GridScheme::Sphere3Product => "sphere3-product",
            GridScheme::MonteCarlo => "mc",
        }
    }
}

/// Quadrature nodes and weights on S^{n-1}.
#[derive(Debug, Clone)]
pub struct SphereGrid {
    pub dimension: usize,
    pub nodes: Vec<Direction>,
    pub weights: Vec<f64>,
    pub scheme: GridScheme,
    pub resolution: usize,
    pub seed: Option<u64>,
    /// Companion grid at half resolution, used for error estimates.
    coarse: Option<Box<SphereGrid>>,
}

/// Result of a quadrature evaluation.
#[derive(Debug, Clone, Copy)]
pub struct IntegralResult {
    pub value: f64,
    pub error_estimate: f64,
    pub nodes_used: usize,
}

/// Outcome of integrating a pointwise-evaluated function: either a finite
/// value with an error estimate, or a divergence flag raised because the
/// integrand was non-finite at some node.
#[derive(Debug, Clone, Copy)]
pub enum Integration {
    Value(IntegralResult),
    Divergent { nodes_used: usize },
}

impl Integration {
    pub fn value(&self) -> Option<IntegralResult> {
        match self {
            Integration::Value(r) => Some(*r),
            Integration::Divergent { .. } => None,
        }
    }

    pub fn is_divergent(&self) -> bool {
        matches!(self, Integration::Divergent { .. })
    }
}

/// Uniform grid of N angles on the circle; spectrally accurate for smooth
/// periodic integrands.
pub fn grid_circle(n_nodes: usize) -> Result<SphereGrid> {
    if n_nodes < 8 {
        return Err(Error::Config(format!(
            "circle grid needs at least 8 nodes, got {n_nodes}"
        )));
    }
    let mut grid = circle_unchecked(n_nodes);
    if n_nodes.is_multiple_of(2) && n_nodes / 2 >= 8 {
        grid.coarse = Some(Box::new(circle_unchecked(n_nodes / 2)));
    }
    Ok(grid)
}

fn circle_unchecked(n_nodes: usize) -> SphereGrid {
    let w = 2.0 * std::f64::consts::PI / n_nodes as f64;
    let nodes = (0..n_nodes)
        .map(|i| Direction::from_angle(2.0 * std::f64::consts::PI * i as f64 / n_nodes as f64))
        .collect();
    SphereGrid {
        dimension: 2,
        nodes,
        weights: vec![w; n_nodes],
        scheme: GridScheme::CircleUniform,
        resolution: n_nodes,
        seed: None,
        coarse: None,
    }
}

/// Product rule on S^2: Gauss-Legendre nodes in cos(polar) and uniform
/// azimuth. Exact for spherical polynomials of moderate degree.
pub fn grid_sphere3(n_theta: usize, n_phi: usize) -> Result<SphereGrid> {
    if n_theta < 8 || n_phi < 4 {
        return Err(Error::Config(format!(
            "sphere3 grid needs n_theta >= 8 and n_phi >= 4, got {n_theta}x{n_phi}"
        )));
    }
    let mut grid = sphere3_unchecked(n_theta, n_phi);
    if n_theta / 2 >= 8 && n_phi / 2 >= 4 {
        grid.coarse = Some(Box::new(sphere3_unchecked(n_theta / 2, n_phi / 2)));
    }
    Ok(grid)
}

fn sphere3_unchecked(n_theta: usize, n_phi: usize) -> SphereGrid {
    let (gl_nodes, gl_weights) = gauss_legendre(n_phi);
    let dtheta = 2.0 * std::f64::consts::PI / n_theta as f64;
    let mut nodes = Vec::with_capacity(n_theta * n_phi);
    let mut weights = Vec::with_capacity(n_theta * n_phi);
    for (z, wz) in gl_nodes.iter().zip(gl_weights.iter()) {
        let r = (1.0 - z * z).max(0.0).sqrt();
        for i in 0..n_theta {
            let t = dtheta * i as f64;
            nodes.push(Direction::new_unchecked(vec![
                r * t.cos(),
                r * t.sin(),
                *z,
            ]));
            weights.push(wz * dtheta);
        }
    }
    SphereGrid {
        dimension: 3,
        nodes,
        weights,
        scheme: GridScheme::Sphere3Product,
        resolution: n_theta * n_phi,
        seed: None,
        coarse: None,
    }
}

/// Monte Carlo grid: N rotation-invariant directions with equal weights
/// summing to |S^{n-1}|. Deterministic for a fixed seed.
pub fn grid_mc(dimension: usize, n_nodes: usize, seed: u64) -> Result<SphereGrid> {
    if dimension < 2 {
        return Err(Error::Config(format!(
            "monte carlo grid needs dimension >= 2, got {dimension}"
        )));
    }
    if n_nodes < 1000 {
        return Err(Error::Config(format!(
            "monte carlo grid needs at least 1000 nodes, got {n_nodes}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut nodes = Vec::with_capacity(n_nodes);
    while nodes.len() < n_nodes {
        let mut v = vec![0.0; dimension];
        let mut norm2 = 0.0;
        for x in v.iter_mut() {
            *x = standard_normal(&mut rng);
            norm2 += *x * *x;
        }
        if norm2 < 1e-24 {
            continue;
        }
        let norm = norm2.sqrt();
        for x in v.iter_mut() {
            *x /= norm;
        }
        nodes.push(Direction::new_unchecked(v));
    }
    let w = sphere_area(dimension) / n_nodes as f64;
    Ok(SphereGrid {
        dimension,
        nodes,
        weights: vec![w; n_nodes],
        scheme: GridScheme::MonteCarlo,
        resolution: n_nodes,
        seed: Some(seed),
        coarse: None,
    })
}

fn standard_normal<R: Rng>(rng: &mut R) -> f64 {
    // Box-Muller with the second variate discarded, keeping the stream
    // deterministic and dependency-free.
    loop {
        let u1: f64 = rng.gen::<f64>();
        if u1 <= f64::MIN_POSITIVE {
            continue;
        }
        let u2: f64 = rng.gen::<f64>();
        return (-2.0 * u1.ln()).sqrt() * (2.0 * std::f64::consts::PI * u2).cos();
    }
}

impl SphereGrid {
    pub fn node_count(&self) -> usize {
        self.nodes.len()
    }

    pub fn total_weight(&self) -> f64 {
        kahan_sum(self.weights.iter().copied())
    }

    /// Sum w_i f(u_i) in fixed node order with compensated summation.
    /// Any non-finite node value raises the divergence flag.
    pub fn integrate<F: FnMut(&Direction) -> f64>(&self, mut f: F) -> Integration {
        self.integrate_dyn(&mut f)
    }

    fn integrate_dyn(&self, f: &mut dyn FnMut(&Direction) -> f64) -> Integration {
        let mut values = Vec::with_capacity(self.nodes.len());
        for u in &self.nodes {
            let v = f(u);
            if !v.is_finite() {
                return Integration::Divergent {
                    nodes_used: self.nodes.len(),
                };
            }
            values.push(v);
        }
        let value = kahan_sum(
            values
                .iter()
                .zip(self.weights.iter())
                .map(|(v, w)| v * w),
        );
        let error_estimate = match self.scheme {
            GridScheme::MonteCarlo => {
                let n = values.len() as f64;
                let mean = values.iter().sum::<f64>() / n;
                let var = values.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>()
                    / (n - 1.0).max(1.0);
                sphere_area(self.dimension) * (var / n).sqrt()
            }
            _ => match &self.coarse {
                Some(coarse) => match coarse.integrate_dyn(f) {
                    Integration::Value(r) => (value - r.value).abs(),
                    Integration::Divergent { .. } => f64::INFINITY,
                },
                None => 0.0,
            },
        };
        if !error_estimate.is_finite() {
            return Integration::Divergent {
                nodes_used: self.nodes.len(),
            };
        }
        Integration::Value(IntegralResult {
            value,
            error_estimate,
            nodes_used: self.nodes.len(),
        })
    }
}

/// Free-function form of [`SphereGrid::integrate`].
pub fn integrate<F: FnMut(&Direction) -> f64>(f: F, grid: &SphereGrid) -> Integration {
    grid.integrate(f)
}

fn kahan_sum<I: Iterator<Item = f64>>(it: I) -> f64 {
    let mut sum = 0.0;
    let mut c = 0.0;
    for x in it {
        let y = x - c;
        let t = sum + y;
        c = (t - sum) - y;
        sum = t;
    }
    sum
}

/// Gauss-Legendre nodes and weights on [-1, 1], by Newton iteration on the
/// Legendre recurrence.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    let m = n.div_ceil(2);
    for i in 0..m {
        // Tricomi initial guess for the i-th root.
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        for _ in 0..100 {
            let (p, dp) = legendre_and_derivative(n, x);
            let dx = p / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let (_, dp) = legendre_and_derivative(n, x);
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    if n % 2 == 1 {
        let (_, dp) = legendre_and_derivative(n, 0.0);
        nodes[n / 2] = 0.0;
        weights[n / 2] = 2.0 / (dp * dp);
    }
    (nodes, weights)
}

fn legendre_and_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, dp)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn circle_rejects_small_grids() {
        assert!(grid_circle(4).is_err());
        assert!(grid_circle(8).is_ok());
    }

    #[test]
    fn circle_weights_sum_to_2pi() {
        let g = grid_circle(1024).unwrap();
        assert_relative_eq!(g.total_weight(), 2.0 * std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn circle_integrates_cos_squared_exactly() {
        // Trapezoid rule is exact for harmonics below the grid frequency.
        let g = grid_circle(64).unwrap();
        let r = g
            .integrate(|u| {
                let c = u.coords()[0];
                c * c
            })
            .value()
            .unwrap();
        assert_relative_eq!(r.value, std::f64::consts::PI, epsilon = 1e-12);
    }

    #[test]
    fn sphere3_weights_and_moment() {
        let g = grid_sphere3(32, 16).unwrap();
        assert_relative_eq!(g.total_weight(), 4.0 * std::f64::consts::PI, epsilon = 1e-10);
        let r = g
            .integrate(|u| {
                let z = u.coords()[2];
                z * z
            })
            .value()
            .unwrap();
        assert_relative_eq!(r.value, 4.0 * std::f64::consts::PI / 3.0, epsilon = 1e-10);
        let ones = g.integrate(|_| 1.0).value().unwrap();
        assert_relative_eq!(ones.value, 4.0 * std::f64::consts::PI, epsilon = 1e-10);
    }

    #[test]
    fn sphere3_rejects_undersized() {
        assert!(grid_sphere3(4, 16).is_err());
        assert!(grid_sphere3(16, 2).is_err());
    }

    #[test]
    fn mc_is_deterministic_and_normalized() {
        let a = grid_mc(4, 2000, 7).unwrap();
        let b = grid_mc(4, 2000, 7).unwrap();
        for (u, v) in a.nodes.iter().zip(b.nodes.iter()) {
            assert_eq!(u.coords(), v.coords());
        }
        assert_relative_eq!(a.total_weight(), sphere_area(4), epsilon = 1e-9);
    }

    #[test]
    fn mc_symmetry_moment_within_three_standard_errors() {
        let g = grid_mc(4, 20000, 42).unwrap();
        let r = g
            .integrate(|u| {
                let x = u.coords()[0];
                x * x
            })
            .value()
            .unwrap();
        let exact = sphere_area(4) / 4.0;
        assert!(
            (r.value - exact).abs() <= 3.0 * r.error_estimate,
            "value {} exact {} se {}",
            r.value,
            exact,
            r.error_estimate
        );
    }

    #[test]
    fn divergent_integrand_is_flagged() {
        let g = grid_circle(64).unwrap();
        let out = g.integrate(|u| {
            let c = u.coords()[0];
            if c > 0.999 {
                f64::INFINITY
            } else {
                1.0
            }
        });
        assert!(out.is_divergent());
    }

    #[test]
    fn integrate_is_bit_deterministic() {
        let g = grid_circle(512).unwrap();
        let f = |u: &Direction| (u.coords()[0] * 3.0).exp() + u.coords()[1];
        let a = g.integrate(f).value().unwrap().value;
        let b = g.integrate(f).value().unwrap().value;
        assert_eq!(a.to_bits(), b.to_bits());
    }

    #[test]
    fn refinement_changes_less_than_error_estimate_on_smooth_integrands() {
        use rand::Rng;
        use rand::SeedableRng;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(123);
        let mut ok = 0;
        let total = 100;
        for _ in 0..total {
            let a: f64 = rng.gen_range(-2.0..2.0);
            let b: f64 = rng.gen_range(-2.0..2.0);
            let c: f64 = rng.gen_range(0.5..4.0);
            let f = move |u: &Direction| (a * u.coords()[0] + b * u.coords()[1]).exp() + (c * u.coords()[0]).sin();
            let g32 = grid_circle(32).unwrap();
            let g64 = grid_circle(64).unwrap();
            let r32 = g32.integrate(f).value().unwrap();
            let r64 = g64.integrate(f).value().unwrap();
            if (r64.value - r32.value).abs() <= r32.error_estimate.max(1e-14) {
                ok += 1;
            }
        }
        assert!(ok * 100 >= 95 * total, "only {ok}/{total} within estimate");
    }

    #[test]
    fn gauss_legendre_integrates_polynomials() {
        let (x, w) = gauss_legendre(12);
        // integral of x^10 over [-1,1] = 2/11
        let v: f64 = x.iter().zip(w.iter()).map(|(x, w)| w * x.powi(10)).sum();
        assert_relative_eq!(v, 2.0 / 11.0, epsilon = 1e-13);
        let s: f64 = w.iter().sum();
        assert_relative_eq!(s, 2.0, epsilon = 1e-13);
    }

    #[test]
    fn ball_volumes() {
        assert_relative_eq!(unit_ball_volume(2), std::f64::consts::PI, epsilon = 1e-14);
        assert_relative_eq!(
            unit_ball_volume(3),
            4.0 * std::f64::consts::PI / 3.0,
            epsilon = 1e-14
        );
        assert_relative_eq!(sphere_area(2), 2.0 * std::f64::consts::PI, epsilon = 1e-14);
        assert_relative_eq!(sphere_area(4), 2.0 * std::f64::consts::PI.powi(2), epsilon = 1e-12);
    }
}
