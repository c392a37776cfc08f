//! Smooth planar bodies described by a truncated Fourier series of the
//! support function h(theta). The C^2_+ condition h + h'' > 0 is enforced
//! on a dense grid at construction, so every instance is a valid convex
//! body with strictly positive curvature function.

use crate::error::{Error, Result};

/// Grid used for the construction-time convexity check.
pub const CONVEXITY_CHECK_GRID: usize = 4096;

/// Harmonic budget for least-squares polar / linear-image fits. Polar
/// profiles of strongly curved bodies decay slowly, so this sits well
/// above the 64-harmonic default used for directly constructed bodies.
pub const DEFAULT_FIT_HARMONICS: usize = 256;

/// Sample count for the fits; must exceed twice the harmonic budget.
pub const FIT_SAMPLES: usize = 2048;

#[derive(Debug, Clone, PartialEq)]
pub struct PlanarSupport {
    a0: f64,
    /// Coefficient of cos(k theta), index 0 holding k = 1.
    cos_coeffs: Vec<f64>,
    /// Coefficient of sin(k theta), index 0 holding k = 1.
    sin_coeffs: Vec<f64>,
    /// Sup-norm residual of the Fourier fit that produced this body;
    /// zero for directly constructed bodies.
    fit_residual: f64,
}

impl PlanarSupport {
    pub fn new(a0: f64, cos_coeffs: Vec<f64>, sin_coeffs: Vec<f64>) -> Result<Self> {
        Self::with_residual(a0, cos_coeffs, sin_coeffs, 0.0)
    }

    pub fn with_residual(
        a0: f64,
        mut cos_coeffs: Vec<f64>,
        mut sin_coeffs: Vec<f64>,
        fit_residual: f64,
    ) -> Result<Self> {
        let m = cos_coeffs.len().max(sin_coeffs.len());
        cos_coeffs.resize(m, 0.0);
        sin_coeffs.resize(m, 0.0);
        // trailing coefficients at rounding level carry no signal but
        // would still enter h'' scaled by k^2
        let trim = 1e-15 * a0.abs().max(1e-300);
        while cos_coeffs.last().is_some_and(|c| c.abs() < trim)
            && sin_coeffs.last().is_some_and(|s| s.abs() < trim)
        {
            cos_coeffs.pop();
            sin_coeffs.pop();
        }
        if !a0.is_finite()
            || cos_coeffs.iter().chain(sin_coeffs.iter()).any(|c| !c.is_finite())
        {
            return Err(Error::InvalidBody("non-finite Fourier coefficient".into()));
        }
        let body = PlanarSupport {
            a0,
            cos_coeffs,
            sin_coeffs,
            fit_residual,
        };
        let (h_min, f_min) = body.grid_minima(CONVEXITY_CHECK_GRID);
        if h_min <= 0.0 {
            return Err(Error::InvalidBody(format!(
                "support function not positive (min h = {h_min:.3e}); origin must be interior"
            )));
        }
        if f_min <= 0.0 {
            return Err(Error::InvalidBody(format!(
                "curvature condition h + h'' > 0 fails on the check grid (min = {f_min:.3e})"
            )));
        }
        Ok(body)
    }

    /// Unit disc (h = 1).
    pub fn disc() -> Self {
        PlanarSupport {
            a0: 1.0,
            cos_coeffs: vec![],
            sin_coeffs: vec![],
            fit_residual: 0.0,
        }
    }

    /// Projects uniform samples h(2 pi j / N) onto harmonics up to `m_max`
    /// by discrete Fourier projection (the least-squares fit for this
    /// basis) and validates the result. The sup-norm mismatch against the
    /// samples is recorded as the fit residual.
    pub fn fit_from_samples(values: &[f64], m_max: usize) -> Result<Self> {
        let n = values.len();
        if n < 2 * m_max + 2 {
            return Err(Error::Config(format!(
                "need more than {} samples to fit {m_max} harmonics, got {n}",
                2 * m_max + 1
            )));
        }
        if values.iter().any(|v| !v.is_finite()) {
            return Err(Error::InvalidBody("non-finite support sample".into()));
        }
        let a0 = values.iter().sum::<f64>() / n as f64;
        let mut cos_coeffs = vec![0.0; m_max];
        let mut sin_coeffs = vec![0.0; m_max];
        for (j, v) in values.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            let (c1, s1) = (theta.cos(), theta.sin());
            let (mut ck, mut sk) = (1.0, 0.0);
            for k in 0..m_max {
                let c_next = ck * c1 - sk * s1;
                let s_next = sk * c1 + ck * s1;
                ck = c_next;
                sk = s_next;
                cos_coeffs[k] += v * ck;
                sin_coeffs[k] += v * sk;
            }
        }
        for k in 0..m_max {
            cos_coeffs[k] *= 2.0 / n as f64;
            sin_coeffs[k] *= 2.0 / n as f64;
        }
        let candidate = PlanarSupport {
            a0,
            cos_coeffs,
            sin_coeffs,
            fit_residual: 0.0,
        };
        let mut residual: f64 = 0.0;
        for (j, v) in values.iter().enumerate() {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
            residual = residual.max((candidate.eval(theta).0 - v).abs());
        }
        Self::with_residual(
            candidate.a0,
            candidate.cos_coeffs,
            candidate.sin_coeffs,
            residual,
        )
    }

    /// Evaluates (h, h', h'') at normal angle theta.
    pub fn eval(&self, theta: f64) -> (f64, f64, f64) {
        let (c1, s1) = (theta.cos(), theta.sin());
        let (mut ck, mut sk) = (1.0, 0.0);
        let mut h = self.a0;
        let mut dh = 0.0;
        let mut ddh = 0.0;
        for k in 0..self.cos_coeffs.len() {
            let c_next = ck * c1 - sk * s1;
            let s_next = sk * c1 + ck * s1;
            ck = c_next;
            sk = s_next;
            let (a, b) = (self.cos_coeffs[k], self.sin_coeffs[k]);
            let kf = (k + 1) as f64;
            let term = a * ck + b * sk;
            h += term;
            dh += kf * (b * ck - a * sk);
            ddh -= kf * kf * term;
        }
        (h, dh, ddh)
    }

    pub fn a0(&self) -> f64 {
        self.a0
    }

    pub fn cos_coeffs(&self) -> &[f64] {
        &self.cos_coeffs
    }

    pub fn sin_coeffs(&self) -> &[f64] {
        &self.sin_coeffs
    }

    pub fn harmonic_count(&self) -> usize {
        self.cos_coeffs.len()
    }

    pub fn fit_residual(&self) -> f64 {
        self.fit_residual
    }

    /// Exact area from the Parseval identity for
    /// (1/2) integral (h^2 - h'^2) d theta.
    pub fn area_exact(&self) -> f64 {
        let mut area = std::f64::consts::PI * self.a0 * self.a0;
        for k in 0..self.cos_coeffs.len() {
            let kf = (k + 1) as f64;
            let amp2 = self.cos_coeffs[k] * self.cos_coeffs[k]
                + self.sin_coeffs[k] * self.sin_coeffs[k];
            area += 0.5 * std::f64::consts::PI * (1.0 - kf * kf) * amp2;
        }
        area
    }

    /// Translate the body by `c` (support of K + c is h + <c, u>), which
    /// only touches the first harmonic.
    pub fn translated(&self, c: [f64; 2]) -> Result<Self> {
        let mut cos_coeffs = self.cos_coeffs.clone();
        let mut sin_coeffs = self.sin_coeffs.clone();
        if cos_coeffs.is_empty() {
            cos_coeffs.push(0.0);
            sin_coeffs.push(0.0);
        }
        cos_coeffs[0] += c[0];
        sin_coeffs[0] += c[1];
        Self::with_residual(self.a0, cos_coeffs, sin_coeffs, self.fit_residual)
    }

    fn grid_minima(&self, grid: usize) -> (f64, f64) {
        let mut h_min = f64::INFINITY;
        let mut f_min = f64::INFINITY;
        for j in 0..grid {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / grid as f64;
            let (h, _, ddh) = self.eval(theta);
            h_min = h_min.min(h);
            f_min = f_min.min(h + ddh);
        }
        (h_min, f_min)
    }
}
