//! Python bindings for the lpasa convex geometry library: body
//! construction, spherical grids, the as_p functionals, floating and
//! surface body limits, and the inequality checks.

// the lint fires inside #[pymethods]-generated glue
#![allow(clippy::useless_conversion)]

use lpasa::asa;
use lpasa::bodies::schema::BodySpec;
use lpasa::floating;
use lpasa::inequalities;
use lpasa::quadrature;
use lpasa::{ConvexBody, Direction, PExponent};
use pyo3::exceptions::{PyRuntimeError, PyValueError};
use pyo3::prelude::*;

fn err_py(e: lpasa::Error) -> PyErr {
    match e {
        lpasa::Error::Config(_) | lpasa::Error::Precondition(_) => {
            PyValueError::new_err(e.to_string())
        }
        other => PyRuntimeError::new_err(other.to_string()),
    }
}

fn direction(coords: Vec<f64>) -> PyResult<Direction> {
    Direction::new(coords).map_err(err_py)
}

#[pyclass(name = "Body", frozen)]
struct PyBody {
    inner: ConvexBody,
}

#[pymethods]
impl PyBody {
    #[staticmethod]
    fn ball(dimension: usize) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::unit_ball(dimension).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn ellipsoid(semi_axes: Vec<f64>) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::ellipsoid(semi_axes).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn planar_support(a0: f64, cos: Vec<f64>, sin: Vec<f64>) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::planar_support(a0, cos, sin).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn cube(dimension: usize) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::cube(dimension).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn cross_polytope(dimension: usize) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::cross_polytope(dimension).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn rounded_intersection(big_radius: f64, corner_radius: f64) -> PyResult<Self> {
        Ok(PyBody {
            inner: ConvexBody::rounded_intersection(big_radius, corner_radius).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn random_smooth(seed: u64, harmonic_budget: usize, perturbation_scale: f64) -> PyResult<Self> {
        Ok(PyBody {
            inner: inequalities::random_smooth_body(seed, harmonic_budget, perturbation_scale)
                .map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn from_json(text: &str) -> PyResult<Self> {
        let spec: BodySpec =
            serde_json::from_str(text).map_err(|e| PyValueError::new_err(e.to_string()))?;
        Ok(PyBody {
            inner: spec.to_body().map_err(err_py)?,
        })
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&BodySpec::from_body(&self.inner))
            .map_err(|e| PyRuntimeError::new_err(e.to_string()))
    }

    #[getter]
    fn kind(&self) -> &'static str {
        self.inner.kind_name()
    }

    #[getter]
    fn dimension(&self) -> usize {
        self.inner.dimension()
    }

    fn support(&self, u: Vec<f64>) -> PyResult<f64> {
        Ok(self.inner.support(&direction(u)?))
    }

    fn radial(&self, u: Vec<f64>) -> PyResult<f64> {
        Ok(self.inner.radial(&direction(u)?))
    }

    fn curvature_function(&self, u: Vec<f64>) -> PyResult<f64> {
        self.inner
            .curvature_function(&direction(u)?)
            .map_err(err_py)
    }

    /// Returns (position, support value, curvature function) of the
    /// boundary point with outer normal u.
    fn boundary_point(&self, u: Vec<f64>) -> PyResult<(Vec<f64>, f64, f64)> {
        let bp = self.inner.boundary_point(&direction(u)?).map_err(err_py)?;
        Ok((bp.position, bp.support_value, bp.curvature_fn))
    }

    fn volume(&self, grid: &PyGrid) -> f64 {
        self.inner.volume(&grid.inner)
    }

    /// Returns (polar body, construction method, fit residual).
    fn polar(&self) -> PyResult<(PyBody, String, f64)> {
        let polar = self.inner.polar_body().map_err(err_py)?;
        Ok((
            PyBody { inner: polar.body },
            polar.method.to_string(),
            polar.fit_residual,
        ))
    }

    fn curvature_duality_residual(&self, u: Vec<f64>, grid: &PyGrid) -> PyResult<f64> {
        self.inner
            .curvature_duality_check(&direction(u)?, &grid.inner)
            .map_err(err_py)
    }

    fn __repr__(&self) -> String {
        format!(
            "Body(kind={}, n={})",
            self.inner.kind_name(),
            self.inner.dimension()
        )
    }
}

#[pyclass(name = "Grid", frozen)]
struct PyGrid {
    inner: quadrature::SphereGrid,
}

#[pymethods]
impl PyGrid {
    #[staticmethod]
    fn circle(nodes: usize) -> PyResult<Self> {
        Ok(PyGrid {
            inner: quadrature::grid_circle(nodes).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn sphere3(n_theta: usize, n_phi: usize) -> PyResult<Self> {
        Ok(PyGrid {
            inner: quadrature::grid_sphere3(n_theta, n_phi).map_err(err_py)?,
        })
    }

    #[staticmethod]
    fn mc(dimension: usize, nodes: usize, seed: u64) -> PyResult<Self> {
        Ok(PyGrid {
            inner: quadrature::grid_mc(dimension, nodes, seed).map_err(err_py)?,
        })
    }

    #[getter]
    fn node_count(&self) -> usize {
        self.inner.node_count()
    }

    #[getter]
    fn total_weight(&self) -> f64 {
        self.inner.total_weight()
    }

    fn __repr__(&self) -> String {
        format!(
            "Grid(scheme={}, nodes={})",
            self.inner.scheme.name(),
            self.inner.node_count()
        )
    }
}

fn asa_tuple(v: asa::AsaValue) -> (Option<f64>, f64, String) {
    (v.value, v.error_estimate, v.method.name().to_string())
}

/// as_p by the sphere-form integral: (value or None, error, method).
#[pyfunction]
fn asa_sphere_form(body: &PyBody, p: f64, grid: &PyGrid) -> PyResult<(Option<f64>, f64, String)> {
    Ok(asa_tuple(
        asa::asa_sphere_form(&body.inner, PExponent::from(p), &grid.inner).map_err(err_py)?,
    ))
}

/// as_p by the boundary-form integral pushed to the sphere.
#[pyfunction]
fn asa_boundary_form(
    body: &PyBody,
    p: f64,
    grid: &PyGrid,
) -> PyResult<(Option<f64>, f64, String)> {
    Ok(asa_tuple(
        asa::asa_boundary_form(&body.inner, PExponent::from(p), &grid.inner).map_err(err_py)?,
    ))
}

/// as_{+-inf} = n |K polar|.
#[pyfunction]
fn asa_infinity(body: &PyBody, grid: &PyGrid) -> PyResult<(Option<f64>, f64, String)> {
    Ok(asa_tuple(
        asa::asa_infinity(&body.inner, &grid.inner).map_err(err_py)?,
    ))
}

/// The sup-form as_{-n}.
#[pyfunction]
fn asa_minus_n(body: &PyBody, grid: &PyGrid) -> PyResult<(Option<f64>, f64, String)> {
    Ok(asa_tuple(
        asa::asa_minus_n(&body.inner, &grid.inner).map_err(err_py)?,
    ))
}

/// The surface-body weight f_p at the boundary point with normal u.
#[pyfunction]
fn f_p_weight(body: &PyBody, p: f64, u: Vec<f64>) -> PyResult<f64> {
    asa::f_p_weight(&body.inner, PExponent::from(p), &direction(u)?).map_err(err_py)
}

#[pyclass(name = "LimitEstimate", frozen)]
struct PyLimitEstimate {
    #[pyo3(get)]
    samples: Vec<(f64, f64)>,
    #[pyo3(get)]
    extrapolated: f64,
    #[pyo3(get)]
    fitted_exponent: f64,
    #[pyo3(get)]
    target: Option<f64>,
    #[pyo3(get)]
    relative_gap: Option<f64>,
}

impl From<floating::LimitEstimate> for PyLimitEstimate {
    fn from(est: floating::LimitEstimate) -> Self {
        PyLimitEstimate {
            samples: est.samples,
            extrapolated: est.extrapolated,
            fitted_exponent: est.fitted_exponent,
            target: est.target,
            relative_gap: est.relative_gap,
        }
    }
}

/// Floating-body limit along a decreasing schedule.
#[pyfunction]
fn floating_limit(
    body: &PyBody,
    schedule: Vec<f64>,
    ndirs: usize,
    grid: &PyGrid,
) -> PyResult<PyLimitEstimate> {
    Ok(
        floating::floating_limit(&body.inner, &schedule, ndirs, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

/// Surface-body limit with the f_p weight.
#[pyfunction]
fn surface_limit_fp(
    body: &PyBody,
    p: f64,
    schedule: Vec<f64>,
    ndirs: usize,
    grid: &PyGrid,
) -> PyResult<PyLimitEstimate> {
    let nf = body.inner.dimension() as f64;
    let (ek, eh) = asa::f_p_exponents(nf, &PExponent::from(p));
    let inner = &body.inner;
    let weight = |theta: f64| {
        let u = Direction::from_angle(theta);
        let h = inner.support(&u);
        let f = inner.curvature_function(&u).expect("C2+ body");
        (1.0 / f).powf(ek) * h.powf(-eh)
    };
    Ok(
        floating::surface_limit(inner, &weight, &schedule, ndirs, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

/// Closed-form cube counterexample: (deficit lower bound, ratio).
#[pyfunction]
fn cube_counterexample(n: usize, delta: f64) -> PyResult<(f64, f64)> {
    floating::cube_counterexample(n, delta).map_err(err_py)
}

#[pyclass(name = "Report", frozen)]
struct PyReport {
    #[pyo3(get)]
    name: String,
    #[pyo3(get)]
    body: String,
    #[pyo3(get)]
    lhs: f64,
    #[pyo3(get)]
    rhs: f64,
    #[pyo3(get)]
    margin: f64,
    #[pyo3(get)]
    tolerance: f64,
    #[pyo3(get)]
    verdict: String,
}

impl From<inequalities::InequalityReport> for PyReport {
    fn from(r: inequalities::InequalityReport) -> Self {
        PyReport {
            name: r.name,
            body: r.body_descriptor,
            lhs: r.lhs,
            rhs: r.rhs,
            margin: r.margin,
            tolerance: r.tolerance_used,
            verdict: r.verdict.name().to_string(),
        }
    }
}

#[pyfunction]
fn holder_triple_check(body: &PyBody, r: f64, s: f64, t: f64, grid: &PyGrid) -> PyResult<PyReport> {
    Ok(
        inequalities::holder_triple_check(&body.inner, r, s, t, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

#[pyfunction]
fn monotonicity_check(body: &PyBody, r: f64, t: f64, grid: &PyGrid) -> PyResult<PyReport> {
    Ok(
        inequalities::monotonicity_check(&body.inner, r, t, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

#[pyfunction]
#[pyo3(signature = (body, p, grid, santalo_constant = 0.25))]
fn isoperimetric_check(
    body: &PyBody,
    p: f64,
    grid: &PyGrid,
    santalo_constant: f64,
) -> PyResult<PyReport> {
    Ok(inequalities::isoperimetric_check(
        &body.inner,
        PExponent::from(p),
        &grid.inner,
        santalo_constant,
    )
    .map_err(err_py)?
    .into())
}

#[pyfunction]
fn santalo_product_check(body: &PyBody, p: f64, grid: &PyGrid) -> PyResult<PyReport> {
    Ok(
        inequalities::santalo_product_check(&body.inner, p, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

#[pyfunction]
fn duality_check(body: &PyBody, p: f64, grid: &PyGrid) -> PyResult<PyReport> {
    Ok(inequalities::duality_check(&body.inner, p, &grid.inner)
        .map_err(err_py)?
        .into())
}

#[pyfunction]
fn rounded_body_bounds(
    big_radius: f64,
    corner_radius: f64,
    p: f64,
    grid: &PyGrid,
) -> PyResult<PyReport> {
    Ok(
        inequalities::rounded_body_bounds(big_radius, corner_radius, p, &grid.inner)
            .map_err(err_py)?
            .into(),
    )
}

#[pyfunction]
fn minus_n_checks(body: &PyBody, s: f64, p: f64, grid: &PyGrid) -> PyResult<Vec<PyReport>> {
    Ok(inequalities::minus_n_checks(&body.inner, s, p, &grid.inner)
        .map_err(err_py)?
        .into_iter()
        .map(PyReport::from)
        .collect())
}

/// Volume of the unit ball B_2^n.
#[pyfunction]
fn unit_ball_volume(n: usize) -> f64 {
    quadrature::unit_ball_volume(n)
}

#[pymodule]
#[pyo3(name = "lpasa")]
fn lpasa_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add_class::<PyBody>()?;
    m.add_class::<PyGrid>()?;
    m.add_class::<PyLimitEstimate>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(asa_sphere_form, m)?)?;
    m.add_function(wrap_pyfunction!(asa_boundary_form, m)?)?;
    m.add_function(wrap_pyfunction!(asa_infinity, m)?)?;
    m.add_function(wrap_pyfunction!(asa_minus_n, m)?)?;
    m.add_function(wrap_pyfunction!(f_p_weight, m)?)?;
    m.add_function(wrap_pyfunction!(floating_limit, m)?)?;
    m.add_function(wrap_pyfunction!(surface_limit_fp, m)?)?;
    m.add_function(wrap_pyfunction!(cube_counterexample, m)?)?;
    m.add_function(wrap_pyfunction!(holder_triple_check, m)?)?;
    m.add_function(wrap_pyfunction!(monotonicity_check, m)?)?;
    m.add_function(wrap_pyfunction!(isoperimetric_check, m)?)?;
    m.add_function(wrap_pyfunction!(santalo_product_check, m)?)?;
    m.add_function(wrap_pyfunction!(duality_check, m)?)?;
    m.add_function(wrap_pyfunction!(rounded_body_bounds, m)?)?;
    m.add_function(wrap_pyfunction!(minus_n_checks, m)?)?;
    m.add_function(wrap_pyfunction!(unit_ball_volume, m)?)?;
    Ok(())
}
