//! Command implementations for the `lpasa` binary: body loading, grid and
//! schedule parsing, table assembly, and CSV/JSON output with
//! full-precision deterministic formatting.

// `!(x > 0.0)` guards reject NaN inputs
#![allow(clippy::neg_cmp_op_on_partial_ord)]

use lpasa::asa::{asa_boundary_form, asa_sphere_form, AsaValue, PExponent};
use lpasa::bodies::schema::BodySpec;
use lpasa::floating::{cube_counterexample, floating_limit, surface_limit, LimitEstimate};
use lpasa::inequalities::{
    duality_check, rounded_body_bounds, run_suite, BodyEnsemble, InequalityReport, SuiteConfig,
    Verdict,
};
use lpasa::quadrature::{grid_circle, grid_mc, grid_sphere3, SphereGrid};
use lpasa::{ConvexBody, Error};
use std::io::Write;
use std::path::{Path, PathBuf};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VIOLATION: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_DIVERGENT: i32 = 3;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OutputFormat {
    Csv,
    Json,
}

impl std::str::FromStr for OutputFormat {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "csv" => Ok(OutputFormat::Csv),
            "json" => Ok(OutputFormat::Json),
            other => Err(format!("unknown format `{other}`, expected csv or json")),
        }
    }
}

/// Shared run configuration assembled from the CLI flags.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub body_spec_path: Option<PathBuf>,
    pub p_list: Vec<PExponent>,
    pub grid_spec: Option<String>,
    pub schedule: Option<Vec<f64>>,
    pub output_path: Option<PathBuf>,
    pub output_format: OutputFormat,
    pub seed: u64,
    pub santalo_constant: f64,
    pub allow_divergent: bool,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            body_spec_path: None,
            p_list: vec![],
            grid_spec: None,
            schedule: None,
            output_path: None,
            output_format: OutputFormat::Csv,
            seed: 1,
            santalo_constant: 0.25,
            allow_divergent: false,
        }
    }
}

/// Full-precision decimal formatting (17 significant digits) keeping runs
/// byte-for-byte reproducible.
pub fn fmt_full(x: f64) -> String {
    if x.is_nan() {
        "nan".to_string()
    } else if x.is_infinite() {
        if x > 0.0 {
            "inf".to_string()
        } else {
            "-inf".to_string()
        }
    } else {
        format!("{x:.16e}")
    }
}

pub fn parse_p_list(s: &str) -> Result<Vec<PExponent>, String> {
    s.split(',')
        .map(|tok| {
            let tok = tok.trim();
            match tok {
                "inf" | "+inf" | "-inf" | "oo" => Ok(PExponent::Infinity),
                _ => tok
                    .parse::<f64>()
                    .map(PExponent::from)
                    .map_err(|e| format!("bad exponent `{tok}`: {e}")),
            }
        })
        .collect()
}

/// Parses `GEOM:start:ratio:count` into the decreasing geometric schedule
/// start * ratio^{-k}, k = 0..count.
pub fn parse_schedule(s: &str) -> Result<Vec<f64>, String> {
    let parts: Vec<&str> = s.split(':').collect();
    if parts.len() != 4 || !parts[0].eq_ignore_ascii_case("geom") {
        return Err(format!("bad schedule `{s}`, expected GEOM:start:ratio:count"));
    }
    let start: f64 = parts[1].parse().map_err(|e| format!("bad start: {e}"))?;
    let ratio: f64 = parts[2].parse().map_err(|e| format!("bad ratio: {e}"))?;
    let count: usize = parts[3].parse().map_err(|e| format!("bad count: {e}"))?;
    if !(start > 0.0) || !(ratio > 1.0) || count < 2 {
        return Err("schedule needs start > 0, ratio > 1, count >= 2".to_string());
    }
    Ok((0..count).map(|k| start * ratio.powi(-(k as i32))).collect())
}

pub fn load_body(path: &Path) -> Result<ConvexBody, Error> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read body spec {}: {e}", path.display())))?;
    let spec: BodySpec = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("cannot parse body spec {}: {e}", path.display())))?;
    spec.to_body()
}

/// Builds the quadrature grid: `circle:N`, `sphere3:NTHETAxNPHI`, or
/// `mc:N` (seeded); defaults are picked from the body dimension.
pub fn build_grid(spec: Option<&str>, dimension: usize, seed: u64) -> Result<SphereGrid, Error> {
    match spec {
        None => match dimension {
            2 => grid_circle(4096),
            3 => grid_sphere3(128, 64),
            n => grid_mc(n, 200_000, seed),
        },
        Some(s) => {
            let (scheme, res) = s
                .split_once(':')
                .ok_or_else(|| Error::Config(format!("bad grid spec `{s}`")))?;
            match scheme {
                "circle" => {
                    if dimension != 2 {
                        return Err(Error::Config(
                            "circle grids apply to two-dimensional bodies".into(),
                        ));
                    }
                    let n: usize = res
                        .parse()
                        .map_err(|e| Error::Config(format!("bad circle resolution: {e}")))?;
                    grid_circle(n)
                }
                "sphere3" => {
                    if dimension != 3 {
                        return Err(Error::Config(
                            "sphere3 grids apply to three-dimensional bodies".into(),
                        ));
                    }
                    let (a, b) = res
                        .split_once('x')
                        .ok_or_else(|| Error::Config(format!("bad sphere3 resolution `{res}`")))?;
                    grid_sphere3(
                        a.parse()
                            .map_err(|e| Error::Config(format!("bad n_theta: {e}")))?,
                        b.parse()
                            .map_err(|e| Error::Config(format!("bad n_phi: {e}")))?,
                    )
                }
                "mc" => grid_mc(
                    dimension,
                    res.parse()
                        .map_err(|e| Error::Config(format!("bad mc count: {e}")))?,
                    seed,
                ),
                other => Err(Error::Config(format!("unknown grid scheme `{other}`"))),
            }
        }
    }
}

fn grid_label(grid: &SphereGrid) -> String {
    format!("{}:{}", grid.scheme.name(), grid.resolution)
}

fn write_output(path: Option<&Path>, content: &str) -> Result<(), Error> {
    match path {
        Some(p) => std::fs::write(p, content)
            .map_err(|e| Error::Config(format!("cannot write {}: {e}", p.display()))),
        None => std::io::stdout()
            .write_all(content.as_bytes())
            .map_err(|e| Error::Config(format!("cannot write stdout: {e}"))),
    }
}

fn csv_table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut out = String::new();
    out.push_str(&header.join(","));
    out.push('\n');
    for row in rows {
        out.push_str(&row.join(","));
        out.push('\n');
    }
    out
}

fn json_table(header: &[&str], rows: &[Vec<String>]) -> String {
    // values stay strings so the full-precision formatting survives
    let objects: Vec<serde_json::Value> = rows
        .iter()
        .map(|row| {
            let mut map = serde_json::Map::new();
            for (k, v) in header.iter().zip(row.iter()) {
                map.insert((*k).to_string(), serde_json::Value::String(v.clone()));
            }
            serde_json::Value::Object(map)
        })
        .collect();
    let mut s = serde_json::to_string_pretty(&serde_json::Value::Array(objects))
        .expect("string table serializes");
    s.push('\n');
    s
}

fn emit(config: &RunConfig, header: &[&str], rows: &[Vec<String>]) -> Result<(), Error> {
    let content = match config.output_format {
        OutputFormat::Csv => csv_table(header, rows),
        OutputFormat::Json => json_table(header, rows),
    };
    write_output(config.output_path.as_deref(), &content)
}

fn require_body(config: &RunConfig) -> Result<ConvexBody, Error> {
    let path = config
        .body_spec_path
        .as_ref()
        .ok_or_else(|| Error::Config("--body PATH is required".into()))?;
    load_body(path)
}

fn asa_row(grid: &SphereGrid, v: &AsaValue, boundary: Option<&AsaValue>) -> Vec<String> {
    let mut row = vec![
        v.p.to_string(),
        v.value.map(fmt_full).unwrap_or_else(|| "divergent".into()),
        fmt_full(v.error_estimate),
        v.method.name().to_string(),
    ];
    match boundary {
        Some(b) => {
            row.push(b.value.map(fmt_full).unwrap_or_else(|| "divergent".into()));
            let agree = match (v.value, b.value) {
                (Some(a), Some(bb)) if a != 0.0 => fmt_full((a - bb).abs() / a.abs()),
                (Some(a), Some(bb)) => fmt_full((a - bb).abs()),
                _ => "nan".to_string(),
            };
            row.push(agree);
        }
        None => {
            row.push(String::new());
            row.push(String::new());
        }
    }
    row.push(grid_label(grid));
    row
}

/// Table of as_p values for each requested exponent; both integral forms
/// (with an agreement column) when the body supports the boundary form.
pub fn cmd_asp(config: &RunConfig) -> i32 {
    fallible(config, run_asp)
}

fn fallible(config: &RunConfig, f: fn(&RunConfig) -> Result<i32, Error>) -> i32 {
    match f(config) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_CONFIG
        }
    }
}

fn run_asp(config: &RunConfig) -> Result<i32, Error> {
    let body = require_body(config)?;
    let grid = build_grid(config.grid_spec.as_deref(), body.dimension(), config.seed)?;
    let p_list = if config.p_list.is_empty() {
        vec![
            PExponent::Finite(0.0),
            PExponent::Finite(1.0),
            PExponent::Finite(2.0),
            PExponent::Infinity,
        ]
    } else {
        config.p_list.clone()
    };
    let mut rows = Vec::new();
    let mut divergent = false;
    for p in &p_list {
        let v = asa_sphere_form(&body, *p, &grid)?;
        divergent |= v.is_divergent();
        let b = if body.is_c2_plus() {
            Some(asa_boundary_form(&body, *p, &grid)?)
        } else {
            None
        };
        rows.push(asa_row(&grid, &v, b.as_ref()));
    }
    emit(
        config,
        &[
            "p",
            "value",
            "error_estimate",
            "method",
            "boundary_form",
            "form_rel_diff",
            "grid",
        ],
        &rows,
    )?;
    if divergent && !config.allow_divergent {
        eprintln!("note: divergent as_p values present (pass --allow-divergent to accept)");
        return Ok(EXIT_DIVERGENT);
    }
    Ok(EXIT_OK)
}

fn report_rows(grid: &SphereGrid, reports: &[InequalityReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .map(|r| {
            vec![
                r.name.clone(),
                r.body_descriptor.clone(),
                fmt_full(r.lhs),
                fmt_full(r.rhs),
                fmt_full(r.margin),
                fmt_full(r.tolerance_used),
                r.verdict.name().to_string(),
                grid_label(grid),
            ]
        })
        .collect()
}

const REPORT_HEADER: [&str; 8] = [
    "name",
    "body",
    "lhs",
    "rhs",
    "margin",
    "tolerance_used",
    "verdict",
    "grid",
];

fn finish_reports(
    config: &RunConfig,
    grid: &SphereGrid,
    reports: &[InequalityReport],
) -> Result<i32, Error> {
    emit(config, &REPORT_HEADER, &report_rows(grid, reports))?;
    let violated = reports
        .iter()
        .any(|r| matches!(r.verdict, Verdict::Violated));
    Ok(if violated { EXIT_VIOLATION } else { EXIT_OK })
}

/// Duality-formula reports as_p(K) vs as_{n^2/p}(K polar) over the p list.
pub fn cmd_duality(config: &RunConfig) -> i32 {
    fallible(config, run_duality)
}

fn run_duality(config: &RunConfig) -> Result<i32, Error> {
    let body = require_body(config)?;
    let grid = build_grid(config.grid_spec.as_deref(), body.dimension(), config.seed)?;
    let p_list: Vec<f64> = if config.p_list.is_empty() {
        vec![1.0, 2.0, 4.0]
    } else {
        config
            .p_list
            .iter()
            .map(|p| {
                p.finite()
                    .ok_or_else(|| Error::Config("duality needs finite p".into()))
            })
            .collect::<Result<_, _>>()?
    };
    let mut reports = Vec::new();
    for p in p_list {
        reports.push(duality_check(&body, p, &grid)?);
    }
    finish_reports(config, &grid, &reports)
}

fn limit_rows(est: &LimitEstimate) -> Vec<Vec<String>> {
    est.samples
        .iter()
        .map(|(param, ratio)| {
            vec![
                fmt_full(*param),
                fmt_full(*ratio),
                fmt_full(est.extrapolated),
                fmt_full(est.fitted_exponent),
                est.target.map(fmt_full).unwrap_or_default(),
                est.relative_gap.map(fmt_full).unwrap_or_default(),
            ]
        })
        .collect()
}

const LIMIT_HEADER: [&str; 6] = [
    "parameter",
    "ratio",
    "extrapolated",
    "fitted_exponent",
    "target",
    "relative_gap",
];

/// Floating-body limit run: ratios, extrapolation, and the polar as_p
/// target. The circle-grid resolution doubles as the cut direction count.
pub fn cmd_floating(config: &RunConfig) -> i32 {
    fallible(config, run_floating)
}

fn run_floating(config: &RunConfig) -> Result<i32, Error> {
    let body = require_body(config)?;
    let grid = build_grid(config.grid_spec.as_deref(), body.dimension(), config.seed)?;
    let schedule = config
        .schedule
        .clone()
        .unwrap_or_else(|| (0..7).map(|k| 1e-2 * 4.0_f64.powi(-k)).collect());
    let ndirs = grid.node_count();
    let est = floating_limit(&body, &schedule, ndirs, &grid)?;
    if est.target.is_none() {
        eprintln!(
            "note: no limit target for body kind `{}`; the ratio diverges (fitted exponent {})",
            body.kind_name(),
            est.fitted_exponent
        );
    }
    emit(config, &LIMIT_HEADER, &limit_rows(&est))?;
    Ok(EXIT_OK)
}

/// Surface-body limit run with the f_p weight for a single exponent p.
pub fn cmd_surface(config: &RunConfig) -> i32 {
    fallible(config, run_surface)
}

fn run_surface(config: &RunConfig) -> Result<i32, Error> {
    let body = require_body(config)?;
    let grid = build_grid(config.grid_spec.as_deref(), body.dimension(), config.seed)?;
    if config.p_list.len() > 1 {
        return Err(Error::Config(
            "surface runs take a single weight exponent p".into(),
        ));
    }
    let p = config
        .p_list
        .first()
        .copied()
        .unwrap_or(PExponent::Finite(1.0));
    p.validate(body.dimension())?;
    if !body.is_c2_plus() {
        return Err(Error::UnsupportedKind {
            op: "cmd_surface",
            kind: body.kind_name(),
        });
    }
    let schedule = config
        .schedule
        .clone()
        .unwrap_or_else(|| (0..4).map(|k| 0.4 * 2.0_f64.powi(-k)).collect());
    let ndirs = grid.node_count();
    let nf = body.dimension() as f64;
    let (ek, eh) = lpasa::asa::f_p_exponents(nf, &p);
    let weight = |theta: f64| {
        let u = lpasa::Direction::from_angle(theta);
        let h = body.support(&u);
        let f = body.curvature_function(&u).expect("C2+ body");
        (1.0 / f).powf(ek) * h.powf(-eh)
    };
    let est = surface_limit(&body, &weight, &schedule, ndirs, &grid)?;
    emit(config, &LIMIT_HEADER, &limit_rows(&est))?;
    Ok(EXIT_OK)
}

/// The full inequality suite over the seeded ensemble; exits nonzero on
/// any violated report.
pub fn cmd_suite(config: &RunConfig) -> i32 {
    fallible(config, run_suite_cmd)
}

fn run_suite_cmd(config: &RunConfig) -> Result<i32, Error> {
    let grid = build_grid(config.grid_spec.as_deref(), 2, config.seed)?;
    let suite = SuiteConfig {
        ensemble: BodyEnsemble {
            seed: config.seed,
            ..BodyEnsemble::default()
        },
        santalo_constant: config.santalo_constant,
    };
    let reports = run_suite(&suite, &grid)?;
    finish_reports(config, &grid, &reports)
}

/// Closed-form cube counterexample table along the schedule.
pub fn cmd_cube_example(config: &RunConfig) -> i32 {
    fallible(config, run_cube_example)
}

fn run_cube_example(config: &RunConfig) -> Result<i32, Error> {
    let dimension = match &config.body_spec_path {
        Some(path) => match load_body(path)? {
            ConvexBody::Cube { dimension } => dimension,
            other => {
                return Err(Error::Config(format!(
                    "cube-example expects a cube body spec, got {}",
                    other.kind_name()
                )))
            }
        },
        None => 2,
    };
    let schedule = config
        .schedule
        .clone()
        .unwrap_or_else(|| (0..7).map(|k| 1e-2 * 10.0_f64.powi(-k)).collect());
    let mut rows = Vec::new();
    let mut logs: Vec<(f64, f64)> = Vec::new();
    for &delta in &schedule {
        let (deficit, ratio) = cube_counterexample(dimension, delta)?;
        logs.push((delta.ln(), ratio.ln()));
        rows.push((delta, deficit, ratio));
    }
    let n = logs.len() as f64;
    let xm = logs.iter().map(|(x, _)| x).sum::<f64>() / n;
    let ym = logs.iter().map(|(_, y)| y).sum::<f64>() / n;
    let slope = logs.iter().map(|(x, y)| (x - xm) * (y - ym)).sum::<f64>()
        / logs.iter().map(|(x, _)| (x - xm) * (x - xm)).sum::<f64>();
    let table: Vec<Vec<String>> = rows
        .iter()
        .map(|(d, deficit, ratio)| {
            vec![
                fmt_full(*d),
                fmt_full(*deficit),
                fmt_full(*ratio),
                fmt_full(slope),
            ]
        })
        .collect();
    emit(
        config,
        &["delta", "deficit_lower_bound", "ratio", "loglog_slope"],
        &table,
    )?;
    Ok(EXIT_OK)
}

/// Bound checks for the rounded intersection body K(R, eps).
pub fn cmd_rounded_example(config: &RunConfig) -> i32 {
    fallible(config, run_rounded_example)
}

fn run_rounded_example(config: &RunConfig) -> Result<i32, Error> {
    let (big_radius, corner_radius) = match &config.body_spec_path {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| Error::Config(format!("cannot read {}: {e}", path.display())))?;
            let spec: BodySpec = serde_json::from_str(&text)
                .map_err(|e| Error::Config(format!("cannot parse {}: {e}", path.display())))?;
            match spec {
                BodySpec::RoundedIntersection {
                    big_radius,
                    corner_radius,
                } => (big_radius, corner_radius),
                _ => {
                    return Err(Error::Config(
                        "rounded-example expects a rounded_intersection body spec".into(),
                    ))
                }
            }
        }
        None => (100.0, 0.01),
    };
    let grid = build_grid(config.grid_spec.as_deref(), 2, config.seed)?;
    let p_list: Vec<f64> = if config.p_list.is_empty() {
        vec![0.0, 1.0, 2.0, -1.0, -0.5, -4.0]
    } else {
        config
            .p_list
            .iter()
            .map(|p| {
                p.finite()
                    .ok_or_else(|| Error::Config("rounded-example needs finite p".into()))
            })
            .collect::<Result<_, _>>()?
    };
    let mut reports = Vec::new();
    for p in p_list {
        reports.push(rounded_body_bounds(big_radius, corner_radius, p, &grid)?);
    }
    finish_reports(config, &grid, &reports)
}
