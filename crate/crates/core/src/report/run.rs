use rayon::prelude::*;
use serde::Serialize;

use crate::contravariant::{curvature_explicit, gprime_riemann, metric_compat_defect, torsion_defect};
use crate::error::{Error, Result};
use crate::geometry::Scene;
use crate::liealg::{self, LieAlgebraPresentation, RMatrix};
use crate::poisson::{divergence_defect, jacobi_defect, pi_rank, RANK_TOL};

use super::config::{digest, Check, CheckConfig, Subject};

/// Outcome of one check.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "status", rename_all = "snake_case")]
pub enum Status {
    Pass,
    Fail,
    Skipped {
        reason: String,
    },
    Error {
        message: String,
        #[serde(skip_serializing_if = "Option::is_none")]
        point: Option<Vec<f64>>,
    },
}

impl Status {
    pub fn label(&self) -> &'static str {
        match self {
            Status::Pass => "PASS",
            Status::Fail => "FAIL",
            Status::Skipped { .. } => "SKIP",
            Status::Error { .. } => "ERROR",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PointDefect {
    pub point: Vec<f64>,
    pub defect: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CheckReport {
    pub check: Check,
    #[serde(flatten)]
    pub status: Status,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_defect: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmax: Option<Vec<f64>>,
    /// Per-point table, present in JSON only when requested.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub points: Option<Vec<PointDefect>>,
    /// Per-point magnitudes in sample order, for CSV output.
    #[serde(skip)]
    pub samples: Vec<PointDefect>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ObstructionReport {
    pub tool: &'static str,
    pub version: &'static str,
    pub subject: String,
    pub kind: &'static str,
    pub scene_digest: String,
    pub dimension: usize,
    pub grid: Vec<usize>,
    pub point_count: usize,
    pub checks: Vec<CheckReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub wall_time_ms: Option<f64>,
}

impl ObstructionReport {
    pub fn any_error(&self) -> bool {
        self.checks.iter().any(|c| matches!(c.status, Status::Error { .. }))
    }

    pub fn any_fail(&self) -> bool {
        self.checks.iter().any(|c| c.status == Status::Fail)
    }

    /// 0 when everything passes or is skipped, 1 on any failure, 2 on any
    /// evaluation error.
    pub fn exit_code(&self) -> i32 {
        if self.any_error() {
            2
        } else if self.any_fail() {
            1
        } else {
            0
        }
    }

    pub fn check(&self, c: Check) -> Option<&CheckReport> {
        self.checks.iter().find(|r| r.check == c)
    }
}

/// Runs the configured checks. Points are evaluated in parallel and gathered
/// in sample order before any reduction, so the result does not depend on
/// the worker count.
pub fn run_checks(subject: &Subject, config: &CheckConfig) -> Result<ObstructionReport> {
    config.validate()?;
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(config.workers)
        .build()
        .map_err(|e| Error::Config(format!("worker pool: {e}")))?;
    pool.install(|| run_inner(subject, config))
}

fn run_inner(subject: &Subject, config: &CheckConfig) -> Result<ObstructionReport> {
    let (dimension, points) = match subject {
        Subject::Scene(s) => {
            let pts = match &config.points {
                Some(p) => explicit_points(s, p)?,
                None => s.grid(&config.grid)?,
            };
            for p in &pts {
                match s.validate_at(std::slice::from_ref(p)) {
                    // left for the checks to report against the point
                    Err(Error::Domain { .. } | Error::DivisionByZero) => {}
                    Err(Error::SingularMetric { det }) => {
                        return Err(Error::InvalidScene(format!("metric is singular at {p:?} (|det g| = {det:e})")))
                    }
                    other => other?,
                }
            }
            (s.dim(), pts)
        }
        Subject::LieAlgebra { presentation, .. } => (presentation.dim(), Vec::new()),
    };
    let grid = match (subject, &config.points) {
        (Subject::Scene(_), None) if config.grid.len() == 1 => vec![config.grid[0]; dimension],
        (Subject::Scene(_), None) => config.grid.clone(),
        _ => Vec::new(),
    };
    let checks = config
        .checks
        .iter()
        .map(|&c| {
            let tol = config.tolerance(c);
            let mut r = match subject {
                Subject::Scene(s) => scene_check(s, c, &points, tol),
                Subject::LieAlgebra { presentation, r, .. } => lie_check(presentation, r.as_ref(), c, tol),
            };
            if config.per_point && !r.samples.is_empty() {
                r.points = Some(r.samples.clone());
            }
            r
        })
        .collect();
    Ok(ObstructionReport {
        tool: "obstruct",
        version: env!("CARGO_PKG_VERSION"),
        subject: subject.name(),
        kind: subject.kind(),
        scene_digest: digest(subject),
        dimension,
        grid,
        point_count: points.len(),
        checks,
        wall_time_ms: None,
    })
}

fn explicit_points(s: &Scene, pts: &[Vec<f64>]) -> Result<Vec<Vec<f64>>> {
    let mut out = Vec::with_capacity(pts.len());
    for p in pts {
        if p.len() != s.dim() {
            return Err(Error::DimensionMismatch { expected: s.dim(), got: p.len() });
        }
        if !s.is_excluded(p)? {
            out.push(p.clone());
        }
    }
    Ok(out)
}

fn skipped(check: Check, tolerance: f64, reason: &str) -> CheckReport {
    CheckReport {
        check,
        status: Status::Skipped { reason: reason.into() },
        tolerance,
        max_defect: None,
        argmax: None,
        points: None,
        samples: Vec::new(),
    }
}

fn max_abs(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

fn defect_at(s: &Scene, check: Check, p: &[f64]) -> Result<f64> {
    Ok(match check {
        Check::Jacobi => jacobi_defect(s, p)?.max_abs(),
        Check::Divergence => max_abs(&divergence_defect(s, p)?),
        Check::Torsion => torsion_defect(s, p)?.max_abs(),
        Check::MetricCompat => metric_compat_defect(s, p)?.max_abs(),
        Check::Curvature => curvature_explicit(s, p)?.max_abs(),
        Check::GprimeFlat => gprime_riemann(s, p)?.max_abs(),
        Check::Cybe | Check::QgDivergence => unreachable!("filtered before sampling"),
    })
}

fn scene_check(s: &Scene, check: Check, points: &[Vec<f64>], tolerance: f64) -> CheckReport {
    if matches!(check, Check::Cybe | Check::QgDivergence) {
        return skipped(check, tolerance, "not-applicable");
    }
    if points.is_empty() {
        return skipped(check, tolerance, "no-sample-points");
    }
    if check == Check::GprimeFlat {
        let ranks: Vec<Result<usize>> = points.par_iter().map(|p| pi_rank(s, p, RANK_TOL)).collect();
        let mut degenerate = 0;
        for (p, r) in points.iter().zip(ranks) {
            match r {
                Ok(r) if r < s.dim() => degenerate += 1,
                Ok(_) => {}
                Err(e) => return errored(check, tolerance, e, p),
            }
        }
        if degenerate == points.len() {
            return skipped(check, tolerance, "pi-degenerate-everywhere");
        }
        if degenerate > 0 {
            return skipped(check, tolerance, "pi-degenerate-somewhere");
        }
    }
    let values: Vec<Result<f64>> = points.par_iter().map(|p| defect_at(s, check, p)).collect();
    let mut samples = Vec::with_capacity(points.len());
    for (p, v) in points.iter().zip(values) {
        match v {
            Ok(d) => samples.push(PointDefect { point: p.clone(), defect: d }),
            Err(e) => return errored(check, tolerance, e, p),
        }
    }
    let mut best: Option<&PointDefect> = None;
    for d in &samples {
        if best.is_none_or(|b| d.defect > b.defect || d.defect.is_nan()) {
            best = Some(d);
        }
    }
    let best = best.expect("nonempty");
    let (max, argmax) = (best.defect, best.point.clone());
    CheckReport {
        check,
        status: if max <= tolerance { Status::Pass } else { Status::Fail },
        tolerance,
        max_defect: Some(max),
        argmax: Some(argmax),
        points: None,
        samples,
    }
}

fn errored(check: Check, tolerance: f64, e: Error, p: &[f64]) -> CheckReport {
    CheckReport {
        check,
        status: Status::Error { message: e.to_string(), point: Some(p.to_vec()) },
        tolerance,
        max_defect: None,
        argmax: None,
        points: None,
        samples: Vec::new(),
    }
}

fn lie_check(p: &LieAlgebraPresentation, r: Option<&RMatrix>, check: Check, tolerance: f64) -> CheckReport {
    let value = match (check, r) {
        (Check::Jacobi, _) => liealg::validate(p).jacobi,
        (Check::Cybe, Some(r)) => liealg::cybe_defect(p, r).max_abs(),
        (Check::QgDivergence, Some(r)) => max_abs(&liealg::qg_divergence(p, r)),
        (Check::Cybe | Check::QgDivergence, None) => return skipped(check, tolerance, "no-r-matrix"),
        _ => return skipped(check, tolerance, "not-applicable"),
    };
    CheckReport {
        check,
        status: if value <= tolerance { Status::Pass } else { Status::Fail },
        tolerance,
        max_defect: Some(value),
        argmax: None,
        points: None,
        samples: Vec::new(),
    }
}
