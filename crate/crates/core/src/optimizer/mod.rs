//! Local solution of the two angle-parametrized maximal-perimeter problems.
//!
//! [`solve`] runs an augmented-Lagrangian method on the deviations
//! `δ_k = α_k − π/n` from a deterministic set of starts around the analytic
//! warm start, and [`certify`] rebuilds the polygon from the returned angles
//! to check it independently.

mod problem;
mod solver;

use alloc::boxed::Box;
use alloc::vec::Vec;

use thiserror::Error;

pub use problem::{build_b_problem, build_q_problem, NlpProblem};
pub use solver::{kkt_residual, solve};

use crate::constructions::{
    from_angles_b, from_angles_q, AngleFamily, AngleParamB, AngleParamQ, ConstructionError,
};
use crate::geometry::MetricsReport;
use crate::DIAMETER_TOL;

/// Largest gap allowed between a report's objective and the rebuilt perimeter.
pub const CERTIFY_PERIMETER_TOL: f64 = 1e-10;

#[derive(Debug, Clone, PartialEq)]
pub struct SolverConfig {
    /// Multiplier updates per start.
    pub max_outer: usize,
    /// Required infinity norm of the equality residuals.
    pub tol_eq: f64,
    /// Required KKT residual.
    pub tol_kkt: f64,
    /// Number of starts; `None` uses all `1 + 2·dim`.
    pub starts: Option<usize>,
}

impl Default for SolverConfig {
    fn default() -> Self {
        Self {
            max_outer: 40,
            tol_eq: 1e-11,
            tol_kkt: 1e-9,
            starts: None,
        }
    }
}

impl SolverConfig {
    pub fn validate(&self) -> Result<(), SolveError> {
        if self.max_outer == 0 {
            return Err(SolveError::InvalidConfig("max_outer must be positive"));
        }
        if !(self.tol_eq > 0.0 && self.tol_eq.is_finite()) {
            return Err(SolveError::InvalidConfig(
                "tol_eq must be positive and finite",
            ));
        }
        if !(self.tol_kkt > 0.0 && self.tol_kkt.is_finite()) {
            return Err(SolveError::InvalidConfig(
                "tol_kkt must be positive and finite",
            ));
        }
        if self.starts == Some(0) {
            return Err(SolveError::InvalidConfig("starts must be positive"));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SolveReport {
    pub family: AngleFamily,
    pub n: usize,
    pub angles: Vec<f64>,
    pub objective: f64,
    /// `[angle-sum residual, closure residual]`.
    pub eq_residuals: [f64; 2],
    pub kkt_residual: f64,
    /// Inner Newton iterations spent on the returned start.
    pub iterations: usize,
    pub starts_used: usize,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum SolveError {
    #[error("invalid solver configuration: {0}")]
    InvalidConfig(&'static str),
    #[error("no start converged; best objective {} with residuals {:?}", .0.objective, .0.eq_residuals)]
    NoConvergence(Box<SolveReport>),
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum CertifyError {
    #[error("report is not converged")]
    NotConverged,
    #[error("report is for {found} with n = {found_n}, expected {expected} with n = {expected_n}")]
    Mismatch {
        expected: &'static str,
        expected_n: usize,
        found: &'static str,
        found_n: usize,
    },
    #[error("angles do not describe a valid polygon: {0}")]
    Reconstruction(#[from] ConstructionError),
    #[error("rebuilt polygon has diameter {0}")]
    NotSmall(f64),
    #[error("rebuilt perimeter {measured} differs from reported objective {reported}")]
    PerimeterMismatch { reported: f64, measured: f64 },
}

/// Rebuilds the polygon from a report and checks it through geometry alone.
pub fn certify(
    report: &SolveReport,
    n: usize,
    family: AngleFamily,
) -> Result<MetricsReport, CertifyError> {
    if report.family != family || report.n != n {
        return Err(CertifyError::Mismatch {
            expected: family.as_str(),
            expected_n: n,
            found: report.family.as_str(),
            found_n: report.n,
        });
    }
    if !report.converged {
        return Err(CertifyError::NotConverged);
    }
    let polygon = match family {
        AngleFamily::B => from_angles_b(&AngleParamB::new(n, report.angles.clone())?)?,
        AngleFamily::Q => from_angles_q(&AngleParamQ::new(n, report.angles.clone())?)?,
    };
    let metrics = polygon.metrics().map_err(ConstructionError::from)?;
    if metrics.diameter > 1.0 + DIAMETER_TOL {
        return Err(CertifyError::NotSmall(metrics.diameter));
    }
    if (metrics.perimeter - report.objective).abs() > CERTIFY_PERIMETER_TOL {
        return Err(CertifyError::PerimeterMismatch {
            reported: report.objective,
            measured: metrics.perimeter,
        });
    }
    Ok(metrics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::sqrt;

    #[test]
    fn default_config() {
        let c = SolverConfig::default();
        assert_eq!(c.max_outer, 40);
        assert!(c.validate().is_ok());
        let bad = SolverConfig {
            tol_eq: -1.0,
            ..c.clone()
        };
        assert!(bad.validate().is_err());
        let bad = SolverConfig {
            starts: Some(0),
            ..c
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn certify_b8() {
        let p = build_b_problem(8).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        let m = certify(&r, 8, AngleFamily::B).unwrap();
        assert!((m.perimeter - 3.1211471341).abs() < 5e-11);
        assert!((m.width - 0.9764).abs() < 5e-5);
        assert!(matches!(
            certify(&r, 8, AngleFamily::Q),
            Err(CertifyError::Mismatch { .. })
        ));
    }

    #[test]
    fn certify_q4() {
        let p = build_q_problem(4).unwrap();
        let r = solve(&p, &SolverConfig::default()).unwrap();
        assert!((r.objective - (2.0 + sqrt(6.0) - sqrt(2.0))).abs() < 1e-12);
        let m = certify(&r, 4, AngleFamily::Q).unwrap();
        assert!((m.perimeter - 3.0353).abs() < 5e-5);
        assert!((m.width - 0.8660).abs() < 5e-5);
    }

    #[test]
    fn tampered_report_fails() {
        let p = build_b_problem(8).unwrap();
        let mut r = solve(&p, &SolverConfig::default()).unwrap();
        r.angles[0] += 0.01;
        assert!(matches!(
            certify(&r, 8, AngleFamily::B),
            Err(CertifyError::Reconstruction(_))
        ));
    }

    #[test]
    fn unconverged_report_fails() {
        let p = build_b_problem(8).unwrap();
        let mut r = solve(&p, &SolverConfig::default()).unwrap();
        r.converged = false;
        assert_eq!(
            certify(&r, 8, AngleFamily::B),
            Err(CertifyError::NotConverged)
        );
    }
}
