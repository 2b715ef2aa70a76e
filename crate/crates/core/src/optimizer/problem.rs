use alloc::vec::Vec;

use crate::constructions::{AngleFamily, AngleParamB, AngleParamQ, ConstructionError};
use crate::math::{cos, sin, PI};

/// One of the two angle-parametrized maximal-perimeter problems.
///
/// Maximize the perimeter of the symmetric layout over its angles subject
/// to the linear angle-sum constraint, the trigonometric closure constraint
/// and box bounds `0 <= α_k <= upper_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct NlpProblem {
    family: AngleFamily,
    n: usize,
    upper: Vec<f64>,
    warm_start: Vec<f64>,
}

/// The `B` layout problem over `n/4 + 1` angles, warm-started at `Bₙ`.
pub fn build_b_problem(n: usize) -> Result<NlpProblem, ConstructionError> {
    let warm = AngleParamB::analytic(n)?.into_alphas();
    Ok(NlpProblem::new(AngleFamily::B, n, warm))
}

/// The `Q` layout problem over `n/2` angles, warm-started at `Qₙ`.
pub fn build_q_problem(n: usize) -> Result<NlpProblem, ConstructionError> {
    let warm = AngleParamQ::analytic(n)?.into_alphas();
    Ok(NlpProblem::new(AngleFamily::Q, n, warm))
}

/// Derivatives of everything the solver needs at one point, in deviation space.
pub(crate) struct Evaluation {
    pub residuals: [f64; 2],
    /// Gradients of the two constraints.
    pub jacobian: [Vec<f64>; 2],
    pub objective_gradient: Vec<f64>,
    pub objective_hessian_diag: Vec<f64>,
    /// Row-major Hessian of the closure constraint.
    pub closure_hessian: Vec<f64>,
}

impl NlpProblem {
    fn new(family: AngleFamily, n: usize, warm_start: Vec<f64>) -> Self {
        let upper = (0..family.dim(n))
            .map(|k| family.upper_bound(n, k))
            .collect();
        Self {
            family,
            n,
            upper,
            warm_start,
        }
    }

    pub fn family(&self) -> AngleFamily {
        self.family
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.upper.len()
    }

    /// Lower box bound of variable `k`; always zero.
    pub fn lower(&self, _k: usize) -> f64 {
        0.0
    }

    pub fn upper(&self, k: usize) -> f64 {
        self.upper[k]
    }

    pub fn warm_start(&self) -> &[f64] {
        &self.warm_start
    }

    /// The common angle `π/n` the deviations are measured from.
    pub fn center(&self) -> f64 {
        PI / self.n as f64
    }

    pub fn objective(&self, alphas: &[f64]) -> f64 {
        self.family.perimeter(self.n, alphas)
    }

    /// `objective(alphas) − objective(warm_start)`, accurate even when the
    /// two perimeters agree to almost every digit.
    pub fn gain_over_warm_start(&self, alphas: &[f64]) -> f64 {
        self.objective_increment(&self.to_dev(&self.warm_start), &self.to_dev(alphas))
    }

    pub fn objective_gradient(&self, alphas: &[f64]) -> Vec<f64> {
        self.family.perimeter_gradient(self.n, alphas)
    }

    /// `[angle-sum residual, closure residual]`.
    pub fn constraints(&self, alphas: &[f64]) -> [f64; 2] {
        self.residuals(&self.to_dev(alphas))
    }

    pub fn constraint_gradients(&self, alphas: &[f64]) -> [Vec<f64>; 2] {
        let dev = self.to_dev(alphas);
        [
            self.sum_gradient(),
            self.family.closure_gradient(self.n, &dev),
        ]
    }

    pub(crate) fn to_dev(&self, alphas: &[f64]) -> Vec<f64> {
        let c = self.center();
        alphas.iter().map(|a| a - c).collect()
    }

    pub(crate) fn to_alphas(&self, dev: &[f64]) -> Vec<f64> {
        let c = self.center();
        dev.iter().map(|d| c + d).collect()
    }

    /// Box bounds in deviation space.
    pub(crate) fn dev_bounds(&self) -> (Vec<f64>, Vec<f64>) {
        let c = self.center();
        let lo = (0..self.dim()).map(|k| self.lower(k) - c).collect();
        let hi = self.upper.iter().map(|u| u - c).collect();
        (lo, hi)
    }

    fn sum_gradient(&self) -> Vec<f64> {
        (0..self.dim())
            .map(|k| self.family.sum_weight(self.n, k))
            .collect()
    }

    pub(crate) fn residuals(&self, dev: &[f64]) -> [f64; 2] {
        [
            self.family.sum_residual(self.n, dev),
            self.family.closure_residual(self.n, dev),
        ]
    }

    pub(crate) fn objective_dev(&self, dev: &[f64]) -> f64 {
        self.objective(&self.to_alphas(dev))
    }

    /// `f(to) − f(from)` without cancellation, via
    /// `sin a − sin b = 2 cos((a + b)/2) sin((a − b)/2)` on half-angles.
    pub(crate) fn objective_increment(&self, from: &[f64], to: &[f64]) -> f64 {
        let c = self.center();
        let terms = from.iter().zip(to).enumerate().map(|(k, (a, b))| {
            let mid = (2.0 * c + a + b) / 4.0;
            2.0 * self.family.perimeter_coeff(self.n, k) * cos(mid) * sin((b - a) / 4.0)
        });
        crate::math::compensated_sum(terms)
    }

    pub(crate) fn evaluate(&self, dev: &[f64]) -> Evaluation {
        let alphas = self.to_alphas(dev);
        Evaluation {
            residuals: self.residuals(dev),
            jacobian: [
                self.sum_gradient(),
                self.family.closure_gradient(self.n, dev),
            ],
            objective_gradient: self.family.perimeter_gradient(self.n, &alphas),
            objective_hessian_diag: self.family.perimeter_hessian_diag(self.n, &alphas),
            closure_hessian: self.family.closure_hessian(self.n, dev),
        }
    }
}
