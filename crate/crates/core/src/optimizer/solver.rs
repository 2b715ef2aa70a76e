//! Augmented Lagrangian with projected damped-Newton inner solves.
//!
//! The merit minimized in the inner loop is
//!
//! ```text
//! Φ(δ) = −f(δ) + λᵀh(δ) + μ/2 ‖h(δ)‖²
//! ```
//!
//! over the box, with the multiplier update `λ ← λ + μh` between inner
//! solves. A few Newton steps on the KKT system of the free variables then
//! polish the result.

use alloc::vec;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use super::problem::{Evaluation, NlpProblem};
use super::{SolveError, SolveReport, SolverConfig};
use crate::math::norm_inf;

const MU_START: f64 = 100.0;
const MU_MAX: f64 = 1e8;
const MU_GROWTH: f64 = 10.0;
/// The penalty grows unless the residual shrank by at least this factor.
const RESIDUAL_SHRINK: f64 = 0.25;
const MAX_INNER: usize = 200;
const MAX_HALVINGS: usize = 60;
const ARMIJO: f64 = 1e-4;
/// Steps shorter than this are taken without a line search; the merit
/// change they cause is below binary64 resolution.
const FULL_STEP_BELOW: f64 = 1e-9;
const STEP_TOL: f64 = 1e-13;
const MAX_POLISH: usize = 30;
/// Distance to a bound at which a variable counts as on it.
const BOUND_EPS: f64 = 1e-12;
/// Starts may end this far below the warm-start objective and still count.
const FILTER_SLACK: f64 = 1e-13;
const SMALL_PERTURBATION: f64 = 1e-3;
const LARGE_PERTURBATION: f64 = 1e-2;

struct LocalResult {
    dev: Vec<f64>,
    residuals: [f64; 2],
    kkt: f64,
    iterations: usize,
}

/// Maximizes the problem's objective from `1 + 2·dim` deterministic starts
/// and returns the best converged one.
///
/// Start 0 is the warm start. Start `s >= 1` shifts variable `(s − 1)/2`
/// by `±1e−3` (odd `s`) or `±1e−2` (even `s`), the sign alternating with the
/// variable index. A converged start is kept only if its objective is not
/// below the warm-start objective.
pub fn solve(problem: &NlpProblem, config: &SolverConfig) -> Result<SolveReport, SolveError> {
    config.validate()?;
    let dim = problem.dim();
    let schedule = 1 + 2 * dim;
    let starts = config.starts.unwrap_or(schedule).min(schedule);
    let warm = problem.to_dev(problem.warm_start());
    let floor = problem.objective_dev(&warm) - FILTER_SLACK;

    let mut best: Option<(SolveReport, f64)> = None;
    let mut best_partial: Option<(SolveReport, f64)> = None;
    for s in 0..starts {
        let start = perturbed_start(&warm, s);
        let local = local_solve(problem, &start, config);
        let objective = problem.objective_dev(&local.dev);
        let converged = norm_inf(&local.residuals) <= config.tol_eq
            && local.kkt <= config.tol_kkt
            && objective >= floor;
        let report = SolveReport {
            family: problem.family(),
            n: problem.n(),
            angles: problem.to_alphas(&local.dev),
            objective,
            eq_residuals: local.residuals,
            kkt_residual: local.kkt,
            iterations: local.iterations,
            starts_used: starts,
            converged,
        };
        if converged {
            if best.as_ref().is_none_or(|(_, o)| objective > *o) {
                best = Some((report, objective));
            }
        } else {
            let violation =
                (norm_inf(&local.residuals) / config.tol_eq).max(local.kkt / config.tol_kkt);
            if best_partial.as_ref().is_none_or(|(_, v)| violation < *v) {
                best_partial = Some((report, violation));
            }
        }
    }
    match (best, best_partial) {
        (Some((report, _)), _) => Ok(report),
        (None, Some((report, _))) => Err(SolveError::NoConvergence(report.into())),
        (None, None) => unreachable!("at least one start always runs"),
    }
}

fn perturbed_start(warm: &[f64], s: usize) -> Vec<f64> {
    let mut x = warm.to_vec();
    if s > 0 {
        let j = (s - 1) / 2;
        let size = if s % 2 == 1 {
            SMALL_PERTURBATION
        } else {
            LARGE_PERTURBATION
        };
        x[j] += if j.is_multiple_of(2) { size } else { -size };
    }
    x
}

fn clamp_into(x: &mut [f64], lo: &[f64], hi: &[f64]) {
    for ((v, l), h) in x.iter_mut().zip(lo).zip(hi) {
        *v = v.clamp(*l, *h);
    }
}

fn local_solve(problem: &NlpProblem, start: &[f64], config: &SolverConfig) -> LocalResult {
    let (lo, hi) = problem.dev_bounds();
    let mut x = start.to_vec();
    clamp_into(&mut x, &lo, &hi);
    let mut lambda = [0.0; 2];
    let mut mu = MU_START;
    let mut previous = f64::INFINITY;
    let mut iterations = 0;
    for _ in 0..config.max_outer {
        iterations += minimize_merit(problem, &mut x, &lo, &hi, lambda, mu);
        let h = problem.residuals(&x);
        let size = norm_inf(&h);
        if size <= config.tol_eq && kkt_at(problem, &x, &lo, &hi) <= config.tol_kkt {
            break;
        }
        for (l, r) in lambda.iter_mut().zip(h) {
            *l += mu * r;
        }
        if size > RESIDUAL_SHRINK * previous {
            mu = (mu * MU_GROWTH).min(MU_MAX);
        }
        previous = size;
    }
    iterations += polish(problem, &mut x, &lo, &hi);
    LocalResult {
        residuals: problem.residuals(&x),
        kkt: kkt_at(problem, &x, &lo, &hi),
        dev: x,
        iterations,
    }
}

/// Gradient and Hessian of the merit, the Hessian row-major.
fn merit_derivatives(e: &Evaluation, lambda: [f64; 2], mu: f64) -> (Vec<f64>, Vec<f64>) {
    let dim = e.objective_gradient.len();
    let weights = [
        lambda[0] + mu * e.residuals[0],
        lambda[1] + mu * e.residuals[1],
    ];
    let grad: Vec<f64> = (0..dim)
        .map(|i| {
            -e.objective_gradient[i] + weights[0] * e.jacobian[0][i] + weights[1] * e.jacobian[1][i]
        })
        .collect();
    let mut hess = vec![0.0; dim * dim];
    for i in 0..dim {
        for j in 0..dim {
            hess[i * dim + j] = weights[1] * e.closure_hessian[i * dim + j]
                + mu * (e.jacobian[0][i] * e.jacobian[0][j] + e.jacobian[1][i] * e.jacobian[1][j]);
        }
        hess[i * dim + i] -= e.objective_hessian_diag[i];
    }
    (grad, hess)
}

/// `Φ(to) − Φ(from)`, with the objective part taken as an exact increment.
fn merit_change(
    problem: &NlpProblem,
    from: &[f64],
    h_from: [f64; 2],
    to: &[f64],
    lambda: [f64; 2],
    mu: f64,
) -> f64 {
    let h_to = problem.residuals(to);
    let mut change = -problem.objective_increment(from, to);
    for i in 0..2 {
        change += lambda[i] * (h_to[i] - h_from[i])
            + 0.5 * mu * (h_to[i] - h_from[i]) * (h_to[i] + h_from[i]);
    }
    change
}

/// Variables not pinned to a bound by the sign of `descent`, a minimization gradient.
fn free_variables(x: &[f64], lo: &[f64], hi: &[f64], descent: &[f64]) -> Vec<usize> {
    (0..x.len())
        .filter(|&i| {
            let at_lo = x[i] <= lo[i] + BOUND_EPS && descent[i] > 0.0;
            let at_hi = x[i] >= hi[i] - BOUND_EPS && descent[i] < 0.0;
            !(at_lo || at_hi)
        })
        .collect()
}

fn sub_matrix(full: &[f64], dim: usize, idx: &[usize]) -> DMatrix<f64> {
    DMatrix::from_fn(idx.len(), idx.len(), |r, c| full[idx[r] * dim + idx[c]])
}

/// Solves `(H + τI) d = −g` with the smallest shift `τ` that makes the
/// matrix positive definite.
fn shifted_newton_step(hess: DMatrix<f64>, grad: &DVector<f64>) -> Option<DVector<f64>> {
    let scale = hess.diagonal().amax().max(1e-300);
    let mut shift = 0.0;
    for _ in 0..MAX_HALVINGS {
        let mut m = hess.clone();
        for i in 0..m.nrows() {
            m[(i, i)] += shift;
        }
        if let Some(chol) = m.cholesky() {
            return Some(-chol.solve(grad));
        }
        shift = if shift == 0.0 {
            1e-10 * scale
        } else {
            4.0 * shift
        };
    }
    None
}

/// Projected damped Newton on the merit over the box. Returns iterations used.
fn minimize_merit(
    problem: &NlpProblem,
    x: &mut Vec<f64>,
    lo: &[f64],
    hi: &[f64],
    lambda: [f64; 2],
    mu: f64,
) -> usize {
    let dim = x.len();
    for it in 0..MAX_INNER {
        let e = problem.evaluate(x);
        let (grad, hess) = merit_derivatives(&e, lambda, mu);
        let free = free_variables(x, lo, hi, &grad);
        if free.is_empty() {
            return it;
        }
        let g_free = DVector::from_iterator(free.len(), free.iter().map(|&i| grad[i]));
        let Some(d_free) = shifted_newton_step(sub_matrix(&hess, dim, &free), &g_free) else {
            return it;
        };
        let slope = g_free.dot(&d_free);
        let short = d_free.amax() < FULL_STEP_BELOW;

        let mut t = 1.0;
        let mut accepted = None;
        for _ in 0..MAX_HALVINGS {
            let mut trial = x.clone();
            for (k, &i) in free.iter().enumerate() {
                trial[i] += t * d_free[k];
            }
            clamp_into(&mut trial, lo, hi);
            if short
                || merit_change(problem, x, e.residuals, &trial, lambda, mu) <= ARMIJO * t * slope
            {
                accepted = Some(trial);
                break;
            }
            t *= 0.5;
        }
        let Some(next) = accepted else {
            return it + 1;
        };
        let step = next
            .iter()
            .zip(x.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        *x = next;
        if step < STEP_TOL {
            return it + 1;
        }
    }
    MAX_INNER
}

/// Least-squares multipliers of `∇f = Jᵀλ` over the given rows.
fn least_squares_multipliers(e: &Evaluation, rows: &[usize]) -> [f64; 2] {
    if rows.is_empty() {
        return [0.0; 2];
    }
    let j = DMatrix::from_fn(rows.len(), 2, |r, c| e.jacobian[c][rows[r]]);
    let g = DVector::from_iterator(rows.len(), rows.iter().map(|&i| e.objective_gradient[i]));
    match j.clone().svd(true, true).solve(&g, 1e-14) {
        Ok(l) => [l[0], l[1]],
        Err(_) => [0.0; 2],
    }
}

/// Interior variables, those not within `BOUND_EPS` of either bound.
fn interior(x: &[f64], lo: &[f64], hi: &[f64]) -> Vec<usize> {
    (0..x.len())
        .filter(|&i| x[i] > lo[i] + BOUND_EPS && x[i] < hi[i] - BOUND_EPS)
        .collect()
}

fn kkt_at(problem: &NlpProblem, x: &[f64], lo: &[f64], hi: &[f64]) -> f64 {
    let e = problem.evaluate(x);
    let rows = interior(x, lo, hi);
    let lambda = least_squares_multipliers(&e, &rows);
    let mut worst: f64 = 0.0;
    for i in 0..x.len() {
        let r =
            e.objective_gradient[i] - lambda[0] * e.jacobian[0][i] - lambda[1] * e.jacobian[1][i];
        let violation = if x[i] <= lo[i] + BOUND_EPS {
            r.max(0.0)
        } else if x[i] >= hi[i] - BOUND_EPS {
            (-r).max(0.0)
        } else {
            r.abs()
        };
        worst = worst.max(violation);
    }
    worst
}

/// Stationarity residual of the maximization at the given angles: the
/// infinity norm of `∇f − Jᵀλ` over interior variables, with least-squares
/// multipliers, plus sign violations on variables held at a bound.
pub fn kkt_residual(problem: &NlpProblem, alphas: &[f64]) -> f64 {
    let (lo, hi) = problem.dev_bounds();
    kkt_at(problem, &problem.to_dev(alphas), &lo, &hi)
}

/// Newton steps on the KKT system `∇f − Jᵀλ = 0, h = 0` restricted to the
/// interior variables. A step is kept only if it stays in the box and
/// reduces the combined residual.
fn polish(problem: &NlpProblem, x: &mut Vec<f64>, lo: &[f64], hi: &[f64]) -> usize {
    let dim = x.len();
    let combined = |x: &[f64]| norm_inf(&problem.residuals(x)).max(kkt_at(problem, x, lo, hi));
    let mut current = combined(x);
    for it in 0..MAX_POLISH {
        let e = problem.evaluate(x);
        let free = interior(x, lo, hi);
        if free.len() < 2 {
            return it;
        }
        let lambda = least_squares_multipliers(&e, &free);
        let m = free.len();
        let mut kkt = DMatrix::zeros(m + 2, m + 2);
        let mut rhs = DVector::zeros(m + 2);
        for (r, &i) in free.iter().enumerate() {
            for (c, &j) in free.iter().enumerate() {
                kkt[(r, c)] = -lambda[1] * e.closure_hessian[i * dim + j];
            }
            kkt[(r, r)] += e.objective_hessian_diag[i];
            for k in 0..2 {
                kkt[(r, m + k)] = -e.jacobian[k][i];
                kkt[(m + k, r)] = e.jacobian[k][i];
            }
            rhs[r] = -(e.objective_gradient[i]
                - lambda[0] * e.jacobian[0][i]
                - lambda[1] * e.jacobian[1][i]);
        }
        rhs[m] = -e.residuals[0];
        rhs[m + 1] = -e.residuals[1];
        let Some(sol) = kkt.lu().solve(&rhs) else {
            return it;
        };
        let mut trial = x.clone();
        for (r, &i) in free.iter().enumerate() {
            trial[i] += sol[r];
        }
        if trial
            .iter()
            .zip(lo)
            .zip(hi)
            .any(|((v, l), h)| v < l || v > h)
        {
            return it;
        }
        let next = combined(&trial);
        // also stops on NaN
        if next.partial_cmp(&current) != Some(core::cmp::Ordering::Less) {
            return it;
        }
        let step = sol.rows(0, m).amax();
        *x = trial;
        current = next;
        if step < STEP_TOL {
            return it + 1;
        }
    }
    MAX_POLISH
}

#[cfg(test)]
mod tests {
    use super::super::{build_b_problem, build_q_problem};
    use super::*;

    #[test]
    fn perturbation_schedule() {
        let warm = [0.0; 3];
        assert_eq!(perturbed_start(&warm, 0), [0.0; 3]);
        assert_eq!(perturbed_start(&warm, 1), [1e-3, 0.0, 0.0]);
        assert_eq!(perturbed_start(&warm, 2), [1e-2, 0.0, 0.0]);
        assert_eq!(perturbed_start(&warm, 3), [0.0, -1e-3, 0.0]);
        assert_eq!(perturbed_start(&warm, 6), [0.0, 0.0, 1e-2]);
    }

    #[test]
    fn b8_solution() {
        let r = solve(&build_b_problem(8).unwrap(), &SolverConfig::default()).unwrap();
        assert!(r.converged);
        assert!((r.objective - 3.1211471341).abs() < 1e-8);
        for (a, b) in r.angles.iter().zip([0.435281, 0.368535, 0.398447]) {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
        assert!(r.eq_residuals.iter().all(|h| h.abs() <= 1e-11));
        assert!(r.kkt_residual <= 1e-9);
        assert_eq!(r.starts_used, 7);
    }

    #[test]
    fn q8_solution() {
        let r = solve(&build_q_problem(8).unwrap(), &SolverConfig::default()).unwrap();
        assert!((r.objective - 3.1195976652).abs() < 1e-8);
        for (a, b) in r
            .angles
            .iter()
            .zip([0.301375, 0.480058, 0.355776, 0.433588])
        {
            assert!((a - b).abs() < 1e-5, "{a} vs {b}");
        }
    }

    #[test]
    fn deterministic() {
        let p = build_b_problem(16).unwrap();
        let c = SolverConfig::default();
        assert_eq!(solve(&p, &c).unwrap(), solve(&p, &c).unwrap());
    }

    #[test]
    fn start_limit() {
        let p = build_b_problem(16).unwrap();
        let c = SolverConfig {
            starts: Some(1),
            ..SolverConfig::default()
        };
        assert_eq!(solve(&p, &c).unwrap().starts_used, 1);
    }

    #[test]
    fn kkt_residual_of_warm_start_is_not_small() {
        let p = build_b_problem(8).unwrap();
        assert!(kkt_residual(&p, p.warm_start()) > 1e-6);
    }
}
