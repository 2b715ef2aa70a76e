//! Angle parametrizations of the two symmetric diameter-graph layouts.
//!
//! Both layouts express a symmetric polygon through the angles its unit
//! diameter segments make at the cycle vertices. Every quantity is evaluated
//! on the deviations `δ_k = α_k − π/n`, because the angles of interest all sit
//! close to `π/n` and working relative to that keeps the constraint sums free
//! of cancellation.
//!
//! The closure constraint of either layout has the same shape,
//!
//! ```text
//! c(α) = Σ_t (−1)^t sin θ_t − target,   θ_t = base_t + Σ_j a_tj δ_j
//! ```
//!
//! where variable `j` enters every phase from term `start_j` on with a fixed
//! coefficient `coef_j`. That structure turns gradients and Hessians into
//! suffix sums.

use alloc::vec;
use alloc::vec::Vec;

use crate::constructions::ConstructionError;
use crate::geometry::{Point2, SmallPolygon};
use crate::math::{compensated_sum, cos, is_power_of_two_at_least, sin, FRAC_PI_3, FRAC_PI_6, PI};

/// Which diameter-graph layout an angle sequence describes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum AngleFamily {
    /// Cycle of length `n/2 + 1` with `n/2 − 1` pendant edges; angles `α₀…α_{n/4}`.
    B,
    /// Cycle of length `n − 1` with one pendant edge; angles `α₀…α_{n/2−1}`.
    Q,
}

/// Tolerance on the linear angle-sum constraint.
pub const SUM_TOL: f64 = 1e-12;
/// Tolerance on the trigonometric closure constraint.
pub const CLOSURE_TOL: f64 = 1e-10;
/// Slack allowed on the box bounds.
const BOX_TOL: f64 = 1e-12;

impl AngleFamily {
    pub fn as_str(self) -> &'static str {
        match self {
            AngleFamily::B => "b",
            AngleFamily::Q => "q",
        }
    }

    pub fn check_n(self, n: usize) -> Result<(), ConstructionError> {
        let ok = match self {
            AngleFamily::B => is_power_of_two_at_least(n, 3),
            AngleFamily::Q => is_power_of_two_at_least(n, 2),
        };
        if ok {
            Ok(())
        } else {
            Err(ConstructionError::InvalidN {
                family: self.as_str(),
                n,
                reason: match self {
                    AngleFamily::B => "must be a power of 2 and at least 8",
                    AngleFamily::Q => "must be a power of 2 and at least 4",
                },
            })
        }
    }

    /// Number of angle variables.
    pub fn dim(self, n: usize) -> usize {
        match self {
            AngleFamily::B => n / 4 + 1,
            AngleFamily::Q => n / 2,
        }
    }

    /// Number of sine terms in the closure constraint.
    fn terms(self, n: usize) -> usize {
        match self {
            AngleFamily::B => n / 4,
            AngleFamily::Q => n / 2 - 1,
        }
    }

    /// Upper box bound of variable `k`; every lower bound is zero.
    pub fn upper_bound(self, n: usize, k: usize) -> f64 {
        match self {
            AngleFamily::B if k < n / 4 => FRAC_PI_6,
            AngleFamily::B => FRAC_PI_3,
            AngleFamily::Q if k == 0 => FRAC_PI_6,
            AngleFamily::Q => FRAC_PI_3,
        }
    }

    /// Weight of `α_k` in the angle-sum constraint `Σ w_k α_k = π/2`.
    pub fn sum_weight(self, n: usize, k: usize) -> f64 {
        match self {
            AngleFamily::B if k == 0 || k == n / 4 => 1.0,
            AngleFamily::B => 2.0,
            AngleFamily::Q => 1.0,
        }
    }

    /// Coefficient of `sin(α_k / 2)` in the perimeter.
    pub fn perimeter_coeff(self, n: usize, k: usize) -> f64 {
        match self {
            AngleFamily::B if k == 0 || k == n / 4 => 4.0,
            AngleFamily::B => 8.0,
            AngleFamily::Q => 4.0,
        }
    }

    fn closure_target(self) -> f64 {
        match self {
            AngleFamily::B => -0.5,
            AngleFamily::Q => 0.5,
        }
    }

    /// First closure term containing variable `j`, and its coefficient there.
    /// Variables that never enter the closure report `terms(n)`.
    fn entry(self, n: usize, j: usize) -> (usize, f64) {
        match self {
            AngleFamily::B if j == 0 => (0, 1.0),
            AngleFamily::B => (j.min(n / 4), 2.0),
            AngleFamily::Q => (j, 1.0),
        }
    }

    /// Phase of closure term `t` at zero deviation.
    fn base_phase(self, n: usize, t: usize) -> f64 {
        let step = PI / n as f64;
        match self {
            AngleFamily::B => (2 * t + 1) as f64 * step,
            AngleFamily::Q => (t + 1) as f64 * step,
        }
    }

    /// Closure phases `θ_t` for the given deviations.
    pub fn phases(self, n: usize, dev: &[f64]) -> Vec<f64> {
        let terms = self.terms(n);
        let mut out = Vec::with_capacity(terms);
        let mut acc = 0.0;
        let mut next_var = 0;
        for t in 0..terms {
            while next_var < dev.len() && self.entry(n, next_var).0 == t {
                acc += self.entry(n, next_var).1 * dev[next_var];
                next_var += 1;
            }
            out.push(self.base_phase(n, t) + acc);
        }
        out
    }

    /// Angle-sum residual `Σ w_k α_k − π/2`, from deviations.
    pub fn sum_residual(self, n: usize, dev: &[f64]) -> f64 {
        compensated_sum(
            dev.iter()
                .enumerate()
                .map(|(k, d)| self.sum_weight(n, k) * d),
        )
    }

    pub fn closure_residual(self, n: usize, dev: &[f64]) -> f64 {
        let phases = self.phases(n, dev);
        let terms = phases
            .iter()
            .enumerate()
            .map(|(t, th)| sign(t) * sin(*th))
            .chain(core::iter::once(-self.closure_target()));
        compensated_sum(terms)
    }

    pub fn closure_gradient(self, n: usize, dev: &[f64]) -> Vec<f64> {
        let phases = self.phases(n, dev);
        let suffix = suffix_sums(phases.iter().enumerate().map(|(t, th)| sign(t) * cos(*th)));
        (0..dev.len())
            .map(|j| {
                let (start, coef) = self.entry(n, j);
                coef * suffix[start]
            })
            .collect()
    }

    /// Dense Hessian of the closure residual, row-major `dim × dim`.
    pub fn closure_hessian(self, n: usize, dev: &[f64]) -> Vec<f64> {
        let dim = dev.len();
        let phases = self.phases(n, dev);
        let suffix = suffix_sums(phases.iter().enumerate().map(|(t, th)| -sign(t) * sin(*th)));
        let mut h = vec![0.0; dim * dim];
        for i in 0..dim {
            let (si, ci) = self.entry(n, i);
            for j in 0..dim {
                let (sj, cj) = self.entry(n, j);
                h[i * dim + j] = ci * cj * suffix[si.max(sj)];
            }
        }
        h
    }

    /// Perimeter `Σ p_k sin(α_k / 2)` of the polygon the angles describe.
    pub fn perimeter(self, n: usize, alphas: &[f64]) -> f64 {
        compensated_sum(
            alphas
                .iter()
                .enumerate()
                .map(|(k, a)| self.perimeter_coeff(n, k) * sin(0.5 * a)),
        )
    }

    pub fn perimeter_gradient(self, n: usize, alphas: &[f64]) -> Vec<f64> {
        alphas
            .iter()
            .enumerate()
            .map(|(k, a)| 0.5 * self.perimeter_coeff(n, k) * cos(0.5 * a))
            .collect()
    }

    /// Diagonal of the perimeter Hessian.
    pub fn perimeter_hessian_diag(self, n: usize, alphas: &[f64]) -> Vec<f64> {
        alphas
            .iter()
            .enumerate()
            .map(|(k, a)| -0.25 * self.perimeter_coeff(n, k) * sin(0.5 * a))
            .collect()
    }

    fn check_len(self, n: usize, len: usize) -> Result<(), ConstructionError> {
        self.check_n(n)?;
        let expected = self.dim(n);
        if len != expected {
            return Err(ConstructionError::WrongAngleCount { expected, got: len });
        }
        Ok(())
    }

    /// Checks both equality constraints, then the box bounds.
    fn check_feasible(self, n: usize, alphas: &[f64]) -> Result<(), ConstructionError> {
        if let Some(k) = alphas.iter().position(|a| !a.is_finite()) {
            return Err(ConstructionError::AngleOutOfBounds {
                index: k,
                value: alphas[k],
            });
        }
        let dev = deviations(n, alphas);
        let sum_residual = self.sum_residual(n, &dev);
        let closure_residual = self.closure_residual(n, &dev);
        if sum_residual.abs() > SUM_TOL || closure_residual.abs() > CLOSURE_TOL {
            return Err(ConstructionError::InfeasibleAngles {
                sum_residual,
                closure_residual,
            });
        }
        for (k, &a) in alphas.iter().enumerate() {
            if a < -BOX_TOL || a > self.upper_bound(n, k) + BOX_TOL {
                return Err(ConstructionError::AngleOutOfBounds { index: k, value: a });
            }
        }
        Ok(())
    }

    /// Minimal-norm Gauss–Newton projection onto both equality constraints.
    fn project(self, n: usize, alphas: &[f64]) -> Result<Vec<f64>, ConstructionError> {
        let mut dev = deviations(n, alphas);
        let w: Vec<f64> = (0..dev.len()).map(|k| self.sum_weight(n, k)).collect();
        let ww: f64 = w.iter().map(|x| x * x).sum();
        let mut residual = (f64::INFINITY, f64::INFINITY);
        for _ in 0..50 {
            let h1 = self.sum_residual(n, &dev);
            let h2 = self.closure_residual(n, &dev);
            residual = (h1, h2);
            if h1.abs() <= 1e-16 && h2.abs() <= 1e-16 {
                break;
            }
            let g = self.closure_gradient(n, &dev);
            let wg: f64 = w.iter().zip(&g).map(|(a, b)| a * b).sum();
            let gg: f64 = g.iter().map(|x| x * x).sum();
            let det = ww * gg - wg * wg;
            if det.abs() < 1e-300 {
                break;
            }
            let y1 = (gg * h1 - wg * h2) / det;
            let y2 = (ww * h2 - wg * h1) / det;
            for k in 0..dev.len() {
                dev[k] -= w[k] * y1 + g[k] * y2;
            }
        }
        if residual.0.abs() > SUM_TOL || residual.1.abs() > CLOSURE_TOL {
            return Err(ConstructionError::InfeasibleAngles {
                sum_residual: residual.0,
                closure_residual: residual.1,
            });
        }
        let step = PI / n as f64;
        Ok(dev.iter().map(|d| step + d).collect())
    }
}

#[inline]
fn sign(t: usize) -> f64 {
    if t.is_multiple_of(2) {
        1.0
    } else {
        -1.0
    }
}

/// `out[m] = Σ_{t ≥ m} term_t`, with a trailing zero so `out[len]` is valid.
fn suffix_sums<I: DoubleEndedIterator<Item = f64> + ExactSizeIterator>(terms: I) -> Vec<f64> {
    let len = terms.len();
    let mut out = vec![0.0; len + 1];
    for (i, t) in terms.enumerate().rev() {
        out[i] = out[i + 1] + t;
    }
    out
}

/// `α_k − π/n`. Exact whenever `α_k` is within a factor of two of `π/n`.
pub fn deviations(n: usize, alphas: &[f64]) -> Vec<f64> {
    let step = PI / n as f64;
    alphas.iter().map(|a| a - step).collect()
}

/// Angles `α₀…α_{n/4}` of a polygon with the `B` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleParamB {
    n: usize,
    alphas: Vec<f64>,
}

impl AngleParamB {
    /// Checks only the vertex count and the number of angles; feasibility is
    /// checked when a polygon is built from them.
    pub fn new(n: usize, alphas: Vec<f64>) -> Result<Self, ConstructionError> {
        AngleFamily::B.check_len(n, alphas.len())?;
        Ok(Self { n, alphas })
    }

    /// The alternating angles `π/n + (−1)^k β₀(n)` of `Bₙ`.
    pub fn analytic(n: usize) -> Result<Self, ConstructionError> {
        AngleFamily::B.check_n(n)?;
        let beta = crate::bounds::beta0(n);
        let step = PI / n as f64;
        let alphas = (0..=n / 4).map(|k| step + sign(k) * beta).collect();
        Ok(Self { n, alphas })
    }

    /// Snaps approximate angles (e.g. rounded table values) onto the feasible
    /// set by the smallest correction in the Euclidean norm.
    pub fn projected(n: usize, approx: &[f64]) -> Result<Self, ConstructionError> {
        AngleFamily::B.check_len(n, approx.len())?;
        let alphas = AngleFamily::B.project(n, approx)?;
        Ok(Self { n, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn into_alphas(self) -> Vec<f64> {
        self.alphas
    }

    /// `(angle-sum residual, closure residual)`.
    pub fn residuals(&self) -> (f64, f64) {
        let dev = deviations(self.n, &self.alphas);
        (
            AngleFamily::B.sum_residual(self.n, &dev),
            AngleFamily::B.closure_residual(self.n, &dev),
        )
    }

    pub fn check_feasible(&self) -> Result<(), ConstructionError> {
        AngleFamily::B.check_feasible(self.n, &self.alphas)
    }

    pub fn perimeter(&self) -> f64 {
        AngleFamily::B.perimeter(self.n, &self.alphas)
    }

    /// Reads the angles back off a labeled `B`-layout polygon.
    pub fn measure(p: &SmallPolygon) -> Result<Self, ConstructionError> {
        let n = p.n();
        AngleFamily::B.check_n(n)?;
        let v = p.labeled_vertices().ok_or(ConstructionError::Unlabeled)?;
        let q = n / 4;
        let at = |k: usize, a: usize, b: usize| (v[a] - v[k]).angle_between(v[b] - v[k]);
        let mut alphas = Vec::with_capacity(q + 1);
        alphas.push(at(0, n / 2 + 1, 1));
        for k in 1..q {
            alphas.push(0.5 * at(k, k - 1, k + 1));
        }
        alphas.push(at(q, q - 1, q + 1));
        Self::new(n, alphas)
    }
}

/// Angles `α₀…α_{n/2−1}` of a polygon with the `Q` layout.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleParamQ {
    n: usize,
    alphas: Vec<f64>,
}

impl AngleParamQ {
    pub fn new(n: usize, alphas: Vec<f64>) -> Result<Self, ConstructionError> {
        AngleFamily::Q.check_len(n, alphas.len())?;
        Ok(Self { n, alphas })
    }

    /// The alternating angles `π/n − (−1)^k γ(n)` of `Qₙ`.
    pub fn analytic(n: usize) -> Result<Self, ConstructionError> {
        AngleFamily::Q.check_n(n)?;
        let gamma = crate::bounds::gamma_q(n);
        let step = PI / n as f64;
        let alphas = (0..n / 2).map(|k| step - sign(k) * gamma).collect();
        Ok(Self { n, alphas })
    }

    pub fn projected(n: usize, approx: &[f64]) -> Result<Self, ConstructionError> {
        AngleFamily::Q.check_len(n, approx.len())?;
        let alphas = AngleFamily::Q.project(n, approx)?;
        Ok(Self { n, alphas })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn alphas(&self) -> &[f64] {
        &self.alphas
    }

    pub fn into_alphas(self) -> Vec<f64> {
        self.alphas
    }

    pub fn residuals(&self) -> (f64, f64) {
        let dev = deviations(self.n, &self.alphas);
        (
            AngleFamily::Q.sum_residual(self.n, &dev),
            AngleFamily::Q.closure_residual(self.n, &dev),
        )
    }

    pub fn check_feasible(&self) -> Result<(), ConstructionError> {
        AngleFamily::Q.check_feasible(self.n, &self.alphas)
    }

    pub fn perimeter(&self) -> f64 {
        AngleFamily::Q.perimeter(self.n, &self.alphas)
    }

    /// Reads the angles back off a labeled `Q`-layout polygon.
    pub fn measure(p: &SmallPolygon) -> Result<Self, ConstructionError> {
        let n = p.n();
        AngleFamily::Q.check_n(n)?;
        let v = p.labeled_vertices().ok_or(ConstructionError::Unlabeled)?;
        let at = |k: usize, a: usize, b: usize| (v[a] - v[k]).angle_between(v[b] - v[k]);
        let mut alphas = Vec::with_capacity(n / 2);
        alphas.push(at(0, n - 1, 1));
        for k in 1..n / 2 {
            alphas.push(at(k, k - 1, k + 1));
        }
        Self::new(n, alphas)
    }
}

/// Labeled vertices of the `B` layout: cycle `v₀…v_{n/2}`, then the pendant
/// ends `v_{n/2+1}…v_{n−1}`.
pub(crate) fn b_layout_points(n: usize, alphas: &[f64]) -> Vec<Point2> {
    let q = n / 4;
    let dev = deviations(n, alphas);
    let theta = AngleFamily::B.phases(n, &dev);
    let mut v = vec![Point2::ORIGIN; n];
    v[n / 2 + 1] = Point2::new(0.0, 1.0);
    let mut cur = Point2::ORIGIN;
    for k in 1..=q {
        // θ_{k} is stored at term index k − 1
        let th = theta[k - 1];
        let dir = Point2::new(sin(th), cos(th));
        cur = if k % 2 == 1 { cur + dir } else { cur - dir };
        v[k] = cur;
        v[n / 2 - k + 1] = cur.mirrored();
    }
    let step = PI / n as f64;
    for k in 1..q {
        // θ_k + α_k, kept on the deviation scale
        let th =
            (2 * k) as f64 * step + (theta[k - 1] - AngleFamily::B.base_phase(n, k - 1) + dev[k]);
        let dir = Point2::new(sin(th), cos(th));
        let p = if k % 2 == 0 { v[k] + dir } else { v[k] - dir };
        v[k + n / 2 + 1] = p;
        v[n - k] = p.mirrored();
    }
    v
}

/// Labeled vertices of the `Q` layout: cycle `v₀…v_{n−2}`, pendant end `v_{n−1}`.
pub(crate) fn q_layout_points(n: usize, alphas: &[f64]) -> Vec<Point2> {
    let dev = deviations(n, alphas);
    let phases = AngleFamily::Q.phases(n, &dev);
    let mut v = vec![Point2::ORIGIN; n];
    v[n - 1] = Point2::new(0.0, 1.0);
    let mut cur = Point2::ORIGIN;
    for (k, th) in phases.iter().enumerate() {
        let dir = Point2::new(sin(*th), cos(*th));
        cur = if k % 2 == 0 { cur + dir } else { cur - dir };
        v[k + 1] = cur;
        v[n - 2 - k] = cur.mirrored();
    }
    v
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::math::FRAC_PI_2;

    /// Finite-difference oracle for a scalar function of the deviations.
    fn fd_gradient(f: impl Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
        let h = 1e-6;
        (0..x.len())
            .map(|j| {
                let mut p = x.to_vec();
                let mut m = x.to_vec();
                p[j] += h;
                m[j] -= h;
                (f(&p) - f(&m)) / (2.0 * h)
            })
            .collect()
    }

    fn sample_dev(dim: usize) -> Vec<f64> {
        (0..dim)
            .map(|k| 0.003 * sin(1.3 * k as f64 + 0.4))
            .collect()
    }

    #[test]
    fn closure_gradient_matches_finite_differences() {
        for (fam, n) in [
            (AngleFamily::B, 16),
            (AngleFamily::B, 32),
            (AngleFamily::Q, 8),
            (AngleFamily::Q, 16),
        ] {
            let dev = sample_dev(fam.dim(n));
            let g = fam.closure_gradient(n, &dev);
            let fd = fd_gradient(|d| fam.closure_residual(n, d), &dev);
            for (a, b) in g.iter().zip(&fd) {
                assert!((a - b).abs() < 1e-8, "{fam:?} {n}: {a} vs {b}");
            }
        }
    }

    #[test]
    fn closure_hessian_matches_finite_differences() {
        for (fam, n) in [(AngleFamily::B, 16), (AngleFamily::Q, 16)] {
            let dim = fam.dim(n);
            let dev = sample_dev(dim);
            let h = fam.closure_hessian(n, &dev);
            for i in 0..dim {
                let fd = fd_gradient(|d| fam.closure_gradient(n, d)[i], &dev);
                for j in 0..dim {
                    assert!((h[i * dim + j] - fd[j]).abs() < 1e-7);
                }
            }
        }
    }

    #[test]
    fn perimeter_derivatives_match_finite_differences() {
        let n = 16;
        let fam = AngleFamily::B;
        let a: Vec<f64> = sample_dev(fam.dim(n))
            .iter()
            .map(|d| PI / 16.0 + d)
            .collect();
        let g = fam.perimeter_gradient(n, &a);
        let fd = fd_gradient(|x| fam.perimeter(n, x), &a);
        for (x, y) in g.iter().zip(&fd) {
            assert!((x - y).abs() < 1e-8);
        }
        let hd = fam.perimeter_hessian_diag(n, &a);
        for (k, h) in hd.iter().enumerate() {
            let fdk = fd_gradient(|x| fam.perimeter_gradient(n, x)[k], &a)[k];
            assert!((h - fdk).abs() < 1e-7);
        }
    }

    #[test]
    fn analytic_b8_angles() {
        let p = AngleParamB::analytic(8).unwrap();
        let a = p.alphas();
        // β₀(8) = π/8 − asin(sin(π/4)/2)
        let beta = PI / 8.0 - libm::asin(0.5 * libm::sin(PI / 4.0));
        assert!((beta - 0.0313320).abs() < 5e-7);
        assert!((a[0] - 0.4240310).abs() < 5e-7);
        assert!((a[0] - PI / 8.0 - beta).abs() < 1e-15);
        assert!((a[0] + 2.0 * a[1] + a[2] - FRAC_PI_2).abs() < 1e-15);
        p.check_feasible().unwrap();
    }

    #[test]
    fn analytic_angles_are_feasible() {
        for s in 3..=10 {
            AngleParamB::analytic(1 << s)
                .unwrap()
                .check_feasible()
                .unwrap();
        }
        for s in 2..=10 {
            AngleParamQ::analytic(1 << s)
                .unwrap()
                .check_feasible()
                .unwrap();
        }
    }

    #[test]
    fn closure_residual_of_b_layout_is_x_at_quarter() {
        let p = AngleParamB::analytic(16).unwrap();
        let v = b_layout_points(16, p.alphas());
        assert!((v[4].x + 0.5).abs() < 1e-15);
        let bad = [0.3, 0.19, 0.2, 0.2, 0.18];
        let dev = deviations(16, &bad);
        let v = b_layout_points(16, &bad);
        assert!((AngleFamily::B.closure_residual(16, &dev) - (v[4].x + 0.5)).abs() < 1e-15);
    }

    #[test]
    fn wrong_angle_count() {
        assert_eq!(
            AngleParamB::new(8, vec![0.1, 0.2]).unwrap_err(),
            ConstructionError::WrongAngleCount {
                expected: 3,
                got: 2
            }
        );
    }

    #[test]
    fn out_of_bounds_angle_rejected() {
        // sin α₀ = 1/2 on the other branch, so only the box is violated
        let p = AngleParamQ::new(4, vec![5.0 * FRAC_PI_6, FRAC_PI_2 - 5.0 * FRAC_PI_6]).unwrap();
        assert!(matches!(
            p.check_feasible(),
            Err(ConstructionError::AngleOutOfBounds { index: 0, .. })
        ));
    }

    #[test]
    fn projection_lands_on_constraints() {
        let p = AngleParamB::projected(8, &[0.435281, 0.368535, 0.398447]).unwrap();
        let (s, c) = p.residuals();
        assert!(s.abs() < 1e-15 && c.abs() < 1e-15);
        for (a, b) in p.alphas().iter().zip([0.435281, 0.368535, 0.398447]) {
            assert!((a - b).abs() < 5e-6);
        }
    }
}
