//! Elementary functions and summation helpers.
//!
//! Everything goes through `libm` so that the crate stays `no_std` and every
//! platform produces the same bits.

pub use core::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, FRAC_PI_3, FRAC_PI_6, PI};

#[inline]
pub fn sin(x: f64) -> f64 {
    libm::sin(x)
}

#[inline]
pub fn cos(x: f64) -> f64 {
    libm::cos(x)
}

#[inline]
pub fn tan(x: f64) -> f64 {
    libm::tan(x)
}

#[inline]
pub fn asin(x: f64) -> f64 {
    libm::asin(x)
}

#[inline]
pub fn atan2(y: f64, x: f64) -> f64 {
    libm::atan2(y, x)
}

#[inline]
pub fn sqrt(x: f64) -> f64 {
    libm::sqrt(x)
}

#[inline]
pub fn hypot(x: f64, y: f64) -> f64 {
    libm::hypot(x, y)
}

/// `x^k` for a small non-negative integer `k`.
pub fn powi(x: f64, k: u32) -> f64 {
    let mut acc = 1.0;
    for _ in 0..k {
        acc *= x;
    }
    acc
}

/// Neumaier's compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(terms: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for t in terms {
        let s = sum + t;
        if sum.abs() >= t.abs() {
            comp += (sum - s) + t;
        } else {
            comp += (t - s) + sum;
        }
        sum = s;
    }
    sum + comp
}

/// `true` if `n` is `2^s` with `s >= min_exp`.
pub fn is_power_of_two_at_least(n: usize, min_exp: u32) -> bool {
    n.is_power_of_two() && n >= (1usize << min_exp)
}

/// Largest absolute entry, 0 for an empty slice.
pub fn norm_inf(v: &[f64]) -> f64 {
    v.iter().fold(0.0, |m, x| m.max(x.abs()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensated_sum_recovers_small_terms() {
        let terms = [1.0, 1e-17, 1e-17, 1e-17, 1e-17, -1.0];
        assert_eq!(terms.iter().sum::<f64>(), 0.0);
        let s = compensated_sum(terms);
        assert!((s - 4e-17).abs() < 1e-30);
    }

    #[test]
    fn power_of_two_check() {
        assert!(is_power_of_two_at_least(8, 3));
        assert!(!is_power_of_two_at_least(4, 3));
        assert!(!is_power_of_two_at_least(12, 2));
        assert!(!is_power_of_two_at_least(0, 0));
    }

    #[test]
    fn powi_matches_repeated_product() {
        assert_eq!(powi(2.0, 10), 1024.0);
        assert_eq!(powi(3.5, 0), 1.0);
    }
}
