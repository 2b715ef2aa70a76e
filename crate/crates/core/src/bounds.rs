//! Closed-form perimeters and widths, upper bounds and asymptotic gaps.
//!
//! Everything here is a scalar function of `n`. The gap functions never
//! subtract two nearly equal values: each deficit is rewritten as a product
//! of small sines so that it keeps full relative precision up to `n = 2^16`
//! and beyond.

use thiserror::Error;

use crate::math::{asin, cos, is_power_of_two_at_least, powi, sin, sqrt, tan, PI};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum BoundsError {
    #[error("invalid n = {n} for {family}")]
    InvalidN { family: &'static str, n: usize },
    #[error("reuleaux subdivision needs odd m >= 3 dividing n, got m = {m}, n = {n}")]
    InvalidReuleaux { m: usize, n: usize },
}

/// Upper bounds valid for every small `n`-gon.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundSet {
    pub n: usize,
    /// `2n sin(π/2n)`, the perimeter bound.
    pub perimeter: f64,
    /// `cos(π/2n)`, the width bound.
    pub width: f64,
    /// `cot(π/2n) / 2n`, the width bound for unit-perimeter polygons.
    pub unit_width: f64,
}

pub fn upper_bounds(n: usize) -> Result<BoundSet, BoundsError> {
    if n < 3 {
        return Err(BoundsError::InvalidN {
            family: "upper bounds",
            n,
        });
    }
    let h = PI / (2 * n) as f64;
    Ok(BoundSet {
        n,
        perimeter: perimeter_bound(n),
        width: cos(h),
        unit_width: cos(h) / sin(h) / (2 * n) as f64,
    })
}

fn perimeter_bound(n: usize) -> f64 {
    (2 * n) as f64 * sin(PI / (2 * n) as f64)
}

/// `β₀(n) = π/n − asin(½ sin(2π/n))`, the angle offset of `Bₙ`.
///
/// Evaluated through `sin β₀ = sin³t / (√(1 − sin²t cos²t) + cos²t)`
/// with `t = π/n`, which has no cancellation.
pub fn beta0(n: usize) -> f64 {
    let t = PI / n as f64;
    let (s, c) = (sin(t), cos(t));
    asin(s * s * s / (sqrt(1.0 - s * s * c * c) + c * c))
}

/// `γ(n) = π/4 − asin(cos(π/n) / √2)`, the angle offset of `Qₙ`.
///
/// Evaluated through `sin γ = sin²t / (√(2 − cos²t) + cos t)`.
pub fn gamma_q(n: usize) -> f64 {
    let t = PI / n as f64;
    let (s, c) = (sin(t), cos(t));
    asin(s * s / (sqrt(2.0 - c * c) + c))
}

/// A family with a closed-form perimeter and width.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ClosedForm {
    Regular,
    RegularPlus,
    ReuleauxSub {
        m: usize,
    },
    Tamvakis,
    B,
    Q,
    /// `Rₙ` scaled to unit perimeter.
    UnitRegular,
    /// `Bₙ` scaled to unit perimeter.
    UnitB,
}

impl ClosedForm {
    pub fn as_str(self) -> &'static str {
        match self {
            ClosedForm::Regular => "regular",
            ClosedForm::RegularPlus => "regular-plus",
            ClosedForm::ReuleauxSub { .. } => "reuleaux",
            ClosedForm::Tamvakis => "tamvakis",
            ClosedForm::B => "b",
            ClosedForm::Q => "q",
            ClosedForm::UnitRegular => "unit-regular",
            ClosedForm::UnitB => "unit-b",
        }
    }

    fn check(self, n: usize) -> Result<(), BoundsError> {
        let ok = match self {
            ClosedForm::Regular | ClosedForm::UnitRegular => n >= 3,
            ClosedForm::RegularPlus => n >= 4 && n.is_multiple_of(2),
            ClosedForm::ReuleauxSub { m } => {
                if m < 3 || m % 2 == 0 || !n.is_multiple_of(m) {
                    return Err(BoundsError::InvalidReuleaux { m, n });
                }
                true
            }
            ClosedForm::Tamvakis | ClosedForm::Q => is_power_of_two_at_least(n, 2),
            ClosedForm::B | ClosedForm::UnitB => is_power_of_two_at_least(n, 3),
        };
        if ok {
            Ok(())
        } else {
            Err(BoundsError::InvalidN {
                family: self.as_str(),
                n,
            })
        }
    }
}

/// `(perimeter, width)` of a family member from its closed form.
///
/// Unit-perimeter families return a perimeter of exactly 1.
pub fn closed_form(family: ClosedForm, n: usize) -> Result<(f64, f64), BoundsError> {
    family.check(n)?;
    let nf = n as f64;
    let h = PI / (2.0 * nf);
    Ok(match family {
        ClosedForm::Regular if n % 2 == 1 => (perimeter_bound(n), cos(h)),
        ClosedForm::Regular => (nf * sin(2.0 * h), cos(2.0 * h)),
        ClosedForm::RegularPlus => {
            let a = PI / (2.0 * nf - 2.0);
            (
                (2.0 * nf - 2.0) * sin(a) + 4.0 * sin(a / 2.0) - 2.0 * sin(a),
                cos(a),
            )
        }
        ClosedForm::ReuleauxSub { .. } => (perimeter_bound(n), cos(h)),
        ClosedForm::Tamvakis if n % 3 == 1 => (
            (4.0 * nf - 4.0) / 3.0 * sin(PI / (2.0 * nf - 2.0))
                + (2.0 * nf + 4.0) / 3.0 * sin(PI / (2.0 * nf + 4.0)),
            cos(PI / (2.0 * nf - 2.0)),
        ),
        ClosedForm::Tamvakis => (
            (4.0 * nf + 4.0) / 3.0 * sin(PI / (2.0 * nf + 2.0))
                + (2.0 * nf - 4.0) / 3.0 * sin(PI / (2.0 * nf - 4.0)),
            cos(PI / (2.0 * nf - 4.0)),
        ),
        ClosedForm::B => {
            let beta = beta0(n);
            (perimeter_bound(n) * cos(beta / 2.0), cos(h + beta / 2.0))
        }
        ClosedForm::Q => {
            let gamma = gamma_q(n);
            (perimeter_bound(n) * cos(gamma / 2.0), cos(h + gamma / 2.0))
        }
        ClosedForm::UnitRegular if n % 2 == 1 => (1.0, cos(h) / sin(h) / (2.0 * nf)),
        ClosedForm::UnitRegular => (1.0, cos(2.0 * h) / sin(2.0 * h) / nf),
        ClosedForm::UnitB => (1.0, (cos(h) / sin(h) - tan(beta0(n) / 2.0)) / (2.0 * nf)),
    })
}

/// Mossinghoff's polygon perimeters, tabulated for `n = 8, 16, 32, 64, 128`.
///
/// These are reference values only; the polygons themselves are not built here.
pub const MOSSINGHOFF_PERIMETERS: [(usize, f64); 5] = [
    (8, 3.1209757852),
    (16, 3.1365320240),
    (32, 3.1403306141),
    (64, 3.1412772335),
    (128, 3.1415138006),
];

pub fn mossinghoff_perimeter(n: usize) -> Option<f64> {
    MOSSINGHOFF_PERIMETERS
        .iter()
        .find(|&&(m, _)| m == n)
        .map(|&(_, l)| l)
}

/// `cos(π/2n + π²/4n² − π²/2n³)`, the width of Mossinghoff's polygon.
pub fn mossinghoff_width(n: usize) -> f64 {
    let nf = n as f64;
    cos(PI / (2.0 * nf) + PI * PI / (4.0 * nf * nf) - PI * PI / (2.0 * nf * nf * nf))
}

/// A bound-minus-value deficit with a known leading asymptotic term `C / nᵖ`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum GapKind {
    /// `L̄ₙ − L(Bₙ) ~ π⁷ / 32n⁶`
    BPerimeter,
    /// `W̄ₙ − W(Bₙ) ~ π⁴ / 8n⁴`
    BWidth,
    /// `L̄ₙ − L(Qₙ) ~ π⁵ / 32n⁴`
    QPerimeter,
    /// `W̄ₙ − W(Qₙ) ~ π³ / 8n³`
    QWidth,
    /// `w̄ₙ − W(B̂ₙ) ~ π³ / 8n⁴`
    UnitBWidth,
    /// `L̄ₙ − L(Rₙ) ~ π³ / 8n²`, even `n`
    RegularPerimeter,
    /// `W̄ₙ − W(Rₙ) ~ 3π² / 8n²`, even `n`
    RegularWidth,
    /// `W̄ₙ − W(R⁺ₙ₋₁) ~ π² / 4n³`
    RegularPlusWidth,
}

impl GapKind {
    pub const ALL: [GapKind; 8] = [
        GapKind::BPerimeter,
        GapKind::BWidth,
        GapKind::QPerimeter,
        GapKind::QWidth,
        GapKind::UnitBWidth,
        GapKind::RegularPerimeter,
        GapKind::RegularWidth,
        GapKind::RegularPlusWidth,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            GapKind::BPerimeter => "b-perimeter",
            GapKind::BWidth => "b-width",
            GapKind::QPerimeter => "q-perimeter",
            GapKind::QWidth => "q-width",
            GapKind::UnitBWidth => "unit-b-width",
            GapKind::RegularPerimeter => "regular-perimeter",
            GapKind::RegularWidth => "regular-width",
            GapKind::RegularPlusWidth => "regular-plus-width",
        }
    }

    /// Exponent `p` of the leading term.
    pub fn power(self) -> u32 {
        match self {
            GapKind::BPerimeter => 6,
            GapKind::BWidth | GapKind::QPerimeter | GapKind::UnitBWidth => 4,
            GapKind::QWidth | GapKind::RegularPlusWidth => 3,
            GapKind::RegularPerimeter | GapKind::RegularWidth => 2,
        }
    }

    /// Constant `C` of the leading term.
    pub fn leading_constant(self) -> f64 {
        match self {
            GapKind::BPerimeter => powi(PI, 7) / 32.0,
            GapKind::BWidth => powi(PI, 4) / 8.0,
            GapKind::QPerimeter => powi(PI, 5) / 32.0,
            GapKind::QWidth | GapKind::UnitBWidth => powi(PI, 3) / 8.0,
            GapKind::RegularPerimeter => powi(PI, 3) / 8.0,
            GapKind::RegularWidth => 3.0 * PI * PI / 8.0,
            GapKind::RegularPlusWidth => PI * PI / 4.0,
        }
    }

    fn check(self, n: usize) -> Result<(), BoundsError> {
        let ok = match self {
            GapKind::BPerimeter | GapKind::BWidth | GapKind::UnitBWidth => {
                is_power_of_two_at_least(n, 3)
            }
            GapKind::QPerimeter | GapKind::QWidth => is_power_of_two_at_least(n, 2),
            GapKind::RegularPerimeter | GapKind::RegularWidth | GapKind::RegularPlusWidth => {
                n >= 4 && n.is_multiple_of(2)
            }
        };
        if ok {
            Ok(())
        } else {
            Err(BoundsError::InvalidN {
                family: self.as_str(),
                n,
            })
        }
    }

    /// The deficit `bound − value`, evaluated without cancellation.
    pub fn deficit(self, n: usize) -> Result<f64, BoundsError> {
        self.check(n)?;
        let nf = n as f64;
        let h = PI / (2.0 * nf);
        let sin2 = |x: f64| sin(x) * sin(x);
        Ok(match self {
            GapKind::BPerimeter => 2.0 * perimeter_bound(n) * sin2(beta0(n) / 4.0),
            GapKind::BWidth => {
                let q = beta0(n) / 4.0;
                2.0 * sin(h + q) * sin(q)
            }
            GapKind::QPerimeter => 2.0 * perimeter_bound(n) * sin2(gamma_q(n) / 4.0),
            GapKind::QWidth => {
                let q = gamma_q(n) / 4.0;
                2.0 * sin(h + q) * sin(q)
            }
            GapKind::UnitBWidth => tan(beta0(n) / 2.0) / (2.0 * nf),
            GapKind::RegularPerimeter => 4.0 * nf * sin(h) * sin2(h / 2.0),
            GapKind::RegularWidth => 2.0 * sin(1.5 * h) * sin(h / 2.0),
            GapKind::RegularPlusWidth => {
                // π/(2n−2) − π/2n = π/(2n(n−1))
                let a = PI / (2.0 * nf - 2.0);
                let d = PI / (2.0 * nf * (nf - 1.0));
                2.0 * sin((a + h) / 2.0) * sin(d / 2.0)
            }
        })
    }

    /// `nᵖ · deficit`, which tends to [`leading_constant`](Self::leading_constant).
    pub fn scaled_gap(self, n: usize) -> Result<f64, BoundsError> {
        Ok(powi(n as f64, self.power()) * self.deficit(n)?)
    }
}

/// Scaled gap `nᵖ · (bound − value)` for one family.
pub fn gap_constants(kind: GapKind, n: usize) -> Result<f64, BoundsError> {
    kind.scaled_gap(n)
}
