//! Vertex coordinates for every polygon family.
//!
//! All constructions use the same frame: vertices in counterclockwise order,
//! `v₀` at the origin, the polygon in `y >= 0`, and the mirror axis (when the
//! family has one) along the y-axis.

mod angles;

use alloc::vec::Vec;

use thiserror::Error;

pub use angles::{deviations, AngleFamily, AngleParamB, AngleParamQ, CLOSURE_TOL, SUM_TOL};

use crate::bounds::beta0;
use crate::geometry::{GeometryError, Params, Point2, SmallPolygon};
use crate::math::{atan2, cos, is_power_of_two_at_least, sin, PI};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ConstructionError {
    #[error("invalid n = {n} for family {family}: {reason}")]
    InvalidN {
        family: &'static str,
        n: usize,
        reason: &'static str,
    },
    #[error("reuleaux subdivision needs odd m >= 3 dividing n, got m = {m}, n = {n}")]
    InvalidReuleaux { m: usize, n: usize },
    #[error("expected {expected} angles, got {got}")]
    WrongAngleCount { expected: usize, got: usize },
    #[error("angle {index} = {value} is outside its box bounds")]
    AngleOutOfBounds { index: usize, value: f64 },
    #[error("infeasible angles: angle-sum residual {sum_residual:e}, closure residual {closure_residual:e}")]
    InfeasibleAngles {
        sum_residual: f64,
        closure_residual: f64,
    },
    #[error("polygon carries no construction labels")]
    Unlabeled,
    #[error(transparent)]
    Geometry(#[from] GeometryError),
}

fn invalid_n(family: &'static str, n: usize, reason: &'static str) -> ConstructionError {
    ConstructionError::InvalidN { family, n, reason }
}

/// Vertices of the regular small `n`-gon, `v₀` at the origin.
fn regular_points(n: usize) -> Vec<Point2> {
    let radius = if n.is_multiple_of(2) {
        0.5
    } else {
        0.5 / cos(PI / (2 * n) as f64)
    };
    let half: Vec<Point2> = (0..=n / 2)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / n as f64;
            let x = if 2 * k == n { 0.0 } else { radius * sin(t) };
            Point2::new(x, radius - radius * cos(t))
        })
        .collect();
    (0..n)
        .map(|k| {
            if 2 * k <= n {
                half[k]
            } else {
                half[n - k].mirrored()
            }
        })
        .collect()
}

/// The regular small `n`-gon `Rₙ`.
///
/// Even `n` has circumradius `1/2`; odd `n` has circumradius
/// `1 / (2 cos(π/2n))` so that each vertex is at unit distance from the two
/// far ones.
pub fn regular(n: usize) -> Result<SmallPolygon, ConstructionError> {
    if n < 3 {
        return Err(invalid_n("regular", n, "must be at least 3"));
    }
    Ok(SmallPolygon::new(regular_points(n), Params::Regular { n })?)
}

/// `R⁺ₙ₋₁`: the regular `(n−1)`-gon with one more vertex at distance 1 from
/// `v₀` along the bisector of the angle at `v₀`.
pub fn regular_plus(n: usize) -> Result<SmallPolygon, ConstructionError> {
    if n < 4 || !n.is_multiple_of(2) {
        return Err(invalid_n("regular-plus", n, "must be even and at least 4"));
    }
    let mut v = regular_points(n - 1);
    v.insert(n / 2, Point2::new(0.0, 1.0));
    Ok(SmallPolygon::new(v, Params::RegularPlus { n })?)
}

/// Points splitting each Reuleaux arc of `R₃`/`Rₘ` into `counts[k]` equal subarcs.
///
/// Arc `k` joins `vₖ` to `vₖ₊₁` and is centred at the vertex opposite that
/// edge. Each arc contributes its start point and interior points.
fn subdivided_arcs(base: &[Point2], counts: &[usize]) -> Vec<Point2> {
    let m = base.len();
    let arc = PI / m as f64;
    let mut out = Vec::with_capacity(counts.iter().sum());
    for (k, &count) in counts.iter().enumerate() {
        let center = base[(k + m.div_ceil(2)) % m];
        let start = base[k] - center;
        let phi0 = atan2(start.y, start.x);
        out.push(base[k]);
        for j in 1..count {
            let phi = phi0 + arc * j as f64 / count as f64;
            out.push(center + Point2::new(cos(phi), sin(phi)));
        }
    }
    out
}

/// `R_{m,n}`: the Reuleaux `m`-gon with `n/m − 1` evenly spaced extra
/// vertices on each arc.
pub fn reuleaux_subdivision(m: usize, n: usize) -> Result<SmallPolygon, ConstructionError> {
    if m < 3 || m.is_multiple_of(2) || !n.is_multiple_of(m) {
        return Err(ConstructionError::InvalidReuleaux { m, n });
    }
    let base = regular_points(m);
    let counts = alloc::vec![n / m; m];
    let v = subdivided_arcs(&base, &counts);
    Ok(SmallPolygon::new(v, Params::ReuleauxSub { m, n })?)
}

/// Tamvakis' `Tₙ` for `n = 2^s`, `s >= 2`.
///
/// The three arcs of the Reuleaux triangle get `⌈n/3⌉` or `⌊n/3⌋` equal
/// subarcs. The top arc (centred at `v₀`, symmetric about the y-axis) takes
/// the count that occurs once: `k + 1` when `n = 3k + 1`, `k` when
/// `n = 3k + 2`.
pub fn tamvakis(n: usize) -> Result<SmallPolygon, ConstructionError> {
    if !is_power_of_two_at_least(n, 2) {
        return Err(invalid_n(
            "tamvakis",
            n,
            "must be a power of 2 and at least 4",
        ));
    }
    let k = n / 3;
    let (side, top) = if n % 3 == 1 { (k, k + 1) } else { (k + 1, k) };
    let base = regular_points(3);
    let v = subdivided_arcs(&base, &[side, top, side]);
    debug_assert_eq!(v.len(), n);
    Ok(SmallPolygon::new(v, Params::Tamvakis { n })?)
}

/// `Bₙ` for `n = 2^s`, `s >= 3`, from its closed-form coordinates.
///
/// Labels follow the diameter graph: `v₀…v_{n/2}` is the cycle,
/// `v_{n/2+1} = (0, 1)` and the remaining labels are pendant ends.
pub fn b_family(n: usize) -> Result<SmallPolygon, ConstructionError> {
    AngleFamily::B.check_n(n)?;
    let beta = beta0(n);
    let step = PI / n as f64;
    let s2 = sin(2.0 * step);
    let q = n / 4;

    let mut v = alloc::vec![Point2::ORIGIN; n];
    v[n / 2 + 1] = Point2::new(0.0, 1.0);
    for k in 1..=q {
        let alt = if k % 2 == 0 { 1.0 } else { -1.0 };
        let phi = 2.0 * k as f64 * step;
        let lift = sin(beta - alt * step);
        let p = Point2::new(
            sin(phi) * lift / s2,
            (sin(step - beta) + cos(phi) * lift) / s2,
        );
        v[k] = p;
        v[n / 2 - k + 1] = p.mirrored();
        if k < q {
            let pendant = p + Point2::new(sin(phi), cos(phi)) * alt;
            v[k + n / 2 + 1] = pendant;
            v[n - k] = pendant.mirrored();
        }
    }
    Ok(SmallPolygon::from_labeled(v, Params::BFamily { n })?)
}

/// `Qₙ` for `n = 2^s`, `s >= 2`: the `Q` layout with angles
/// `π/n − (−1)^k γ(n)`.
pub fn q_family(n: usize) -> Result<SmallPolygon, ConstructionError> {
    let param = AngleParamQ::analytic(n)?;
    let v = angles::q_layout_points(n, param.alphas());
    Ok(SmallPolygon::from_labeled(v, Params::QFamily { n })?)
}

/// Rebuilds the symmetric `B`-layout polygon from its angles.
///
/// Cycle vertices follow the alternating-direction recursion from `v₀`,
/// pendant ends hang off them along the angle bisectors, and the left half is
/// the mirror image of the right.
pub fn from_angles_b(param: &AngleParamB) -> Result<SmallPolygon, ConstructionError> {
    param.check_feasible()?;
    let v = angles::b_layout_points(param.n(), param.alphas());
    Ok(SmallPolygon::from_labeled(
        v,
        Params::FromAnglesB {
            alphas: param.alphas().to_vec(),
        },
    )?)
}

/// Rebuilds the symmetric `Q`-layout polygon from its angles.
///
/// The `(n−1)`-cycle is walked from `v₀` with unit steps whose bearings are
/// the partial angle sums, alternating direction at each vertex; the pendant
/// end is `(0, 1)`.
pub fn from_angles_q(param: &AngleParamQ) -> Result<SmallPolygon, ConstructionError> {
    param.check_feasible()?;
    let v = angles::q_layout_points(param.n(), param.alphas());
    Ok(SmallPolygon::from_labeled(
        v,
        Params::FromAnglesQ {
            alphas: param.alphas().to_vec(),
        },
    )?)
}

/// Rebuilds a polygon from its [`Params`]. `Raw` has no recipe and yields `None`.
pub fn rebuild(params: &Params) -> Option<Result<SmallPolygon, ConstructionError>> {
    Some(match params {
        Params::Regular { n } => regular(*n),
        Params::RegularPlus { n } => regular_plus(*n),
        Params::ReuleauxSub { m, n } => reuleaux_subdivision(*m, *n),
        Params::Tamvakis { n } => tamvakis(*n),
        Params::BFamily { n } => b_family(*n),
        Params::QFamily { n } => q_family(*n),
        Params::FromAnglesB { alphas } => {
            AngleParamB::new(4 * (alphas.len().max(1) - 1), alphas.clone())
                .and_then(|p| from_angles_b(&p))
        }
        Params::FromAnglesQ { alphas } => {
            AngleParamQ::new(2 * alphas.len(), alphas.clone()).and_then(|p| from_angles_q(&p))
        }
        Params::Raw => return None,
    })
}
