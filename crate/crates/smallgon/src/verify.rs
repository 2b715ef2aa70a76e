//! The invariant suite behind `smallgon verify`.
//!
//! Each check compares a coordinate-level measurement with an independent
//! closed form, or tests a structural property, and records the error next to
//! its tolerance.

use std::f64::consts::{PI, SQRT_2};
use std::io::Write;

use smallgon_core::bounds::GapKind;
use smallgon_core::constructions::rebuild;
use smallgon_core::{
    b_family, closed_form, q_family, regular, regular_plus, reuleaux_subdivision, tamvakis,
    upper_bounds, ClosedForm, ConstructionError, GraphShape, Params, Point2, SmallPolygon,
};

use crate::error::CliError;
use crate::files::PolygonFile;

pub const DEFAULT_N_MAX: usize = 128;
pub const MAX_N_MAX: usize = 1 << 14;

const METRIC_TOL: f64 = 1e-10;
const PENDANT_TOL: f64 = 1e-10;
const EXACT_TOL: f64 = 1e-12;
const MATCH_TOL: f64 = 1e-12;
/// `n` at which the scaled deficits are compared with their leading constants.
pub const GAP_N: usize = 1 << 12;
const GAP_REL_TOL: f64 = 0.02;

#[derive(Debug, Clone, PartialEq)]
pub struct Check {
    pub name: String,
    pub n: Option<usize>,
    /// Measured error; `NaN` when the check could not be evaluated.
    pub error: f64,
    pub tol: f64,
    pub passed: bool,
    pub detail: String,
}

impl Check {
    fn within(name: &str, n: Option<usize>, error: f64, tol: f64) -> Self {
        Self {
            name: name.to_owned(),
            n,
            error,
            tol,
            passed: error <= tol,
            detail: String::new(),
        }
    }

    fn flag(name: &str, n: Option<usize>, ok: bool, detail: String) -> Self {
        Self {
            name: name.to_owned(),
            n,
            error: if ok { 0.0 } else { 1.0 },
            tol: 0.0,
            passed: ok,
            detail,
        }
    }

    fn broken(name: &str, n: Option<usize>, detail: String) -> Self {
        Self {
            name: name.to_owned(),
            n,
            error: f64::NAN,
            tol: 0.0,
            passed: false,
            detail,
        }
    }
}

pub fn check_n_max(n_max: usize) -> Result<(), CliError> {
    if !n_max.is_power_of_two() || !(8..=MAX_N_MAX).contains(&n_max) {
        return Err(CliError::Usage(format!(
            "n_max must be a power of 2 with 8 <= n_max <= {MAX_N_MAX}, got {n_max}"
        )));
    }
    Ok(())
}

/// Runs every invariant for `n = 8, 16, …, n_max`, plus the fixed identities
/// and asymptotic checks.
pub fn run_suite(n_max: usize) -> Result<Vec<Check>, CliError> {
    check_n_max(n_max)?;
    let mut checks = Vec::new();
    let mut n = 8;
    while n <= n_max {
        family_checks(n, &mut checks);
        proposition_checks(n, &mut checks);
        n *= 2;
    }
    identity_checks(&mut checks);
    gap_checks(&mut checks);
    Ok(checks)
}

fn family_checks(n: usize, out: &mut Vec<Check>) {
    type Build = Box<dyn Fn() -> Result<SmallPolygon, ConstructionError>>;
    let cases: [(&str, usize, ClosedForm, Build); 8] = [
        (
            "regular",
            n,
            ClosedForm::Regular,
            Box::new(move || regular(n)),
        ),
        (
            "regular-odd",
            n - 1,
            ClosedForm::Regular,
            Box::new(move || regular(n - 1)),
        ),
        (
            "regular-plus",
            n,
            ClosedForm::RegularPlus,
            Box::new(move || regular_plus(n)),
        ),
        (
            "tamvakis",
            n,
            ClosedForm::Tamvakis,
            Box::new(move || tamvakis(n)),
        ),
        (
            "reuleaux-3",
            3 * n / 4,
            ClosedForm::ReuleauxSub { m: 3 },
            Box::new(move || reuleaux_subdivision(3, 3 * n / 4)),
        ),
        (
            "reuleaux-5",
            5 * n / 8,
            ClosedForm::ReuleauxSub { m: 5 },
            Box::new(move || reuleaux_subdivision(5, 5 * n / 8)),
        ),
        ("b", n, ClosedForm::B, Box::new(move || b_family(n))),
        ("q", n, ClosedForm::Q, Box::new(move || q_family(n))),
    ];
    for (name, size, form, build) in cases {
        let polygon = match build() {
            Ok(p) => p,
            Err(e) => {
                out.push(Check::broken(name, Some(size), e.to_string()));
                continue;
            }
        };
        metric_checks(name, size, &polygon, form, out);
        if matches!(form, ClosedForm::Regular) && size == n {
            metric_checks(
                "unit-regular",
                n,
                &polygon.to_unit_perimeter(),
                ClosedForm::UnitRegular,
                out,
            );
        }
        if matches!(form, ClosedForm::B) {
            metric_checks(
                "unit-b",
                n,
                &polygon.to_unit_perimeter(),
                ClosedForm::UnitB,
                out,
            );
        }
    }
}

fn metric_checks(name: &str, n: usize, p: &SmallPolygon, form: ClosedForm, out: &mut Vec<Check>) {
    let (perimeter, width) = match closed_form(form, n) {
        Ok(v) => v,
        Err(e) => {
            out.push(Check::broken(name, Some(n), e.to_string()));
            return;
        }
    };
    out.push(Check::within(
        &format!("{name} perimeter"),
        Some(n),
        (p.perimeter() - perimeter).abs(),
        METRIC_TOL,
    ));
    match p.width() {
        Ok(w) => out.push(Check::within(
            &format!("{name} width"),
            Some(n),
            (w - width).abs(),
            METRIC_TOL,
        )),
        Err(e) => out.push(Check::broken(
            &format!("{name} width"),
            Some(n),
            e.to_string(),
        )),
    }
}

fn proposition_checks(n: usize, out: &mut Vec<Check>) {
    let (b, q) = match (b_family(n), q_family(n)) {
        (Ok(b), Ok(q)) => (b, q),
        (Err(e), _) | (_, Err(e)) => {
            out.push(Check::broken("propositions", Some(n), e.to_string()));
            return;
        }
    };
    let label = |k: usize| {
        b.vertex_by_label(k)
            .expect("b-family polygons carry labels")
    };

    let quarter = label(n / 4);
    out.push(Check::within(
        "b quarter vertex at (-1/2 1/2)",
        Some(n),
        (quarter.x + 0.5).abs().max((quarter.y - 0.5).abs()),
        EXACT_TOL,
    ));

    // every pendant edge, both halves, extended to a line through (0, 1/2)
    let center = Point2::new(0.0, 0.5);
    let mut worst: f64 = 0.0;
    for k in 1..n / 4 {
        for (a, e) in [
            (label(k), label(k + n / 2 + 1)),
            (label(n / 2 - k + 1), label(n - k)),
        ] {
            worst = worst.max(((e - a).cross(center - a) / e.dist(a)).abs());
        }
    }
    out.push(Check::within(
        "b pendant lines through (0 1/2)",
        Some(n),
        worst,
        PENDANT_TOL,
    ));

    let area = n as f64 / 8.0 * (2.0 * PI / n as f64).sin();
    out.push(Check::within(
        "b area",
        Some(n),
        (b.area() - area).abs(),
        EXACT_TOL,
    ));

    let shape_check = |name: &str, p: &SmallPolygon, want: GraphShape| {
        let got = p.diameter().shape(n);
        Check::flag(name, Some(n), got == Some(want), format!("{got:?}"))
    };
    out.push(shape_check(
        "b diameter graph",
        &b,
        GraphShape {
            cycle_len: n / 2 + 1,
            pendants: n / 2 - 1,
            isolated: 0,
        },
    ));
    out.push(shape_check(
        "q diameter graph",
        &q,
        GraphShape {
            cycle_len: n - 1,
            pendants: 1,
            isolated: 0,
        },
    ));

    let ordering = (|| -> Result<bool, CliError> {
        let l = |f| closed_form(f, n).map(|v| v.0);
        Ok(l(ClosedForm::Regular)? < l(ClosedForm::RegularPlus)?
            && l(ClosedForm::RegularPlus)? < l(ClosedForm::Q)?
            && l(ClosedForm::Q)? < l(ClosedForm::B)?
            && l(ClosedForm::B)? < upper_bounds(n)?.perimeter)
    })();
    out.push(match ordering {
        Ok(ok) => Check::flag("perimeter ordering", Some(n), ok, String::new()),
        Err(e) => Check::broken("perimeter ordering", Some(n), e.to_string()),
    });
}

fn identity_checks(out: &mut Vec<Check>) {
    match b_family(8).map(|b| b.width()) {
        Ok(Ok(w)) => {
            let exact = (10.0 + 2.0 * 7f64.sqrt()).sqrt() / 4.0;
            out.push(Check::within(
                "b width identity",
                Some(8),
                (w - exact).abs(),
                EXACT_TOL,
            ));
        }
        Ok(Err(e)) => out.push(Check::broken("b width identity", Some(8), e.to_string())),
        Err(e) => out.push(Check::broken("b width identity", Some(8), e.to_string())),
    }
    match q_family(4) {
        Ok(q) => {
            let exact = 2.0 + 6f64.sqrt() - SQRT_2;
            out.push(Check::within(
                "q perimeter identity",
                Some(4),
                (q.perimeter() - exact).abs(),
                EXACT_TOL,
            ));
        }
        Err(e) => out.push(Check::broken(
            "q perimeter identity",
            Some(4),
            e.to_string(),
        )),
    }
}

fn gap_checks(out: &mut Vec<Check>) {
    for kind in [
        GapKind::BPerimeter,
        GapKind::BWidth,
        GapKind::QPerimeter,
        GapKind::UnitBWidth,
    ] {
        let name = format!("{} gap constant", kind.as_str());
        match kind.scaled_gap(GAP_N) {
            Ok(g) => {
                let c = kind.leading_constant();
                out.push(Check::within(
                    &name,
                    Some(GAP_N),
                    (g / c - 1.0).abs(),
                    GAP_REL_TOL,
                ));
            }
            Err(e) => out.push(Check::broken(&name, Some(GAP_N), e.to_string())),
        }
    }
}

/// Checks an externally supplied polygon: valid frame, convex and small, and
/// equal to what its recorded parameters rebuild.
pub fn polygon_checks(file: &PolygonFile) -> Vec<Check> {
    let name = |s: &str| format!("input {s}");
    let n = Some(file.vertices.len());
    let mut out = vec![Check::flag(
        &name("vertex count"),
        n,
        file.n == file.vertices.len(),
        format!("declared {}", file.n),
    )];
    let params = match file.construction_params() {
        Ok(p) => p,
        Err(e) => {
            out.push(Check::broken(&name("parameters"), n, e.to_string()));
            return out;
        }
    };
    match SmallPolygon::new(file.points(), params.clone()) {
        Ok(_) => out.push(Check::flag(
            &name("small convex polygon"),
            n,
            true,
            String::new(),
        )),
        Err(e) => out.push(Check::broken(
            &name("small convex polygon"),
            n,
            e.to_string(),
        )),
    }
    if params == Params::Raw {
        return out;
    }
    match rebuild(&params) {
        Some(Ok(reference)) if reference.n() == file.vertices.len() => {
            let worst = reference
                .vertices()
                .iter()
                .zip(file.points())
                .map(|(a, b)| a.dist(b))
                .fold(0.0, f64::max);
            out.push(Check::within(
                &name("matches construction"),
                n,
                worst,
                MATCH_TOL,
            ));
        }
        Some(Ok(reference)) => out.push(Check::broken(
            &name("matches construction"),
            n,
            format!("construction has {} vertices", reference.n()),
        )),
        Some(Err(e)) => out.push(Check::broken(
            &name("matches construction"),
            n,
            e.to_string(),
        )),
        None => {}
    }
    out
}

pub fn write_report<W: Write>(checks: &[Check], out: W) -> Result<(), CliError> {
    let mut w = csv::Writer::from_writer(out);
    let io = |e: csv::Error| CliError::io("<output>", e.into());
    w.write_record(["check", "n", "error", "tolerance", "status", "detail"])
        .map_err(io)?;
    for c in checks {
        w.write_record([
            c.name.clone(),
            c.n.map(|n| n.to_string()).unwrap_or_default(),
            format!("{:.3e}", c.error),
            format!("{:.1e}", c.tol),
            if c.passed { "PASS" } else { "FAIL" }.to_owned(),
            c.detail.clone(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_passes_to_128() {
        let checks = run_suite(128).unwrap();
        let failed: Vec<_> = checks.iter().filter(|c| !c.passed).collect();
        assert!(failed.is_empty(), "{failed:#?}");
        assert!(checks.len() > 100);
    }

    #[test]
    fn quarter_vertex_at_64() {
        let checks = run_suite(64).unwrap();
        let c = checks
            .iter()
            .find(|c| c.name.starts_with("b quarter") && c.n == Some(64))
            .unwrap();
        assert!(c.passed && c.error <= 1e-12);
    }

    #[test]
    fn rejects_bad_n_max() {
        assert!(run_suite(100).is_err());
        assert!(run_suite(4).is_err());
    }

    #[test]
    fn perturbed_polygon_fails() {
        let mut file = PolygonFile::from_polygon(&b_family(16).unwrap());
        assert!(polygon_checks(&file).iter().all(|c| c.passed));
        file.vertices[3][0] += 1e-7;
        let checks = polygon_checks(&file);
        assert!(checks.iter().any(|c| !c.passed));
    }

    #[test]
    fn broken_checks_fail() {
        let c = Check::broken("x", None, String::new());
        assert!(!c.passed);
        assert!(!Check::within("x", None, f64::NAN, 1.0).passed);
    }
}
