//! The six reference tables as CSV.
//!
//! Tables 1 to 3 come from closed forms alone. Tables 4 to 6 run the
//! optimizer, one thread per solve.

use std::f64::consts::PI;
use std::io::Write;
use std::thread;

use smallgon_core::bounds::{mossinghoff_perimeter, GapKind};
use smallgon_core::{
    build_b_problem, build_q_problem, closed_form, solve, upper_bounds, ClosedForm, NlpProblem,
    SolveReport, SolverConfig,
};

use crate::error::CliError;

pub const DEFAULT_N: [usize; 5] = [8, 16, 32, 64, 128];
/// Largest `n` the optimizer tables accept.
pub const MAX_OPTIMIZER_N: usize = 128;
/// Largest `n` the closed-form tables accept.
pub const MAX_CLOSED_FORM_N: usize = 1 << 20;

const DECIMALS: usize = 10;
/// Columns the reference prints to 12 decimals at `n = 128`.
const WIDE_DECIMALS: usize = 12;
const WIDE_N: usize = 128;
const RATIO_DECIMALS: usize = 4;
const ANGLE_DIGITS: usize = 6;
const ANGLES_PER_ROW: usize = 8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum TableId {
    /// Perimeters of the B family against earlier constructions
    #[value(name = "T1", aliases = ["t1", "T1_perimeters"])]
    T1,
    /// Widths of the B family
    #[value(name = "T2", aliases = ["t2", "T2_widths"])]
    T2,
    /// Widths of the unit-perimeter B family
    #[value(name = "T3", aliases = ["t3", "T3_unit_perimeter_widths"])]
    T3,
    /// Optimal perimeters of both angle problems
    #[value(name = "T4", aliases = ["t4", "T4_optimal_perimeters"])]
    T4,
    /// Optimal B angles
    #[value(name = "T5", aliases = ["t5", "T5_b_angles"])]
    T5,
    /// Optimal Q angles
    #[value(name = "T6", aliases = ["t6", "T6_q_angles"])]
    T6,
}

impl TableId {
    pub fn uses_optimizer(self) -> bool {
        matches!(self, TableId::T4 | TableId::T5 | TableId::T6)
    }

    pub fn header(self) -> Vec<&'static str> {
        match self {
            TableId::T1 => vec![
                "n",
                "L(R_n)",
                "L(R+_n-1)",
                "L(T_n)",
                "L(M_n)",
                "L(B_n)",
                "Lbar_n",
                "(L(B_n)-L(M_n))/(Lbar_n-L(M_n))",
            ],
            TableId::T2 => vec![
                "n",
                "W(R_n)",
                "W(R+_n-1)",
                "W(B_n)",
                "Wbar_n",
                "(W(B_n)-W(R+_n-1))/(Wbar_n-W(R+_n-1))",
            ],
            TableId::T3 => vec![
                "n",
                "W(Rhat_n)",
                "wbar_n-1",
                "W(Bhat_n)",
                "wbar_n",
                "(W(Bhat_n)-wbar_n-1)/(wbar_n-wbar_n-1)",
            ],
            TableId::T4 => vec![
                "n",
                "L(Q*_n)",
                "L(B_n)",
                "L(B*_n)",
                "Lbar_n",
                "(L(B*_n)-L(B_n))/(Lbar_n-L(B_n))",
            ],
            TableId::T5 | TableId::T6 => vec![
                "n", "pi/n", "i", "a_8i", "a_8i+1", "a_8i+2", "a_8i+3", "a_8i+4", "a_8i+5",
                "a_8i+6", "a_8i+7",
            ],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TableSpec {
    pub id: TableId,
    pub n_values: Vec<usize>,
}

impl TableSpec {
    pub fn new(id: TableId, n_values: Vec<usize>) -> Result<Self, CliError> {
        let max = if id.uses_optimizer() {
            MAX_OPTIMIZER_N
        } else {
            MAX_CLOSED_FORM_N
        };
        if n_values.is_empty() {
            return Err(CliError::Usage("no n values given".to_owned()));
        }
        for &n in &n_values {
            if !n.is_power_of_two() || n < 8 || n > max {
                return Err(CliError::Usage(format!(
                    "table {id:?} needs n a power of 2 with 8 <= n <= {max}, got {n}"
                )));
            }
        }
        Ok(Self { id, n_values })
    }
}

/// Output precision. `digits` overrides both the decimals of value columns
/// and the significant digits of angle columns.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Precision {
    pub digits: Option<usize>,
}

impl Precision {
    fn value(self, x: f64, wide: bool) -> String {
        let d = self
            .digits
            .unwrap_or(if wide { WIDE_DECIMALS } else { DECIMALS });
        format!("{x:.d$}")
    }

    fn angle(self, x: f64) -> String {
        format_significant(x, self.digits.unwrap_or(ANGLE_DIGITS))
    }
}

fn ratio(x: f64) -> String {
    format!("{x:.RATIO_DECIMALS$}")
}

/// `x` rounded to `sig` significant digits in positional notation.
pub fn format_significant(x: f64, sig: usize) -> String {
    let sig = sig.max(1);
    if x == 0.0 || !x.is_finite() {
        return format!("{x:.prec$}", prec = sig - 1);
    }
    // the exponent after rounding, so 0.09999996 counts as 0.1000000
    let sci = format!("{x:.prec$e}", prec = sig - 1);
    let exp: i64 = sci[sci.find('e').unwrap() + 1..].parse().unwrap();
    let decimals = (sig as i64 - 1 - exp).max(0) as usize;
    format!("{x:.decimals$}")
}

/// One table as CSV rows, header first.
pub fn table_rows(
    spec: &TableSpec,
    precision: Precision,
    config: &SolverConfig,
) -> Result<Vec<Vec<String>>, CliError> {
    let mut rows = vec![spec.id.header().into_iter().map(str::to_owned).collect()];
    match spec.id {
        TableId::T1 | TableId::T2 | TableId::T3 => {
            for &n in &spec.n_values {
                rows.push(closed_form_row(spec.id, n, precision)?);
            }
        }
        TableId::T4 => {
            let b = solve_all(&spec.n_values, config, build_b_problem)?;
            let q = solve_all(&spec.n_values, config, build_q_problem)?;
            for ((&n, (b_problem, b)), (_, q)) in spec.n_values.iter().zip(&b).zip(&q) {
                let wide = n == WIDE_N;
                let lb = closed_form(ClosedForm::B, n)?.0;
                let bound = upper_bounds(n)?.perimeter;
                // both differences are near the last digit of L, so neither is subtracted
                let gain = b_problem.gain_over_warm_start(&b.angles);
                let deficit = GapKind::BPerimeter.deficit(n)?;
                rows.push(vec![
                    n.to_string(),
                    precision.value(q.objective, false),
                    precision.value(lb, wide),
                    precision.value(b.objective, wide),
                    precision.value(bound, wide),
                    ratio(gain / deficit),
                ]);
            }
        }
        TableId::T5 | TableId::T6 => {
            let build = if spec.id == TableId::T5 {
                build_b_problem
            } else {
                build_q_problem
            };
            let reports = solve_all(&spec.n_values, config, build)?;
            for (&n, (_, report)) in spec.n_values.iter().zip(&reports) {
                for (i, chunk) in report.angles.chunks(ANGLES_PER_ROW).enumerate() {
                    let mut row =
                        vec![n.to_string(), precision.angle(PI / n as f64), i.to_string()];
                    row.extend(chunk.iter().map(|&a| precision.angle(a)));
                    row.resize(3 + ANGLES_PER_ROW, String::new());
                    rows.push(row);
                }
            }
        }
    }
    Ok(rows)
}

fn closed_form_row(id: TableId, n: usize, precision: Precision) -> Result<Vec<String>, CliError> {
    let v = |x: f64| precision.value(x, false);
    let bounds = upper_bounds(n)?;
    Ok(match id {
        TableId::T1 => {
            let wide = n == WIDE_N;
            let lb = closed_form(ClosedForm::B, n)?.0;
            let m = mossinghoff_perimeter(n);
            vec![
                n.to_string(),
                v(closed_form(ClosedForm::Regular, n)?.0),
                v(closed_form(ClosedForm::RegularPlus, n)?.0),
                v(closed_form(ClosedForm::Tamvakis, n)?.0),
                m.map(v).unwrap_or_default(),
                precision.value(lb, wide),
                precision.value(bounds.perimeter, wide),
                m.map(|m| ratio((lb - m) / (bounds.perimeter - m)))
                    .unwrap_or_default(),
            ]
        }
        TableId::T2 => {
            let plus = closed_form(ClosedForm::RegularPlus, n)?.1;
            let wb = closed_form(ClosedForm::B, n)?.1;
            vec![
                n.to_string(),
                v(closed_form(ClosedForm::Regular, n)?.1),
                v(plus),
                v(wb),
                v(bounds.width),
                ratio((wb - plus) / (bounds.width - plus)),
            ]
        }
        TableId::T3 => {
            let lower = upper_bounds(n - 1)?.unit_width;
            let wb = closed_form(ClosedForm::UnitB, n)?.1;
            vec![
                n.to_string(),
                v(closed_form(ClosedForm::UnitRegular, n)?.1),
                v(lower),
                v(wb),
                v(bounds.unit_width),
                ratio((wb - lower) / (bounds.unit_width - lower)),
            ]
        }
        _ => unreachable!("optimizer tables have no closed-form rows"),
    })
}

/// Solves one problem per `n` concurrently, keeping the input order.
fn solve_all(
    n_values: &[usize],
    config: &SolverConfig,
    build: fn(usize) -> Result<NlpProblem, smallgon_core::ConstructionError>,
) -> Result<Vec<(NlpProblem, SolveReport)>, CliError> {
    let problems = n_values
        .iter()
        .map(|&n| build(n))
        .collect::<Result<Vec<_>, _>>()?;
    thread::scope(|s| {
        let handles: Vec<_> = problems
            .iter()
            .map(|p| s.spawn(move || solve(p, config)))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver threads do not panic"))
            .collect::<Result<Vec<_>, _>>()
    })
    .map(|reports| problems.into_iter().zip(reports).collect())
    .map_err(CliError::from)
}

pub fn write_table<W: Write>(
    spec: &TableSpec,
    precision: Precision,
    config: &SolverConfig,
    out: W,
) -> Result<(), CliError> {
    let rows = table_rows(spec, precision, config)?;
    let mut w = csv::WriterBuilder::new().flexible(false).from_writer(out);
    for row in rows {
        w.write_record(&row)
            .map_err(|e| CliError::io("<output>", e.into()))?;
    }
    w.flush().map_err(|e| CliError::io("<output>", e))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn rows(id: TableId, n: &[usize]) -> Vec<Vec<String>> {
        let spec = TableSpec::new(id, n.to_vec()).unwrap();
        table_rows(&spec, Precision::default(), &SolverConfig::default()).unwrap()
    }

    #[test]
    fn t1_row_32() {
        let r = rows(TableId::T1, &[32]);
        assert_eq!(
            r[1],
            [
                "32",
                "3.1365484905",
                "3.1402809876",
                "3.1403234211",
                "3.1403306141",
                "3.1403310687",
                "3.1403311570",
                "0.8374"
            ]
        );
    }

    #[test]
    fn t1_wide_row() {
        let r = rows(TableId::T1, &[128]);
        assert_eq!(r[1][5], "3.141513801123");
        assert_eq!(r[1][6], "3.141513801144");
        assert_eq!(r[1][1], "3.1412772509");
    }

    #[test]
    fn t3_ratio() {
        assert_eq!(rows(TableId::T3, &[64])[1][5], "0.8870");
        assert_eq!(rows(TableId::T3, &[128])[1][5], "0.9428");
    }

    #[test]
    fn m_column_blank_outside_reference() {
        let r = rows(TableId::T1, &[256]);
        assert_eq!(r[1][4], "");
        assert_eq!(r[1][7], "");
    }

    #[test]
    fn t4_row_8() {
        assert_eq!(
            rows(TableId::T4, &[8])[1],
            [
                "8",
                "3.1195976652",
                "3.1210621230",
                "3.1211471341",
                "3.1214451523",
                "0.2219"
            ]
        );
    }

    #[test]
    fn t5_layout() {
        let r = rows(TableId::T5, &[8, 32]);
        assert_eq!(r.len(), 1 + 1 + 2);
        assert_eq!(
            &r[1][..6],
            ["8", "0.392699", "0", "0.435281", "0.368535", "0.398447"]
        );
        assert_eq!(r[1][6], "");
        assert_eq!(&r[3][..4], ["32", "0.0981748", "1", "0.0981803"]);
    }

    #[test]
    fn rejects_bad_n() {
        assert!(TableSpec::new(TableId::T4, vec![256]).is_err());
        assert!(TableSpec::new(TableId::T1, vec![12]).is_err());
        assert!(TableSpec::new(TableId::T1, vec![]).is_err());
        assert!(TableSpec::new(TableId::T1, vec![256]).is_ok());
    }

    #[test]
    fn significant_digits() {
        assert_eq!(format_significant(0.0490874, 6), "0.0490874");
        assert_eq!(format_significant(0.049157, 6), "0.0491570");
        assert_eq!(format_significant(0.09999996, 6), "0.100000");
        assert_eq!(format_significant(1.23456789, 3), "1.23");
    }

    #[test]
    fn digits_override() {
        let spec = TableSpec::new(TableId::T2, vec![8]).unwrap();
        let r = table_rows(
            &spec,
            Precision { digits: Some(4) },
            &SolverConfig::default(),
        )
        .unwrap();
        assert_eq!(r[1][1], "0.9239");
        assert_eq!(r[1][5], "0.4577");
    }
}
