//! Argument parsing and command dispatch.
//!
//! [`run`] never touches the process streams directly, so tests drive it with
//! in-memory buffers and read back the exit status.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use smallgon_core::{
    b_family, build_b_problem, build_q_problem, certify, from_angles_b, from_angles_q, q_family,
    regular, regular_plus, reuleaux_subdivision, solve, tamvakis, AngleParamB, AngleParamQ,
    SmallPolygon, SolveError, SolverConfig,
};

use crate::error::{CliError, EXIT_OK};
use crate::files::{read_json, ConfigFile, MetricsFile, PolygonFile, ReportFile};
use crate::tables::{self, Precision, TableId, TableSpec};
use crate::{json, svg, verify};

#[derive(Debug, Parser)]
#[command(
    name = "smallgon",
    version,
    about = "Convex small polygons with large perimeter and width"
)]
struct Cli {
    /// Decimal places for table values, or significant digits for angle tables
    #[arg(long, global = true)]
    digits: Option<usize>,
    /// Write the result to this file instead of standard output
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Solver configuration JSON
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum FamilyArg {
    Regular,
    RegularPlus,
    Reuleaux,
    Tamvakis,
    B,
    Q,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum AngleFamilyArg {
    B,
    Q,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Construct a polygon and write it as JSON
    Build {
        #[arg(long, value_enum)]
        family: FamilyArg,
        #[arg(long)]
        n: usize,
        /// Number of Reuleaux arcs
        #[arg(long)]
        m: Option<usize>,
        /// JSON array of angles; builds the b or q layout from them instead
        #[arg(long)]
        angles: Option<PathBuf>,
    },
    /// Measure a polygon file
    Measure { path: PathBuf },
    /// Print one of the reference tables as CSV
    Table {
        #[arg(value_enum)]
        id: TableId,
        /// Polygon sizes, comma separated
        #[arg(long, value_delimiter = ',')]
        n: Vec<usize>,
    },
    /// Draw a polygon file as SVG
    Render { path: PathBuf },
    /// Solve an angle problem and print the certified report
    Optimize {
        #[arg(long, value_enum)]
        family: AngleFamilyArg,
        #[arg(long)]
        n: usize,
    },
    /// Run the invariant suite
    Verify {
        #[arg(long, default_value_t = verify::DEFAULT_N_MAX)]
        n_max: usize,
        /// Also check this polygon file against its construction
        #[arg(long)]
        polygon: Option<PathBuf>,
    },
}

/// Parses `args` (program name first), runs the command and returns the exit code.
pub fn run<I, T>(args: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let text = e.render().to_string();
            let _ = if code == 0 {
                stdout.write_all(text.as_bytes())
            } else {
                stderr.write_all(text.as_bytes())
            };
            return code;
        }
    };
    match dispatch(&cli, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {e}");
            e.exit_code()
        }
    }
}

fn dispatch(cli: &Cli, stdout: &mut dyn Write, stderr: &mut dyn Write) -> Result<(), CliError> {
    match &cli.command {
        Command::Build {
            family,
            n,
            m,
            angles,
        } => {
            let polygon = build(*family, *n, *m, angles.as_deref())?;
            emit(
                cli,
                stdout,
                &json::to_string(&PolygonFile::from_polygon(&polygon)),
            )
        }
        Command::Measure { path } => {
            let file: PolygonFile = read_json(path)?;
            let metrics = file.polygon()?.metrics()?;
            emit(
                cli,
                stdout,
                &json::to_string(&MetricsFile::new(file.n, &metrics)),
            )
        }
        Command::Table { id, n } => {
            let n_values = if n.is_empty() {
                tables::DEFAULT_N.to_vec()
            } else {
                n.clone()
            };
            let spec = TableSpec::new(*id, n_values)?;
            let mut buf = Vec::new();
            tables::write_table(
                &spec,
                Precision { digits: cli.digits },
                &config(cli)?,
                &mut buf,
            )?;
            emit_bytes(cli, stdout, &buf)
        }
        Command::Render { path } => {
            let file: PolygonFile = read_json(path)?;
            emit(cli, stdout, &svg::render(&file.polygon()?))
        }
        Command::Optimize { family, n } => {
            let (problem, family) = match family {
                AngleFamilyArg::B => (build_b_problem(*n)?, smallgon_core::AngleFamily::B),
                AngleFamilyArg::Q => (build_q_problem(*n)?, smallgon_core::AngleFamily::Q),
            };
            match solve(&problem, &config(cli)?) {
                Ok(report) => {
                    certify(&report, *n, family)?;
                    emit(cli, stdout, &json::to_string(&ReportFile::from(&report)))
                }
                Err(SolveError::NoConvergence(report)) => {
                    // the best attempt is still useful for diagnosis
                    emit(cli, stdout, &json::to_string(&ReportFile::from(&*report)))?;
                    Err(SolveError::NoConvergence(report).into())
                }
                Err(e) => Err(e.into()),
            }
        }
        Command::Verify { n_max, polygon } => {
            verify::check_n_max(*n_max)?;
            let injected = match polygon {
                Some(path) => verify::polygon_checks(&read_json(path)?),
                None => Vec::new(),
            };
            let mut checks = verify::run_suite(*n_max)?;
            checks.extend(injected);
            let mut buf = Vec::new();
            verify::write_report(&checks, &mut buf)?;
            emit_bytes(cli, stdout, &buf)?;
            let failed = checks.iter().filter(|c| !c.passed).count();
            let _ = writeln!(
                stderr,
                "{} of {} checks passed",
                checks.len() - failed,
                checks.len()
            );
            if failed > 0 {
                return Err(CliError::ChecksFailed {
                    failed,
                    total: checks.len(),
                });
            }
            Ok(())
        }
    }
}

fn build(
    family: FamilyArg,
    n: usize,
    m: Option<usize>,
    angles: Option<&Path>,
) -> Result<SmallPolygon, CliError> {
    if let Some(path) = angles {
        let alphas: Vec<f64> = read_json(path)?;
        return Ok(match family {
            FamilyArg::B => from_angles_b(&AngleParamB::new(n, alphas)?)?,
            FamilyArg::Q => from_angles_q(&AngleParamQ::new(n, alphas)?)?,
            _ => {
                return Err(CliError::Usage(
                    "--angles only applies to --family b or q".to_owned(),
                ))
            }
        });
    }
    if m.is_some() && family != FamilyArg::Reuleaux {
        return Err(CliError::Usage(
            "--m only applies to --family reuleaux".to_owned(),
        ));
    }
    Ok(match family {
        FamilyArg::Regular => regular(n)?,
        FamilyArg::RegularPlus => regular_plus(n)?,
        FamilyArg::Reuleaux => {
            let m = m.ok_or_else(|| CliError::Usage("--family reuleaux needs --m".to_owned()))?;
            reuleaux_subdivision(m, n)?
        }
        FamilyArg::Tamvakis => tamvakis(n)?,
        FamilyArg::B => b_family(n)?,
        FamilyArg::Q => q_family(n)?,
    })
}

fn config(cli: &Cli) -> Result<SolverConfig, CliError> {
    let config = match &cli.config {
        Some(path) => SolverConfig::from(read_json::<ConfigFile>(path)?),
        None => SolverConfig::default(),
    };
    config.validate()?;
    Ok(config)
}

fn emit(cli: &Cli, stdout: &mut dyn Write, text: &str) -> Result<(), CliError> {
    emit_bytes(cli, stdout, text.as_bytes())
}

fn emit_bytes(cli: &Cli, stdout: &mut dyn Write, bytes: &[u8]) -> Result<(), CliError> {
    match &cli.out {
        Some(path) => {
            fs::write(path, bytes).map_err(|e| CliError::io(path.display().to_string(), e))
        }
        None => stdout
            .write_all(bytes)
            .and_then(|()| stdout.flush())
            .map_err(|e| CliError::io("<stdout>", e)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(
            std::iter::once("smallgon").chain(args.iter().copied()),
            &mut out,
            &mut err,
        );
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn build_b16() {
        let (code, out, _) = run_args(&["build", "--family", "b", "--n", "16"]);
        assert_eq!(code, 0);
        let file: PolygonFile = serde_json::from_str(&out).unwrap();
        assert_eq!(file.vertices.len(), 16);
        assert_eq!(file.vertices[0], [0.0, 0.0]);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["build", "--family", "b", "--n", "12"]).0, 2);
        assert_eq!(run_args(&["build", "--family", "hexagon", "--n", "6"]).0, 2);
        assert_eq!(
            run_args(&["build", "--family", "reuleaux", "--n", "6"]).0,
            2
        );
        assert_eq!(run_args(&["table", "T4", "--n", "256"]).0, 2);
        assert_eq!(run_args(&["frobnicate"]).0, 2);
    }

    #[test]
    fn help_exits_0() {
        let (code, out, _) = run_args(&["--help"]);
        assert_eq!(code, 0);
        assert!(out.contains("verify"));
    }
}
