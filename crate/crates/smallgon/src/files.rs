//! On-disk formats: polygon files, solver configuration and solve reports.

use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;
use serde::{Deserialize, Serialize};
use smallgon_core::{
    AngleFamily, MetricsReport, Params, Point2, Polygon, SmallPolygon, SolveReport, SolverConfig,
};

use crate::error::CliError;

/// `{"n", "family", "params", "vertices"}` with vertices in counterclockwise order.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolygonFile {
    pub n: usize,
    pub family: String,
    #[serde(default)]
    pub params: ParamsFile,
    pub vertices: Vec<[f64; 2]>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub m: Option<usize>,
    /// Layout of a `from-angles` polygon, `"b"` or `"q"`.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub kind: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alphas: Option<Vec<f64>>,
}

impl PolygonFile {
    pub fn from_polygon(p: &SmallPolygon) -> Self {
        let mut params = ParamsFile::default();
        match p.params() {
            Params::Regular { n }
            | Params::RegularPlus { n }
            | Params::Tamvakis { n }
            | Params::BFamily { n }
            | Params::QFamily { n } => params.n = Some(*n),
            Params::ReuleauxSub { m, n } => {
                params.m = Some(*m);
                params.n = Some(*n);
            }
            Params::FromAnglesB { alphas } => {
                params.kind = Some("b".to_owned());
                params.alphas = Some(alphas.clone());
            }
            Params::FromAnglesQ { alphas } => {
                params.kind = Some("q".to_owned());
                params.alphas = Some(alphas.clone());
            }
            Params::Raw => {}
        }
        Self {
            n: p.n(),
            family: p.family().as_str().to_owned(),
            params,
            vertices: p.vertices().iter().map(|v| [v.x, v.y]).collect(),
        }
    }

    pub fn points(&self) -> Vec<Point2> {
        self.vertices
            .iter()
            .map(|&[x, y]| Point2::new(x, y))
            .collect()
    }

    /// The vertices as a plain polygon, with `n` checked against the vertex count.
    pub fn polygon(&self) -> Result<Polygon, CliError> {
        if self.n != self.vertices.len() {
            return Err(CliError::Usage(format!(
                "polygon file declares n = {} but lists {} vertices",
                self.n,
                self.vertices.len()
            )));
        }
        Ok(Polygon::new(self.points())?)
    }

    /// The construction parameters named by `family` and `params`.
    pub fn construction_params(&self) -> Result<Params, CliError> {
        let need_n = || {
            self.params
                .n
                .ok_or_else(|| CliError::Usage(format!("family {} needs params.n", self.family)))
        };
        Ok(match self.family.as_str() {
            "regular" => Params::Regular { n: need_n()? },
            "regular-plus" => Params::RegularPlus { n: need_n()? },
            "tamvakis" => Params::Tamvakis { n: need_n()? },
            "b" => Params::BFamily { n: need_n()? },
            "q" => Params::QFamily { n: need_n()? },
            "reuleaux" => Params::ReuleauxSub {
                m: self
                    .params
                    .m
                    .ok_or_else(|| CliError::Usage("family reuleaux needs params.m".to_owned()))?,
                n: need_n()?,
            },
            "from-angles" => {
                let alphas = self.params.alphas.clone().ok_or_else(|| {
                    CliError::Usage("family from-angles needs params.alphas".to_owned())
                })?;
                match self.params.kind.as_deref() {
                    Some("b") => Params::FromAnglesB { alphas },
                    Some("q") => Params::FromAnglesQ { alphas },
                    _ => {
                        return Err(CliError::Usage(
                            "family from-angles needs params.kind \"b\" or \"q\"".to_owned(),
                        ))
                    }
                }
            }
            "raw" => Params::Raw,
            other => return Err(CliError::Usage(format!("unknown family {other:?}"))),
        })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricsFile {
    pub n: usize,
    pub perimeter: f64,
    pub width: f64,
    pub diameter: f64,
    pub area: f64,
    pub convex: bool,
    pub diameter_edges: Vec<[usize; 2]>,
}

impl MetricsFile {
    pub fn new(n: usize, m: &MetricsReport) -> Self {
        Self {
            n,
            perimeter: m.perimeter,
            width: m.width,
            diameter: m.diameter,
            area: m.area,
            convex: m.convex,
            diameter_edges: m.diameter_edges.iter().map(|&(i, j)| [i, j]).collect(),
        }
    }
}

/// Solver configuration; absent fields take their defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    #[serde(default)]
    pub max_outer: Option<usize>,
    #[serde(default)]
    pub tol_eq: Option<f64>,
    #[serde(default)]
    pub tol_kkt: Option<f64>,
    #[serde(default)]
    pub starts: Option<usize>,
}

impl From<ConfigFile> for SolverConfig {
    fn from(c: ConfigFile) -> Self {
        let d = SolverConfig::default();
        SolverConfig {
            max_outer: c.max_outer.unwrap_or(d.max_outer),
            tol_eq: c.tol_eq.unwrap_or(d.tol_eq),
            tol_kkt: c.tol_kkt.unwrap_or(d.tol_kkt),
            starts: c.starts.or(d.starts),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ReportFile {
    pub family: String,
    pub n: usize,
    pub angles: Vec<f64>,
    pub objective: f64,
    pub eq_residuals: [f64; 2],
    pub kkt_residual: f64,
    pub iterations: usize,
    pub starts_used: usize,
    pub converged: bool,
}

impl From<&SolveReport> for ReportFile {
    fn from(r: &SolveReport) -> Self {
        Self {
            family: r.family.as_str().to_owned(),
            n: r.n,
            angles: r.angles.clone(),
            objective: r.objective,
            eq_residuals: r.eq_residuals,
            kkt_residual: r.kkt_residual,
            iterations: r.iterations,
            starts_used: r.starts_used,
            converged: r.converged,
        }
    }
}

impl ReportFile {
    pub fn to_report(&self) -> Result<SolveReport, CliError> {
        Ok(SolveReport {
            family: parse_angle_family(&self.family)?,
            n: self.n,
            angles: self.angles.clone(),
            objective: self.objective,
            eq_residuals: self.eq_residuals,
            kkt_residual: self.kkt_residual,
            iterations: self.iterations,
            starts_used: self.starts_used,
            converged: self.converged,
        })
    }
}

pub fn parse_angle_family(s: &str) -> Result<AngleFamily, CliError> {
    match s {
        "b" => Ok(AngleFamily::B),
        "q" => Ok(AngleFamily::Q),
        other => Err(CliError::Usage(format!(
            "angle family must be \"b\" or \"q\", got {other:?}"
        ))),
    }
}

pub fn read_json<T: DeserializeOwned>(path: &Path) -> Result<T, CliError> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path.display().to_string(), e))?;
    serde_json::from_str(&text).map_err(|source| CliError::Json {
        path: path.display().to_string(),
        source,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use smallgon_core::{b_family, from_angles_q, reuleaux_subdivision, AngleParamQ};

    #[test]
    fn polygon_file_round_trip() {
        for p in [b_family(16).unwrap(), reuleaux_subdivision(3, 9).unwrap()] {
            let file = PolygonFile::from_polygon(&p);
            let text = crate::json::to_string(&file);
            let back: PolygonFile = serde_json::from_str(&text).unwrap();
            assert_eq!(back, file);
            assert_eq!(back.construction_params().unwrap(), *p.params());
            assert_eq!(back.polygon().unwrap().vertices(), p.vertices());
        }
    }

    #[test]
    fn from_angles_params() {
        let p = from_angles_q(&AngleParamQ::analytic(8).unwrap()).unwrap();
        let file = PolygonFile::from_polygon(&p);
        assert_eq!(file.family, "from-angles");
        assert_eq!(file.params.kind.as_deref(), Some("q"));
        assert_eq!(file.construction_params().unwrap(), *p.params());
    }

    #[test]
    fn bad_files() {
        let bad: PolygonFile =
            serde_json::from_str(r#"{"n": 4, "family": "b", "vertices": [[0,0],[1,0],[1,1]]}"#)
                .unwrap();
        assert!(bad.polygon().is_err());
        assert!(bad.construction_params().is_err());
        assert!(serde_json::from_str::<PolygonFile>(r#"{"n": 3, "family": "raw"}"#).is_err());
    }

    #[test]
    fn config_defaults() {
        let c: ConfigFile = serde_json::from_str(r#"{"starts": 3}"#).unwrap();
        let c = SolverConfig::from(c);
        assert_eq!(c.starts, Some(3));
        assert_eq!(c.max_outer, SolverConfig::default().max_outer);
        assert!(serde_json::from_str::<ConfigFile>(r#"{"start": 3}"#).is_err());
    }
}
