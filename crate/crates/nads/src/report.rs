//! Analysis reports and their serialized artifacts.
//!
//! Every run emits one JSON report echoing the resolved config; witness
//! lists and ball-pair matrices additionally dump as CSV. Reports are
//! byte-reproducible given the same config and seed; the timing field is
//! the one exception and comparisons must strip it.

use std::collections::BTreeMap;

use serde::Serialize;

use crate::config::{Analysis, RunConfig};
use crate::error::Result;
use crate::sequence::Orbit;
use crate::transitivity::TransitivityReport;
use crate::witness::{CollectiveWitness, SensitivityWitness, ZeroWitness};

#[derive(Debug, Clone, Serialize)]
#[serde(tag = "type", rename_all = "kebab-case")]
pub enum WitnessRecord {
    Sensitivity(SensitivityWitness),
    Collective(CollectiveWitness),
    Zero(ZeroWitness),
}

#[derive(Debug, Clone, Copy, Default, Serialize)]
pub struct Timing {
    pub total_ms: u64,
}

#[derive(Debug, Clone, Serialize)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub analysis: Analysis,
    /// One of the documented per-analysis verdict strings.
    pub verdict: String,
    /// Named constants produced by the run (delta, eta, eps_delta, ...).
    pub constants: BTreeMap<String, f64>,
    /// Witnesses in the shared schema, when the analysis produces any.
    pub witnesses: Vec<WitnessRecord>,
    /// Full analysis-specific payload.
    pub detail: serde_json::Value,
    /// Resolved config echo; sufficient to reproduce the run.
    pub config: RunConfig,
    pub timing: Timing,
}

impl AnalysisReport {
    pub fn to_json_pretty(&self) -> Result<String> {
        Ok(serde_json::to_string_pretty(self)? + "\n")
    }

    /// JSON with the timing zeroed, for byte-for-byte reproducibility
    /// comparisons.
    pub fn comparable_json(&self) -> Result<String> {
        let mut v = serde_json::to_value(self)?;
        if let Some(t) = v.get_mut("timing") {
            *t = serde_json::json!({ "total_ms": 0 });
        }
        Ok(serde_json::to_string_pretty(&v)? + "\n")
    }
}

/// step,point rows.
pub fn orbit_csv(orbit: &Orbit) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "point"])?;
    for (i, p) in orbit.points.iter().enumerate() {
        w.write_record([i.to_string(), p.csv_cell()])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}

/// x,y,n,separation rows; collective witnesses contribute one row per index.
pub fn witness_csv(records: &[WitnessRecord]) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["x", "y", "n", "separation"])?;
    for rec in records {
        match rec {
            WitnessRecord::Sensitivity(s) => {
                w.write_record([
                    s.x.csv_cell(),
                    s.y.csv_cell(),
                    s.n.to_string(),
                    s.separation.to_string(),
                ])?;
            }
            WitnessRecord::Collective(c) => {
                for i in 0..c.xs.len() {
                    w.write_record([
                        c.xs[i].csv_cell(),
                        c.ys[i].csv_cell(),
                        c.k.to_string(),
                        c.separations[i].to_string(),
                    ])?;
                }
            }
            WitnessRecord::Zero(z) => {
                w.write_record([
                    z.z1.csv_cell(),
                    z.z2.csv_cell(),
                    z.k.to_string(),
                    z.separation.to_string(),
                ])?;
            }
        }
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}

/// U_index,V_index,N rows; only recorded hits appear.
pub fn pair_matrix_csv(report: &TransitivityReport) -> Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["U_index", "V_index", "N"])?;
    for hit in &report.hits {
        w.write_record([
            hit.u_index.to_string(),
            hit.v_index.to_string(),
            hit.n.to_string(),
        ])?;
    }
    Ok(String::from_utf8(w.into_inner().map_err(|e| e.into_error())?).expect("csv is utf-8"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::point::Point;

    #[test]
    fn witness_csv_rows() {
        let recs = vec![
            WitnessRecord::Sensitivity(SensitivityWitness {
                x: Point::scalar(0.2),
                y: Point::scalar(0.2005),
                n: 9,
                separation: 0.26,
                eps_used: 1e-3,
            }),
            WitnessRecord::Collective(CollectiveWitness {
                xs: vec![Point::scalar(0.1), Point::scalar(0.3)],
                ys: vec![Point::scalar(0.1001), Point::scalar(0.3001)],
                k: 12,
                i0: Some(0),
                mode: crate::witness::WitnessMode::XAgainstAnchorY,
                separations: vec![0.21, 0.22],
            }),
        ];
        let csv = witness_csv(&recs).unwrap();
        let lines: Vec<&str> = csv.lines().collect();
        assert_eq!(lines[0], "x,y,n,separation");
        assert_eq!(lines.len(), 4); // header + 1 + 2
        assert!(lines[1].starts_with("0.2,"));
    }

    #[test]
    fn orbit_csv_rows() {
        let orbit = Orbit {
            start: Point::scalar(1.0),
            horizon: 2,
            points: vec![Point::scalar(1.0), Point::scalar(2.0), Point::scalar(1.0)],
        };
        let csv = orbit_csv(&orbit).unwrap();
        assert_eq!(csv, "step,point\n0,1\n1,2\n2,1\n");
    }
}
