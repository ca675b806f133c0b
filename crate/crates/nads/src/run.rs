//! Pipeline dispatch: one entry point mapping a resolved config to a report,
//! an exit code, and file artifacts.
//!
//! Exit codes: 0 = positive verdict/evidence, 2 = hypothesis unmet or no
//! witness found, 1 = operational error (the caller maps `Err` to 1).
//! A report is produced for both 0 and 2.

use std::collections::BTreeMap;
use std::time::Instant;

use serde_json::json;

use crate::banks::{banks_certify, devaney_report, BanksConfig, BanksVerdict};
use crate::config::{Analysis, RunConfig};
use crate::error::{Error, Result};
use crate::linear::{
    collective_from_transitivity, synchronous_from_transitivity, LinearConfig, LinearSystemSpec,
};
use crate::periodic::detect_periodic_point;
use crate::preservation::{
    verify_iterate_preservation, PreservationConfig, PreservationVerdict,
};
use crate::report::{orbit_csv, pair_matrix_csv, witness_csv, AnalysisReport, Timing, WitnessRecord};
use crate::sensitivity::{check_collective, check_synchronous, estimate_sensitivity_constant};
use crate::sequence::MapSequence;
use crate::transitivity::check_transitivity;
use crate::witness::SensitivityVerdict;

/// Exit code for complete positive evidence.
pub const EXIT_POSITIVE: i32 = 0;
/// Exit code for operational errors.
pub const EXIT_ERROR: i32 = 1;
/// Exit code for "evidence absent": hypothesis unmet or no witness found.
pub const EXIT_NO_EVIDENCE: i32 = 2;

#[derive(Debug)]
pub struct RunOutcome {
    pub report: AnalysisReport,
    pub exit_code: i32,
    /// (file name, contents) artifacts to write next to the report.
    pub artifacts: Vec<(String, String)>,
}

struct Pieces {
    verdict: String,
    positive: bool,
    constants: BTreeMap<String, f64>,
    witnesses: Vec<WitnessRecord>,
    detail: serde_json::Value,
    artifacts: Vec<(String, String)>,
}

/// Execute the configured analysis. Deterministic given the config.
pub fn run(config: &RunConfig) -> Result<RunOutcome> {
    let started = Instant::now();
    let seq = config.sequence()?;
    let pieces = dispatch(config, &seq)?;
    let report = AnalysisReport {
        schema_version: config.schema_version,
        analysis: config.analysis,
        verdict: pieces.verdict,
        constants: pieces.constants,
        witnesses: pieces.witnesses,
        detail: pieces.detail,
        config: config.clone(),
        timing: Timing {
            total_ms: started.elapsed().as_millis() as u64,
        },
    };
    Ok(RunOutcome {
        exit_code: if pieces.positive {
            EXIT_POSITIVE
        } else {
            EXIT_NO_EVIDENCE
        },
        report,
        artifacts: pieces.artifacts,
    })
}

fn dispatch(config: &RunConfig, seq: &MapSequence) -> Result<Pieces> {
    let p = &config.parameters;
    let seed = config.rng_seed;
    match config.analysis {
        Analysis::Orbit => {
            let start = p.start.as_ref().expect("validated");
            match seq.trajectory(start, p.horizon) {
                Ok(orbit) => {
                    let csv = orbit_csv(&orbit)?;
                    Ok(Pieces {
                        verdict: "computed".into(),
                        positive: true,
                        constants: BTreeMap::new(),
                        witnesses: vec![],
                        detail: serde_json::to_value(&orbit)?,
                        artifacts: vec![("orbit.csv".into(), csv)],
                    })
                }
                Err(Error::DomainEscape { step, value, lo, hi }) => Ok(Pieces {
                    verdict: "domain-escape".into(),
                    positive: false,
                    constants: BTreeMap::new(),
                    witnesses: vec![],
                    detail: json!({ "escape": { "step": step, "value": value, "window": [lo, hi] } }),
                    artifacts: vec![],
                }),
                Err(e) => Err(e),
            }
        }
        Analysis::Periodic => {
            let start = p.start.as_ref().expect("validated");
            match detect_periodic_point(seq, start, p.n_max, p.k_max, p.tol) {
                Ok(Some(rep)) => {
                    let mut constants = BTreeMap::new();
                    constants.insert("period".into(), rep.period as f64);
                    Ok(Pieces {
                        verdict: "periodic-point-detected".into(),
                        positive: true,
                        constants,
                        witnesses: vec![],
                        detail: serde_json::to_value(&rep)?,
                        artifacts: vec![],
                    })
                }
                Ok(None) => Ok(Pieces {
                    verdict: "no-period-found".into(),
                    positive: false,
                    constants: BTreeMap::new(),
                    witnesses: vec![],
                    detail: json!({ "n_max": p.n_max, "k_max": p.k_max, "tol": p.tol }),
                    artifacts: vec![],
                }),
                Err(Error::DomainEscape { step, value, lo, hi }) => Ok(Pieces {
                    verdict: "domain-escape".into(),
                    positive: false,
                    constants: BTreeMap::new(),
                    witnesses: vec![],
                    detail: json!({ "escape": { "step": step, "value": value, "window": [lo, hi] } }),
                    artifacts: vec![],
                }),
                Err(e) => Err(e),
            }
        }
        Analysis::Sensitivity => {
            let base = p.base_points.materialize(&seq.space)?;
            let rep = estimate_sensitivity_constant(
                seq,
                &base,
                &p.eps_ladder,
                p.horizon,
                p.budget,
                seed,
            )?;
            let positive = rep.verdict == SensitivityVerdict::EvidenceSensitive;
            let witnesses: Vec<WitnessRecord> = rep
                .witnesses
                .iter()
                .cloned()
                .map(WitnessRecord::Sensitivity)
                .collect();
            let mut constants = BTreeMap::new();
            constants.insert("delta_estimate".into(), rep.delta_estimate);
            Ok(Pieces {
                verdict: if positive {
                    "evidence-sensitive".into()
                } else {
                    "no-witness-found".into()
                },
                positive,
                constants,
                artifacts: vec![("witnesses.csv".into(), witness_csv(&witnesses)?)],
                witnesses,
                detail: serde_json::to_value(&rep)?,
            })
        }
        Analysis::Collective | Analysis::Synchronous => {
            let xs = p.xs.as_ref().expect("validated");
            let delta = p.delta.expect("validated");
            let found = if config.analysis == Analysis::Collective {
                check_collective(seq, xs, p.eps, delta, p.horizon, p.budget, seed)?
            } else {
                check_synchronous(seq, xs, p.eps, delta, p.horizon, p.budget, seed)?
            };
            let mut constants = BTreeMap::new();
            constants.insert("delta".into(), delta);
            match found {
                Some(w) => {
                    let witnesses = vec![WitnessRecord::Collective(w.clone())];
                    Ok(Pieces {
                        verdict: "witness-found".into(),
                        positive: true,
                        constants,
                        artifacts: vec![("witnesses.csv".into(), witness_csv(&witnesses)?)],
                        witnesses,
                        detail: serde_json::to_value(&w)?,
                    })
                }
                None => Ok(Pieces {
                    verdict: "no-witness-found".into(),
                    positive: false,
                    constants,
                    witnesses: vec![],
                    detail: json!({ "eps": p.eps, "delta": delta, "horizon": p.horizon }),
                    artifacts: vec![],
                }),
            }
        }
        Analysis::IterateCheck => {
            let cfg = PreservationConfig {
                base_points: p.base_points.materialize(&seq.space)?,
                xs: p.xs.clone().unwrap_or_default(),
                eps_ladder: p.eps_ladder.clone(),
                horizon: p.horizon,
                budget: p.budget,
                rng_seed: seed,
                grid_points: p.grid_points,
            };
            let rep = verify_iterate_preservation(seq, &p.k_list, p.mode, &cfg)?;
            let mut constants = BTreeMap::new();
            constants.insert("base_delta".into(), rep.base_delta);
            for row in &rep.rows {
                if let Some(pred) = row.predicted_eps_delta {
                    constants.insert(format!("eps_delta_k{}", row.k), pred);
                }
            }
            let witnesses: Vec<WitnessRecord> = rep
                .rows
                .iter()
                .flat_map(|r| {
                    r.sample_witness
                        .iter()
                        .cloned()
                        .map(WitnessRecord::Sensitivity)
                        .chain(
                            r.sample_collective
                                .iter()
                                .cloned()
                                .map(WitnessRecord::Collective),
                        )
                        .collect::<Vec<_>>()
                })
                .collect();
            let verdict = match rep.verdict {
                PreservationVerdict::PreservedAtDeskScale => "preserved-at-desk-scale",
                PreservationVerdict::HypothesisUnmet => "hypothesis-unmet",
                PreservationVerdict::NotPreservedAtBudget => "not-preserved-at-budget",
            };
            Ok(Pieces {
                verdict: verdict.into(),
                positive: rep.verdict == PreservationVerdict::PreservedAtDeskScale,
                constants,
                artifacts: vec![("witnesses.csv".into(), witness_csv(&witnesses)?)],
                witnesses,
                detail: serde_json::to_value(&rep)?,
            })
        }
        Analysis::Transitivity => {
            let rep = check_transitivity(seq, p.resolution, p.horizon, p.samples_per_ball, seed)?;
            let positive = rep.hit_fraction >= 1.0;
            let mut constants = BTreeMap::new();
            constants.insert("hit_fraction".into(), rep.hit_fraction);
            Ok(Pieces {
                verdict: if positive {
                    "full-transitivity-evidence".into()
                } else {
                    "partial-transitivity-evidence".into()
                },
                positive,
                constants,
                witnesses: vec![],
                artifacts: vec![("pair_matrix.csv".into(), pair_matrix_csv(&rep)?)],
                detail: serde_json::to_value(&rep)?,
            })
        }
        Analysis::Banks | Analysis::Devaney => {
            let cfg = BanksConfig {
                transitivity_resolution: p.resolution,
                transitivity_horizon: p.horizon,
                samples_per_ball: p.samples_per_ball,
                density_resolution: p.density_resolution,
                density_n_max: p.density_n_max,
                density_q_max: p.density_q_max,
                density_threshold: p.density_threshold,
                candidates: p.candidates.clone(),
                periodic_n_max: p.n_max,
                periodic_k_max: p.k_max,
                tol: p.tol,
                base_points: p.base_points.materialize(&seq.space)?,
                eps_ladder: p.eps_ladder.clone(),
                horizon: p.horizon,
                budget: p.budget,
                rng_seed: seed,
            };
            if config.analysis == Analysis::Banks {
                let cert = banks_certify(seq, &cfg)?;
                let mut constants = BTreeMap::new();
                if let Some(pair) = &cert.orbit_pair {
                    constants.insert("delta".into(), pair.delta);
                    constants.insert("eta".into(), pair.eta);
                    constants.insert(
                        "min_inter_orbit_distance".into(),
                        pair.min_inter_orbit_distance,
                    );
                }
                let witnesses: Vec<WitnessRecord> = cert
                    .sensitivity_confirmation
                    .iter()
                    .flat_map(|r| r.witnesses.iter().cloned())
                    .map(WitnessRecord::Sensitivity)
                    .collect();
                let positive = cert.verdict == BanksVerdict::CertifiedAtDeskScale;
                Ok(Pieces {
                    verdict: if positive {
                        "certified-at-desk-scale".into()
                    } else {
                        "hypothesis-unmet".into()
                    },
                    positive,
                    constants,
                    artifacts: vec![
                        ("pair_matrix.csv".into(), pair_matrix_csv(&cert.transitivity)?),
                        ("witnesses.csv".into(), witness_csv(&witnesses)?),
                    ],
                    witnesses,
                    detail: serde_json::to_value(&cert)?,
                })
            } else {
                let rep = devaney_report(seq, &cfg)?;
                let mut constants = BTreeMap::new();
                constants.insert("density_coverage".into(), rep.density.coverage);
                constants.insert("hit_fraction".into(), rep.transitivity.hit_fraction);
                constants.insert("delta_estimate".into(), rep.sensitivity.delta_estimate);
                Ok(Pieces {
                    verdict: if rep.all_positive {
                        "all-evidence-positive".into()
                    } else {
                        "evidence-incomplete".into()
                    },
                    positive: rep.all_positive,
                    constants,
                    witnesses: vec![],
                    artifacts: vec![(
                        "pair_matrix.csv".into(),
                        pair_matrix_csv(&rep.transitivity)?,
                    )],
                    detail: serde_json::to_value(&rep)?,
                })
            }
        }
        Analysis::LinearCollective | Analysis::LinearSynchronous => {
            let xs = p.xs.as_ref().expect("validated");
            let spec = LinearSystemSpec::new(seq.clone())?;
            let lcfg = LinearConfig {
                eta: p.eta,
                horizon: p.horizon,
                budget: p.budget,
                rng_seed: seed,
                validation_samples: p.validation_samples,
                ..LinearConfig::default()
            };
            let constructed = if config.analysis == Analysis::LinearCollective {
                collective_from_transitivity(&spec, xs, p.eps, &lcfg)
            } else {
                synchronous_from_transitivity(&spec, xs, p.eps, &lcfg)
            };
            let mut constants = BTreeMap::new();
            constants.insert("eta".into(), p.eta);
            match constructed {
                Ok(c) => {
                    constants.insert("claimed_delta".into(), c.claimed_delta);
                    let witnesses = vec![
                        WitnessRecord::Collective(c.witness.clone()),
                        WitnessRecord::Zero(c.zero_witness.clone()),
                    ];
                    Ok(Pieces {
                        verdict: "witness-found".into(),
                        positive: true,
                        constants,
                        artifacts: vec![("witnesses.csv".into(), witness_csv(&witnesses)?)],
                        witnesses,
                        detail: serde_json::to_value(&c)?,
                    })
                }
                Err(Error::HypothesisUnmet { hypothesis }) => Ok(Pieces {
                    verdict: "hypothesis-unmet".into(),
                    positive: false,
                    constants,
                    witnesses: vec![],
                    detail: json!({ "hypothesis": hypothesis }),
                    artifacts: vec![],
                }),
                Err(Error::NumericalTolerance(msg)) => Ok(Pieces {
                    verdict: "numerical-tolerance-event".into(),
                    positive: false,
                    constants,
                    witnesses: vec![],
                    detail: json!({ "event": msg }),
                    artifacts: vec![],
                }),
                Err(e) => Err(e),
            }
        }
    }
}
