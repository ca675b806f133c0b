//! System-spec and run-config ingestion.
//!
//! A system spec declares a space and a map sequence; a run config names a
//! system spec, an analysis, a mandatory RNG seed, and parameters. Every
//! parameter left out is filled with a documented default and listed in the
//! `defaulted` echo so reports are self-describing and reproducible.

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::point::Point;
use crate::preservation::PreservationMode;
use crate::sequence::{MapSequence, SequenceVariant};
use crate::space::StateSpace;

pub const SCHEMA_VERSION: u32 = 1;

/// On-disk system description.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemSpec {
    pub version: u32,
    pub space: StateSpace,
    pub sequence: SequenceVariant,
}

impl SystemSpec {
    pub fn build(&self) -> Result<MapSequence> {
        if self.version != SCHEMA_VERSION {
            return Err(Error::Config(format!(
                "system spec version {} unsupported (expected {SCHEMA_VERSION})",
                self.version
            )));
        }
        MapSequence::from_variant(self.space.clone(), self.sequence.clone())
    }
}

pub fn load_system_spec(path: &Path) -> Result<SystemSpec> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read system spec {}: {e}", path.display())))?;
    let spec: SystemSpec = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("system spec {}: {e}", path.display())))?;
    spec.build()?; // validate eagerly so errors carry the file name
    Ok(spec)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Analysis {
    Orbit,
    Periodic,
    Sensitivity,
    Collective,
    Synchronous,
    IterateCheck,
    Transitivity,
    Banks,
    Devaney,
    LinearCollective,
    LinearSynchronous,
}

impl Analysis {
    pub fn name(&self) -> &'static str {
        match self {
            Analysis::Orbit => "orbit",
            Analysis::Periodic => "periodic",
            Analysis::Sensitivity => "sensitivity",
            Analysis::Collective => "collective",
            Analysis::Synchronous => "synchronous",
            Analysis::IterateCheck => "iterate-check",
            Analysis::Transitivity => "transitivity",
            Analysis::Banks => "banks",
            Analysis::Devaney => "devaney",
            Analysis::LinearCollective => "linear-collective",
            Analysis::LinearSynchronous => "linear-synchronous",
        }
    }
}

/// Base points: an explicit list or a grid count over the space.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum BasePointsSpec {
    Grid { grid: usize },
    List(Vec<Point>),
}

impl BasePointsSpec {
    pub fn materialize(&self, space: &StateSpace) -> Result<Vec<Point>> {
        match self {
            BasePointsSpec::Grid { grid } => space.grid(*grid),
            BasePointsSpec::List(pts) => Ok(pts.clone()),
        }
    }
}

/// All tunable parameters, optional on disk.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RawParameters {
    pub start: Option<Point>,
    pub horizon: Option<u64>,
    pub n_max: Option<u64>,
    pub k_max: Option<u64>,
    pub tol: Option<f64>,
    pub eps: Option<f64>,
    pub eps_ladder: Option<Vec<f64>>,
    pub delta: Option<f64>,
    pub budget: Option<usize>,
    pub base_points: Option<BasePointsSpec>,
    pub xs: Option<Vec<Point>>,
    pub k_list: Option<Vec<u64>>,
    pub mode: Option<PreservationMode>,
    pub resolution: Option<f64>,
    pub samples_per_ball: Option<usize>,
    pub density_resolution: Option<f64>,
    pub density_n_max: Option<u64>,
    pub density_q_max: Option<u64>,
    pub density_threshold: Option<f64>,
    pub candidates: Option<Vec<Point>>,
    pub eta: Option<f64>,
    pub grid_points: Option<usize>,
    pub validation_samples: Option<usize>,
}

/// Parameters with defaults applied.
#[derive(Debug, Clone, Serialize)]
pub struct Parameters {
    pub start: Option<Point>,
    pub horizon: u64,
    pub n_max: u64,
    pub k_max: u64,
    pub tol: f64,
    pub eps: f64,
    pub eps_ladder: Vec<f64>,
    pub delta: Option<f64>,
    pub budget: usize,
    pub base_points: BasePointsSpec,
    pub xs: Option<Vec<Point>>,
    pub k_list: Vec<u64>,
    pub mode: PreservationMode,
    pub resolution: f64,
    pub samples_per_ball: usize,
    pub density_resolution: f64,
    pub density_n_max: u64,
    pub density_q_max: u64,
    pub density_threshold: f64,
    pub candidates: Option<Vec<Point>>,
    pub eta: f64,
    pub grid_points: usize,
    pub validation_samples: usize,
}

macro_rules! take_or_default {
    ($raw:expr, $defaulted:expr, $field:ident, $default:expr) => {
        match $raw.$field.take() {
            Some(v) => v,
            None => {
                $defaulted.push(stringify!($field).to_string());
                $default
            }
        }
    };
}

impl Parameters {
    fn resolve(mut raw: RawParameters, defaulted: &mut Vec<String>) -> Parameters {
        Parameters {
            start: raw.start.take(),
            horizon: take_or_default!(raw, defaulted, horizon, 64),
            n_max: take_or_default!(raw, defaulted, n_max, 16),
            k_max: take_or_default!(raw, defaulted, k_max, 32),
            tol: take_or_default!(raw, defaulted, tol, 1e-9),
            eps: take_or_default!(raw, defaulted, eps, 1e-3),
            eps_ladder: take_or_default!(raw, defaulted, eps_ladder, vec![0.1, 0.01, 0.001]),
            delta: raw.delta.take(),
            budget: take_or_default!(raw, defaulted, budget, 64),
            base_points: take_or_default!(
                raw,
                defaulted,
                base_points,
                BasePointsSpec::Grid { grid: 32 }
            ),
            xs: raw.xs.take(),
            k_list: take_or_default!(raw, defaulted, k_list, vec![2, 3, 4]),
            mode: take_or_default!(raw, defaulted, mode, PreservationMode::Plain),
            resolution: take_or_default!(raw, defaulted, resolution, 1.0 / 16.0),
            samples_per_ball: take_or_default!(raw, defaulted, samples_per_ball, 8),
            density_resolution: take_or_default!(raw, defaulted, density_resolution, 1.0 / 64.0),
            density_n_max: take_or_default!(raw, defaulted, density_n_max, 10),
            density_q_max: take_or_default!(raw, defaulted, density_q_max, 128),
            density_threshold: take_or_default!(raw, defaulted, density_threshold, 0.95),
            candidates: raw.candidates.take(),
            eta: take_or_default!(raw, defaulted, eta, 0.5),
            grid_points: take_or_default!(raw, defaulted, grid_points, 256),
            validation_samples: take_or_default!(raw, defaulted, validation_samples, 32),
        }
    }

    fn validate(&self, analysis: Analysis) -> Result<()> {
        let positive = |name: &str, v: f64| -> Result<()> {
            if !(v > 0.0) {
                return Err(Error::invalid_param(name, format!("must be positive, got {v}")));
            }
            Ok(())
        };
        positive("tol", self.tol)?;
        positive("eps", self.eps)?;
        positive("resolution", self.resolution)?;
        positive("density_resolution", self.density_resolution)?;
        positive("density_threshold", self.density_threshold)?;
        positive("eta", self.eta)?;
        if self.horizon < 1 {
            return Err(Error::invalid_param("horizon", "must be >= 1"));
        }
        if self.budget < 2 {
            return Err(Error::invalid_param("budget", "must be >= 2"));
        }
        for (i, e) in self.eps_ladder.iter().enumerate() {
            positive(&format!("eps_ladder[{i}]"), *e)?;
        }
        if let Some(d) = self.delta {
            positive("delta", d)?;
        }
        match analysis {
            Analysis::Orbit | Analysis::Periodic => {
                if self.start.is_none() {
                    return Err(Error::invalid_param(
                        "start",
                        format!("required for the {} analysis", analysis.name()),
                    ));
                }
            }
            Analysis::Collective | Analysis::Synchronous => {
                if self.xs.as_ref().map(|v| v.is_empty()).unwrap_or(true) {
                    return Err(Error::invalid_param(
                        "xs",
                        "required (non-empty) for n-point searches",
                    ));
                }
                if self.delta.is_none() {
                    return Err(Error::invalid_param(
                        "delta",
                        "required for n-point searches",
                    ));
                }
            }
            Analysis::LinearCollective | Analysis::LinearSynchronous => {
                if self.xs.as_ref().map(|v| v.is_empty()).unwrap_or(true) {
                    return Err(Error::invalid_param(
                        "xs",
                        "required (non-empty) for linear constructions",
                    ));
                }
            }
            Analysis::IterateCheck if self.k_list.is_empty() => {
                return Err(Error::invalid_param("k_list", "must be non-empty"));
            }
            _ => {}
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawRunConfig {
    schema_version: u32,
    analysis: Option<Analysis>,
    system_spec: String,
    rng_seed: Option<u64>,
    #[serde(default)]
    parameters: RawParameters,
}

/// A fully resolved run configuration. The system spec is inlined so the
/// echo in a report reproduces the run byte for byte.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub schema_version: u32,
    pub analysis: Analysis,
    pub system_spec_path: String,
    pub system: SystemSpec,
    pub rng_seed: u64,
    pub parameters: Parameters,
    /// Parameter fields that were filled with defaults.
    pub defaulted: Vec<String>,
}

impl RunConfig {
    pub fn sequence(&self) -> Result<MapSequence> {
        self.system.build()
    }
}

/// Load and validate a run config. `cli_analysis` comes from the CLI
/// subcommand and must agree with the config's `analysis` field when both
/// are present; `seed_override` substitutes for a missing or different
/// config seed.
pub fn load_config(
    path: &Path,
    cli_analysis: Option<Analysis>,
    seed_override: Option<u64>,
) -> Result<RunConfig> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("cannot read config {}: {e}", path.display())))?;
    let raw: RawRunConfig = serde_json::from_str(&text)
        .map_err(|e| Error::Config(format!("config {}: {e}", path.display())))?;
    if raw.schema_version != SCHEMA_VERSION {
        return Err(Error::Config(format!(
            "config schema_version {} unsupported (expected {SCHEMA_VERSION})",
            raw.schema_version
        )));
    }
    let analysis = match (cli_analysis, raw.analysis) {
        (Some(a), Some(b)) if a != b => {
            return Err(Error::Config(format!(
                "analysis mismatch: CLI says {}, config says {}",
                a.name(),
                b.name()
            )))
        }
        (Some(a), _) => a,
        (None, Some(b)) => b,
        (None, None) => {
            return Err(Error::Config(
                "no analysis given (neither CLI subcommand nor config field)".into(),
            ))
        }
    };
    let rng_seed = match seed_override.or(raw.rng_seed) {
        Some(s) => s,
        None => {
            return Err(Error::Config(
                "rng_seed required: set it in the config or pass --seed".into(),
            ))
        }
    };

    // system spec path is relative to the config file's directory
    let spec_path = {
        let p = PathBuf::from(&raw.system_spec);
        if p.is_absolute() {
            p
        } else {
            path.parent().unwrap_or(Path::new(".")).join(p)
        }
    };
    let system = load_system_spec(&spec_path)?;

    let mut defaulted = Vec::new();
    let parameters = Parameters::resolve(raw.parameters, &mut defaulted);
    parameters.validate(analysis)?;

    Ok(RunConfig {
        schema_version: raw.schema_version,
        analysis,
        system_spec_path: raw.system_spec,
        system,
        rng_seed,
        parameters,
        defaulted,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::io::Write;

    fn write_file(dir: &Path, name: &str, contents: &str) -> PathBuf {
        let p = dir.join(name);
        let mut f = std::fs::File::create(&p).unwrap();
        f.write_all(contents.as_bytes()).unwrap();
        p
    }

    const DOUBLING_SPEC: &str = r#"{
        "version": 1,
        "space": {"kind": "circle"},
        "sequence": {
            "variant": "finitely-generated",
            "generators": [{"constructor": "doubling"}],
            "schedule": {"variant": "constant", "index": 0}
        }
    }"#;

    #[test]
    fn minimal_config_gets_defaults() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "doubling.json", DOUBLING_SPEC);
        let cfg_path = write_file(
            dir.path(),
            "run.json",
            r#"{"schema_version": 1, "system_spec": "doubling.json", "rng_seed": 7}"#,
        );
        let cfg = load_config(&cfg_path, Some(Analysis::Sensitivity), None).unwrap();
        assert_eq!(cfg.parameters.horizon, 64);
        assert!(cfg.defaulted.iter().any(|f| f == "horizon"));
        assert_eq!(cfg.rng_seed, 7);
        assert!(cfg.sequence().is_ok());
    }

    #[test]
    fn missing_seed_is_an_error() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "doubling.json", DOUBLING_SPEC);
        let cfg_path = write_file(
            dir.path(),
            "run.json",
            r#"{"schema_version": 1, "system_spec": "doubling.json"}"#,
        );
        let err = load_config(&cfg_path, Some(Analysis::Sensitivity), None).unwrap_err();
        assert!(err.to_string().contains("rng_seed required"), "{err}");
        // an explicit --seed substitutes
        assert!(load_config(&cfg_path, Some(Analysis::Sensitivity), Some(3)).is_ok());
    }

    #[test]
    fn negative_eps_is_rejected_with_the_field_name() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "doubling.json", DOUBLING_SPEC);
        let cfg_path = write_file(
            dir.path(),
            "run.json",
            r#"{"schema_version": 1, "system_spec": "doubling.json", "rng_seed": 7,
                "parameters": {"eps": -0.5}}"#,
        );
        let err = load_config(&cfg_path, Some(Analysis::Sensitivity), None).unwrap_err();
        assert!(err.to_string().contains("eps"), "{err}");
    }

    #[test]
    fn analysis_mismatch_is_rejected() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "doubling.json", DOUBLING_SPEC);
        let cfg_path = write_file(
            dir.path(),
            "run.json",
            r#"{"schema_version": 1, "analysis": "banks", "system_spec": "doubling.json", "rng_seed": 7}"#,
        );
        assert!(load_config(&cfg_path, Some(Analysis::Orbit), None).is_err());
        assert!(load_config(&cfg_path, Some(Analysis::Banks), None).is_ok());
        assert!(load_config(&cfg_path, None, None).is_ok());
    }

    #[test]
    fn orbit_requires_a_start_point() {
        let dir = tempfile::tempdir().unwrap();
        write_file(dir.path(), "doubling.json", DOUBLING_SPEC);
        let cfg_path = write_file(
            dir.path(),
            "run.json",
            r#"{"schema_version": 1, "system_spec": "doubling.json", "rng_seed": 7}"#,
        );
        let err = load_config(&cfg_path, Some(Analysis::Orbit), None).unwrap_err();
        assert!(err.to_string().contains("start"), "{err}");
    }

    #[test]
    fn system_specs_round_trip_through_json() {
        let spec: SystemSpec = serde_json::from_str(DOUBLING_SPEC).unwrap();
        let text = serde_json::to_string(&spec).unwrap();
        let again: SystemSpec = serde_json::from_str(&text).unwrap();
        assert_eq!(spec, again);
    }
}
