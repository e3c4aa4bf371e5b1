//! Layered run configuration: embedded versioned defaults, then an
//! optional user JSON config, then command-line flags — later layers
//! override earlier ones field by field.

use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use zetafrac::density::TestTerm;
use zetafrac::error::{Error, Result};
use zetafrac::landau::PhaseMode;
use zetafrac::relations::DetectBounds;

/// Frozen defaults shipped with the binary.
pub const DEFAULTS_JSON: &str = include_str!("../defaults.json");

/// The config file version this binary understands.
pub const CONFIG_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
    Pgm,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum PhaseModeArg {
    Standard,
    Extended,
}

impl From<PhaseModeArg> for PhaseMode {
    fn from(value: PhaseModeArg) -> Self {
        match value {
            PhaseModeArg::Standard => PhaseMode::Standard,
            PhaseModeArg::Extended => PhaseMode::Extended,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum CountModeArg {
    Observed,
    Asymptotic,
}

impl From<CountModeArg> for zetafrac::empirical::CountMode {
    fn from(value: CountModeArg) -> Self {
        match value {
            CountModeArg::Observed => zetafrac::empirical::CountMode::Observed,
            CountModeArg::Asymptotic => zetafrac::empirical::CountMode::Asymptotic,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawDiophantine {
    pub c: Option<f64>,
    pub epsilon: Option<f64>,
    pub b: Option<f64>,
    pub j: Option<u64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawDetect {
    pub max_norm: Option<u64>,
    pub max_prime: Option<u64>,
    pub max_q: Option<u64>,
    pub max_a: Option<u64>,
    pub tol: Option<f64>,
}

/// One layer of configuration; every field optional so layers can be
/// merged.
#[derive(Debug, Clone, Serialize, Deserialize, Default)]
#[serde(deny_unknown_fields)]
pub struct RawConfig {
    pub version: Option<u32>,
    pub workers: Option<usize>,
    pub precision_bits: Option<usize>,
    pub out_dir: Option<PathBuf>,
    pub format: Option<OutputFormat>,
    pub resolution: Option<usize>,
    pub terms: Option<usize>,
    pub phase_mode: Option<PhaseModeArg>,
    pub count_mode: Option<CountModeArg>,
    pub h_spec: Option<Vec<TestTerm>>,
    pub diophantine: Option<RawDiophantine>,
    pub detect: Option<RawDetect>,
}

impl RawConfig {
    fn overlay(&mut self, other: RawConfig) {
        macro_rules! take {
            ($($field:ident),*) => {
                $(if other.$field.is_some() { self.$field = other.$field; })*
            };
        }
        take!(version, workers, precision_bits, out_dir, format, resolution, terms,
              phase_mode, count_mode, h_spec);
        if let Some(dio) = other.diophantine {
            let base = self.diophantine.get_or_insert_with(RawDiophantine::default);
            macro_rules! dio_take {
                ($($field:ident),*) => {
                    $(if dio.$field.is_some() { base.$field = dio.$field; })*
                };
            }
            dio_take!(c, epsilon, b, j, mu);
        }
        if let Some(det) = other.detect {
            let base = self.detect.get_or_insert_with(RawDetect::default);
            macro_rules! det_take {
                ($($field:ident),*) => {
                    $(if det.$field.is_some() { base.$field = det.$field; })*
                };
            }
            det_take!(max_norm, max_prime, max_q, max_a, tol);
        }
    }
}

/// Fully resolved settings after layering defaults, file, and flags.
#[derive(Debug, Clone)]
pub struct Settings {
    pub workers: usize,
    pub precision_bits: usize,
    pub out_dir: PathBuf,
    pub format: OutputFormat,
    pub resolution: usize,
    pub terms: usize,
    pub phase_mode: PhaseModeArg,
    pub count_mode: CountModeArg,
    pub h_spec: Vec<TestTerm>,
    pub dio_c: f64,
    pub dio_epsilon: f64,
    pub dio_b: f64,
    pub dio_j: u64,
    pub dio_mu: f64,
    pub detect_bounds: DetectBounds,
    pub detect_tol: f64,
}

fn missing(field: &str) -> Error {
    Error::Config(format!("configuration field `{field}` is unset"))
}

/// Merge the embedded defaults, an optional user config file, and flag
/// overrides into concrete settings.
pub fn resolve(user_file: Option<&PathBuf>, flags: RawConfig) -> Result<Settings> {
    let mut cfg: RawConfig = serde_json::from_str(DEFAULTS_JSON)?;
    if let Some(path) = user_file {
        let text = std::fs::read_to_string(path)?;
        let user: RawConfig = serde_json::from_str(&text)
            .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        if let Some(v) = user.version {
            if v != CONFIG_VERSION {
                return Err(Error::Config(format!(
                    "config version {v} not supported (expected {CONFIG_VERSION})"
                )));
            }
        }
        cfg.overlay(user);
    }
    cfg.overlay(flags);
    let workers = cfg.workers.ok_or_else(|| missing("workers"))?;
    if workers == 0 {
        return Err(Error::Config("workers must be ≥ 1".into()));
    }
    let precision_bits = cfg.precision_bits.ok_or_else(|| missing("precision_bits"))?;
    if precision_bits < 64 {
        return Err(Error::Config("precision_bits must be ≥ 64".into()));
    }
    let dio = cfg.diophantine.unwrap_or_default();
    let det = cfg.detect.unwrap_or_default();
    Ok(Settings {
        workers,
        precision_bits,
        out_dir: cfg.out_dir.ok_or_else(|| missing("out_dir"))?,
        format: cfg.format.ok_or_else(|| missing("format"))?,
        resolution: cfg.resolution.ok_or_else(|| missing("resolution"))?,
        terms: cfg.terms.ok_or_else(|| missing("terms"))?,
        phase_mode: cfg.phase_mode.ok_or_else(|| missing("phase_mode"))?,
        count_mode: cfg.count_mode.ok_or_else(|| missing("count_mode"))?,
        h_spec: cfg.h_spec.ok_or_else(|| missing("h_spec"))?,
        dio_c: dio.c.ok_or_else(|| missing("diophantine.c"))?,
        dio_epsilon: dio.epsilon.ok_or_else(|| missing("diophantine.epsilon"))?,
        dio_b: dio.b.ok_or_else(|| missing("diophantine.b"))?,
        dio_j: dio.j.ok_or_else(|| missing("diophantine.j"))?,
        dio_mu: dio.mu.ok_or_else(|| missing("diophantine.mu"))?,
        detect_bounds: DetectBounds {
            max_norm: det.max_norm.ok_or_else(|| missing("detect.max_norm"))?,
            max_prime: det.max_prime.ok_or_else(|| missing("detect.max_prime"))?,
            max_q: det.max_q.ok_or_else(|| missing("detect.max_q"))?,
            max_a: det.max_a.ok_or_else(|| missing("detect.max_a"))?,
        },
        detect_tol: det.tol.ok_or_else(|| missing("detect.tol"))?,
    })
}
