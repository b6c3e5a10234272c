//! TOML configuration. Angles are given in degrees.

use std::path::{Path, PathBuf};

use ncmusic_core::signal::scenario_one;
use ncmusic_core::{Algorithm, ArrayConfig, GridSpec, SignalKind, SourceParams};
use serde::Deserialize;
use thiserror::Error;

/// Environment variable naming the default output directory of sweeps.
pub const OUTPUT_DIR_ENV: &str = "NCMUSIC_OUTPUT_DIR";
pub const DEFAULT_OUTPUT_DIR: &str = "ncmusic-out";

#[derive(Debug, Error)]
pub enum ConfigError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse {
        path: PathBuf,
        source: toml::de::Error,
    },
    #[error("{key}: {message}")]
    Invalid { key: String, message: String },
}

fn invalid(key: impl Into<String>, message: impl Into<String>) -> ConfigError {
    ConfigError::Invalid {
        key: key.into(),
        message: message.into(),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SignalName {
    Bpsk,
    Circular,
    Partial,
}

impl From<SignalName> for SignalKind {
    fn from(s: SignalName) -> Self {
        match s {
            SignalName::Bpsk => SignalKind::NonCircularBpsk,
            SignalName::Circular => SignalKind::CircularGaussian,
            SignalName::Partial => SignalKind::PartiallyNonCircular,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SourceConfig {
    pub theta: f64,
    pub phi: f64,
    pub gamma: f64,
    pub eta: f64,
    #[serde(default = "one")]
    pub power: f64,
    #[serde(default = "one")]
    pub nc_rate: f64,
    #[serde(default)]
    pub nc_phase: f64,
}

fn one() -> f64 {
    1.0
}

fn half() -> f64 {
    0.5
}

impl SourceConfig {
    pub fn to_params(&self) -> SourceParams {
        SourceParams {
            theta: self.theta.to_radians(),
            phi: self.phi.to_radians(),
            gamma: self.gamma.to_radians(),
            eta: self.eta.to_radians(),
            power: self.power,
            nc_rate: self.nc_rate,
            nc_phase: self.nc_phase.to_radians(),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct GridConfig {
    pub theta_min: f64,
    pub theta_max: f64,
    pub phi_min: f64,
    pub phi_max: f64,
    pub coarse_step: f64,
    pub final_step: f64,
    pub refine_factor: f64,
    pub pol_coarse_step: f64,
    pub pol_final_step: f64,
}

impl Default for GridConfig {
    fn default() -> Self {
        let g = GridSpec::default();
        Self {
            theta_min: g.theta_min.to_degrees(),
            theta_max: g.theta_max.to_degrees(),
            phi_min: g.phi_min.to_degrees(),
            phi_max: g.phi_max.to_degrees(),
            coarse_step: g.coarse_step.to_degrees(),
            final_step: g.final_step.to_degrees(),
            refine_factor: g.refine_factor,
            pol_coarse_step: g.pol_coarse_step.to_degrees(),
            pol_final_step: g.pol_final_step.to_degrees(),
        }
    }
}

impl GridConfig {
    pub fn to_spec(&self) -> Result<GridSpec, ConfigError> {
        let g = GridSpec {
            theta_min: self.theta_min.to_radians(),
            theta_max: self.theta_max.to_radians(),
            phi_min: self.phi_min.to_radians(),
            phi_max: self.phi_max.to_radians(),
            coarse_step: self.coarse_step.to_radians(),
            final_step: self.final_step.to_radians(),
            refine_factor: self.refine_factor,
            pol_coarse_step: self.pol_coarse_step.to_radians(),
            pol_final_step: self.pol_final_step.to_radians(),
        };
        g.validate().map_err(|e| invalid("grid", e.to_string()))?;
        Ok(g)
    }
}

fn parse_algorithms(names: &[String]) -> Result<Vec<Algorithm>, ConfigError> {
    if names.is_empty() {
        return Err(invalid("algorithms", "at least one algorithm is required"));
    }
    names
        .iter()
        .map(|n| n.parse::<Algorithm>().map_err(|e| invalid("algorithms", e)))
        .collect()
}

fn parse_sources(list: &Option<Vec<SourceConfig>>) -> Result<Vec<SourceParams>, ConfigError> {
    let sources = match list {
        Some(l) => l.iter().map(SourceConfig::to_params).collect(),
        None => scenario_one(),
    };
    if sources.is_empty() {
        return Err(invalid("sources", "at least one source is required"));
    }
    for (i, s) in sources.iter().enumerate() {
        s.validate(i).map_err(|e| invalid(format!("sources[{i}]"), e.to_string()))?;
    }
    Ok(sources)
}

fn parse_array(key: &str, dims: [usize; 2], spacing: f64, sources: usize) -> Result<ArrayConfig, ConfigError> {
    let cfg = ArrayConfig::new(dims[0], dims[1], spacing).map_err(|e| invalid(key, e.to_string()))?;
    if sources >= cfg.elements() {
        return Err(invalid(
            key,
            format!("{sources} sources need more than {} elements", cfg.elements()),
        ));
    }
    Ok(cfg)
}

fn read<T: for<'de> Deserialize<'de>>(path: &Path) -> Result<T, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|source| ConfigError::Io {
        path: path.to_owned(),
        source,
    })?;
    toml::from_str(&text).map_err(|source| ConfigError::Parse {
        path: path.to_owned(),
        source,
    })
}

/// Raw form of a Monte-Carlo sweep file.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepFile {
    pub seed: u64,
    pub trials: usize,
    #[serde(default)]
    pub workers: Option<usize>,
    pub algorithms: Vec<String>,
    /// `[Mx, My]` pairs.
    pub arrays: Vec<[usize; 2]>,
    #[serde(default = "half")]
    pub spacing: f64,
    pub snr_db: Vec<f64>,
    pub snapshots: Vec<usize>,
    #[serde(default = "bpsk")]
    pub signal: SignalName,
    #[serde(default)]
    pub crb: bool,
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sources: Option<Vec<SourceConfig>>,
}

fn bpsk() -> SignalName {
    SignalName::Bpsk
}

/// Validated sweep description.
#[derive(Debug, Clone)]
pub struct SweepConfig {
    pub seed: u64,
    pub trials: usize,
    pub workers: usize,
    pub algorithms: Vec<Algorithm>,
    pub arrays: Vec<ArrayConfig>,
    pub snr_db: Vec<f64>,
    pub snapshots: Vec<usize>,
    pub signal: SignalKind,
    pub crb: bool,
    pub output_dir: Option<PathBuf>,
    pub grid: GridSpec,
    pub sources: Vec<SourceParams>,
}

impl SweepConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_file(read(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: SweepFile = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: PathBuf::from("<inline>"),
            source,
        })?;
        Self::from_file(raw)
    }

    pub fn from_file(raw: SweepFile) -> Result<Self, ConfigError> {
        if raw.trials == 0 {
            return Err(invalid("trials", "must be positive"));
        }
        let sources = parse_sources(&raw.sources)?;
        if raw.arrays.is_empty() {
            return Err(invalid("arrays", "at least one array is required"));
        }
        let arrays = raw
            .arrays
            .iter()
            .enumerate()
            .map(|(i, d)| parse_array(&format!("arrays[{i}]"), *d, raw.spacing, sources.len()))
            .collect::<Result<Vec<_>, _>>()?;
        if raw.snr_db.is_empty() || raw.snr_db.iter().any(|s| s.is_nan() || *s == f64::NEG_INFINITY) {
            return Err(invalid("snr_db", "needs at least one value, none NaN or -inf"));
        }
        if raw.snapshots.is_empty() || raw.snapshots.contains(&0) {
            return Err(invalid("snapshots", "needs at least one positive value"));
        }
        Ok(Self {
            seed: raw.seed,
            trials: raw.trials,
            workers: raw.workers.unwrap_or(1).max(1),
            algorithms: parse_algorithms(&raw.algorithms)?,
            arrays,
            snr_db: raw.snr_db,
            snapshots: raw.snapshots,
            signal: raw.signal.into(),
            crb: raw.crb,
            output_dir: raw.output_dir,
            grid: raw.grid.to_spec()?,
            sources,
        })
    }

    /// Output directory: the file's setting, else the environment, else
    /// [`DEFAULT_OUTPUT_DIR`].
    pub fn resolved_output_dir(&self) -> PathBuf {
        self.output_dir
            .clone()
            .or_else(|| std::env::var_os(OUTPUT_DIR_ENV).map(PathBuf::from))
            .unwrap_or_else(|| PathBuf::from(DEFAULT_OUTPUT_DIR))
    }
}

/// Raw form of a single-scenario file used by `estimate` and `crb`.
#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioFile {
    #[serde(default)]
    pub seed: u64,
    pub array: [usize; 2],
    #[serde(default = "half")]
    pub spacing: f64,
    pub snr_db: f64,
    pub snapshots: usize,
    #[serde(default = "bpsk")]
    pub signal: SignalName,
    #[serde(default = "all_algorithms")]
    pub algorithms: Vec<String>,
    #[serde(default)]
    pub grid: GridConfig,
    #[serde(default)]
    pub sources: Option<Vec<SourceConfig>>,
}

fn all_algorithms() -> Vec<String> {
    Algorithm::ALL.iter().map(|a| a.name().to_owned()).collect()
}

#[derive(Debug, Clone)]
pub struct ScenarioConfig {
    pub seed: u64,
    pub array: ArrayConfig,
    pub snr_db: f64,
    pub snapshots: usize,
    pub signal: SignalKind,
    pub algorithms: Vec<Algorithm>,
    pub grid: GridSpec,
    pub sources: Vec<SourceParams>,
}

impl ScenarioConfig {
    pub fn load(path: &Path) -> Result<Self, ConfigError> {
        Self::from_file(read(path)?)
    }

    pub fn from_toml(text: &str) -> Result<Self, ConfigError> {
        let raw: ScenarioFile = toml::from_str(text).map_err(|source| ConfigError::Parse {
            path: PathBuf::from("<inline>"),
            source,
        })?;
        Self::from_file(raw)
    }

    pub fn from_file(raw: ScenarioFile) -> Result<Self, ConfigError> {
        let sources = parse_sources(&raw.sources)?;
        if raw.snr_db.is_nan() || raw.snr_db == f64::NEG_INFINITY {
            return Err(invalid("snr_db", "must not be NaN or -inf"));
        }
        if raw.snapshots == 0 {
            return Err(invalid("snapshots", "must be positive"));
        }
        Ok(Self {
            seed: raw.seed,
            array: parse_array("array", raw.array, raw.spacing, sources.len())?,
            snr_db: raw.snr_db,
            snapshots: raw.snapshots,
            signal: raw.signal.into(),
            algorithms: parse_algorithms(&raw.algorithms)?,
            grid: raw.grid.to_spec()?,
            sources,
        })
    }
}
