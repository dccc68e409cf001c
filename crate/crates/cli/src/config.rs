//! Flat TOML scenario files.
//!
//! ```toml
//! source = "colored"          # white | colored | wav
//! source_seed = 2024
//! coloring_taps = [0.5, 0.3]
//! system = "taps"             # taps | rir
//! system_taps = [1.0, -0.4, 0.2]
//! n = 10
//! frames = 5000
//! algorithms = ["FKF", "MFKF1", "MFKF2"]
//! psd_mode = "fixed"          # fixed | estimated
//! phi_ss = 2.0
//! seeds = [1, 2, 3]
//! ```

use std::path::{Path, PathBuf};

use fkf_core::filter::{DEFAULT_DENOM_FLOOR, DEFAULT_LAMBDA_S, DEFAULT_P_INIT};
use fkf_core::sim::scenario::{DEFAULT_ERLE_SMOOTHING, DEFAULT_FS};
use fkf_core::{AlgorithmConfig, PsdMode, ScenarioConfig, SourceSpec, SystemSpec, Variant};
use serde::Deserialize;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub source: Option<String>,
    pub source_seed: Option<u64>,
    pub variance: Option<f64>,
    pub coloring_taps: Option<Vec<f64>>,
    /// Relative paths resolve against the config file's directory.
    pub wav: Option<PathBuf>,

    pub system: Option<String>,
    pub system_taps: Option<Vec<f64>>,
    pub rir_t60: Option<f64>,
    pub rir_length: Option<usize>,
    pub rir_seed: Option<u64>,

    pub n: Option<usize>,
    pub frames: Option<usize>,
    pub fs: Option<f64>,
    pub snr_db: Option<f64>,

    pub algorithms: Option<Vec<String>>,
    pub a: Option<f64>,
    pub p_init: Option<f64>,
    pub psd_mode: Option<String>,
    pub phi_ss: Option<f64>,
    pub phi_dd: Option<f64>,
    pub lambda_s: Option<f64>,
    pub denom_floor: Option<f64>,

    pub seeds: Option<Vec<u64>>,
    pub erle_smoothing: Option<f64>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConfigError {
    pub key: Option<&'static str>,
    pub message: String,
}

impl std::fmt::Display for ConfigError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self.key {
            Some(key) => write!(f, "config key `{key}`: {}", self.message),
            None => f.write_str(&self.message),
        }
    }
}

impl std::error::Error for ConfigError {}

fn key_error(key: &'static str, message: impl Into<String>) -> ConfigError {
    ConfigError {
        key: Some(key),
        message: message.into(),
    }
}

fn required<T: Clone>(value: &Option<T>, key: &'static str, context: &str) -> Result<T, ConfigError> {
    value
        .clone()
        .ok_or_else(|| key_error(key, format!("missing, required {context}")))
}

pub fn parse(text: &str) -> Result<FileConfig, ConfigError> {
    // toml's message already names the offending key and line.
    toml::from_str(text).map_err(|e| ConfigError {
        key: None,
        message: e.to_string(),
    })
}

pub fn load(path: &Path) -> Result<ScenarioConfig, ConfigError> {
    let text = std::fs::read_to_string(path).map_err(|e| ConfigError {
        key: None,
        message: format!("cannot read {}: {e}", path.display()),
    })?;
    let base = path.parent().unwrap_or(Path::new("."));
    parse(&text)?.into_scenario(base)
}

impl FileConfig {
    pub fn into_scenario(self, base_dir: &Path) -> Result<ScenarioConfig, ConfigError> {
        let fs = self.fs.unwrap_or(DEFAULT_FS);
        let seed = self.source_seed.unwrap_or(0);

        let source = match self.source.as_deref().unwrap_or("white") {
            "white" => SourceSpec::White {
                seed,
                variance: self.variance.unwrap_or(1.0),
            },
            "colored" | "coloured" => SourceSpec::FirColored {
                seed,
                taps: required(&self.coloring_taps, "coloring_taps", "when source = \"colored\"")?,
            },
            "wav" => {
                let path = required(&self.wav, "wav", "when source = \"wav\"")?;
                SourceSpec::Wav(if path.is_relative() { base_dir.join(path) } else { path })
            }
            other => {
                return Err(key_error(
                    "source",
                    format!("unknown source '{other}' (expected white, colored or wav)"),
                ))
            }
        };

        let system = match self.system.as_deref().unwrap_or("taps") {
            "taps" => SystemSpec::Taps(required(&self.system_taps, "system_taps", "when system = \"taps\"")?),
            "rir" => SystemSpec::SyntheticRir {
                fs,
                t60: required(&self.rir_t60, "rir_t60", "when system = \"rir\"")?,
                length: required(&self.rir_length, "rir_length", "when system = \"rir\"")?,
                seed: self.rir_seed.unwrap_or(0),
            },
            other => {
                return Err(key_error(
                    "system",
                    format!("unknown system '{other}' (expected taps or rir)"),
                ))
            }
        };

        let psd_mode = match self.psd_mode.as_deref().unwrap_or("estimated") {
            "fixed" => PsdMode::Fixed {
                phi_ss: required(&self.phi_ss, "phi_ss", "when psd_mode = \"fixed\"")?,
                phi_dd: self.phi_dd.unwrap_or(0.0),
            },
            "estimated" => PsdMode::Estimated {
                lambda_s: self.lambda_s.unwrap_or(DEFAULT_LAMBDA_S),
            },
            other => {
                return Err(key_error(
                    "psd_mode",
                    format!("unknown PSD mode '{other}' (expected fixed or estimated)"),
                ))
            }
        };

        let names = self
            .algorithms
            .unwrap_or_else(|| Variant::ALL.iter().map(|v| v.name().to_string()).collect());
        let mut algorithms = Vec::with_capacity(names.len());
        for name in &names {
            let variant: Variant = name
                .parse()
                .map_err(|e: fkf_core::Error| key_error("algorithms", e.to_string()))?;
            algorithms.push(
                AlgorithmConfig::new(variant)
                    .with_a(self.a.unwrap_or(1.0))
                    .with_p_init(self.p_init.unwrap_or(DEFAULT_P_INIT))
                    .with_psd_mode(psd_mode)
                    .with_denom_floor(self.denom_floor.unwrap_or(DEFAULT_DENOM_FLOOR)),
            );
        }

        let cfg = ScenarioConfig {
            source,
            system,
            n: required(&self.n, "n", "always")?,
            frames: required(&self.frames, "frames", "always")?,
            fs,
            snr_db: self.snr_db,
            algorithms,
            seeds: self.seeds.unwrap_or_else(|| vec![1]),
            erle_smoothing: self.erle_smoothing.unwrap_or(DEFAULT_ERLE_SMOOTHING),
        };
        cfg.validate().map_err(|e| ConfigError {
            key: None,
            message: e.to_string(),
        })?;
        Ok(cfg)
    }
}
