//! Config file schema and resolution.
//!
//! Precedence: command-line flags > config file > built-in defaults, with the
//! `PATHSUM_SEED` environment variable replacing the built-in default seed.
//! A previously written run manifest can be passed as the config file; its
//! resolved `config` object is then used directly, which reproduces the run.

use std::f64::consts::TAU;
use std::path::Path;

use anyhow::Context;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Config {
    pub seed: Option<u64>,
    pub cornu: CornuConfig,
    pub free: FreeConfig,
    pub ring: RingConfig,
    pub interferometer: InterferometerConfig,
    pub rings: RingsConfig,
    pub spin: SpinConfig,
    pub stream: StreamCliConfig,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CornuConfig {
    pub n_points: usize,
    pub mass: f64,
    pub t_total: f64,
    pub source: (f64, f64),
    pub receiver: (f64, f64),
    pub mirror: (f64, f64),
}

impl Default for CornuConfig {
    fn default() -> Self {
        CornuConfig {
            n_points: 2001,
            mass: 1.0,
            t_total: 1.0,
            source: (-1.0, 1.0),
            receiver: (1.0, 1.0),
            mirror: (-8.0, 8.0),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FreeConfig {
    pub mass: f64,
    pub t_total: f64,
    pub n_slices: usize,
    pub sites: usize,
    pub half_width: f64,
    pub taper_frac: f64,
    pub max_displacement: f64,
    pub grid: usize,
}

impl Default for FreeConfig {
    fn default() -> Self {
        FreeConfig {
            mass: 1.0,
            t_total: 1.0,
            n_slices: 2,
            sites: 1601,
            half_width: 20.0,
            taper_frac: 0.5,
            max_displacement: 2.0,
            grid: 9,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingConfig {
    pub moment: f64,
    pub t_total: f64,
    pub n_cutoff: usize,
    pub m_cutoff: usize,
    pub damping: f64,
    pub grid: usize,
}

impl Default for RingConfig {
    fn default() -> Self {
        RingConfig {
            moment: 1.0,
            t_total: TAU,
            n_cutoff: 40,
            m_cutoff: 40,
            damping: 5e-3,
            grid: 8,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct InterferometerConfig {
    pub alpha_grid: usize,
    pub beta: f64,
}

impl Default for InterferometerConfig {
    fn default() -> Self {
        InterferometerConfig {
            alpha_grid: 25,
            beta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RingsConfig {
    pub p_min: i64,
    pub p_max: i64,
    pub n_cutoff: usize,
    pub damping: f64,
}

impl Default for RingsConfig {
    fn default() -> Self {
        RingsConfig {
            p_min: -5,
            p_max: 5,
            n_cutoff: 8,
            damping: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SpinConfig {
    pub grid: usize,
    pub beta: f64,
}

impl Default for SpinConfig {
    fn default() -> Self {
        SpinConfig {
            grid: 25,
            beta: 0.0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct StreamCliConfig {
    pub experiment: String,
    pub n_trials: u64,
    pub alpha: f64,
    pub beta: f64,
    pub momentum: i64,
    pub n_cutoff: usize,
    pub shadow_paths: usize,
    pub shadow_slices: usize,
}

impl Default for StreamCliConfig {
    fn default() -> Self {
        StreamCliConfig {
            experiment: "two-detector".into(),
            n_trials: 100_000,
            alpha: 0.9,
            beta: 0.4,
            momentum: 1,
            n_cutoff: 4,
            shadow_paths: 100,
            shadow_slices: 8,
        }
    }
}

/// Reads a config file, accepting either the plain schema or a run manifest
/// whose `config` object holds a resolved configuration.
pub fn load(path: &Path) -> anyhow::Result<Config> {
    let text = std::fs::read_to_string(path)
        .with_context(|| format!("reading config file {}", path.display()))?;
    let value: serde_json::Value = serde_json::from_str(&text)
        .with_context(|| format!("parsing config file {}", path.display()))?;
    let config_value = match value.get("config") {
        Some(inner) if value.get("experiment").is_some() => inner.clone(),
        _ => value,
    };
    serde_json::from_value(config_value)
        .with_context(|| format!("validating config file {}", path.display()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_object_gives_defaults() {
        let config: Config = serde_json::from_str("{}").unwrap();
        assert_eq!(config.free.sites, 1601);
        assert_eq!(config.interferometer.alpha_grid, 25);
        assert!(config.seed.is_none());
    }

    #[test]
    fn partial_section_keeps_other_defaults() {
        let config: Config =
            serde_json::from_str(r#"{"free": {"n_slices": 3}, "seed": 7}"#).unwrap();
        assert_eq!(config.free.n_slices, 3);
        assert_eq!(config.free.sites, 1601);
        assert_eq!(config.seed, Some(7));
    }

    #[test]
    fn unknown_keys_are_rejected() {
        assert!(serde_json::from_str::<Config>(r#"{"fre": {}}"#).is_err());
        assert!(serde_json::from_str::<Config>(r#"{"free": {"mas": 2.0}}"#).is_err());
    }
}
