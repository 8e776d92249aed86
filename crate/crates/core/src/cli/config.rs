//! Key-value configuration file (TOML syntax).
//!
//! ```toml
//! r_min = 0.5
//! i_max = 0.3
//! pubs_per_year_limit = 30
//! growth_window = 5
//! lag_max_flag = 0
//! max_lag = 10
//! prefer_reported_h = true
//! end_year = 2024
//! ```

use std::path::{Path, PathBuf};

use serde::Deserialize;

use crate::indicators::AnalysisConfig;

pub const CONFIG_ENV: &str = "PAPERTRAIL_CONFIG";

#[derive(Debug, Default, Clone, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub r_min: Option<f64>,
    pub i_max: Option<f64>,
    pub pubs_per_year_limit: Option<u64>,
    pub growth_window: Option<usize>,
    pub lag_max_flag: Option<u32>,
    pub max_lag: Option<u32>,
    pub prefer_reported_h: Option<bool>,
    pub end_year: Option<i32>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, String> {
        toml::from_str(text).map_err(|e| e.to_string())
    }

    pub fn load(path: &Path) -> Result<Self, String> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| format!("cannot read config {}: {e}", path.display()))?;
        Self::parse(&text).map_err(|e| format!("invalid config {}: {e}", path.display()))
    }

    pub fn apply(&self, config: &mut AnalysisConfig) {
        let flags = &mut config.flags;
        if let Some(v) = self.r_min {
            flags.r_min = v;
        }
        if let Some(v) = self.i_max {
            flags.i_max = v;
        }
        if let Some(v) = self.pubs_per_year_limit {
            flags.pubs_per_year_limit = v;
        }
        if let Some(v) = self.growth_window {
            flags.growth_window = v;
        }
        if let Some(v) = self.lag_max_flag {
            flags.lag_max_flag = v;
        }
        if let Some(v) = self.max_lag {
            config.max_lag = v;
        }
        if let Some(v) = self.prefer_reported_h {
            config.prefer_reported_h = v;
        }
        if self.end_year.is_some() {
            config.end_year = self.end_year;
        }
    }
}

/// `--config` wins over the environment variable.
pub fn config_path(flag: Option<&Path>) -> Option<PathBuf> {
    flag.map(Path::to_path_buf).or_else(|| {
        std::env::var_os(CONFIG_ENV)
            .filter(|v| !v.is_empty())
            .map(PathBuf::from)
    })
}
