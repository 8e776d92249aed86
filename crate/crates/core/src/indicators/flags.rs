//! Papermilling-behaviour signals.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::IndicatorSet;
use crate::series::AnnualSeries;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum SignalKind {
    HighCorrelation,
    ZeroLag,
    LowIntegrity,
    ExcessiveAnnualOutput,
    MonotoneGrowth,
}

impl fmt::Display for SignalKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Signal {
    pub kind: SignalKind,
    pub detail: String,
}

/// Thresholds for [`flag_profile`]. Correlation and integrity comparisons are strict.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct FlagConfig {
    pub r_min: f64,
    pub lag_max_flag: u32,
    pub i_max: f64,
    pub pubs_per_year_limit: u64,
    pub growth_window: usize,
}

impl Default for FlagConfig {
    fn default() -> Self {
        FlagConfig {
            r_min: 0.5,
            lag_max_flag: 0,
            i_max: 0.3,
            // not taken from any published cutoff; 45/year is the untypical case
            pubs_per_year_limit: 30,
            growth_window: 5,
        }
    }
}

pub fn flag_profile(ind: &IndicatorSet, series: &AnnualSeries, config: &FlagConfig) -> Vec<Signal> {
    let mut signals = Vec::new();

    let high_corr = ind.r.is_some_and(|r| r > config.r_min);
    if high_corr {
        signals.push(Signal {
            kind: SignalKind::HighCorrelation,
            detail: format!(
                "publications/citations correlation r = {:.4} exceeds {}",
                ind.r.unwrap_or_default(),
                config.r_min
            ),
        });
        if let Some(lag) = ind.lag.filter(|&l| l <= config.lag_max_flag) {
            signals.push(Signal {
                kind: SignalKind::ZeroLag,
                detail: format!(
                    "citations follow publications with a delay of {lag} year(s), at most {}",
                    config.lag_max_flag
                ),
            });
        }
    }

    if ind.i_index < config.i_max {
        signals.push(Signal {
            kind: SignalKind::LowIntegrity,
            detail: format!(
                "integrity index I = {}/{} = {:.4} below {}",
                ind.h, ind.total_pubs, ind.i_index, config.i_max
            ),
        });
    }

    if ind.max_pubs_year >= config.pubs_per_year_limit {
        signals.push(Signal {
            kind: SignalKind::ExcessiveAnnualOutput,
            detail: format!(
                "{} papers in one year, limit {}",
                ind.max_pubs_year, config.pubs_per_year_limit
            ),
        });
    }

    if let Some(detail) = trailing_growth(series, config.growth_window) {
        signals.push(Signal {
            kind: SignalKind::MonotoneGrowth,
            detail,
        });
    }

    signals
}

/// Trailing `window` years non-decreasing, with at least one strict increase,
/// ending above the career mean.
fn trailing_growth(series: &AnnualSeries, window: usize) -> Option<String> {
    let pubs = &series.pubs;
    if window < 2 || pubs.len() < window {
        return None;
    }
    let tail = &pubs[pubs.len() - window..];
    let non_decreasing = tail.windows(2).all(|w| w[0] <= w[1]);
    let increasing = tail.windows(2).any(|w| w[0] < w[1]);
    let mean = series.total_pubs() as f64 / pubs.len() as f64;
    let last = *tail.last()?;
    (non_decreasing && increasing && last as f64 > mean).then(|| {
        format!(
            "publications rose monotonically over the last {window} years to {last} (career mean {mean:.2})"
        )
    })
}
