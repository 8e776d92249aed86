//! Single-researcher indicators.

mod citation;
mod correlation;
mod flags;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use citation::{h_index, h_index_of_counts, hcp_count, i_index, HcpThresholds};
pub use correlation::{best_lag, pearson, LagEstimate, MIN_LAG_OVERLAP};
pub use flags::{flag_profile, FlagConfig, Signal, SignalKind};

use crate::ingest::ResearcherProfile;
use crate::series::{build_series, AnnualSeries, SeriesError};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IndicatorError {
    #[error("sequences differ in length ({left} vs {right})")]
    LengthMismatch { left: usize, right: usize },
    #[error("series of length {len} is too short, need at least {need}")]
    TooShort { len: usize, need: usize },
    #[error("correlation is undefined at every lag")]
    AllDegenerate,
    #[error("total publication count is zero")]
    ZeroPublications,
    #[error("h-index {h} exceeds publication count {total_pubs}")]
    HExceedsP { h: u64, total_pubs: u64 },
    #[error("highly-cited threshold for {year} must be at least 1")]
    InvalidThreshold { year: i32 },
}

#[derive(Debug, Error)]
pub enum AnalysisError {
    #[error(transparent)]
    Series(#[from] SeriesError),
    #[error(transparent)]
    Indicator(#[from] IndicatorError),
}

/// Largest, smallest and mean publications per year over the career span
/// (zero years included).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct YearlyStats {
    pub max: u64,
    pub min: u64,
    pub avg: f64,
}

pub fn yearly_stats(series: &AnnualSeries) -> YearlyStats {
    if series.is_empty() {
        return YearlyStats {
            max: 0,
            min: 0,
            avg: 0.0,
        };
    }
    YearlyStats {
        max: series.pubs.iter().copied().max().unwrap_or(0),
        min: series.pubs.iter().copied().min().unwrap_or(0),
        avg: series.total_pubs() as f64 / series.len() as f64,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct IndicatorSet {
    /// Publications/citations correlation; `None` when undefined.
    pub r: Option<f64>,
    pub r_undefined_reason: Option<String>,
    /// Citation delay in years; reported only for strong correlation.
    pub lag: Option<u32>,
    pub lag_undefined_reason: Option<String>,
    /// Correlation at `lag`.
    pub r_at_lag: Option<f64>,
    pub h: u64,
    pub h_computed: u64,
    pub i_index: f64,
    pub total_pubs: u64,
    pub total_cites: u64,
    pub max_pubs_year: u64,
    pub min_pubs_year: u64,
    pub avg_pubs_year: f64,
    pub avg_cites_per_paper: f64,
    pub start_year: i32,
    pub hcp_count: u64,
    pub flags: Vec<Signal>,
}

impl IndicatorSet {
    pub(crate) fn empty(start_year: i32) -> Self {
        IndicatorSet {
            r: None,
            r_undefined_reason: None,
            lag: None,
            lag_undefined_reason: None,
            r_at_lag: None,
            h: 0,
            h_computed: 0,
            i_index: 0.0,
            total_pubs: 0,
            total_cites: 0,
            max_pubs_year: 0,
            min_pubs_year: 0,
            avg_pubs_year: 0.0,
            avg_cites_per_paper: 0.0,
            start_year,
            hcp_count: 0,
            flags: Vec::new(),
        }
    }

    pub fn has_signal(&self, kind: SignalKind) -> bool {
        self.flags.iter().any(|s| s.kind == kind)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AnalysisConfig {
    pub flags: FlagConfig,
    pub max_lag: u32,
    /// Use the report's own h-index (when present) instead of recomputing it.
    pub prefer_reported_h: bool,
    /// Extend the series to this year (e.g. the export year).
    pub end_year: Option<i32>,
    pub hcp_thresholds: HcpThresholds,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        AnalysisConfig {
            flags: FlagConfig::default(),
            max_lag: 10,
            prefer_reported_h: true,
            end_year: None,
            hcp_thresholds: HcpThresholds::builtin(),
        }
    }
}

/// Everything [`analyze_profile`] produces.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileAnalysis {
    pub series: AnnualSeries,
    pub indicators: IndicatorSet,
    pub warnings: Vec<String>,
}

pub fn analyze_profile(
    profile: &ResearcherProfile,
    config: &AnalysisConfig,
) -> Result<ProfileAnalysis, AnalysisError> {
    let series = build_series(profile, config.end_year)?;
    let mut warnings = Vec::new();

    let first_pub = profile
        .records
        .iter()
        .map(|r| r.pub_year)
        .min()
        .unwrap_or(series.start_year);
    if series.start_year < first_pub {
        warnings.push(format!(
            "citations recorded from {} precede the first publication year {first_pub}",
            series.start_year
        ));
    }

    let mut ind = IndicatorSet::empty(series.start_year);
    ind.total_pubs = profile.records.len() as u64;
    ind.total_cites = profile.records.iter().map(|r| r.total_citations).sum();

    match pearson(&series.pubs_f64(), &series.cites_f64()) {
        Ok(Some(r)) => ind.r = Some(r),
        Ok(None) => {
            ind.r_undefined_reason =
                Some("publications or citations are constant over the series".into())
        }
        Err(e) => ind.r_undefined_reason = Some(e.to_string()),
    }

    match ind.r {
        None => ind.lag_undefined_reason = Some("correlation is undefined".into()),
        Some(r) if r <= config.flags.r_min => {
            ind.lag_undefined_reason = Some(format!(
                "correlation {r:.4} does not exceed {}; delay is only meaningful for strong correlation",
                config.flags.r_min
            ))
        }
        Some(_) => {
            let room = series.len().saturating_sub(MIN_LAG_OVERLAP);
            if series.len() < MIN_LAG_OVERLAP {
                ind.lag_undefined_reason = Some(format!(
                    "series of {} years is too short for a delay estimate",
                    series.len()
                ));
            } else {
                let max_lag = config.max_lag.min(room as u32);
                match best_lag(&series, max_lag) {
                    Ok(est) => {
                        ind.lag = Some(est.lag);
                        ind.r_at_lag = Some(est.r);
                    }
                    Err(e) => ind.lag_undefined_reason = Some(e.to_string()),
                }
            }
        }
    }

    ind.h_computed = h_index(&profile.records);
    ind.h = ind.h_computed;
    if let (true, Some(reported)) = (config.prefer_reported_h, profile.reported_h) {
        if reported != ind.h_computed {
            warnings.push(format!(
                "reported h-index {reported} differs from the value {} computed from the records",
                ind.h_computed
            ));
        }
        if reported <= ind.total_pubs {
            ind.h = reported;
        } else {
            warnings.push(format!(
                "reported h-index {reported} exceeds the {} records in the report; using the computed value",
                ind.total_pubs
            ));
        }
    }
    ind.i_index = i_index(ind.h, ind.total_pubs)?;

    let stats = yearly_stats(&series);
    ind.max_pubs_year = stats.max;
    ind.min_pubs_year = stats.min;
    ind.avg_pubs_year = stats.avg;
    ind.avg_cites_per_paper = ind.total_cites as f64 / ind.total_pubs as f64;
    ind.hcp_count = hcp_count(&profile.records, &config.hcp_thresholds);
    ind.flags = flag_profile(&ind, &series, &config.flags);

    Ok(ProfileAnalysis {
        series,
        indicators: ind,
        warnings,
    })
}

/// Round half away from zero to `decimals` places, for display only.
pub fn round_for_display(value: f64, decimals: u32) -> f64 {
    let scale = 10f64.powi(decimals as i32);
    (value * scale).round() / scale
}
