//! JSON documents written by the command-line tool.

use serde::{Deserialize, Serialize};

use crate::cohort::{CohortSummary, LinearFit, Membership, PowerLawFit, Region};
use crate::indicators::{round_for_display, AnalysisConfig, FlagConfig, IndicatorSet, Signal};
use crate::ingest::ResearcherProfile;
use crate::series::AnnualSeries;

pub const SCHEMA_VERSION: &str = "1.0";

pub fn generator() -> String {
    format!("papertrail {}", env!("CARGO_PKG_VERSION"))
}

pub fn timestamp() -> String {
    chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileMeta {
    pub name: String,
    pub source_id: Option<String>,
    pub reported_h: Option<u64>,
    pub records: usize,
    pub year_columns: Option<(i32, i32)>,
}

impl From<&ResearcherProfile> for ProfileMeta {
    fn from(p: &ResearcherProfile) -> Self {
        ProfileMeta {
            name: p.name.clone(),
            source_id: p.source_id.clone(),
            reported_h: p.reported_h,
            records: p.records.len(),
            year_columns: p.year_columns(),
        }
    }
}

/// Values rounded for human display; the exact values live in `indicators`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DisplayValues {
    pub i_index: f64,
    pub r: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    #[serde(flatten)]
    pub flags: FlagConfig,
    pub max_lag: u32,
    pub prefer_reported_h: bool,
    pub end_year: Option<i32>,
}

impl From<&AnalysisConfig> for ConfigEcho {
    fn from(c: &AnalysisConfig) -> Self {
        ConfigEcho {
            flags: c.flags.clone(),
            max_lag: c.max_lag,
            prefer_reported_h: c.prefer_reported_h,
            end_year: c.end_year,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: String,
    pub generator: String,
    pub generated_at: String,
    pub source: Option<String>,
    pub profile: ProfileMeta,
    pub indicators: IndicatorSet,
    pub display: DisplayValues,
    pub series: AnnualSeries,
    pub config: ConfigEcho,
    pub warnings: Vec<String>,
}

impl ReportDocument {
    pub fn new(
        source: Option<String>,
        profile: &ResearcherProfile,
        indicators: IndicatorSet,
        series: AnnualSeries,
        config: &AnalysisConfig,
        warnings: Vec<String>,
    ) -> Self {
        let display = DisplayValues {
            i_index: round_for_display(indicators.i_index, 2),
            r: indicators.r.map(|r| round_for_display(r, 2)),
        };
        ReportDocument {
            schema_version: SCHEMA_VERSION.into(),
            generator: generator(),
            generated_at: timestamp(),
            source,
            profile: profile.into(),
            indicators,
            display,
            series,
            config: config.into(),
            warnings,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortPointDoc {
    pub label: String,
    pub source: String,
    pub name: String,
    pub r: Option<f64>,
    pub lag: Option<u32>,
    pub h: u64,
    pub i_index: f64,
    pub total_pubs: u64,
    pub max_pubs_year: u64,
    pub avg_pubs_year: f64,
    pub membership: Membership,
    pub flags: Vec<Signal>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub label: String,
    pub source: String,
    pub error: String,
}

/// A fit result, or `null` with the reason it could not be computed.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitEntry<T> {
    pub fit: Option<T>,
    pub reason: Option<String>,
}

impl<T, E: std::fmt::Display> From<Result<T, E>> for FitEntry<T> {
    fn from(r: Result<T, E>) -> Self {
        match r {
            Ok(fit) => FitEntry {
                fit: Some(fit),
                reason: None,
            },
            Err(e) => FitEntry {
                fit: None,
                reason: Some(e.to_string()),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortDocument {
    pub schema_version: String,
    pub generator: String,
    pub generated_at: String,
    pub manifest: String,
    pub region: Region,
    /// How the group averages are aggregated.
    pub averages: String,
    pub points: Vec<CohortPointDoc>,
    pub summary: CohortSummaryDoc,
    pub power_law_fit: FitEntry<PowerLawFit>,
    pub linear_fit: FitEntry<LinearFit>,
    pub diagnostics: Vec<Diagnostic>,
    pub warnings: Vec<String>,
}

/// [`CohortSummary`] without the per-point memberships (those sit on the points).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummaryDoc {
    pub inside_fraction: f64,
    pub inside: crate::cohort::GroupMeans,
    pub outside: crate::cohort::GroupMeans,
    pub unclassifiable: usize,
}

impl From<&CohortSummary> for CohortSummaryDoc {
    fn from(s: &CohortSummary) -> Self {
        CohortSummaryDoc {
            inside_fraction: s.inside_fraction,
            inside: s.inside.clone(),
            outside: s.outside.clone(),
            unclassifiable: s.unclassifiable,
        }
    }
}
