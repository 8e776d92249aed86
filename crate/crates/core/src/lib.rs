//! Publication/citation time-series indicators for individual researchers
//! and cohorts, computed from citation-report exports.
//!
//! The pipeline: [`ingest`] parses a report into a [`ResearcherProfile`],
//! [`series`] aligns annual publications and citations, [`indicators`]
//! computes correlation, delay, h-index, integrity index and warning
//! signals, and [`cohort`] aggregates many researchers and fits the
//! cohort-level curves. [`render`] draws SVG charts and [`synth`] produces
//! deterministic synthetic profiles.

pub mod cli;
pub mod cohort;
pub mod indicators;
pub mod ingest;
pub mod render;
pub mod report;
pub mod series;
pub mod synth;

pub use cohort::{classify_region, cohort_summary, fit_linear, fit_power_law, CohortPoint, Region};
pub use indicators::{
    analyze_profile, AnalysisConfig, IndicatorSet, ProfileAnalysis, Signal, SignalKind,
};
pub use ingest::{
    parse_report, serialize_report, PublicationRecord, ReportFormat, ResearcherProfile,
};
pub use series::{build_series, slice_window, AnnualSeries};
pub use synth::{generate, Archetype, SynthSpec};
