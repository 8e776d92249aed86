//! Cross-researcher analysis: flag-region membership, group averages and
//! cohort-wide curve fits.

mod fit;

use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use fit::{fit_linear, fit_power_law, ols, LinearFit, PowerLawFit};

use crate::indicators::IndicatorSet;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum CohortError {
    #[error("cohort is empty")]
    EmptyCohort,
    #[error("need at least {need} usable points, got {got}")]
    TooFewPoints { got: usize, need: usize },
    #[error("all abscissae are equal")]
    DegenerateAbscissa,
    #[error("invalid region: {0}")]
    InvalidRegion(String),
    #[error("manifest line {line}: {reason}")]
    Manifest { line: usize, reason: String },
}

/// One researcher's coordinates in the cohort plots.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortPoint {
    pub label: String,
    pub r: Option<f64>,
    pub i_index: f64,
    pub total_pubs: u64,
    pub max_pubs_year: u64,
    pub avg_pubs_year: f64,
}

impl CohortPoint {
    pub fn from_indicators(label: impl Into<String>, ind: &IndicatorSet) -> Self {
        CohortPoint {
            label: label.into(),
            r: ind.r,
            i_index: ind.i_index,
            total_pubs: ind.total_pubs,
            max_pubs_year: ind.max_pubs_year,
            avg_pubs_year: ind.avg_pubs_year,
        }
    }
}

/// The flag rectangle: correlation above `r_min` and integrity below `i_max`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Region {
    pub r_min: f64,
    pub i_max: f64,
}

impl Region {
    pub fn new(r_min: f64, i_max: f64) -> Result<Self, CohortError> {
        if !(r_min > -1.0 && r_min < 1.0) {
            return Err(CohortError::InvalidRegion(format!(
                "r_min {r_min} not in (-1, 1)"
            )));
        }
        if !(i_max > 0.0 && i_max < 1.0) {
            return Err(CohortError::InvalidRegion(format!(
                "i_max {i_max} not in (0, 1)"
            )));
        }
        Ok(Region { r_min, i_max })
    }
}

impl Default for Region {
    fn default() -> Self {
        Region {
            r_min: 0.5,
            i_max: 0.3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Membership {
    Inside,
    Outside,
    Unclassifiable,
}

pub fn classify_region(point: &CohortPoint, region: &Region) -> Membership {
    match point.r {
        None => Membership::Unclassifiable,
        Some(r) if r > region.r_min && point.i_index < region.i_max => Membership::Inside,
        Some(_) => Membership::Outside,
    }
}

/// Arithmetic means over one group of points; `None` for an empty group.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GroupMeans {
    pub count: usize,
    pub mean_total_pubs: Option<f64>,
    pub mean_max_pubs_year: Option<f64>,
    pub mean_avg_pubs_year: Option<f64>,
}

impl GroupMeans {
    fn of<'a>(points: impl Iterator<Item = &'a CohortPoint>) -> Self {
        let (mut count, mut pubs, mut max, mut avg) = (0usize, 0.0, 0.0, 0.0);
        for p in points {
            count += 1;
            pubs += p.total_pubs as f64;
            max += p.max_pubs_year as f64;
            avg += p.avg_pubs_year;
        }
        let mean = |s: f64| (count > 0).then(|| s / count as f64);
        GroupMeans {
            count,
            mean_total_pubs: mean(pubs),
            mean_max_pubs_year: mean(max),
            mean_avg_pubs_year: mean(avg),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CohortSummary {
    pub region: Region,
    /// Inside / (Inside + Outside); 0 when no point is classifiable.
    pub inside_fraction: f64,
    pub inside: GroupMeans,
    pub outside: GroupMeans,
    pub unclassifiable: usize,
    pub memberships: Vec<Membership>,
}

pub fn cohort_summary(
    points: &[CohortPoint],
    region: &Region,
) -> Result<CohortSummary, CohortError> {
    if points.is_empty() {
        return Err(CohortError::EmptyCohort);
    }
    let memberships: Vec<Membership> = points.iter().map(|p| classify_region(p, region)).collect();
    let group = |m: Membership| {
        GroupMeans::of(
            points
                .iter()
                .zip(&memberships)
                .filter(move |(_, &k)| k == m)
                .map(|(p, _)| p),
        )
    };
    let inside = group(Membership::Inside);
    let outside = group(Membership::Outside);
    let classified = inside.count + outside.count;
    let inside_fraction = if classified == 0 {
        0.0
    } else {
        inside.count as f64 / classified as f64
    };
    Ok(CohortSummary {
        region: *region,
        inside_fraction,
        unclassifiable: points.len() - classified,
        inside,
        outside,
        memberships,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ManifestEntry {
    pub label: String,
    pub path: PathBuf,
}

/// Parse a cohort manifest: one `<label><TAB><path>` per line. Blank lines
/// and lines starting with `#` are skipped. Relative paths are resolved
/// against `base_dir`.
pub fn parse_manifest(text: &str, base_dir: &Path) -> Result<Vec<ManifestEntry>, CohortError> {
    let mut entries = Vec::new();
    for (i, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let Some((label, path)) = line.split_once('\t') else {
            return Err(CohortError::Manifest {
                line: i + 1,
                reason: "expected `<label><TAB><path>`".into(),
            });
        };
        if label.is_empty() || path.is_empty() {
            return Err(CohortError::Manifest {
                line: i + 1,
                reason: "empty label or path".into(),
            });
        }
        let path = Path::new(path);
        entries.push(ManifestEntry {
            label: label.to_string(),
            path: if path.is_absolute() {
                path.to_path_buf()
            } else {
                base_dir.join(path)
            },
        });
    }
    Ok(entries)
}
