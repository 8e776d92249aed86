//! h-index, integrity index and highly-cited-paper counts.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use super::IndicatorError;
use crate::ingest::PublicationRecord;

/// Largest `h` such that at least `h` records have `total_citations >= h`.
pub fn h_index(records: &[PublicationRecord]) -> u64 {
    let counts: Vec<u64> = records.iter().map(|r| r.total_citations).collect();
    h_index_of_counts(&counts)
}

pub fn h_index_of_counts(counts: &[u64]) -> u64 {
    let mut sorted = counts.to_vec();
    sorted.sort_unstable_by(|a, b| b.cmp(a));
    sorted
        .iter()
        .enumerate()
        .take_while(|&(i, &c)| c > i as u64)
        .count() as u64
}

/// Integrity index: h-index divided by the total number of publications.
pub fn i_index(h: u64, total_pubs: u64) -> Result<f64, IndicatorError> {
    if total_pubs == 0 {
        return Err(IndicatorError::ZeroPublications);
    }
    if h > total_pubs {
        return Err(IndicatorError::HExceedsP { h, total_pubs });
    }
    Ok(h as f64 / total_pubs as f64)
}

/// Minimum citation counts for a paper to be highly cited, by publication year.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct HcpThresholds(BTreeMap<i32, u64>);

impl HcpThresholds {
    /// Thresholds in force for the 2015–2025 publication years.
    pub const BUILTIN: [(i32, u64); 11] = [
        (2015, 92),
        (2016, 81),
        (2017, 77),
        (2018, 74),
        (2019, 64),
        (2020, 56),
        (2021, 42),
        (2022, 30),
        (2023, 19),
        (2024, 9),
        (2025, 3),
    ];

    pub fn builtin() -> Self {
        HcpThresholds(Self::BUILTIN.into_iter().collect())
    }

    /// Custom table. Thresholds must be at least 1.
    pub fn new(table: BTreeMap<i32, u64>) -> Result<Self, IndicatorError> {
        if let Some((&year, _)) = table.iter().find(|(_, &t)| t == 0) {
            return Err(IndicatorError::InvalidThreshold { year });
        }
        Ok(HcpThresholds(table))
    }

    pub fn get(&self, year: i32) -> Option<u64> {
        self.0.get(&year).copied()
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, u64)> + '_ {
        self.0.iter().map(|(&y, &t)| (y, t))
    }
}

impl Default for HcpThresholds {
    fn default() -> Self {
        Self::builtin()
    }
}

/// Number of records meeting their publication year's threshold. Years
/// missing from the table never count.
pub fn hcp_count(records: &[PublicationRecord], thresholds: &HcpThresholds) -> u64 {
    records
        .iter()
        .filter(|r| {
            thresholds
                .get(r.pub_year)
                .is_some_and(|t| r.total_citations >= t)
        })
        .count() as u64
}
