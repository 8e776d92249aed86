//! Helpers shared by the integration test targets: profile generators and
//! oracles that do not go through the library's own code paths.
#![allow(dead_code)]

use std::collections::BTreeMap;

use papertrail::{PublicationRecord, ResearcherProfile};
use proptest::prelude::*;

/// Text without tabs or line breaks, safe for the TSV layout.
pub fn tsv_text(max: usize) -> BoxedStrategy<String> {
    proptest::string::string_regex(&format!("[^\t\r\n]{{0,{max}}}"))
        .unwrap()
        .boxed()
}

/// Arbitrary text including delimiters, quotes and line breaks (CSV-safe).
pub fn csv_text(max: usize) -> BoxedStrategy<String> {
    proptest::string::string_regex(&format!("(.|[,\"\t\r\n]){{0,{max}}}"))
        .unwrap()
        .boxed()
}

/// A valid profile: every record shares the same contiguous year window.
pub fn profile_with(
    text: impl Strategy<Value = String> + Clone,
) -> impl Strategy<Value = ResearcherProfile> {
    (1900i32..2080, 0usize..12).prop_flat_map(move |(first_year, n_cols)| {
        let record = (
            text.clone(),
            1900i32..=2100,
            proptest::collection::vec(0u64..5000, n_cols),
            0u64..3,
        )
            .prop_map(move |(title, pub_year, counts, extra)| {
                let citations_by_year: BTreeMap<i32, u64> = counts
                    .iter()
                    .enumerate()
                    .map(|(i, &c)| (first_year + i as i32, c))
                    .collect();
                let sum: u64 = counts.iter().sum();
                PublicationRecord {
                    title,
                    pub_year,
                    // sometimes exceed the window sum, as real exports do
                    total_citations: if extra == 0 { sum + 7 } else { sum },
                    citations_by_year,
                }
            });
        (
            text.clone()
                .prop_filter("name must be non-empty", |s| !s.is_empty()),
            proptest::option::of(text.clone()),
            proptest::option::of(0u64..500),
            proptest::collection::vec(record, 1..25),
        )
            .prop_map(|(name, source_id, reported_h, records)| ResearcherProfile {
                name,
                source_id,
                reported_h,
                records,
                warnings: vec![],
            })
    })
}

/// Every candidate h checked against the definition.
pub fn brute_force_h(counts: &[u64]) -> u64 {
    (0..=counts.len() as u64)
        .filter(|&h| counts.iter().filter(|&&c| c >= h).count() as u64 >= h)
        .max()
        .unwrap_or(0)
}

/// Correlation of integer sequences from exact integer sums:
/// (nΣxy − ΣxΣy) / sqrt((nΣx² − (Σx)²)(nΣy² − (Σy)²)).
pub fn textbook_pearson(x: &[u64], y: &[u64]) -> Option<f64> {
    let n = x.len() as i128;
    let sx: i128 = x.iter().map(|&v| v as i128).sum();
    let sy: i128 = y.iter().map(|&v| v as i128).sum();
    let sxx: i128 = x.iter().map(|&v| (v as i128) * (v as i128)).sum();
    let syy: i128 = y.iter().map(|&v| (v as i128) * (v as i128)).sum();
    let sxy: i128 = x.iter().zip(y).map(|(&a, &b)| a as i128 * b as i128).sum();
    let num = n * sxy - sx * sy;
    let dx = n * sxx - sx * sx;
    let dy = n * syy - sy * sy;
    if dx == 0 || dy == 0 {
        return None;
    }
    Some(num as f64 / ((dx as f64) * (dy as f64)).sqrt())
}

/// Correlation at every lag `0..=max_lag`, scanned exhaustively.
pub fn exhaustive_lag_scan(pubs: &[u64], cites: &[u64], max_lag: usize) -> Vec<Option<f64>> {
    let n = pubs.len();
    (0..=max_lag)
        .map(|d| textbook_pearson(&pubs[..n - d], &cites[d..]))
        .collect()
}
