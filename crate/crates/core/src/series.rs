//! Annual publications/citations series.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::ResearcherProfile;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum SeriesError {
    #[error("profile contains no publication records")]
    EmptyProfile,
    #[error("window {from}..={to} does not intersect series years {start}..={end}")]
    EmptyWindow {
        from: i32,
        to: i32,
        start: i32,
        end: i32,
    },
}

/// Publications and citations per calendar year over a contiguous range.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnualSeries {
    pub start_year: i32,
    pub pubs: Vec<u64>,
    pub cites: Vec<u64>,
}

impl AnnualSeries {
    pub fn len(&self) -> usize {
        self.pubs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pubs.is_empty()
    }

    pub fn end_year(&self) -> i32 {
        self.start_year + self.pubs.len() as i32 - 1
    }

    pub fn years(&self) -> impl Iterator<Item = i32> + '_ {
        (0..self.pubs.len() as i32).map(move |i| self.start_year + i)
    }

    pub fn total_pubs(&self) -> u64 {
        self.pubs.iter().sum()
    }

    pub fn total_cites(&self) -> u64 {
        self.cites.iter().sum()
    }

    pub fn pubs_f64(&self) -> Vec<f64> {
        self.pubs.iter().map(|&v| v as f64).collect()
    }

    pub fn cites_f64(&self) -> Vec<f64> {
        self.cites.iter().map(|&v| v as f64).collect()
    }
}

/// Build the aligned series for a profile.
///
/// The range starts at the earliest publication year, or earlier if some
/// record has non-zero citations before it, and ends at the latest of
/// `end_year`, the last publication year and the last citation column.
pub fn build_series(
    profile: &ResearcherProfile,
    end_year: Option<i32>,
) -> Result<AnnualSeries, SeriesError> {
    let records = &profile.records;
    let first_pub = records
        .iter()
        .map(|r| r.pub_year)
        .min()
        .ok_or(SeriesError::EmptyProfile)?;
    let last_pub = records
        .iter()
        .map(|r| r.pub_year)
        .max()
        .unwrap_or(first_pub);

    let first_cited = records
        .iter()
        .flat_map(|r| r.citations_by_year.iter())
        .filter(|(_, &c)| c > 0)
        .map(|(&y, _)| y)
        .min();
    let last_column = records
        .iter()
        .filter_map(|r| r.citations_by_year.keys().next_back().copied())
        .max();

    let start = first_cited.map_or(first_pub, |y| y.min(first_pub));
    let end = [Some(last_pub), last_column, end_year]
        .into_iter()
        .flatten()
        .max()
        .unwrap_or(last_pub);
    let len = (end - start + 1) as usize;

    let mut pubs = vec![0u64; len];
    let mut cites = vec![0u64; len];
    for r in records {
        pubs[(r.pub_year - start) as usize] += 1;
        for (&year, &count) in &r.citations_by_year {
            // zero counts before `start` are the only thing that can fall outside
            if year >= start {
                cites[(year - start) as usize] += count;
            }
        }
    }

    Ok(AnnualSeries {
        start_year: start,
        pubs,
        cites,
    })
}

/// Clip a series to `[from, to]`. No zero padding is added.
pub fn slice_window(
    series: &AnnualSeries,
    from: i32,
    to: i32,
) -> Result<AnnualSeries, SeriesError> {
    let start = from.max(series.start_year);
    let end = to.min(series.end_year());
    if from > to || start > end || series.is_empty() {
        return Err(SeriesError::EmptyWindow {
            from,
            to,
            start: series.start_year,
            end: series.end_year(),
        });
    }
    let lo = (start - series.start_year) as usize;
    let hi = (end - series.start_year) as usize + 1;
    Ok(AnnualSeries {
        start_year: start,
        pubs: series.pubs[lo..hi].to_vec(),
        cites: series.cites[lo..hi].to_vec(),
    })
}

#[cfg(test)]
mod tests {
    use std::collections::BTreeMap;

    use super::*;
    use crate::ingest::PublicationRecord;

    fn record(pub_year: i32, cites: &[(i32, u64)]) -> PublicationRecord {
        let citations_by_year: BTreeMap<i32, u64> = cites.iter().copied().collect();
        PublicationRecord {
            title: String::new(),
            pub_year,
            total_citations: citations_by_year.values().sum(),
            citations_by_year,
        }
    }

    fn profile(records: Vec<PublicationRecord>) -> ResearcherProfile {
        ResearcherProfile {
            name: "t".into(),
            source_id: None,
            reported_h: None,
            records,
            warnings: vec![],
        }
    }

    fn window(from: i32, to: i32, counts: &[u64]) -> Vec<(i32, u64)> {
        (from..=to).zip(counts.iter().copied()).collect()
    }

    #[test]
    fn counts_publications_per_year() {
        let p = profile(vec![
            record(2010, &window(2010, 2013, &[1, 0, 0, 0])),
            record(2010, &window(2010, 2013, &[0, 1, 0, 0])),
            record(2012, &window(2010, 2013, &[0, 0, 0, 1])),
        ]);
        let s = build_series(&p, None).unwrap();
        assert_eq!(s.start_year, 2010);
        assert_eq!(s.pubs, vec![2, 0, 1, 0]);
        assert_eq!(s.cites, vec![1, 1, 0, 1]);
    }

    #[test]
    fn single_record() {
        let p = profile(vec![record(2020, &[(2020, 1), (2021, 2)])]);
        let s = build_series(&p, None).unwrap();
        assert_eq!(s.pubs, vec![1, 0]);
        assert_eq!(s.cites, vec![1, 2]);
    }

    #[test]
    fn citations_summed_column_wise() {
        let recs = vec![
            record(2015, &window(2015, 2019, &[3, 1, 4, 1, 5])),
            record(2016, &window(2015, 2019, &[0, 9, 2, 6, 5])),
            record(2016, &window(2015, 2019, &[0, 3, 5, 8, 9])),
        ];
        // independent per-year summation
        let mut expected = BTreeMap::new();
        for r in &recs {
            for (y, c) in &r.citations_by_year {
                *expected.entry(*y).or_insert(0u64) += c;
            }
        }
        let s = build_series(&profile(recs), None).unwrap();
        let got: BTreeMap<i32, u64> = s.years().zip(s.cites.iter().copied()).collect();
        assert_eq!(got, expected);
    }

    #[test]
    fn end_year_extends_range() {
        let p = profile(vec![record(2020, &[(2020, 1)])]);
        let s = build_series(&p, Some(2023)).unwrap();
        assert_eq!(s.pubs, vec![1, 0, 0, 0]);
        assert_eq!(s.end_year(), 2023);
    }

    #[test]
    fn early_citations_extend_range_downward() {
        let p = profile(vec![record(2012, &window(2010, 2013, &[0, 2, 1, 1]))]);
        let s = build_series(&p, None).unwrap();
        assert_eq!(s.start_year, 2011);
        assert_eq!(s.pubs, vec![0, 1, 0]);
        assert_eq!(s.total_cites(), 4);
    }

    #[test]
    fn empty_profile_is_error() {
        assert_eq!(
            build_series(&profile(vec![]), None),
            Err(SeriesError::EmptyProfile)
        );
    }

    #[test]
    fn slicing() {
        let s = AnnualSeries {
            start_year: 2010,
            pubs: vec![1, 2, 3, 4],
            cites: vec![5, 6, 7, 8],
        };
        let sub = slice_window(&s, 2011, 2012).unwrap();
        assert_eq!(sub.start_year, 2011);
        assert_eq!(sub.pubs, vec![2, 3]);
        assert_eq!(sub.cites, vec![6, 7]);
        assert_eq!(slice_window(&s, 2010, 2013).unwrap(), s);
        assert_eq!(slice_window(&s, 2000, 2030).unwrap(), s);
        assert!(matches!(
            slice_window(&s, 1990, 1995),
            Err(SeriesError::EmptyWindow { .. })
        ));
        assert!(matches!(
            slice_window(&s, 2012, 2011),
            Err(SeriesError::EmptyWindow { .. })
        ));
    }
}
