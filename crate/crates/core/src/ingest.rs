//! Canonical citation-report files.
//!
//! A report is a delimited text table with optional `#`-prefixed metadata
//! lines followed by a header row and one row per indexed publication:
//!
//! ```text
//! # researcher<TAB><name>
//! # id<TAB><identifier>
//! # h-index<TAB><integer>
//! Title<TAB>Publication Year<TAB>Total Citations<TAB><Y1>...<TAB><Yk>
//! <title><TAB><year><TAB><int><TAB><int>...<TAB><int>
//! ```
//!
//! The year columns are contiguous and ascending. The CSV variant uses the
//! same layout with commas and RFC 4180 quoting.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub const MIN_YEAR: i32 = 1900;
pub const MAX_YEAR: i32 = 2100;

const TITLE_COLUMN: &str = "Title";
const YEAR_COLUMN: &str = "Publication Year";
const TOTAL_COLUMN: &str = "Total Citations";

const META_NAME: &str = "# researcher";
const META_ID: &str = "# id";
const META_H: &str = "# h-index";

/// Name used when neither the file nor the caller supplies one.
pub const DEFAULT_NAME: &str = "unnamed";

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ReportFormat {
    Tsv,
    Csv,
}

impl ReportFormat {
    pub fn delimiter(self) -> u8 {
        match self {
            ReportFormat::Tsv => b'\t',
            ReportFormat::Csv => b',',
        }
    }

    /// Guess the format from a file extension, defaulting to TSV.
    pub fn from_path(path: &std::path::Path) -> Self {
        match path.extension().and_then(|e| e.to_str()) {
            Some(ext) if ext.eq_ignore_ascii_case("csv") => ReportFormat::Csv,
            _ => ReportFormat::Tsv,
        }
    }
}

impl FromStr for ReportFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "tsv" => Ok(ReportFormat::Tsv),
            "csv" => Ok(ReportFormat::Csv),
            other => Err(format!(
                "unknown report format `{other}` (expected tsv or csv)"
            )),
        }
    }
}

impl fmt::Display for ReportFormat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ReportFormat::Tsv => "tsv",
            ReportFormat::Csv => "csv",
        })
    }
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IngestError {
    #[error("malformed header on line {line}: {reason}")]
    MalformedHeader { line: u64, reason: String },
    #[error("malformed row on line {line}: {reason}")]
    MalformedRow { line: u64, reason: String },
    #[error("report contains no publication records")]
    EmptyProfile,
    #[error("input is not valid UTF-8: {0}")]
    EncodingError(String),
    #[error("invalid profile: {0}")]
    InvalidProfile(String),
}

/// One indexed publication.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PublicationRecord {
    pub title: String,
    pub pub_year: i32,
    pub total_citations: u64,
    /// Citations received per calendar year, one entry per year column.
    pub citations_by_year: BTreeMap<i32, u64>,
}

impl PublicationRecord {
    pub fn window_sum(&self) -> u64 {
        self.citations_by_year.values().sum()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ResearcherProfile {
    pub name: String,
    pub source_id: Option<String>,
    pub reported_h: Option<u64>,
    pub records: Vec<PublicationRecord>,
    #[serde(default)]
    pub warnings: Vec<String>,
}

impl ResearcherProfile {
    /// Equality ignoring warnings.
    pub fn same_content(&self, other: &Self) -> bool {
        self.name == other.name
            && self.source_id == other.source_id
            && self.reported_h == other.reported_h
            && self.records == other.records
    }

    /// Inclusive range of citation-column years over all records.
    pub fn year_columns(&self) -> Option<(i32, i32)> {
        let mut keys = self
            .records
            .iter()
            .flat_map(|r| r.citations_by_year.keys().copied());
        let first = keys.next()?;
        Some(keys.fold((first, first), |(lo, hi), y| (lo.min(y), hi.max(y))))
    }

    pub fn validate(&self) -> Result<(), IngestError> {
        if self.name.is_empty() {
            return Err(IngestError::InvalidProfile("name is empty".into()));
        }
        if self.records.is_empty() {
            return Err(IngestError::EmptyProfile);
        }
        for (i, r) in self.records.iter().enumerate() {
            if !(MIN_YEAR..=MAX_YEAR).contains(&r.pub_year) {
                return Err(IngestError::InvalidProfile(format!(
                    "record {} has publication year {} outside {MIN_YEAR}..={MAX_YEAR}",
                    i + 1,
                    r.pub_year
                )));
            }
        }
        Ok(())
    }
}

/// Serialized report bytes plus any lossy-conversion warnings.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Serialized {
    pub bytes: Vec<u8>,
    pub warnings: Vec<String>,
}

fn row_error(line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedRow {
        line,
        reason: reason.into(),
    }
}

fn header_error(line: u64, reason: impl Into<String>) -> IngestError {
    IngestError::MalformedHeader {
        line,
        reason: reason.into(),
    }
}

fn parse_count(field: &str, what: &str, line: u64) -> Result<u64, IngestError> {
    field.trim().parse::<u64>().map_err(|_| {
        row_error(
            line,
            format!("{what} `{field}` is not a non-negative integer"),
        )
    })
}

/// Parse a citation report. `fallback_name` is used when the file carries no
/// `# researcher` line (callers usually pass the file stem).
pub fn parse_report(
    input: &[u8],
    format: ReportFormat,
    fallback_name: &str,
) -> Result<ResearcherProfile, IngestError> {
    let text = std::str::from_utf8(input).map_err(|e| IngestError::EncodingError(e.to_string()))?;
    let text = text.strip_prefix('\u{feff}').unwrap_or(text);

    let mut reader = csv::ReaderBuilder::new()
        .delimiter(format.delimiter())
        .has_headers(false)
        .flexible(true)
        .quoting(format == ReportFormat::Csv)
        .from_reader(text.as_bytes());

    let mut name: Option<String> = None;
    let mut source_id = None;
    let mut reported_h = None;
    let mut warnings = Vec::new();
    let mut columns: Option<(i32, usize)> = None;
    let mut records = Vec::new();

    let mut row = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut row) {
            Ok(true) => {}
            Ok(false) => break,
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                return Err(match e.kind() {
                    csv::ErrorKind::Utf8 { .. } => IngestError::EncodingError(e.to_string()),
                    _ => row_error(line, e.to_string()),
                });
            }
        }
        let line = row.position().map_or(0, |p| p.line());

        let Some((first_year, n_years)) = columns else {
            let first = row.get(0).unwrap_or("");
            if first.starts_with('#') {
                let value = row.get(1).unwrap_or("");
                match first {
                    META_NAME => name = Some(value.to_string()),
                    META_ID => source_id = Some(value.to_string()),
                    META_H => {
                        reported_h = Some(value.trim().parse::<u64>().map_err(|_| {
                            row_error(
                                line,
                                format!("h-index `{value}` is not a non-negative integer"),
                            )
                        })?)
                    }
                    other => warnings.push(format!("line {line}: ignored metadata `{other}`")),
                }
                continue;
            }
            columns = Some(parse_header(&row, line)?);
            continue;
        };

        let expected = 3 + n_years;
        if row.len() != expected {
            return Err(row_error(
                line,
                format!("expected {expected} columns, found {}", row.len()),
            ));
        }
        let pub_year: i32 = row[1].trim().parse().map_err(|_| {
            row_error(
                line,
                format!("publication year `{}` is not a year", &row[1]),
            )
        })?;
        if !(MIN_YEAR..=MAX_YEAR).contains(&pub_year) {
            return Err(row_error(
                line,
                format!("publication year {pub_year} outside {MIN_YEAR}..={MAX_YEAR}"),
            ));
        }
        let total_citations = parse_count(&row[2], "total citations", line)?;
        let mut citations_by_year = BTreeMap::new();
        for (offset, field) in row.iter().skip(3).enumerate() {
            let count = parse_count(field, "citation count", line)?;
            citations_by_year.insert(first_year + offset as i32, count);
        }
        let record = PublicationRecord {
            title: row[0].to_string(),
            pub_year,
            total_citations,
            citations_by_year,
        };
        let window = record.window_sum();
        if window != total_citations {
            warnings.push(format!(
                "record {} (line {line}): total citations {total_citations} differs from year-column sum {window}; keeping the total",
                records.len() + 1
            ));
        }
        records.push(record);
    }

    if columns.is_none() {
        return Err(header_error(0, "missing header row"));
    }
    if records.is_empty() {
        return Err(IngestError::EmptyProfile);
    }

    let name = match name {
        Some(n) if !n.is_empty() => n,
        _ if !fallback_name.is_empty() => fallback_name.to_string(),
        _ => DEFAULT_NAME.to_string(),
    };

    Ok(ResearcherProfile {
        name,
        source_id,
        reported_h,
        records,
        warnings,
    })
}

/// Returns the first year column and the number of year columns.
fn parse_header(row: &csv::StringRecord, line: u64) -> Result<(i32, usize), IngestError> {
    let fixed = [TITLE_COLUMN, YEAR_COLUMN, TOTAL_COLUMN];
    if row.len() < fixed.len() {
        return Err(header_error(
            line,
            format!("expected at least 3 columns, found {}", row.len()),
        ));
    }
    for (i, want) in fixed.iter().enumerate() {
        if &row[i] != *want {
            return Err(header_error(
                line,
                format!("column {} is `{}`, expected `{want}`", i + 1, &row[i]),
            ));
        }
    }
    let mut years = Vec::with_capacity(row.len() - 3);
    for field in row.iter().skip(3) {
        let year: i32 = field
            .trim()
            .parse()
            .map_err(|_| header_error(line, format!("year column `{field}` is not a year")))?;
        if let Some(&prev) = years.last() {
            if year != prev + 1 {
                return Err(header_error(
                    line,
                    format!("year columns not contiguous ascending: {prev} followed by {year}"),
                ));
            }
        }
        years.push(year);
    }
    Ok((years.first().copied().unwrap_or(0), years.len()))
}

fn sanitize_tsv(field: &str, what: &str, warnings: &mut Vec<String>) -> String {
    if field.contains(['\t', '\n', '\r']) {
        warnings.push(format!("{what}: tab or line break replaced by spaces"));
        field.replace(['\t', '\n', '\r'], " ")
    } else {
        field.to_string()
    }
}

/// Write a profile in the canonical layout. Year columns span the union of
/// all records' citation years; absent years are written as zero.
pub fn serialize_report(
    profile: &ResearcherProfile,
    format: ReportFormat,
) -> Result<Serialized, IngestError> {
    profile.validate()?;
    let mut warnings = Vec::new();
    let clean = |s: &str, what: &str, warnings: &mut Vec<String>| match format {
        ReportFormat::Tsv => sanitize_tsv(s, what, warnings),
        ReportFormat::Csv => s.to_string(),
    };

    let mut writer = csv::WriterBuilder::new()
        .delimiter(format.delimiter())
        .flexible(true)
        .terminator(csv::Terminator::Any(b'\n'))
        .quote_style(match format {
            ReportFormat::Tsv => csv::QuoteStyle::Never,
            ReportFormat::Csv => csv::QuoteStyle::Necessary,
        })
        .from_writer(Vec::new());

    let io = |e: csv::Error| IngestError::InvalidProfile(e.to_string());

    let name = clean(&profile.name, "researcher name", &mut warnings);
    writer
        .write_record([META_NAME, name.as_str()])
        .map_err(io)?;
    if let Some(id) = &profile.source_id {
        let id = clean(id, "researcher id", &mut warnings);
        writer.write_record([META_ID, id.as_str()]).map_err(io)?;
    }
    if let Some(h) = profile.reported_h {
        writer
            .write_record([META_H, h.to_string().as_str()])
            .map_err(io)?;
    }

    let years: Vec<i32> = profile
        .year_columns()
        .map(|(lo, hi)| (lo..=hi).collect())
        .unwrap_or_default();
    let mut header = vec![
        TITLE_COLUMN.to_string(),
        YEAR_COLUMN.to_string(),
        TOTAL_COLUMN.to_string(),
    ];
    header.extend(years.iter().map(i32::to_string));
    writer.write_record(&header).map_err(io)?;

    for (i, r) in profile.records.iter().enumerate() {
        let title = clean(&r.title, &format!("record {} title", i + 1), &mut warnings);
        let mut fields = vec![title, r.pub_year.to_string(), r.total_citations.to_string()];
        fields.extend(
            years
                .iter()
                .map(|y| r.citations_by_year.get(y).copied().unwrap_or(0).to_string()),
        );
        writer.write_record(&fields).map_err(io)?;
    }

    let bytes = writer
        .into_inner()
        .map_err(|e| IngestError::InvalidProfile(e.to_string()))?;
    Ok(Serialized { bytes, warnings })
}
