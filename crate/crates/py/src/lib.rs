//! Python bindings for `papertrail`.
//!
//! Build with `cargo build --release -p papertrail-py --features extension-module`
//! and copy `libpapertrail_py.so` to `papertrail_py.so` somewhere on `sys.path`.

use std::collections::BTreeMap;
use std::path::PathBuf;

use papertrail::cohort::{self, CohortPoint, Membership, Region};
use papertrail::indicators::{self, FlagConfig, HcpThresholds};
use papertrail::ingest::{self, PublicationRecord, ReportFormat, ResearcherProfile};
use papertrail::render::{self, ChartStyle};
use papertrail::synth::{self, Archetype, SynthSpec};
use papertrail::{AnalysisConfig, AnnualSeries, ProfileAnalysis};
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;
use pyo3::types::{PyBytes, PyDict};

fn value_err(e: impl std::fmt::Display) -> PyErr {
    PyValueError::new_err(e.to_string())
}

fn parse_format(format: &str) -> PyResult<ReportFormat> {
    format.parse().map_err(value_err)
}

fn record(pub_year: i32, total_citations: u64) -> PublicationRecord {
    PublicationRecord {
        title: String::new(),
        pub_year,
        total_citations,
        citations_by_year: BTreeMap::new(),
    }
}

/// A researcher's citation report.
#[pyclass(name = "Profile", module = "papertrail_py", frozen)]
pub struct PyProfile {
    inner: ResearcherProfile,
}

#[pymethods]
impl PyProfile {
    #[getter]
    fn name(&self) -> &str {
        &self.inner.name
    }

    #[getter]
    fn source_id(&self) -> Option<&str> {
        self.inner.source_id.as_deref()
    }

    #[getter]
    fn reported_h(&self) -> Option<u64> {
        self.inner.reported_h
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// Records as `(title, pub_year, total_citations, {year: count})` tuples.
    fn records(&self) -> Vec<(String, i32, u64, BTreeMap<i32, u64>)> {
        self.inner
            .records
            .iter()
            .map(|r| {
                (
                    r.title.clone(),
                    r.pub_year,
                    r.total_citations,
                    r.citations_by_year.clone(),
                )
            })
            .collect()
    }

    fn __len__(&self) -> usize {
        self.inner.records.len()
    }

    /// Serialize as a report file body.
    #[pyo3(signature = (format = "tsv"))]
    fn to_bytes<'py>(&self, py: Python<'py>, format: &str) -> PyResult<Bound<'py, PyBytes>> {
        let out =
            ingest::serialize_report(&self.inner, parse_format(format)?).map_err(value_err)?;
        Ok(PyBytes::new(py, &out.bytes))
    }

    fn __repr__(&self) -> String {
        format!(
            "Profile(name={:?}, records={})",
            self.inner.name,
            self.inner.records.len()
        )
    }
}

/// Indicators, annual series and flags for one profile.
#[pyclass(name = "Analysis", module = "papertrail_py", frozen)]
pub struct PyAnalysis {
    inner: ProfileAnalysis,
}

#[pymethods]
impl PyAnalysis {
    #[getter]
    fn r(&self) -> Option<f64> {
        self.inner.indicators.r
    }

    #[getter]
    fn lag(&self) -> Option<u32> {
        self.inner.indicators.lag
    }

    #[getter]
    fn h(&self) -> u64 {
        self.inner.indicators.h
    }

    #[getter]
    fn i_index(&self) -> f64 {
        self.inner.indicators.i_index
    }

    #[getter]
    fn total_pubs(&self) -> u64 {
        self.inner.indicators.total_pubs
    }

    #[getter]
    fn total_cites(&self) -> u64 {
        self.inner.indicators.total_cites
    }

    #[getter]
    fn max_pubs_year(&self) -> u64 {
        self.inner.indicators.max_pubs_year
    }

    #[getter]
    fn hcp_count(&self) -> u64 {
        self.inner.indicators.hcp_count
    }

    /// Names of the raised signals, e.g. `["HighCorrelation", "LowIntegrity"]`.
    #[getter]
    fn flags(&self) -> Vec<String> {
        self.inner
            .indicators
            .flags
            .iter()
            .map(|s| format!("{:?}", s.kind))
            .collect()
    }

    #[getter]
    fn start_year(&self) -> i32 {
        self.inner.series.start_year
    }

    #[getter]
    fn pubs(&self) -> Vec<u64> {
        self.inner.series.pubs.clone()
    }

    #[getter]
    fn cites(&self) -> Vec<u64> {
        self.inner.series.cites.clone()
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    /// The indicator set as a JSON string.
    fn indicators_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner.indicators).map_err(value_err)
    }

    /// Publications/citations chart as an SVG document.
    #[pyo3(signature = (title = ""))]
    fn profile_svg(&self, title: &str) -> PyResult<String> {
        render::profile_chart(
            &self.inner.series,
            &self.inner.indicators,
            &ChartStyle::with_title(title),
        )
        .map_err(value_err)
    }

    fn __repr__(&self) -> String {
        let ind = &self.inner.indicators;
        format!(
            "Analysis(r={:?}, lag={:?}, h={}, i_index={:.4}, flags={:?})",
            ind.r,
            ind.lag,
            ind.h,
            ind.i_index,
            self.flags()
        )
    }
}

/// Parse report bytes (`format` is "tsv" or "csv").
#[pyfunction]
#[pyo3(signature = (data, format = "tsv", name = "unnamed"))]
fn parse_report(data: &[u8], format: &str, name: &str) -> PyResult<PyProfile> {
    let inner = ingest::parse_report(data, parse_format(format)?, name).map_err(value_err)?;
    Ok(PyProfile { inner })
}

/// Read and parse a report file; the format follows the extension unless given.
#[pyfunction]
#[pyo3(signature = (path, format = None))]
fn read_report(path: PathBuf, format: Option<&str>) -> PyResult<PyProfile> {
    let bytes = std::fs::read(&path)
        .map_err(|e| value_err(format!("cannot read {}: {e}", path.display())))?;
    let format = match format {
        Some(f) => parse_format(f)?,
        None => ReportFormat::from_path(&path),
    };
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    parse_report(&bytes, &format.to_string(), stem)
}

#[pyfunction]
#[pyo3(signature = (
    profile, *, r_min = 0.5, i_max = 0.3, pubs_per_year_limit = 30, growth_window = 5,
    lag_max_flag = 0, max_lag = 10, prefer_reported_h = true, end_year = None
))]
#[allow(clippy::too_many_arguments)]
fn analyze(
    py: Python<'_>,
    profile: &PyProfile,
    r_min: f64,
    i_max: f64,
    pubs_per_year_limit: u64,
    growth_window: usize,
    lag_max_flag: u32,
    max_lag: u32,
    prefer_reported_h: bool,
    end_year: Option<i32>,
) -> PyResult<PyAnalysis> {
    let config = AnalysisConfig {
        flags: FlagConfig {
            r_min,
            i_max,
            pubs_per_year_limit,
            growth_window,
            lag_max_flag,
        },
        max_lag,
        prefer_reported_h,
        end_year,
        ..AnalysisConfig::default()
    };
    let inner = py
        .detach(|| papertrail::analyze_profile(&profile.inner, &config))
        .map_err(value_err)?;
    Ok(PyAnalysis { inner })
}

/// Deterministic synthetic profile ("conscientious" or "papermill").
#[pyfunction]
#[pyo3(signature = (archetype, seed = 0, n_years = None, start_year = None))]
fn synthesize(
    archetype: &str,
    seed: u64,
    n_years: Option<u32>,
    start_year: Option<i32>,
) -> PyResult<PyProfile> {
    let archetype: Archetype = archetype.parse().map_err(value_err)?;
    let mut spec = SynthSpec::defaults(archetype, seed);
    if let Some(n) = n_years {
        spec.n_years = n;
    }
    if let Some(y) = start_year {
        spec.start_year = y;
    }
    let inner = synth::generate(&spec).map_err(value_err)?;
    Ok(PyProfile { inner })
}

/// Pearson correlation; `None` when either series is constant.
#[pyfunction]
fn pearson(x: Vec<f64>, y: Vec<f64>) -> PyResult<Option<f64>> {
    indicators::pearson(&x, &y).map_err(value_err)
}

/// `(lag, r)` maximizing the correlation of citations against lagged publications.
#[pyfunction]
#[pyo3(signature = (pubs, cites, max_lag = 10))]
fn best_lag(pubs: Vec<u64>, cites: Vec<u64>, max_lag: u32) -> PyResult<(u32, f64)> {
    if pubs.len() != cites.len() {
        return Err(value_err(format!(
            "length mismatch: {} vs {}",
            pubs.len(),
            cites.len()
        )));
    }
    let series = AnnualSeries {
        start_year: 0,
        pubs,
        cites,
    };
    let est = indicators::best_lag(&series, max_lag).map_err(value_err)?;
    Ok((est.lag, est.r))
}

#[pyfunction]
fn h_index(citations: Vec<u64>) -> u64 {
    indicators::h_index_of_counts(&citations)
}

#[pyfunction]
fn i_index(h: u64, total_pubs: u64) -> PyResult<f64> {
    indicators::i_index(h, total_pubs).map_err(value_err)
}

/// Papers at or above the built-in threshold for their year, from `(year, citations)` pairs.
#[pyfunction]
fn hcp_count(papers: Vec<(i32, u64)>) -> u64 {
    let records: Vec<_> = papers.into_iter().map(|(y, c)| record(y, c)).collect();
    indicators::hcp_count(&records, &HcpThresholds::builtin())
}

/// `I = a * p^b` fitted in log-log space over `(p, I)` points.
#[pyfunction]
fn fit_power_law<'py>(py: Python<'py>, points: Vec<(f64, f64)>) -> PyResult<Bound<'py, PyDict>> {
    let (fit, warnings) = cohort::fit_power_law(&points).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("a", fit.a)?;
    d.set_item("b", fit.b)?;
    d.set_item("r_squared", fit.r_squared)?;
    d.set_item("n_points", fit.n_points)?;
    d.set_item("warnings", warnings)?;
    Ok(d)
}

#[pyfunction]
fn fit_linear<'py>(py: Python<'py>, points: Vec<(f64, f64)>) -> PyResult<Bound<'py, PyDict>> {
    let fit = cohort::fit_linear(&points).map_err(value_err)?;
    let d = PyDict::new(py);
    d.set_item("slope", fit.slope)?;
    d.set_item("intercept", fit.intercept)?;
    d.set_item("r_squared", fit.r_squared)?;
    d.set_item("n_points", fit.n_points)?;
    Ok(d)
}

/// "inside", "outside" or "unclassifiable".
#[pyfunction]
#[pyo3(signature = (r, i_index, r_min = 0.5, i_max = 0.3))]
fn classify_region(r: Option<f64>, i_index: f64, r_min: f64, i_max: f64) -> PyResult<&'static str> {
    let region = Region::new(r_min, i_max).map_err(value_err)?;
    let point = CohortPoint {
        label: String::new(),
        r,
        i_index,
        total_pubs: 0,
        max_pubs_year: 0,
        avg_pubs_year: 0.0,
    };
    Ok(match cohort::classify_region(&point, &region) {
        Membership::Inside => "inside",
        Membership::Outside => "outside",
        Membership::Unclassifiable => "unclassifiable",
    })
}

#[pymodule]
pub fn papertrail_py(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyProfile>()?;
    m.add_class::<PyAnalysis>()?;
    m.add_function(wrap_pyfunction!(parse_report, m)?)?;
    m.add_function(wrap_pyfunction!(read_report, m)?)?;
    m.add_function(wrap_pyfunction!(analyze, m)?)?;
    m.add_function(wrap_pyfunction!(synthesize, m)?)?;
    m.add_function(wrap_pyfunction!(pearson, m)?)?;
    m.add_function(wrap_pyfunction!(best_lag, m)?)?;
    m.add_function(wrap_pyfunction!(h_index, m)?)?;
    m.add_function(wrap_pyfunction!(i_index, m)?)?;
    m.add_function(wrap_pyfunction!(hcp_count, m)?)?;
    m.add_function(wrap_pyfunction!(fit_power_law, m)?)?;
    m.add_function(wrap_pyfunction!(fit_linear, m)?)?;
    m.add_function(wrap_pyfunction!(classify_region, m)?)?;
    Ok(())
}
