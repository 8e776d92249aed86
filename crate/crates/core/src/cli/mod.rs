//! `papertrail` command-line interface.
//!
//! Exit codes: 0 success, 1 data error, 2 usage error.

pub mod config;

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rayon::prelude::*;

use crate::cohort::{
    cohort_summary, fit_linear, fit_power_law, parse_manifest, CohortPoint, Region,
};
use crate::indicators::{analyze_profile, AnalysisConfig, ProfileAnalysis};
use crate::ingest::{parse_report, serialize_report, ReportFormat, ResearcherProfile};
use crate::render::{profile_chart, scatter_chart, ChartStyle, FitCurve, ScatterAxes};
use crate::report::{
    generator, timestamp, CohortDocument, CohortPointDoc, Diagnostic, FitEntry, ReportDocument,
    SCHEMA_VERSION,
};
use crate::synth::{generate, Archetype, SynthSpec};
use config::{config_path, ConfigFile};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DATA: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "papertrail",
    version,
    about = "Publication/citation indicators from citation reports"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Compute indicators for one citation report.
    Analyze(AnalyzeArgs),
    /// Analyze every report in a manifest and fit cohort-level curves.
    Cohort(CohortArgs),
    /// Write a synthetic citation report.
    Synth(SynthArgs),
}

#[derive(Debug, Clone, Args)]
pub struct Tuning {
    /// Key-value config file (falls back to $PAPERTRAIL_CONFIG).
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    /// Correlation above which HighCorrelation fires.
    #[arg(long, value_name = "F")]
    pub r_min: Option<f64>,
    /// Integrity index below which LowIntegrity fires.
    #[arg(long, value_name = "F")]
    pub i_max: Option<f64>,
    /// Largest citation delay searched, in years.
    #[arg(long, value_name = "N")]
    pub max_lag: Option<u32>,
    /// Papers in one year at which ExcessiveAnnualOutput fires.
    #[arg(long = "pubs-limit", value_name = "N")]
    pub pubs_limit: Option<u64>,
    /// Trailing years checked for monotone growth.
    #[arg(long, value_name = "N")]
    pub growth_window: Option<usize>,
    /// Largest delay that still counts as ZeroLag.
    #[arg(long, value_name = "N")]
    pub lag_max_flag: Option<u32>,
    /// Ignore the h-index stated in the report and compute it from the records.
    #[arg(long)]
    pub computed_h: bool,
    /// Extend series to this year.
    #[arg(long, value_name = "YEAR")]
    pub end_year: Option<i32>,
}

impl Tuning {
    pub fn resolve(&self) -> Result<AnalysisConfig, String> {
        let mut cfg = AnalysisConfig::default();
        if let Some(path) = config_path(self.config.as_deref()) {
            ConfigFile::load(&path)?.apply(&mut cfg);
        }
        if let Some(v) = self.r_min {
            cfg.flags.r_min = v;
        }
        if let Some(v) = self.i_max {
            cfg.flags.i_max = v;
        }
        if let Some(v) = self.max_lag {
            cfg.max_lag = v;
        }
        if let Some(v) = self.pubs_limit {
            cfg.flags.pubs_per_year_limit = v;
        }
        if let Some(v) = self.growth_window {
            cfg.flags.growth_window = v;
        }
        if let Some(v) = self.lag_max_flag {
            cfg.flags.lag_max_flag = v;
        }
        if self.computed_h {
            cfg.prefer_reported_h = false;
        }
        if self.end_year.is_some() {
            cfg.end_year = self.end_year;
        }
        Ok(cfg)
    }
}

#[derive(Debug, Args)]
pub struct AnalyzeArgs {
    /// Citation report (TSV or CSV).
    pub input: PathBuf,
    /// Input format; guessed from the extension when omitted.
    #[arg(long, value_name = "tsv|csv")]
    pub format: Option<ReportFormat>,
    /// Write the JSON report here instead of stdout.
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Write the publications/citations chart here.
    #[arg(long, value_name = "PATH")]
    pub svg: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct CohortArgs {
    /// Manifest: one `<label><TAB><path>` per line.
    pub manifest: PathBuf,
    /// Format of every listed report; guessed per file when omitted.
    #[arg(long, value_name = "tsv|csv")]
    pub format: Option<ReportFormat>,
    #[arg(long, value_name = "PATH")]
    pub json: Option<PathBuf>,
    /// Directory for the four cohort charts.
    #[arg(long, value_name = "DIR")]
    pub svg_dir: Option<PathBuf>,
    #[command(flatten)]
    pub tuning: Tuning,
}

#[derive(Debug, Args)]
pub struct SynthArgs {
    /// conscientious or papermill.
    #[arg(long, value_name = "NAME")]
    pub archetype: Archetype,
    #[arg(long, value_name = "N", default_value_t = 0)]
    pub seed: u64,
    /// Report file to write.
    #[arg(short = 'o', long = "output", value_name = "PATH")]
    pub output: PathBuf,
    /// Output format; guessed from the extension when omitted.
    #[arg(long, value_name = "tsv|csv")]
    pub format: Option<ReportFormat>,
    /// Career length in years (at least 8).
    #[arg(long, value_name = "N")]
    pub n_years: Option<u32>,
    #[arg(long, value_name = "YEAR")]
    pub start_year: Option<i32>,
    /// Papers per year before any growth.
    #[arg(long, value_name = "F")]
    pub base_rate: Option<f64>,
    /// Papers per year at the height of the career.
    #[arg(long, value_name = "F")]
    pub peak_rate: Option<f64>,
    #[arg(long, value_name = "F")]
    pub cites_per_paper: Option<f64>,
    /// Years from publication to peak citations (conscientious).
    #[arg(long, value_name = "N")]
    pub kernel_peak_lag: Option<u32>,
    /// Year in which output starts to climb (papermill).
    #[arg(long, value_name = "N")]
    pub onset_offset: Option<u32>,
}

/// A command failure with its exit code.
#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl Failure {
    fn data(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_DATA,
            message: message.into(),
        }
    }

    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

/// Parse `args` (including the program name) and run the command.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => cmd_analyze(a, out, err),
        Command::Cohort(a) => cmd_cohort(a, out, err),
        Command::Synth(a) => cmd_synth(a, err),
    };
    match result {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message);
            f.code
        }
    }
}

fn write_file(path: &Path, bytes: &[u8]) -> Result<(), Failure> {
    std::fs::write(path, bytes)
        .map_err(|e| Failure::data(format!("cannot write {}: {e}", path.display())))
}

fn load_profile(path: &Path, format: Option<ReportFormat>) -> Result<ResearcherProfile, String> {
    let bytes = std::fs::read(path).map_err(|e| format!("cannot read {}: {e}", path.display()))?;
    let format = format.unwrap_or_else(|| ReportFormat::from_path(path));
    let stem = path
        .file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or_default();
    parse_report(&bytes, format, stem).map_err(|e| format!("{}: {e}", path.display()))
}

fn analyze_file(
    path: &Path,
    format: Option<ReportFormat>,
    config: &AnalysisConfig,
) -> Result<(ResearcherProfile, ProfileAnalysis), String> {
    let profile = load_profile(path, format)?;
    let analysis =
        analyze_profile(&profile, config).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok((profile, analysis))
}

fn to_json<T: serde::Serialize>(value: &T) -> Result<Vec<u8>, Failure> {
    let mut bytes = serde_json::to_vec_pretty(value).map_err(|e| Failure::data(e.to_string()))?;
    bytes.push(b'\n');
    Ok(bytes)
}

pub fn cmd_analyze(
    args: &AnalyzeArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let config = args.tuning.resolve().map_err(Failure::usage)?;
    let (profile, analysis) =
        analyze_file(&args.input, args.format, &config).map_err(Failure::data)?;

    let mut warnings = profile.warnings.clone();
    warnings.extend(analysis.warnings.iter().cloned());
    for w in &warnings {
        let _ = writeln!(err, "warning: {w}");
    }

    let svg = match &args.svg {
        Some(_) => Some(
            profile_chart(
                &analysis.series,
                &analysis.indicators,
                &ChartStyle::with_title(format!(
                    "{}: publications and citations over time",
                    profile.name
                )),
            )
            .map_err(|e| Failure::data(e.to_string()))?,
        ),
        None => None,
    };
    let doc = ReportDocument::new(
        Some(args.input.display().to_string()),
        &profile,
        analysis.indicators,
        analysis.series,
        &config,
        warnings,
    );
    let json = to_json(&doc)?;

    match &args.json {
        Some(path) => write_file(path, &json)?,
        None => out
            .write_all(&json)
            .map_err(|e| Failure::data(e.to_string()))?,
    }
    if let (Some(path), Some(svg)) = (&args.svg, svg) {
        write_file(path, svg.as_bytes())?;
    }
    Ok(())
}

pub const COHORT_CHARTS: [(&str, ScatterAxes); 4] = [
    ("integrity_vs_correlation.svg", ScatterAxes::IvsR),
    ("integrity_vs_papers.svg", ScatterAxes::IvsPPowerFit),
    ("max_year_vs_papers.svg", ScatterAxes::MvsPLinFit),
    (
        "integrity_vs_correlation_bubble.svg",
        ScatterAxes::IvsRBubble,
    ),
];

pub fn cmd_cohort(
    args: &CohortArgs,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<(), Failure> {
    let config = args.tuning.resolve().map_err(Failure::usage)?;
    let region = Region::new(config.flags.r_min, config.flags.i_max)
        .map_err(|e| Failure::usage(e.to_string()))?;
    let text = std::fs::read_to_string(&args.manifest).map_err(|e| {
        Failure::data(format!(
            "cannot read manifest {}: {e}",
            args.manifest.display()
        ))
    })?;
    let base = args.manifest.parent().unwrap_or(Path::new("."));
    let entries = parse_manifest(&text, base)
        .map_err(|e| Failure::data(format!("{}: {e}", args.manifest.display())))?;

    // parallel analysis; collect() keeps manifest order
    let results: Vec<_> = entries
        .par_iter()
        .map(|entry| analyze_file(&entry.path, args.format, &config))
        .collect();

    let mut points = Vec::new();
    let mut docs = Vec::new();
    let mut diagnostics = Vec::new();
    let mut warnings = Vec::new();
    for (entry, result) in entries.iter().zip(results) {
        let source = entry.path.display().to_string();
        match result {
            Ok((profile, analysis)) => {
                let ind = &analysis.indicators;
                for w in profile.warnings.iter().chain(&analysis.warnings) {
                    warnings.push(format!("{}: {w}", entry.label));
                }
                let point = CohortPoint::from_indicators(&entry.label, ind);
                docs.push(CohortPointDoc {
                    label: entry.label.clone(),
                    source,
                    name: profile.name.clone(),
                    r: ind.r,
                    lag: ind.lag,
                    h: ind.h,
                    i_index: ind.i_index,
                    total_pubs: ind.total_pubs,
                    max_pubs_year: ind.max_pubs_year,
                    avg_pubs_year: ind.avg_pubs_year,
                    membership: crate::cohort::classify_region(&point, &region),
                    flags: ind.flags.clone(),
                });
                points.push(point);
            }
            Err(e) => {
                let _ = writeln!(err, "error: {}: {e}", entry.label);
                diagnostics.push(Diagnostic {
                    label: entry.label.clone(),
                    source,
                    error: e,
                });
            }
        }
    }
    if points.is_empty() {
        return Err(Failure::data(format!(
            "no profile in {} could be analyzed ({} entries)",
            args.manifest.display(),
            entries.len()
        )));
    }

    let summary = cohort_summary(&points, &region).map_err(|e| Failure::data(e.to_string()))?;
    let power_input: Vec<(f64, f64)> = points
        .iter()
        .map(|p| (p.total_pubs as f64, p.i_index))
        .collect();
    let power = match fit_power_law(&power_input) {
        Ok((fit, w)) => {
            warnings.extend(w);
            Ok(fit)
        }
        Err(e) => Err(e),
    };
    let linear = fit_linear(
        &points
            .iter()
            .map(|p| (p.total_pubs as f64, p.max_pubs_year as f64))
            .collect::<Vec<_>>(),
    );

    let mut charts = Vec::new();
    if args.svg_dir.is_some() {
        for (file, axes) in COHORT_CHARTS {
            let fit = match axes {
                ScatterAxes::IvsPPowerFit => power.as_ref().ok().map(|f| FitCurve::Power(*f)),
                ScatterAxes::MvsPLinFit => linear.as_ref().ok().map(|f| FitCurve::Linear(*f)),
                _ => None,
            };
            let title = match axes {
                ScatterAxes::IvsR => "Integrity index versus correlation",
                ScatterAxes::IvsPPowerFit => "Integrity index versus total papers",
                ScatterAxes::MvsPLinFit => "Maximum papers in one year versus total papers",
                ScatterAxes::IvsRBubble => {
                    "Integrity index versus correlation (size: max papers in one year)"
                }
            };
            let svg = scatter_chart(
                &points,
                axes,
                fit.as_ref(),
                Some(&region),
                &ChartStyle::with_title(title),
            )
            .map_err(|e| Failure::data(e.to_string()))?;
            charts.push((file, svg));
        }
    }

    let doc = CohortDocument {
        schema_version: SCHEMA_VERSION.into(),
        generator: generator(),
        generated_at: timestamp(),
        manifest: args.manifest.display().to_string(),
        region,
        averages: "arithmetic mean".into(),
        points: docs,
        summary: (&summary).into(),
        power_law_fit: FitEntry::from(power),
        linear_fit: FitEntry::from(linear),
        diagnostics,
        warnings,
    };
    let json = to_json(&doc)?;

    if let Some(dir) = &args.svg_dir {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::data(format!("cannot create {}: {e}", dir.display())))?;
        for (file, svg) in &charts {
            write_file(&dir.join(file), svg.as_bytes())?;
        }
    }
    match &args.json {
        Some(path) => write_file(path, &json)?,
        None => out
            .write_all(&json)
            .map_err(|e| Failure::data(e.to_string()))?,
    }
    Ok(())
}

pub fn cmd_synth(args: &SynthArgs, err: &mut dyn Write) -> Result<(), Failure> {
    let mut spec = SynthSpec::defaults(args.archetype, args.seed);
    if let Some(v) = args.n_years {
        spec.n_years = v;
    }
    if let Some(v) = args.start_year {
        spec.start_year = v;
    }
    if let Some(v) = args.base_rate {
        spec.base_rate = v;
    }
    if let Some(v) = args.peak_rate {
        spec.peak_rate = v;
    }
    if let Some(v) = args.cites_per_paper {
        spec.cites_per_paper = v;
    }
    if let Some(v) = args.kernel_peak_lag {
        spec.kernel_peak_lag = v;
    }
    if args.onset_offset.is_some() {
        spec.onset_offset = args.onset_offset;
    }
    let profile = generate(&spec).map_err(|e| Failure::usage(e.to_string()))?;
    let format = args
        .format
        .unwrap_or_else(|| ReportFormat::from_path(&args.output));
    let serialized =
        serialize_report(&profile, format).map_err(|e| Failure::data(e.to_string()))?;
    for w in &serialized.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    write_file(&args.output, &serialized.bytes)
}
