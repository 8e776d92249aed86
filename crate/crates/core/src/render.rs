//! SVG charts: the per-researcher publications/citations chart and the
//! cohort scatter plots.
//!
//! Output is plain SVG 1.1 text. Elements carry a `class` attribute
//! (`bar`, `citations`, `marker`, `fit`, `region`) so charts can be inspected
//! structurally.

use std::fmt::Write as _;

use thiserror::Error;

use crate::cohort::{CohortPoint, LinearFit, PowerLawFit, Region};
use crate::indicators::{round_for_display, IndicatorSet};
use crate::series::AnnualSeries;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RenderError {
    #[error("nothing to plot: cohort is empty")]
    EmptyCohort,
    #[error("nothing to plot: series is empty")]
    EmptySeries,
    #[error("invalid chart style: {0}")]
    InvalidStyle(String),
}

#[derive(Debug, Clone, PartialEq)]
pub struct ChartStyle {
    pub width: f64,
    pub height: f64,
    pub bar_color: String,
    pub line_color: String,
    pub marker_color: String,
    pub fit_color: String,
    /// Draw the flag region on correlation/integrity scatter plots.
    pub shade_region: bool,
    pub region_color: String,
    pub region_opacity: f64,
    pub title: String,
}

impl Default for ChartStyle {
    fn default() -> Self {
        ChartStyle {
            width: 900.0,
            height: 500.0,
            bar_color: "#4682b4".into(),
            line_color: "#8b0000".into(),
            marker_color: "#1f3b5c".into(),
            fit_color: "#d2691e".into(),
            shade_region: true,
            region_color: "#808080".into(),
            region_opacity: 0.15,
            title: String::new(),
        }
    }
}

impl ChartStyle {
    pub fn with_title(title: impl Into<String>) -> Self {
        ChartStyle {
            title: title.into(),
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<(), RenderError> {
        if !(self.width > MARGIN_LEFT + MARGIN_RIGHT && self.height > MARGIN_TOP + MARGIN_BOTTOM) {
            return Err(RenderError::InvalidStyle(format!(
                "{}x{} leaves no room for the plot area",
                self.width, self.height
            )));
        }
        Ok(())
    }
}

const MARGIN_LEFT: f64 = 70.0;
const MARGIN_RIGHT: f64 = 80.0;
const MARGIN_TOP: f64 = 50.0;
const MARGIN_BOTTOM: f64 = 90.0;
const FONT: &str = "sans-serif";

/// Affine map from a data interval onto a pixel interval.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinearScale {
    pub domain: (f64, f64),
    pub range: (f64, f64),
}

impl LinearScale {
    pub fn new(domain: (f64, f64), range: (f64, f64)) -> Self {
        let domain = if domain.0 == domain.1 {
            (domain.0, domain.0 + 1.0)
        } else {
            domain
        };
        LinearScale { domain, range }
    }

    pub fn map(&self, v: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        r0 + (v - d0) * (r1 - r0) / (d1 - d0)
    }

    pub fn invert(&self, px: f64) -> f64 {
        let (d0, d1) = self.domain;
        let (r0, r1) = self.range;
        d0 + (px - r0) * (d1 - d0) / (r1 - r0)
    }

    /// Pixels per data unit (absolute).
    pub fn pixels_per_unit(&self) -> f64 {
        ((self.range.1 - self.range.0) / (self.domain.1 - self.domain.0)).abs()
    }

    fn ticks(&self, count: usize) -> Vec<f64> {
        let (d0, d1) = self.domain;
        (0..=count)
            .map(|i| d0 + (d1 - d0) * i as f64 / count as f64)
            .collect()
    }
}

/// Smallest 1/2/5 x 10^k not below `v` (1 for non-positive input).
fn nice_ceil(v: f64) -> f64 {
    if v.is_nan() || v <= 0.0 {
        return 1.0;
    }
    let mag = 10f64.powf(v.log10().floor());
    [1.0, 2.0, 5.0, 10.0]
        .iter()
        .map(|m| m * mag)
        .find(|&c| c >= v)
        .unwrap_or(10.0 * mag)
}

fn escape(text: &str) -> String {
    let mut out = String::with_capacity(text.len());
    for c in text.chars() {
        match c {
            '&' => out.push_str("&amp;"),
            '<' => out.push_str("&lt;"),
            '>' => out.push_str("&gt;"),
            '"' => out.push_str("&quot;"),
            '\'' => out.push_str("&apos;"),
            c if (c as u32) < 0x20 && !matches!(c, '\t' | '\n' | '\r') => out.push(' '),
            c => out.push(c),
        }
    }
    out
}

fn fmt_tick(v: f64) -> String {
    if v.fract() == 0.0 && v.abs() < 1e15 {
        format!("{}", v as i64)
    } else {
        let s = format!("{v:.2}");
        s.trim_end_matches('0').trim_end_matches('.').to_string()
    }
}

struct Svg {
    buf: String,
}

impl Svg {
    fn open(style: &ChartStyle) -> Self {
        let mut buf = String::new();
        let _ = writeln!(buf, r#"<?xml version="1.0" encoding="UTF-8"?>"#);
        let _ = writeln!(
            buf,
            r#"<svg xmlns="http://www.w3.org/2000/svg" version="1.1" width="{w}" height="{h}" viewBox="0 0 {w} {h}" font-family="{FONT}">"#,
            w = style.width,
            h = style.height
        );
        let _ = writeln!(
            buf,
            r#"<rect class="background" x="0" y="0" width="{}" height="{}" fill="white"/>"#,
            style.width, style.height
        );
        if !style.title.is_empty() {
            let _ = writeln!(
                buf,
                r#"<text class="title" x="{:.2}" y="28" font-size="18" text-anchor="middle">{}</text>"#,
                style.width / 2.0,
                escape(&style.title)
            );
        }
        Svg { buf }
    }

    fn line(&mut self, class: &str, x1: f64, y1: f64, x2: f64, y2: f64, stroke: &str) {
        let _ = writeln!(
            self.buf,
            r#"<line class="{class}" x1="{x1:.2}" y1="{y1:.2}" x2="{x2:.2}" y2="{y2:.2}" stroke="{stroke}" stroke-width="1"/>"#
        );
    }

    fn text(&mut self, class: &str, x: f64, y: f64, anchor: &str, size: u32, body: &str) {
        let _ = writeln!(
            self.buf,
            r#"<text class="{class}" x="{x:.2}" y="{y:.2}" font-size="{size}" text-anchor="{anchor}">{}</text>"#,
            escape(body)
        );
    }

    fn polyline(&mut self, class: &str, pts: &[(f64, f64)], stroke: &str) {
        let coords: Vec<String> = pts.iter().map(|(x, y)| format!("{x:.2},{y:.2}")).collect();
        let _ = writeln!(
            self.buf,
            r#"<polyline class="{class}" points="{}" fill="none" stroke="{stroke}" stroke-width="2"/>"#,
            coords.join(" ")
        );
    }

    fn finish(mut self) -> String {
        self.buf.push_str("</svg>\n");
        self.buf
    }
}

/// Pixel geometry of a profile chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ProfileLayout {
    pub plot_left: f64,
    pub plot_right: f64,
    pub plot_top: f64,
    pub plot_bottom: f64,
    /// Horizontal space per year.
    pub band: f64,
    /// Publications, left axis.
    pub pubs: LinearScale,
    /// Citations, right axis.
    pub cites: LinearScale,
}

impl ProfileLayout {
    pub fn new(series: &AnnualSeries, style: &ChartStyle) -> Self {
        let plot_left = MARGIN_LEFT;
        let plot_right = style.width - MARGIN_RIGHT;
        let plot_top = MARGIN_TOP;
        let plot_bottom = style.height - MARGIN_BOTTOM;
        let max_pubs = series.pubs.iter().copied().max().unwrap_or(0) as f64;
        let max_cites = series.cites.iter().copied().max().unwrap_or(0) as f64;
        ProfileLayout {
            plot_left,
            plot_right,
            plot_top,
            plot_bottom,
            band: (plot_right - plot_left) / series.len().max(1) as f64,
            pubs: LinearScale::new((0.0, nice_ceil(max_pubs)), (plot_bottom, plot_top)),
            cites: LinearScale::new((0.0, nice_ceil(max_cites)), (plot_bottom, plot_top)),
        }
    }

    /// Horizontal centre of the `i`-th year.
    pub fn year_center(&self, i: usize) -> f64 {
        self.plot_left + self.band * (i as f64 + 0.5)
    }
}

/// Publications as bars on the left scale, citations as a line on the right
/// scale, with a caption of the headline indicators.
pub fn profile_chart(
    series: &AnnualSeries,
    ind: &IndicatorSet,
    style: &ChartStyle,
) -> Result<String, RenderError> {
    if series.is_empty() {
        return Err(RenderError::EmptySeries);
    }
    style.validate()?;
    let layout = ProfileLayout::new(series, style);
    let mut svg = Svg::open(style);

    // axes
    svg.line(
        "axis",
        layout.plot_left,
        layout.plot_bottom,
        layout.plot_right,
        layout.plot_bottom,
        "black",
    );
    svg.line(
        "axis",
        layout.plot_left,
        layout.plot_top,
        layout.plot_left,
        layout.plot_bottom,
        &style.bar_color,
    );
    svg.line(
        "axis",
        layout.plot_right,
        layout.plot_top,
        layout.plot_right,
        layout.plot_bottom,
        &style.line_color,
    );
    for v in layout.pubs.ticks(5) {
        let y = layout.pubs.map(v);
        svg.line(
            "tick",
            layout.plot_left - 5.0,
            y,
            layout.plot_left,
            y,
            "black",
        );
        svg.text(
            "tick-label",
            layout.plot_left - 8.0,
            y + 4.0,
            "end",
            11,
            &fmt_tick(v),
        );
    }
    for v in layout.cites.ticks(5) {
        let y = layout.cites.map(v);
        svg.line(
            "tick",
            layout.plot_right,
            y,
            layout.plot_right + 5.0,
            y,
            "black",
        );
        svg.text(
            "tick-label",
            layout.plot_right + 8.0,
            y + 4.0,
            "start",
            11,
            &fmt_tick(v),
        );
    }
    let label_every = series.len().div_ceil(25).max(1);
    for (i, year) in series.years().enumerate() {
        let x = layout.year_center(i);
        svg.line(
            "tick",
            x,
            layout.plot_bottom,
            x,
            layout.plot_bottom + 4.0,
            "black",
        );
        if i % label_every == 0 {
            svg.text(
                "year",
                x,
                layout.plot_bottom + 16.0,
                "middle",
                10,
                &year.to_string(),
            );
        }
    }
    let mid = (layout.plot_top + layout.plot_bottom) / 2.0;
    let _ = writeln!(
        svg.buf,
        r#"<text class="axis-label" x="18" y="{mid:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 {mid:.2})">Publications</text>"#
    );
    let rx = style.width - 14.0;
    let _ = writeln!(
        svg.buf,
        r#"<text class="axis-label" x="{rx:.2}" y="{mid:.2}" font-size="12" text-anchor="middle" transform="rotate(90 {rx:.2} {mid:.2})">Citations</text>"#
    );

    // publication bars
    for (i, (year, &count)) in series.years().zip(&series.pubs).enumerate() {
        let y = layout.pubs.map(count as f64);
        let _ = writeln!(
            svg.buf,
            r#"<rect class="bar" data-year="{year}" x="{:.2}" y="{y:.2}" width="{:.2}" height="{:.2}" fill="{}"/>"#,
            layout.plot_left + layout.band * (i as f64 + 0.1),
            layout.band * 0.8,
            layout.plot_bottom - y,
            style.bar_color
        );
    }

    // citation line
    let pts: Vec<(f64, f64)> = series
        .cites
        .iter()
        .enumerate()
        .map(|(i, &c)| (layout.year_center(i), layout.cites.map(c as f64)))
        .collect();
    svg.polyline("citations", &pts, &style.line_color);

    let r = ind.r.map_or("undefined".to_string(), |r| format!("{r:.4}"));
    let lag = ind.lag.map_or("n/a".to_string(), |l| format!("{l} yr"));
    let caption = format!(
        "r = {r}   lag = {lag}   I = {:.2}   h = {}   papers = {}   citations = {}",
        round_for_display(ind.i_index, 2),
        ind.h,
        ind.total_pubs,
        ind.total_cites
    );
    svg.text(
        "caption",
        style.width / 2.0,
        style.height - 40.0,
        "middle",
        13,
        &caption,
    );
    let legend_y = style.height - 18.0;
    let _ = writeln!(
        svg.buf,
        r#"<rect class="legend" x="{:.2}" y="{:.2}" width="12" height="10" fill="{}"/>"#,
        style.width / 2.0 - 160.0,
        legend_y - 9.0,
        style.bar_color
    );
    svg.text(
        "legend",
        style.width / 2.0 - 142.0,
        legend_y,
        "start",
        11,
        "publications (left axis)",
    );
    svg.line(
        "legend",
        style.width / 2.0 + 20.0,
        legend_y - 4.0,
        style.width / 2.0 + 36.0,
        legend_y - 4.0,
        &style.line_color,
    );
    svg.text(
        "legend",
        style.width / 2.0 + 42.0,
        legend_y,
        "start",
        11,
        "citations (right axis)",
    );

    Ok(svg.finish())
}

/// Which cohort plot to draw.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ScatterAxes {
    /// Integrity index against correlation.
    IvsR,
    /// Integrity index against total publications, for a power-law fit.
    IvsPPowerFit,
    /// Maximum papers in one year against total publications, for a linear fit.
    MvsPLinFit,
    /// As `IvsR`, marker area scaled by maximum papers in one year.
    IvsRBubble,
}

impl ScatterAxes {
    fn uses_correlation(self) -> bool {
        matches!(self, ScatterAxes::IvsR | ScatterAxes::IvsRBubble)
    }

    fn labels(self) -> (&'static str, &'static str) {
        match self {
            ScatterAxes::IvsR | ScatterAxes::IvsRBubble => {
                ("publications/citations correlation r", "integrity index I")
            }
            ScatterAxes::IvsPPowerFit => ("total publications p", "integrity index I"),
            ScatterAxes::MvsPLinFit => ("total publications p", "max papers in one year m"),
        }
    }

    /// Data coordinates of a point, if it can be placed.
    pub fn coords(self, p: &CohortPoint) -> Option<(f64, f64)> {
        match self {
            ScatterAxes::IvsR | ScatterAxes::IvsRBubble => p.r.map(|r| (r, p.i_index)),
            ScatterAxes::IvsPPowerFit => Some((p.total_pubs as f64, p.i_index)),
            ScatterAxes::MvsPLinFit => Some((p.total_pubs as f64, p.max_pubs_year as f64)),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FitCurve {
    Power(PowerLawFit),
    Linear(LinearFit),
}

impl FitCurve {
    pub fn eval(&self, x: f64) -> f64 {
        match self {
            FitCurve::Power(f) => f.eval(x),
            FitCurve::Linear(f) => f.eval(x),
        }
    }
}

pub const FIT_SAMPLES: usize = 100;

/// Pixel geometry of a scatter chart.
#[derive(Debug, Clone, PartialEq)]
pub struct ScatterLayout {
    pub x: LinearScale,
    pub y: LinearScale,
    pub max_m: u64,
    /// Fit-curve abscissae (data units).
    pub fit_span: (f64, f64),
}

impl ScatterLayout {
    pub fn new(
        points: &[CohortPoint],
        axes: ScatterAxes,
        fit: Option<&FitCurve>,
        style: &ChartStyle,
    ) -> Self {
        let (left, right) = (MARGIN_LEFT, style.width - MARGIN_RIGHT);
        let (top, bottom) = (MARGIN_TOP, style.height - MARGIN_BOTTOM);
        let coords: Vec<(f64, f64)> = points.iter().filter_map(|p| axes.coords(p)).collect();
        let fold = |f: fn(&(f64, f64)) -> f64| -> (f64, f64) {
            coords
                .iter()
                .map(f)
                .fold((f64::INFINITY, f64::NEG_INFINITY), |(lo, hi), v| {
                    (lo.min(v), hi.max(v))
                })
        };
        let (x_lo, x_hi) = fold(|c| c.0);
        let (_, y_hi) = fold(|c| c.1);
        let fit_span = if coords.is_empty() {
            (1.0, 1.0)
        } else {
            (x_lo.max(f64::MIN_POSITIVE), x_hi)
        };
        let max_m = points.iter().map(|p| p.max_pubs_year).max().unwrap_or(0);

        let (x_dom, y_dom) = if axes.uses_correlation() {
            ((-1.0, 1.0), (0.0, 1.0))
        } else {
            let mut y_min: f64 = 0.0;
            let mut y_max = if y_hi.is_finite() { y_hi } else { 1.0 };
            if let Some(f) = fit {
                for i in 0..FIT_SAMPLES {
                    let v = f.eval(sample_x(fit_span, i));
                    if v.is_finite() {
                        y_min = y_min.min(v);
                        y_max = y_max.max(v);
                    }
                }
            }
            let x_max = if x_hi.is_finite() { x_hi } else { 1.0 };
            let y_floor = if y_min < 0.0 { -nice_ceil(-y_min) } else { 0.0 };
            ((0.0, nice_ceil(x_max)), (y_floor, nice_ceil(y_max)))
        };
        ScatterLayout {
            x: LinearScale::new(x_dom, (left, right)),
            y: LinearScale::new(y_dom, (bottom, top)),
            max_m,
            fit_span,
        }
    }

    /// Marker radius in pixels; bubble charts scale area with `m`.
    pub fn radius(&self, axes: ScatterAxes, m: u64) -> f64 {
        match axes {
            ScatterAxes::IvsRBubble if self.max_m > 0 => {
                3.0 + 17.0 * (m as f64 / self.max_m as f64).sqrt()
            }
            ScatterAxes::IvsRBubble => 3.0,
            _ => 4.0,
        }
    }
}

fn sample_x(span: (f64, f64), i: usize) -> f64 {
    span.0 + (span.1 - span.0) * i as f64 / (FIT_SAMPLES - 1) as f64
}

/// Cohort scatter plot with optional fitted curve and flag region.
///
/// Points whose correlation is undefined cannot be placed on the
/// correlation axis and are listed in the chart description instead.
pub fn scatter_chart(
    points: &[CohortPoint],
    axes: ScatterAxes,
    fit: Option<&FitCurve>,
    region: Option<&Region>,
    style: &ChartStyle,
) -> Result<String, RenderError> {
    if points.is_empty() {
        return Err(RenderError::EmptyCohort);
    }
    style.validate()?;
    let layout = ScatterLayout::new(points, axes, fit, style);
    let (x0, x1) = layout.x.range;
    let (y0, y1) = layout.y.range;
    let mut svg = Svg::open(style);

    let skipped: Vec<&str> = points
        .iter()
        .filter(|p| axes.coords(p).is_none())
        .map(|p| p.label.as_str())
        .collect();
    if !skipped.is_empty() {
        let _ = writeln!(
            svg.buf,
            "<desc>not plotted (correlation undefined): {}</desc>",
            escape(&skipped.join(", "))
        );
    }

    if let (true, true, Some(region)) = (style.shade_region, axes.uses_correlation(), region) {
        let rx = layout.x.map(region.r_min);
        let ry = layout.y.map(region.i_max);
        let _ = writeln!(
            svg.buf,
            r#"<rect class="region" x="{rx:.2}" y="{ry:.2}" width="{:.2}" height="{:.2}" fill="{}" fill-opacity="{}"/>"#,
            x1 - rx,
            y0 - ry,
            style.region_color,
            style.region_opacity
        );
    }

    svg.line("axis", x0, y0, x1, y0, "black");
    svg.line("axis", x0, y0, x0, y1, "black");
    for v in layout.x.ticks(4) {
        let x = layout.x.map(v);
        svg.line("tick", x, y0, x, y0 + 5.0, "black");
        svg.text("tick-label", x, y0 + 18.0, "middle", 11, &fmt_tick(v));
    }
    for v in layout.y.ticks(5) {
        let y = layout.y.map(v);
        svg.line("tick", x0 - 5.0, y, x0, y, "black");
        svg.text("tick-label", x0 - 8.0, y + 4.0, "end", 11, &fmt_tick(v));
    }
    let (xl, yl) = axes.labels();
    svg.text("axis-label", (x0 + x1) / 2.0, y0 + 40.0, "middle", 12, xl);
    let mid = (y0 + y1) / 2.0;
    let _ = writeln!(
        svg.buf,
        r#"<text class="axis-label" x="18" y="{mid:.2}" font-size="12" text-anchor="middle" transform="rotate(-90 18 {mid:.2})">{}</text>"#,
        escape(yl)
    );

    if let Some(f) = fit {
        let pts: Vec<(f64, f64)> = (0..FIT_SAMPLES)
            .map(|i| sample_x(layout.fit_span, i))
            .map(|x| (layout.x.map(x), layout.y.map(f.eval(x))))
            .filter(|(_, y)| y.is_finite())
            .collect();
        svg.polyline("fit", &pts, &style.fit_color);
        let label = match f {
            FitCurve::Power(p) => {
                format!("I(p) = {:.4} p^{:.4}   R² = {:.3}", p.a, p.b, p.r_squared)
            }
            FitCurve::Linear(l) => format!(
                "m(p) = {:.4} p {:+.4}   R² = {:.3}",
                l.slope, l.intercept, l.r_squared
            ),
        };
        svg.text("fit-label", x1, y1 - 8.0, "end", 12, &label);
    }

    for p in points {
        let Some((x, y)) = axes.coords(p) else {
            continue;
        };
        let _ = writeln!(
            svg.buf,
            r#"<circle class="marker" cx="{:.2}" cy="{:.2}" r="{:.2}" fill="{}" fill-opacity="0.7"><title>{}</title></circle>"#,
            layout.x.map(x),
            layout.y.map(y),
            layout.radius(axes, p.max_pubs_year),
            style.marker_color,
            escape(&p.label)
        );
    }

    Ok(svg.finish())
}
