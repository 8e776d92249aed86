//! Acceptance suite. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any criterion fails or exceeds its time budget.

mod common;

use std::panic::{catch_unwind, AssertUnwindSafe};
use std::time::{Duration, Instant};

use papertrail::cohort::{
    classify_region, cohort_summary, fit_linear, fit_power_law, CohortPoint, Membership, Region,
};
use papertrail::indicators::{
    best_lag, h_index_of_counts, hcp_count, i_index, pearson, round_for_display, HcpThresholds,
};
use papertrail::ingest::{parse_report, serialize_report, ReportFormat};
use papertrail::render::{profile_chart, scatter_chart, ChartStyle, ScatterAxes};
use papertrail::synth::{generate, SynthSpec};
use papertrail::{analyze_profile, AnalysisConfig, AnnualSeries, PublicationRecord, SignalKind};
use proptest::prelude::*;
use proptest::test_runner::{Config, RngAlgorithm, TestRng, TestRunner};

type Outcome = Result<String, String>;

/// Id, description, time budget, check.
type Criterion = (&'static str, &'static str, Duration, fn() -> Outcome);

macro_rules! ensure {
    ($cond:expr, $($msg:tt)+) => {
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($msg)+));
        }
    };
}

fn runner(cases: u32) -> TestRunner {
    let config = Config {
        cases,
        failure_persistence: None,
        ..Config::default()
    };
    TestRunner::new_with_rng(config, TestRng::deterministic_rng(RngAlgorithm::ChaCha))
}

fn run_prop<S: Strategy>(
    cases: u32,
    strategy: S,
    test: impl Fn(S::Value) -> Result<(), TestCaseError>,
) -> Result<(), String> {
    runner(cases)
        .run(&strategy, test)
        .map_err(|e| e.to_string())
}

fn record(pub_year: i32, total_citations: u64) -> PublicationRecord {
    PublicationRecord {
        title: String::new(),
        pub_year,
        total_citations,
        citations_by_year: Default::default(),
    }
}

fn ac1_integrity_index() -> Outcome {
    let a = i_index(32, 64).map_err(|e| e.to_string())?;
    ensure!(a == 0.5, "I(32,64) = {a}");
    let b = i_index(86, 196).map_err(|e| e.to_string())?;
    ensure!(round_for_display(b, 2) == 0.44, "I(86,196) = {b}");
    let c = i_index(34, 384).map_err(|e| e.to_string())?;
    // 0.0885 is the 4-decimal rendering of the exact quotient 0.08854166...
    ensure!(
        (c - 0.088_541_666_666_666_67).abs() <= 1e-12,
        "I(34,384) = {c}"
    );
    ensure!(round_for_display(c, 4) == 0.0885, "I(34,384) = {c}");
    Ok(format!("0.5, {:.2}, {c:.6}", round_for_display(b, 2)))
}

const HCP_TABLE: [(i32, u64); 11] = [
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

fn ac2_hcp_thresholds() -> Outcome {
    let t = HcpThresholds::builtin();
    let encoded: Vec<_> = t.iter().collect();
    ensure!(encoded == HCP_TABLE, "table differs: {encoded:?}");
    for (year, threshold) in HCP_TABLE {
        ensure!(
            hcp_count(&[record(year, threshold)], &t) == 1,
            "{year}: {threshold} not counted"
        );
        ensure!(
            hcp_count(&[record(year, threshold - 1)], &t) == 0,
            "{year}: {} counted",
            threshold - 1
        );
    }
    ensure!(
        hcp_count(&[record(2014, 10_000), record(2026, 10_000)], &t) == 0,
        "years outside the table counted"
    );
    Ok("11 pairs, 22 boundary checks".into())
}

fn as_f64(v: &[u64]) -> Vec<f64> {
    v.iter().map(|&x| x as f64).collect()
}

fn ac3_correlation_and_lag() -> Outcome {
    let pairs = (2usize..60).prop_flat_map(|n| {
        (
            proptest::collection::vec(0u64..2000, n),
            proptest::collection::vec(0u64..2000, n),
            0.001f64..1000.0,
            -1e4f64..1e4,
        )
    });
    run_prop(1000, pairs, |(x, y, a, b)| {
        let (xf, yf) = (as_f64(&x), as_f64(&y));
        let r = pearson(&xf, &yf).unwrap();
        let s = pearson(&yf, &xf).unwrap();
        let mapped: Vec<f64> = xf.iter().map(|v| a * v + b).collect();
        let m = pearson(&mapped, &yf).unwrap();
        match (r, s, m) {
            (Some(r), Some(s), Some(m)) => {
                prop_assert!(r.abs() <= 1.0 + 1e-12);
                prop_assert!((r - s).abs() <= 1e-12);
                prop_assert!((r - m).abs() <= 1e-12, "affine: {} vs {}", r, m);
            }
            (None, None, None) => {}
            other => prop_assert!(false, "definedness differs: {:?}", other),
        }
        Ok(())
    })?;

    let series = (0usize..=10).prop_flat_map(|max_lag| {
        (max_lag + 3..=40).prop_flat_map(move |n| {
            (
                proptest::collection::vec(0u64..80, n),
                proptest::collection::vec(0u64..800, n),
                Just(max_lag),
            )
        })
    });
    run_prop(500, series, |(pubs, cites, max_lag)| {
        let scan = common::exhaustive_lag_scan(&pubs, &cites, max_lag);
        let series = AnnualSeries {
            start_year: 2000,
            pubs,
            cites,
        };
        let oracle = scan
            .iter()
            .enumerate()
            .filter_map(|(d, r)| r.map(|r| (d, r)))
            .fold(None::<(usize, f64)>, |best, (d, r)| match best {
                Some((_, b)) if r <= b + 1e-12 => best,
                _ => Some((d, r)),
            });
        match (best_lag(&series, max_lag as u32), oracle) {
            (Ok(est), Some((d, r))) => {
                prop_assert_eq!(est.lag as usize, d);
                prop_assert!((est.r - r).abs() <= 1e-12);
            }
            (Err(_), None) => {}
            (got, want) => prop_assert!(false, "{:?} vs {:?}", got, want),
        }
        Ok(())
    })?;
    Ok("1000 pairs, 500 lag searches".into())
}

fn ac4_h_index() -> Outcome {
    let vectors = proptest::collection::vec(0u64..400, 0..=200);
    run_prop(1000, vectors, |counts| {
        prop_assert_eq!(h_index_of_counts(&counts), common::brute_force_h(&counts));
        Ok(())
    })?;
    Ok("1000 vectors".into())
}

fn rel(a: f64, b: f64) -> f64 {
    (a - b).abs() / b.abs()
}

fn ac5_fit_recovery() -> Outcome {
    for n in 4..=50 {
        let pts: Vec<_> = (1..=n)
            .map(|k| (7.0 * k as f64, 2.0 * (7.0 * k as f64).powf(-0.5)))
            .collect();
        let (fit, _) = fit_power_law(&pts).map_err(|e| e.to_string())?;
        ensure!(
            rel(fit.a, 2.0) <= 1e-9 && rel(fit.b, -0.5) <= 1e-9,
            "{n} points: {fit:?}"
        );

        let scaled: Vec<_> = pts.iter().map(|&(p, i)| (p, 0.37 * i)).collect();
        let (s, _) = fit_power_law(&scaled).map_err(|e| e.to_string())?;
        ensure!(
            rel(s.a, 0.37 * fit.a) <= 1e-9 && rel(s.b, fit.b) <= 1e-9,
            "scale covariance, {n} points: {s:?}"
        );

        let lin: Vec<_> = (0..n)
            .map(|k| (3.0 * k as f64 + 1.0, 2.0 * (3.0 * k as f64 + 1.0) + 1.0))
            .collect();
        let l = fit_linear(&lin).map_err(|e| e.to_string())?;
        ensure!(
            rel(l.slope, 2.0) <= 1e-9 && rel(l.intercept, 1.0) <= 1e-9,
            "{n} points: {l:?}"
        );
    }
    let noisy = (3usize..40).prop_flat_map(|n| {
        (
            proptest::collection::vec((1.0f64..5000.0, 0.001f64..1.0), n),
            0.01f64..100.0,
        )
    });
    run_prop(200, noisy, |(pts, c)| {
        prop_assume!(pts.iter().any(|q| (q.0 - pts[0].0).abs() > 1e-3));
        let (base, _) = fit_power_law(&pts).unwrap();
        let scaled: Vec<_> = pts.iter().map(|&(p, i)| (p, c * i)).collect();
        let (s, _) = fit_power_law(&scaled).unwrap();
        prop_assert!(rel(s.a, c * base.a) <= 1e-9);
        prop_assert!((s.b - base.b).abs() <= 1e-9 * base.b.abs().max(1.0));
        Ok(())
    })?;
    Ok("4 to 50 points, 200 scale checks".into())
}

fn ac6_archetypes() -> Outcome {
    let config = AnalysisConfig::default();
    let mill_profile = generate(&SynthSpec::papermill(0)).map_err(|e| e.to_string())?;
    let again = generate(&SynthSpec::papermill(0)).map_err(|e| e.to_string())?;
    ensure!(mill_profile == again, "papermill output not deterministic");
    let mill = analyze_profile(&mill_profile, &config)
        .map_err(|e| e.to_string())?
        .indicators;
    let r = mill.r.unwrap_or(f64::NAN);
    ensure!(r >= 0.9, "papermill r = {r}");
    ensure!(mill.lag == Some(0), "papermill lag {:?}", mill.lag);
    ensure!(
        mill.has_signal(SignalKind::LowIntegrity) && mill.has_signal(SignalKind::HighCorrelation),
        "papermill flags {:?}",
        mill.flags
    );

    let good = analyze_profile(
        &generate(&SynthSpec::conscientious(0)).map_err(|e| e.to_string())?,
        &config,
    )
    .map_err(|e| e.to_string())?
    .indicators;
    ensure!(
        !good.has_signal(SignalKind::LowIntegrity),
        "conscientious I = {}",
        good.i_index
    );
    let late_or_weak = good.r.is_none_or(|r| r < 0.5) || good.lag.is_some_and(|l| l >= 3);
    ensure!(
        late_or_weak,
        "conscientious r = {:?}, lag {:?}",
        good.r,
        good.lag
    );
    Ok(format!(
        "papermill r={r:.4} lag=0 I={:.3}; conscientious r={} I={:.3}",
        mill.i_index,
        good.r.map_or("undefined".into(), |r| format!("{r:.4}")),
        good.i_index
    ))
}

fn ac7_cohort() -> Outcome {
    let config = AnalysisConfig::default();
    let mut points = Vec::new();
    for k in 0..82u64 {
        let spec = match k % 3 {
            0 => SynthSpec::papermill(k),
            1 => SynthSpec::conscientious(k),
            _ => SynthSpec {
                peak_rate: 20.0 + k as f64,
                ..SynthSpec::papermill(k)
            },
        };
        let profile = generate(&spec).map_err(|e| e.to_string())?;
        let ind = analyze_profile(&profile, &config)
            .map_err(|e| e.to_string())?
            .indicators;
        points.push(CohortPoint::from_indicators(format!("synthetic-{k}"), &ind));
    }
    let region = Region::new(0.5, 0.3).map_err(|e| e.to_string())?;
    let summary = cohort_summary(&points, &region).map_err(|e| e.to_string())?;

    // independent group-by
    let (mut n_in, mut n_out) = (0usize, 0usize);
    let mut sums = [[0.0f64; 3]; 2];
    for p in &points {
        let Some(r) = p.r else { continue };
        let g = usize::from(!(r > 0.5 && p.i_index < 0.3));
        if g == 0 {
            n_in += 1;
        } else {
            n_out += 1;
        }
        sums[g][0] += p.total_pubs as f64;
        sums[g][1] += p.max_pubs_year as f64;
        sums[g][2] += p.avg_pubs_year;
    }
    let fraction = n_in as f64 / (n_in + n_out) as f64;
    ensure!(
        summary.inside_fraction == fraction,
        "fraction {} vs {fraction}",
        summary.inside_fraction
    );
    for (g, count, means) in [(0, n_in, &summary.inside), (1, n_out, &summary.outside)] {
        ensure!(
            means.count == count,
            "group {g} count {} vs {count}",
            means.count
        );
        let want = sums[g].map(|s| s / count as f64);
        let got = [
            means.mean_total_pubs,
            means.mean_max_pubs_year,
            means.mean_avg_pubs_year,
        ];
        ensure!(got == want.map(Some), "group {g} means {got:?} vs {want:?}");
    }

    let boundary = CohortPoint {
        r: Some(0.5),
        i_index: 0.3,
        ..points[0].clone()
    };
    ensure!(
        classify_region(&boundary, &region) == Membership::Outside,
        "(0.5, 0.3) not Outside"
    );
    Ok(format!(
        "82 profiles, inside fraction {:.4} ({n_in}/{})",
        fraction,
        n_in + n_out
    ))
}

fn ac8_ingest() -> Outcome {
    for (format, text) in [
        (ReportFormat::Tsv, common::tsv_text(20)),
        (ReportFormat::Csv, common::csv_text(20)),
    ] {
        run_prop(100, common::profile_with(text), |profile| {
            let out = serialize_report(&profile, format).unwrap();
            let again = parse_report(&out.bytes, format, "fallback").unwrap();
            prop_assert!(again.same_content(&profile));
            Ok(())
        })?;
    }

    let fuzz = prop_oneof![
        proptest::collection::vec(any::<u8>(), 0..600).boxed(),
        (
            common::profile_with(common::tsv_text(10)),
            proptest::collection::vec((any::<prop::sample::Index>(), any::<u8>()), 1..8),
        )
            .prop_map(|(p, edits)| {
                let mut bytes = serialize_report(&p, ReportFormat::Tsv).unwrap().bytes;
                for (at, b) in edits {
                    let i = at.index(bytes.len());
                    bytes[i] = b;
                }
                bytes
            })
            .boxed(),
    ];
    run_prop(10_000, fuzz, |bytes| {
        for format in [ReportFormat::Tsv, ReportFormat::Csv] {
            let result = catch_unwind(AssertUnwindSafe(|| parse_report(&bytes, format, "fuzz")));
            prop_assert!(result.is_ok(), "parser panicked");
        }
        Ok(())
    })?;
    Ok("200 round trips, 10000 fuzz inputs".into())
}

fn ac9_svg() -> Outcome {
    let profile = generate(&SynthSpec::papermill(3)).map_err(|e| e.to_string())?;
    let analysis =
        analyze_profile(&profile, &AnalysisConfig::default()).map_err(|e| e.to_string())?;
    let svg = profile_chart(
        &analysis.series,
        &analysis.indicators,
        &ChartStyle::default(),
    )
    .map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&svg).map_err(|e| e.to_string())?;
    let n = analysis.series.len();
    let bars: Vec<_> = doc
        .descendants()
        .filter(|e| e.attribute("class") == Some("bar"))
        .collect();
    ensure!(bars.len() == n, "{} bars for {n} years", bars.len());
    let line = doc
        .descendants()
        .find(|e| e.attribute("class") == Some("citations"))
        .ok_or("no citation line")?;
    let vertices: Vec<(f64, f64)> = line
        .attribute("points")
        .unwrap_or_default()
        .split_whitespace()
        .filter_map(|p| p.split_once(','))
        .map(|(x, y)| (x.parse().unwrap(), y.parse().unwrap()))
        .collect();
    ensure!(
        vertices.len() == n,
        "{} vertices for {n} years",
        vertices.len()
    );

    // right axis: citations 0..nice_ceil(max) over y in [410, 50]
    let top = analysis.series.cites.iter().max().copied().unwrap_or(0) as f64;
    let ceiling = {
        let mag = 10f64.powf(top.log10().floor());
        [1.0, 2.0, 2.5, 5.0, 10.0]
            .iter()
            .map(|m| m * mag)
            .find(|&c| c >= top)
            .unwrap()
    };
    for (&(_, y), &c) in vertices.iter().zip(&analysis.series.cites) {
        let value = (410.0 - y) / 360.0 * ceiling;
        ensure!(
            (value - c as f64).abs() * 360.0 / ceiling <= 0.5,
            "citation {c} drawn at {value}"
        );
    }

    let points: Vec<_> = (0..5)
        .map(|k| CohortPoint {
            label: format!("p{k}"),
            r: Some(-0.8 + 0.4 * k as f64),
            i_index: 0.1 + 0.15 * k as f64,
            total_pubs: 10 + k,
            max_pubs_year: 1 + k,
            avg_pubs_year: 1.0,
        })
        .collect();
    let scatter = scatter_chart(
        &points,
        ScatterAxes::IvsR,
        None,
        Some(&Region::default()),
        &ChartStyle::default(),
    )
    .map_err(|e| e.to_string())?;
    let doc = roxmltree::Document::parse(&scatter).map_err(|e| e.to_string())?;
    for (m, p) in doc
        .descendants()
        .filter(|e| e.attribute("class") == Some("marker"))
        .zip(&points)
    {
        let cx: f64 = m.attribute("cx").unwrap().parse().unwrap();
        let cy: f64 = m.attribute("cy").unwrap().parse().unwrap();
        let r = -1.0 + (cx - 70.0) / 375.0;
        let i = (410.0 - cy) / 360.0;
        ensure!(
            (r - p.r.unwrap()).abs() * 375.0 <= 0.5,
            "{} at r = {r}",
            p.label
        );
        ensure!(
            (i - p.i_index).abs() * 360.0 <= 0.5,
            "{} at I = {i}",
            p.label
        );
    }
    Ok(format!("{n} bars, {n}-vertex line, 5 markers inverted"))
}

fn main() {
    let criteria: [Criterion; 9] = [
        (
            "AC1",
            "integrity index reference values",
            Duration::from_millis(100),
            ac1_integrity_index,
        ),
        (
            "AC2",
            "highly-cited-paper thresholds",
            Duration::from_millis(100),
            ac2_hcp_thresholds,
        ),
        (
            "AC3",
            "correlation and lag properties",
            Duration::from_secs(5),
            ac3_correlation_and_lag,
        ),
        (
            "AC4",
            "h-index against brute force",
            Duration::from_secs(2),
            ac4_h_index,
        ),
        (
            "AC5",
            "fit recovery and scale covariance",
            Duration::from_secs(1),
            ac5_fit_recovery,
        ),
        (
            "AC6",
            "archetype discrimination",
            Duration::from_secs(1),
            ac6_archetypes,
        ),
        (
            "AC7",
            "cohort pipeline against group-by",
            Duration::from_secs(5),
            ac7_cohort,
        ),
        (
            "AC8",
            "ingest round trip and fuzzing",
            Duration::from_secs(30),
            ac8_ingest,
        ),
        (
            "AC9",
            "SVG structure and inverse transform",
            Duration::from_secs(2),
            ac9_svg,
        ),
    ];
    let mut failed = 0;
    for (id, name, budget, check) in criteria {
        let start = Instant::now();
        let outcome = catch_unwind(check).unwrap_or_else(|_| Err("panicked".into()));
        let elapsed = start.elapsed();
        let outcome = match outcome {
            Ok(_) if elapsed > budget => Err(format!("took {elapsed:.2?}, budget {budget:.2?}")),
            other => other,
        };
        match outcome {
            Ok(detail) => println!("[PASS] {id} {name} ({elapsed:.2?}): {detail}"),
            Err(why) => {
                failed += 1;
                println!("[FAIL] {id} {name} ({elapsed:.2?}): {why}");
            }
        }
    }
    println!("acceptance: {} passed, {failed} failed", 9 - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
