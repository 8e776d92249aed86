use papertrail::ingest::{serialize_report, ReportFormat};
use papertrail::synth::{generate, Archetype, SynthSpec};
use papertrail::{analyze_profile, build_series, AnalysisConfig, SignalKind};
use proptest::prelude::*;

fn bytes(spec: &SynthSpec) -> Vec<u8> {
    serialize_report(&generate(spec).unwrap(), ReportFormat::Tsv)
        .unwrap()
        .bytes
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn same_seed_same_bytes(seed in any::<u64>(), papermill in any::<bool>()) {
        let spec = if papermill { SynthSpec::papermill(seed) } else { SynthSpec::conscientious(seed) };
        prop_assert_eq!(bytes(&spec), bytes(&spec.clone()));
    }

    #[test]
    fn papermill_output_never_falls_after_onset(seed in any::<u64>(), n_years in 8u32..30) {
        let spec = SynthSpec { n_years, ..SynthSpec::papermill(seed) };
        let series = build_series(&generate(&spec).unwrap(), None).unwrap();
        let onset = spec.onset() as usize;
        for w in series.pubs[onset..].windows(2) {
            prop_assert!(w[1] >= w[0], "{:?}", series.pubs);
        }
    }

    #[test]
    fn conscientious_citations_peak_at_kernel_lag(seed in any::<u64>(), lag in 1u32..9) {
        let spec = SynthSpec { kernel_peak_lag: lag, ..SynthSpec::conscientious(seed) };
        let profile = generate(&spec).unwrap();
        let last = spec.start_year + spec.n_years as i32 - 1;
        for rec in &profile.records {
            let peak = rec.pub_year + lag as i32;
            if peak > last || rec.total_citations == 0 {
                continue;
            }
            let at_peak = rec.citations_by_year[&peak];
            for (&y, &c) in &rec.citations_by_year {
                if y != peak {
                    prop_assert!(c < at_peak, "{}: year {y} has {c} >= {at_peak}", rec.title);
                }
            }
        }
    }

    #[test]
    fn citations_never_precede_publication(seed in any::<u64>(), papermill in any::<bool>()) {
        let spec = if papermill { SynthSpec::papermill(seed) } else { SynthSpec::conscientious(seed) };
        for rec in generate(&spec).unwrap().records {
            for (&y, &c) in &rec.citations_by_year {
                prop_assert!(y >= rec.pub_year || c == 0);
            }
            prop_assert_eq!(rec.total_citations, rec.citations_by_year.values().sum::<u64>());
        }
    }
}

#[test]
fn archetypes_separate_under_default_thresholds() {
    let config = AnalysisConfig::default();
    for seed in 0..8 {
        let mill =
            analyze_profile(&generate(&SynthSpec::papermill(seed)).unwrap(), &config).unwrap();
        let ind = &mill.indicators;
        assert!(ind.r.unwrap() > 0.5, "seed {seed}: {ind:?}");
        assert!(ind.lag.unwrap() <= 1);
        assert!(ind.i_index < 0.3);
        assert!(ind.has_signal(SignalKind::HighCorrelation));
        assert!(ind.has_signal(SignalKind::LowIntegrity));

        let good =
            analyze_profile(&generate(&SynthSpec::conscientious(seed)).unwrap(), &config).unwrap();
        let ind = &good.indicators;
        assert!(ind.r.is_none_or(|r| r <= 0.5), "seed {seed}: {ind:?}");
        assert!(ind.i_index >= 0.3);
        assert!(ind.flags.is_empty(), "seed {seed}: {:?}", ind.flags);
    }
}

#[test]
fn different_seeds_differ() {
    assert_ne!(
        bytes(&SynthSpec::papermill(1)),
        bytes(&SynthSpec::papermill(2))
    );
    assert_eq!(
        SynthSpec::defaults(Archetype::Papermill, 3),
        SynthSpec::papermill(3)
    );
}
