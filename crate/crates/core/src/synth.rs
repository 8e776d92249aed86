//! Deterministic synthetic researcher profiles.
//!
//! Two archetypes are generated:
//!
//! * **Conscientious**: output rises and falls in a single pulse; each paper's
//!   citations peak `kernel_peak_lag` years after publication and decay slowly.
//! * **Papermill**: output is flat until an onset year, then grows
//!   monotonically; every year's output supplies a fixed number of citations
//!   per paper to the papers of that year and the year before, so citations
//!   track publications with no delay.
//!
//! The only randomness is a per-year jitter of -1, 0 or +1 papers, drawn from
//! [`XorShift64Star`]. Fractional citation amounts are converted to integers
//! per citation year by floor-plus-carry, so column totals are conserved.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ingest::{PublicationRecord, ResearcherProfile, MAX_YEAR, MIN_YEAR};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SynthError {
    #[error("invalid synthetic spec: {0}")]
    InvalidSpec(String),
}

/// xorshift64* generator (shifts 12, 25, 27; multiplier 0x2545F4914F6CDD1D).
///
/// The state is seeded as `seed ^ 0x9E3779B97F4A7C15`, replacing a zero
/// state with the constant itself.
#[derive(Debug, Clone)]
pub struct XorShift64Star {
    state: u64,
}

impl XorShift64Star {
    pub const SEED_MIX: u64 = 0x9E37_79B9_7F4A_7C15;
    pub const MULTIPLIER: u64 = 0x2545_F491_4F6C_DD1D;

    pub fn new(seed: u64) -> Self {
        let state = seed ^ Self::SEED_MIX;
        XorShift64Star {
            state: if state == 0 { Self::SEED_MIX } else { state },
        }
    }

    pub fn next_u64(&mut self) -> u64 {
        let mut x = self.state;
        x ^= x >> 12;
        x ^= x << 25;
        x ^= x >> 27;
        self.state = x;
        x.wrapping_mul(Self::MULTIPLIER)
    }

    /// -1, 0 or +1.
    pub fn jitter(&mut self) -> i64 {
        (self.next_u64() % 3) as i64 - 1
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Archetype {
    Conscientious,
    Papermill,
}

impl fmt::Display for Archetype {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Archetype::Conscientious => "conscientious",
            Archetype::Papermill => "papermill",
        })
    }
}

impl FromStr for Archetype {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "conscientious" => Ok(Archetype::Conscientious),
            "papermill" => Ok(Archetype::Papermill),
            other => Err(format!(
                "unknown archetype `{other}` (expected conscientious or papermill)"
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SynthSpec {
    pub archetype: Archetype,
    pub start_year: i32,
    pub n_years: u32,
    pub seed: u64,
    /// Years from `start_year` to the start of growth; `n_years / 2` when unset.
    pub onset_offset: Option<u32>,
    pub base_rate: f64,
    pub peak_rate: f64,
    pub kernel_peak_lag: u32,
    pub cites_per_paper: f64,
}

/// Share of a papermill paper's citations arriving 0 and 1 years after publication.
const PAPERMILL_KERNEL: [f64; 2] = [0.7, 0.3];
/// Year-over-year decay of the conscientious kernel after its peak.
const TAIL_DECAY: f64 = 0.6;
const TAIL_YEARS: u32 = 30;

impl SynthSpec {
    pub fn conscientious(seed: u64) -> Self {
        SynthSpec {
            archetype: Archetype::Conscientious,
            start_year: 1999,
            n_years: 25,
            seed,
            onset_offset: None,
            base_rate: 2.0,
            peak_rate: 10.0,
            kernel_peak_lag: 6,
            cites_per_paper: 60.0,
        }
    }

    pub fn papermill(seed: u64) -> Self {
        SynthSpec {
            archetype: Archetype::Papermill,
            start_year: 2010,
            n_years: 14,
            seed,
            onset_offset: None,
            base_rate: 4.0,
            peak_rate: 60.0,
            kernel_peak_lag: 1,
            cites_per_paper: 10.0,
        }
    }

    pub fn defaults(archetype: Archetype, seed: u64) -> Self {
        match archetype {
            Archetype::Conscientious => Self::conscientious(seed),
            Archetype::Papermill => Self::papermill(seed),
        }
    }

    pub fn onset(&self) -> u32 {
        self.onset_offset.unwrap_or(self.n_years / 2)
    }

    pub fn validate(&self) -> Result<(), SynthError> {
        let bad = |msg: String| Err(SynthError::InvalidSpec(msg));
        if self.n_years < 8 {
            return bad(format!("n_years {} must be at least 8", self.n_years));
        }
        let last = self.start_year as i64 + self.n_years as i64 - 1;
        if self.start_year < MIN_YEAR || last > MAX_YEAR as i64 {
            return bad(format!(
                "years {}..={last} outside {MIN_YEAR}..={MAX_YEAR}",
                self.start_year
            ));
        }
        if !(self.base_rate.is_finite()
            && self.peak_rate.is_finite()
            && self.cites_per_paper.is_finite())
        {
            return bad("rates must be finite".into());
        }
        if self.base_rate < 0.0 || self.base_rate > self.peak_rate {
            return bad(format!(
                "need 0 <= base_rate <= peak_rate, got {} and {}",
                self.base_rate, self.peak_rate
            ));
        }
        if self.cites_per_paper < 0.0 {
            return bad("cites_per_paper must be non-negative".into());
        }
        if self.kernel_peak_lag < 1 {
            return bad("kernel_peak_lag must be at least 1".into());
        }
        if self.onset() >= self.n_years {
            return bad(format!(
                "onset_offset {} must be below n_years {}",
                self.onset(),
                self.n_years
            ));
        }
        Ok(())
    }
}

/// Conscientious citation kernel: quadratic rise to a peak at `peak_lag`,
/// geometric tail afterwards. Normalized to sum to one.
pub fn conscientious_kernel(peak_lag: u32) -> Vec<f64> {
    let l = peak_lag as f64;
    let raw: Vec<f64> = (0..=peak_lag + TAIL_YEARS)
        .map(|k| {
            if k <= peak_lag {
                ((k as f64 + 1.0) / (l + 1.0)).powi(2)
            } else {
                TAIL_DECAY.powi((k - peak_lag) as i32)
            }
        })
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|w| w / total).collect()
}

fn publication_counts(spec: &SynthSpec, rng: &mut XorShift64Star) -> Vec<u64> {
    let n = spec.n_years as usize;
    let (base, peak) = (spec.base_rate, spec.peak_rate);
    let mut counts = Vec::with_capacity(n);
    match spec.archetype {
        Archetype::Conscientious => {
            for t in 0..n {
                let phase = (PI * (t as f64 + 0.5) / n as f64).sin().powi(2);
                let target = (base + (peak - base) * phase).round() as i64;
                counts.push((target + rng.jitter()).max(0) as u64);
            }
        }
        Archetype::Papermill => {
            let onset = spec.onset() as usize;
            let ramp = (n - onset) as f64;
            let mut floor = 0;
            for t in 0..n {
                let jitter = rng.jitter();
                let c = if t < onset {
                    (base.round() as i64 + jitter).max(0) as u64
                } else {
                    let frac = (t - onset + 1) as f64 / ramp;
                    let target = (base + (peak - base) * frac * frac).round() as i64;
                    // growth after onset never dips
                    let c = ((target + jitter).max(0) as u64).max(floor);
                    floor = c;
                    c
                };
                counts.push(c);
            }
        }
    }
    counts
}

/// Floor-plus-carry accumulator for one citation-year column.
#[derive(Default, Clone, Copy)]
struct Carry {
    real: f64,
    emitted: u64,
}

impl Carry {
    fn take(&mut self, amount: f64) -> u64 {
        self.real += amount;
        let whole = self.real.floor() as u64;
        let out = whole.saturating_sub(self.emitted);
        self.emitted += out;
        out
    }
}

pub fn generate(spec: &SynthSpec) -> Result<ResearcherProfile, SynthError> {
    spec.validate()?;
    let n = spec.n_years as usize;
    let mut rng = XorShift64Star::new(spec.seed);
    let pubs = publication_counts(spec, &mut rng);

    let kernel: Vec<f64> = match spec.archetype {
        Archetype::Conscientious => conscientious_kernel(spec.kernel_peak_lag),
        Archetype::Papermill => PAPERMILL_KERNEL.to_vec(),
    };
    let mut carries = vec![Carry::default(); n];
    let mut records = Vec::new();

    for (t, &count) in pubs.iter().enumerate() {
        let pub_year = spec.start_year + t as i32;
        for idx in 0..count {
            let mut cites = vec![0u64; n];
            for (k, w) in kernel.iter().enumerate() {
                let y = t + k;
                if y >= n {
                    break;
                }
                let amount = match spec.archetype {
                    Archetype::Conscientious => spec.cites_per_paper * w,
                    // snowball coupling: year y's output supplies cites_per_paper * pubs[y]
                    // citations, shared among the papers of year t
                    Archetype::Papermill => {
                        spec.cites_per_paper * w * pubs[y] as f64 / count as f64
                    }
                };
                cites[y] = carries[y].take(amount);
            }
            if spec.archetype == Archetype::Conscientious {
                sharpen_mode(&mut cites, t + spec.kernel_peak_lag as usize);
            }

            let citations_by_year: BTreeMap<i32, u64> = cites
                .iter()
                .enumerate()
                .map(|(y, &c)| (spec.start_year + y as i32, c))
                .collect();
            records.push(PublicationRecord {
                title: format!(
                    "Synthetic {} study {pub_year}-{:03}",
                    spec.archetype,
                    idx + 1
                ),
                pub_year,
                total_citations: cites.iter().sum(),
                citations_by_year,
            });
        }
    }

    if records.is_empty() {
        return Err(SynthError::InvalidSpec(
            "spec produces no publications".into(),
        ));
    }

    Ok(ResearcherProfile {
        name: format!(
            "Synthetic {} researcher (seed {})",
            spec.archetype, spec.seed
        ),
        source_id: Some(format!("SYN-{}-{}", spec.archetype, spec.seed)),
        reported_h: None,
        records,
        warnings: Vec::new(),
    })
}

/// Move citations onto `peak` until it is the strict mode of the paper's
/// counts. Totals are unchanged; no-op when the peak lies beyond the window
/// or the paper has no citations.
fn sharpen_mode(cites: &mut [u64], peak: usize) {
    if peak >= cites.len() || cites.iter().all(|&c| c == 0) {
        return;
    }
    for y in 0..cites.len() {
        if y != peak && cites[y] >= cites[peak] {
            let moved = (cites[y] - cites[peak]) / 2 + 1;
            cites[y] -= moved;
            cites[peak] += moved;
        }
    }
}
