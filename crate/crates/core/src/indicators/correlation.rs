//! Pearson correlation and publication-to-citation delay.

use serde::{Deserialize, Serialize};

use super::IndicatorError;
use crate::series::AnnualSeries;

/// Minimum number of overlapping year pairs for a lag candidate.
pub const MIN_LAG_OVERLAP: usize = 3;

/// Pearson product-moment coefficient.
///
/// Returns `Ok(None)` when either input is constant. The result is clamped
/// to `[-1, 1]` to absorb rounding.
pub fn pearson(x: &[f64], y: &[f64]) -> Result<Option<f64>, IndicatorError> {
    if x.len() != y.len() {
        return Err(IndicatorError::LengthMismatch {
            left: x.len(),
            right: y.len(),
        });
    }
    if x.len() < 2 {
        return Err(IndicatorError::TooShort {
            len: x.len(),
            need: 2,
        });
    }
    if is_constant(x) || is_constant(y) {
        return Ok(None);
    }

    let n = x.len() as f64;
    let mx = x.iter().sum::<f64>() / n;
    let my = y.iter().sum::<f64>() / n;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (a, b) in x.iter().zip(y) {
        let dx = a - mx;
        let dy = b - my;
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return Ok(None);
    }
    Ok(Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0)))
}

fn is_constant(v: &[f64]) -> bool {
    v.iter().all(|&a| a == v[0])
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LagEstimate {
    pub lag: u32,
    pub r: f64,
}

/// Find the delay `d` in `0..=max_lag` maximizing the correlation between
/// `pubs[t]` and `cites[t + d]`. Ties go to the smallest `d`; lags whose
/// correlation is undefined are skipped.
pub fn best_lag(series: &AnnualSeries, max_lag: u32) -> Result<LagEstimate, IndicatorError> {
    let n = series.len();
    let need = max_lag as usize + MIN_LAG_OVERLAP;
    if n < need {
        return Err(IndicatorError::TooShort { len: n, need });
    }
    let pubs = series.pubs_f64();
    let cites = series.cites_f64();

    let mut best: Option<LagEstimate> = None;
    for lag in 0..=max_lag {
        let d = lag as usize;
        let Some(r) = pearson(&pubs[..n - d], &cites[d..])? else {
            continue;
        };
        if best.is_none_or(|b| r > b.r) {
            best = Some(LagEstimate { lag, r });
        }
    }
    best.ok_or(IndicatorError::AllDegenerate)
}
