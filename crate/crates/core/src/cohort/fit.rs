//! Least-squares curve fits over cohort scatter points.

use serde::{Deserialize, Serialize};

use super::CohortError;

/// `I(p) = a * p^b`, fitted in log-log space.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    pub a: f64,
    pub b: f64,
    /// Coefficient of determination of the log-log line.
    pub r_squared: f64,
    pub n_points: usize,
}

impl PowerLawFit {
    pub fn eval(&self, p: f64) -> f64 {
        self.a * p.powf(self.b)
    }
}

/// `m(p) = slope * p + intercept`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinearFit {
    pub slope: f64,
    pub intercept: f64,
    pub r_squared: f64,
    pub n_points: usize,
}

impl LinearFit {
    pub fn eval(&self, p: f64) -> f64 {
        self.slope * p + self.intercept
    }
}

/// Ordinary least squares for `y = slope * x + intercept`.
///
/// Solves the 2x2 normal equations in mean-centred form.
pub fn ols(xs: &[f64], ys: &[f64]) -> Result<LinearFit, CohortError> {
    debug_assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return Err(CohortError::TooFewPoints { got: n, need: 2 });
    }
    if xs.iter().all(|&x| x == xs[0]) {
        return Err(CohortError::DegenerateAbscissa);
    }
    let nf = n as f64;
    let mx = xs.iter().sum::<f64>() / nf;
    let my = ys.iter().sum::<f64>() / nf;
    let (mut sxx, mut sxy) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        sxx += (x - mx) * (x - mx);
        sxy += (x - mx) * (y - my);
    }
    let slope = sxy / sxx;
    let intercept = my - slope * mx;

    let (mut ss_res, mut ss_tot) = (0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let e = y - (slope * x + intercept);
        ss_res += e * e;
        ss_tot += (y - my) * (y - my);
    }
    let r_squared = if ss_tot > 0.0 {
        (1.0 - ss_res / ss_tot).clamp(0.0, 1.0)
    } else {
        1.0
    };

    Ok(LinearFit {
        slope,
        intercept,
        r_squared,
        n_points: n,
    })
}

pub fn fit_linear(points: &[(f64, f64)]) -> Result<LinearFit, CohortError> {
    let (xs, ys): (Vec<f64>, Vec<f64>) = points.iter().copied().unzip();
    ols(&xs, &ys)
}

/// Fit `I = a * p^b`. Points with `I <= 0` or `p <= 0` are skipped and
/// reported in the returned warnings.
pub fn fit_power_law(points: &[(f64, f64)]) -> Result<(PowerLawFit, Vec<String>), CohortError> {
    let mut warnings = Vec::new();
    let (mut lx, mut ly) = (Vec::new(), Vec::new());
    for (i, &(p, value)) in points.iter().enumerate() {
        if p > 0.0 && value > 0.0 {
            lx.push(p.ln());
            ly.push(value.ln());
        } else {
            warnings.push(format!(
                "point {} (p = {p}, I = {value}) excluded from the power-law fit: logarithm undefined",
                i + 1
            ));
        }
    }
    let line = ols(&lx, &ly)?;
    let fit = PowerLawFit {
        a: line.intercept.exp(),
        b: line.slope,
        r_squared: line.r_squared,
        n_points: line.n_points,
    };
    Ok((fit, warnings))
}
