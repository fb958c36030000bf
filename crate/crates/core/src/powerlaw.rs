//! Least-squares power-law fits in log–log space.
//!
//! The model is `ln F(k) = -a·ln k + b`, fitted by unweighted ordinary least
//! squares over the stored spectrum points whose `k` lies in the requested
//! range. Natural logarithms throughout.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::freqstats::{Count, FreqSpectrum};
use crate::numeric::compensated_sum;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PowerLawFit {
    /// Slope magnitude: the fitted line has slope `-a`.
    pub a: f64,
    /// Intercept, i.e. the fitted `ln F(1)`.
    pub b: f64,
    /// Root-mean-square residual in log space.
    pub rmse: f64,
    pub points_used: usize,
    /// Smallest `k` among the points used.
    pub k_min: u64,
    /// Largest `k` among the points used.
    pub k_max: u64,
}

/// Inclusive `k` window for [`fit_loglog`]. `k_max = None` means "up to the
/// largest stored k".
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct FitRange {
    pub k_min: u64,
    pub k_max: Option<u64>,
}

impl Default for FitRange {
    fn default() -> Self {
        FitRange { k_min: 1, k_max: None }
    }
}

impl FitRange {
    pub fn contains(&self, k: u64) -> bool {
        k >= self.k_min && self.k_max.is_none_or(|hi| k <= hi)
    }
}

/// Slope and intercept of the OLS line through `(x, y)` points, plus the
/// RMS residual. Needs at least two distinct `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LineFit {
    pub slope: f64,
    pub intercept: f64,
    pub rmse: f64,
}

pub fn ols_line(points: &[(f64, f64)]) -> Result<LineFit> {
    let n = points.len();
    if n < 2 {
        return Err(Error::InsufficientPoints { found: n });
    }
    let nf = n as f64;
    let x_mean = compensated_sum(points.iter().map(|p| p.0)) / nf;
    let y_mean = compensated_sum(points.iter().map(|p| p.1)) / nf;
    let sxx = compensated_sum(points.iter().map(|p| (p.0 - x_mean).powi(2)));
    let sxy = compensated_sum(points.iter().map(|p| (p.0 - x_mean) * (p.1 - y_mean)));
    if sxx <= 0.0 || !sxx.is_finite() {
        return Err(Error::InsufficientPoints { found: 1 });
    }
    let slope = sxy / sxx;
    let intercept = y_mean - slope * x_mean;
    let sse = compensated_sum(points.iter().map(|&(x, y)| (y - (slope * x + intercept)).powi(2)));
    Ok(LineFit {
        slope,
        intercept,
        rmse: (sse / nf).sqrt(),
    })
}

/// Fit `ln F(k) = -a·ln k + b` over the spectrum points inside `range`.
pub fn fit_loglog<C: Count>(spec: &FreqSpectrum<C>, range: FitRange) -> Result<PowerLawFit> {
    let used: Vec<(u64, f64)> = spec
        .points()
        .filter(|&(k, _)| range.contains(k))
        .map(|(k, f)| (k, f.to_f64()))
        .collect();
    if used.len() < 2 {
        return Err(Error::InsufficientPoints { found: used.len() });
    }
    let xy: Vec<(f64, f64)> = used.iter().map(|&(k, f)| ((k as f64).ln(), f.ln())).collect();
    let line = ols_line(&xy)?;
    Ok(PowerLawFit {
        a: -line.slope,
        b: line.intercept,
        rmse: line.rmse,
        points_used: used.len(),
        k_min: used[0].0,
        k_max: used[used.len() - 1].0,
    })
}

/// Model value `F(k) = e^b · k^{-a}`.
pub fn predicted_f(k: u64, fit: &PowerLawFit) -> f64 {
    (fit.b - fit.a * (k as f64).ln()).exp()
}
