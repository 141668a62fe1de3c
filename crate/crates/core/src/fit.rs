//! Least-squares scaling fits of the GHZ-build time against system size.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::schedule::solve_hypercube_times;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum FitModel {
    /// `T(L) ~ L^beta`, fitted as `ln T` vs `ln L`.
    PowerLaw,
    /// `T(L) ~ beta * ln L`, fitted as `T` vs `ln L`.
    Logarithmic,
}

impl std::fmt::Display for FitModel {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            FitModel::PowerLaw => write!(f, "power-law"),
            FitModel::Logarithmic => write!(f, "logarithmic"),
        }
    }
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct ScalingFit {
    /// Fitted exponent (power-law) or log coefficient (logarithmic).
    pub beta: f64,
    pub window: (usize, usize),
    pub r_squared: f64,
    pub model: FitModel,
}

/// Output of [`fit_scaling`]: the power-law fit always, plus the logarithmic
/// fit when `alpha == d` (where the expected scaling is `ln L`).
#[derive(Debug, Clone, Serialize)]
pub struct ScalingAnalysis {
    pub d: usize,
    pub alpha: f64,
    pub power_law: ScalingFit,
    pub logarithmic: Option<ScalingFit>,
}

/// Solve schedules up to `l_max` and fit the one-way GHZ-build time
/// `T(L) = sum_{q <= L} t_q` over the window `[window_fraction * l_max, l_max]`.
///
/// `alpha == d` is detected by exact comparison of the supplied values; the
/// caller chooses which model to read off the dual output.
pub fn fit_scaling(
    d: usize,
    alpha: f64,
    l_max: usize,
    window_fraction: f64,
) -> Result<ScalingAnalysis> {
    if l_max < 20 {
        return Err(Error::InvalidParameter(format!(
            "l_max = {l_max} too small (need >= 20)"
        )));
    }
    if !(window_fraction > 0.0 && window_fraction < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "window fraction {window_fraction} outside (0, 1)"
        )));
    }
    let schedule = solve_hypercube_times(l_max, d, alpha)?;
    fit_from_cumulative(d, alpha, &schedule.cumulative, l_max, window_fraction)
}

/// Fit from an existing solve; `cumulative[q-1]` must hold `T(q)`.
pub fn fit_from_cumulative(
    d: usize,
    alpha: f64,
    cumulative: &[f64],
    l_max: usize,
    window_fraction: f64,
) -> Result<ScalingAnalysis> {
    let l_min = (window_fraction * l_max as f64).ceil() as usize;
    let l_min = l_min.max(1);
    if l_max < l_min || l_max - l_min + 1 < 5 {
        return Err(Error::DegenerateFitWindow {
            points: l_max.saturating_sub(l_min) + 1,
        });
    }
    let window = (l_min, l_max);

    let log_log: Vec<(f64, f64)> = (l_min..=l_max)
        .map(|l| ((l as f64).ln(), cumulative[l - 1].ln()))
        .collect();
    let (beta, _, r2) = linear_regression(&log_log);
    let power_law = ScalingFit {
        beta,
        window,
        r_squared: r2,
        model: FitModel::PowerLaw,
    };

    let logarithmic = if alpha == d as f64 {
        let lin_log: Vec<(f64, f64)> = (l_min..=l_max)
            .map(|l| ((l as f64).ln(), cumulative[l - 1]))
            .collect();
        let (slope, _, r2) = linear_regression(&lin_log);
        Some(ScalingFit {
            beta: slope,
            window,
            r_squared: r2,
            model: FitModel::Logarithmic,
        })
    } else {
        None
    };

    Ok(ScalingAnalysis {
        d,
        alpha,
        power_law,
        logarithmic,
    })
}

/// Ordinary least squares; returns `(slope, intercept, r_squared)`.
pub fn linear_regression(points: &[(f64, f64)]) -> (f64, f64, f64) {
    let n = points.len() as f64;
    let mean_x = points.iter().map(|(x, _)| x).sum::<f64>() / n;
    let mean_y = points.iter().map(|(_, y)| y).sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for &(x, y) in points {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    let slope = sxy / sxx;
    let intercept = mean_y - slope * mean_x;
    let r_squared = if syy == 0.0 { 1.0 } else { (sxy * sxy) / (sxx * syy) };
    (slope, intercept, r_squared)
}

/// Exponent predicted by the shell-time bound: `clamp(alpha - d, 0, 1)`.
pub fn predicted_beta(d: usize, alpha: f64) -> f64 {
    (alpha - d as f64).clamp(0.0, 1.0)
}
