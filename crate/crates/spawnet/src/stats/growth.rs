//! Log-log power-curve fitting for cumulative growth series.
//!
//! A growth series `y(t) = A * t^beta` becomes a straight line after taking
//! logs of both axes, so the fit is an ordinary least-squares line on
//! `(ln t, ln y)`. Ticks or values that are zero (or negative) have no
//! logarithm; they are dropped before fitting and the number of dropped
//! points is reported so callers can tell how much of the series was usable.

use serde::Serialize;

use crate::error::StatsError;

/// Minimum usable points for a two-parameter line fit with a residual term.
const MIN_POINTS: usize = 3;

/// Result of fitting `y = amplitude * t^exponent` by log-log least squares.
#[derive(Debug, Clone, Serialize)]
pub struct GrowthFit {
    /// Multiplicative prefactor `A`.
    pub amplitude: f64,
    /// Power-law exponent `beta`.
    pub exponent: f64,
    /// Coefficient of determination of the line fit in log-log space.
    pub r_squared: f64,
    /// Number of input points dropped because tick or value was not positive.
    pub excluded_points: usize,
}

/// Fit `y = A * t^beta` to `(ticks, values)` by least squares in log space.
///
/// Points where either coordinate is non-positive are excluded (their count
/// is recorded on the result). Errors when the slices differ in length or
/// when fewer than three usable points remain.
pub fn fit_growth_power_law(ticks: &[u64], values: &[f64]) -> Result<GrowthFit, StatsError> {
    if ticks.len() != values.len() {
        return Err(StatsError::LengthMismatch {
            left: ticks.len(),
            right: values.len(),
        });
    }
    if ticks.is_empty() {
        return Err(StatsError::EmptyInput);
    }

    let mut xs = Vec::with_capacity(ticks.len());
    let mut ys = Vec::with_capacity(ticks.len());
    for (&t, &v) in ticks.iter().zip(values.iter()) {
        // Both coordinates must log cleanly; NaN and infinities are
        // excluded along with non-positive values.
        let usable = t > 0 && v.is_finite() && v > 0.0;
        if !usable {
            continue;
        }
        xs.push((t as f64).ln());
        ys.push(v.ln());
    }
    let excluded_points = ticks.len() - xs.len();
    if xs.len() < MIN_POINTS {
        return Err(StatsError::TooFewPoints {
            needed: MIN_POINTS,
            got: xs.len(),
        });
    }

    let n = xs.len() as f64;
    let mean_x = xs.iter().sum::<f64>() / n;
    let mean_y = ys.iter().sum::<f64>() / n;
    let mut sxx = 0.0;
    let mut sxy = 0.0;
    let mut syy = 0.0;
    for (&x, &y) in xs.iter().zip(ys.iter()) {
        let dx = x - mean_x;
        let dy = y - mean_y;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if sxx == 0.0 {
        // All usable ticks identical: the slope is undetermined.
        return Err(StatsError::Degenerate);
    }

    let exponent = sxy / sxx;
    let intercept = mean_y - exponent * mean_x;

    // r^2 from residuals so that an exact line yields exactly 1 even when
    // syy has rounding jitter.
    let r_squared = if syy == 0.0 {
        1.0
    } else {
        let mut ss_res = 0.0;
        for (&x, &y) in xs.iter().zip(ys.iter()) {
            let r = y - (intercept + exponent * x);
            ss_res += r * r;
        }
        1.0 - ss_res / syy
    };

    Ok(GrowthFit {
        amplitude: intercept.exp(),
        exponent,
        r_squared,
        excluded_points,
    })
}
