//! Summary statistics over a per-tick birth-count series.
//!
//! The simulation reports one `(tick, births)` pair per swept tick. Analyses
//! often focus on a sub-window of the run, so the summary takes an optional
//! inclusive tick window; every tick inside the window counts toward the
//! averages, with ticks missing from the series treated as zero births.

use serde::Serialize;

use crate::error::StatsError;

/// Moments and extremes of a birth series over an inclusive tick window.
#[derive(Debug, Clone, Serialize)]
pub struct BirthSeriesSummary {
    /// Mean births per tick over the window (missing ticks count as zero).
    pub mean: f64,
    /// Population standard deviation over the window.
    pub std_dev: f64,
    /// Largest single-tick birth count in the window.
    pub max: u32,
    /// Number of ticks in the window with zero births.
    pub zero_ticks: u64,
    /// The inclusive `(lo, hi)` tick window the summary covers.
    pub window: (u64, u64),
}

/// Summarize `(tick, births)` pairs over `window` (default: the full series).
///
/// The series must be sorted by tick with no duplicates, as produced by the
/// simulation. The window must lie inside the series' tick range; the mean
/// is taken over every tick in the window, so `mean * window length` equals
/// the total number of births in the window.
pub fn births_summary(
    series: &[(u64, u32)],
    window: Option<(u64, u64)>,
) -> Result<BirthSeriesSummary, StatsError> {
    if series.is_empty() {
        return Err(StatsError::EmptyInput);
    }
    debug_assert!(
        series.windows(2).all(|w| w[0].0 < w[1].0),
        "birth series must be strictly increasing in tick"
    );
    let series_lo = series[0].0;
    let series_hi = series[series.len() - 1].0;
    let (lo, hi) = window.unwrap_or((series_lo, series_hi));
    if lo > hi || lo < series_lo || hi > series_hi {
        return Err(StatsError::WindowOutOfRange {
            lo,
            hi,
            series_lo,
            series_hi,
        });
    }

    let start = series.partition_point(|&(t, _)| t < lo);
    let end = series.partition_point(|&(t, _)| t <= hi);
    let window_len = hi - lo + 1;

    let mut total: u64 = 0;
    let mut sum_sq: f64 = 0.0;
    let mut max: u32 = 0;
    let mut nonzero: u64 = 0;
    for &(_, c) in &series[start..end] {
        total += u64::from(c);
        sum_sq += f64::from(c) * f64::from(c);
        max = max.max(c);
        if c > 0 {
            nonzero += 1;
        }
    }

    let n = window_len as f64;
    let mean = total as f64 / n;
    let variance = (sum_sq / n - mean * mean).max(0.0);
    Ok(BirthSeriesSummary {
        mean,
        std_dev: variance.sqrt(),
        max,
        zero_ticks: window_len - nonzero,
        window: (lo, hi),
    })
}
