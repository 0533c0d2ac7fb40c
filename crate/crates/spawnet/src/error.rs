use std::path::PathBuf;
use thiserror::Error;

/// Errors raised by the growth engine.
#[derive(Debug, Error, PartialEq, Eq)]
pub enum EngineError {
    #[error("spawn interval is undefined for a degree-zero parent")]
    ZeroDegree,
    #[error("spawn interval requires a positive tick, got {0}")]
    NonPositiveTick(u64),
    #[error("configuration needs at least one finite stop criterion")]
    NoStopCriterion,
    #[error("node count {requested} would exceed the configured hard limit {limit}")]
    ResourceLimit { requested: u64, limit: u64 },
}

/// Errors raised by the theory module.
#[derive(Debug, Error, PartialEq)]
pub enum TheoryError {
    #[error("master-equation normalization drifted to {drift:e} at n={n} (limit 1e-9)")]
    NormalizationDrift { n: u64, drift: f64 },
    #[error("evolution target {target} is not beyond the current count {current}")]
    TargetNotAhead { current: u64, target: u64 },
    #[error("q_cap must be at least 1")]
    EmptySupport,
}

/// Errors raised by the statistics toolkit.
#[derive(Debug, Error, PartialEq)]
pub enum StatsError {
    #[error("empty input")]
    EmptyInput,
    #[error("need at least {needed} tail samples at x_min={x_min}, found {got}")]
    TooFewTailSamples {
        needed: usize,
        got: usize,
        x_min: f64,
    },
    #[error("need at least {needed} samples to scan x_min, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("degenerate sample: zero spread above the cutoff")]
    Degenerate,
    #[error("value {value} is outside the support 1..={support_n}")]
    OutOfSupport { value: u64, support_n: u64 },
    #[error("parameter {name} must be non-negative, got {value}")]
    NegativeParameter { name: &'static str, value: f64 },
    #[error("search did not reach tolerance {tolerance} within {iterations} iterations")]
    NonConvergence { iterations: usize, tolerance: f64 },
    #[error("window [{lo}, {hi}] is outside the series range [{series_lo}, {series_hi}]")]
    WindowOutOfRange {
        lo: u64,
        hi: u64,
        series_lo: u64,
        series_hi: u64,
    },
    #[error("series lengths differ: {left} vs {right}")]
    LengthMismatch { left: usize, right: usize },
    #[error("too few usable points for a fit: {got} (need {needed})")]
    TooFewPoints { needed: usize, got: usize },
}

/// Errors raised by serialization and deserialization.
#[derive(Debug, Error)]
pub enum ExportError {
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("missing file: {0}")]
    MissingFile(PathBuf),
    #[error("event log digest mismatch: manifest {expected:#018x}, recomputed {actual:#018x}")]
    DigestMismatch { expected: u64, actual: u64 },
    #[error("{path}:{line}: malformed record: {detail}")]
    Malformed {
        path: PathBuf,
        line: usize,
        detail: String,
    },
    #[error("cross-check failed: {0}")]
    CrossCheck(String),
    #[error("node limit must be at least 2, got {0}")]
    NodeLimitTooSmall(u64),
    #[error(transparent)]
    Engine(#[from] EngineError),
}
