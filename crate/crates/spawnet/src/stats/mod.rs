//! Empirical analysis of simulation outputs: distribution estimation,
//! power-law and Zipf fitting, growth-curve regression, births-per-tick
//! summaries, and pinned-PRNG sampling.
//!
//! Every operation here is a pure function: the same inputs (and seed,
//! where one applies) always produce identical outputs.

pub mod births;
pub mod empirical;
pub mod growth;
pub mod powerlaw;
pub mod report;
pub mod rng;
pub mod sampling;
pub mod zipf;

pub use births::{births_summary, BirthSeriesSummary};
pub use empirical::{build_empirical, degree_set_fractions, EmpiricalDistribution};
pub use growth::{fit_growth_power_law, GrowthFit};
pub use powerlaw::{fit_power_law_mle, scan_xmin, FitMode, PowerLawFit, ScanPoint};
pub use report::{
    build_report, degree_two_series, node_count_series, zipf_survival_overlay, AnalysisOptions,
    AnalysisReport, BirthsSection, GrowthSection, RunHeader, ZipfSection,
    ZIPF_REFERENCE_CANDIDATES,
};
pub use rng::SplitMix64;
pub use sampling::{
    sample_discrete_power_law, sample_empirical, sample_pareto_continuous, sample_zipf,
};
pub use zipf::{fit_zipf_mle, zipf_pmf, ZipfFit};
