//! Deterministic scale-free network generation and analysis.
//!
//! The model grows a tree from a two-node seed: every node runs a countdown
//! timer, and when the timer of a node with degree `q` expires at tick `t`,
//! the node spawns one child and resets the timer to `t/q - 1`. High-degree
//! nodes therefore spawn more often, and the degree distribution converges
//! to a power law with tail exponent 5/2.
//!
//! The crate is organized around five pieces:
//!
//! - [`engine`]: the growth process itself, in two observationally identical
//!   realizations — a tick-sweep reference and an event-driven fast path —
//!   plus structural verification of the resulting tree.
//! - [`theory`]: the stationary degree distribution three ways (exact
//!   recursion, Gamma-function closed form, power-law asymptote) and a
//!   finite-population master-equation evolver.
//! - [`stats`]: empirical distributions, power-law and Zipf maximum
//!   likelihood fitting, growth-curve regression, births-per-tick summaries,
//!   and reproducible sampling via a pinned generator.
//! - [`io`]: byte-deterministic serialization of runs, theory tables, and
//!   analysis reports, with digest-checked round trips.
//! - [`special`]: the few special functions the above need (log-Gamma, a
//!   log-Gamma ratio stable at large arguments, Hurwitz zeta).
//!
//! Everything is deterministic: same configuration, same output, down to
//! the serialized bytes.

pub mod engine;
pub mod error;
pub mod io;
pub mod special;
pub mod stats;
pub mod theory;

pub use engine::{run, RoundingRule, SimConfig, SimResult};
pub use error::{EngineError, ExportError, StatsError, TheoryError};
