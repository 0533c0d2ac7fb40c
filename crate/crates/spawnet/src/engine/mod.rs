//! Deterministic growth engine.
//!
//! Two interchangeable realizations produce identical event logs: a tick-sweep
//! reference that literally examines every node each tick, and an event-driven
//! engine that jumps between scheduled spawn times on a priority queue.

mod event;
mod sweep;
mod verify;

pub use event::run_event_driven;
pub use sweep::{advance_tick, run_sweep, seed_network, NetworkState};
pub use verify::{verify_tree, TreeReport, Violation};

use crate::error::EngineError;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

/// How a fractional spawn interval is turned into whole ticks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RoundingRule {
    /// Interval `ceil(t/q)`: the literal consequence of an exact countdown
    /// timer `t/q - 1` that must be observed at or below zero.
    #[default]
    Ceiling,
    /// Interval `max(1, floor(t/q))`, for sensitivity runs.
    Floor,
}

/// Which engine realization executes the run.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EngineKind {
    Sweep,
    #[default]
    EventDriven,
}

/// Run parameters; fixed for the lifetime of a run.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct SimConfig {
    /// Stop once the population reaches this size (the tick sweep completes
    /// first, so the final count may slightly exceed it).
    pub max_nodes: Option<u64>,
    /// Stop once the global tick passes this value.
    pub max_ticks: Option<u64>,
    #[serde(default)]
    pub rounding_rule: RoundingRule,
    #[serde(default)]
    pub engine: EngineKind,
    /// Hard memory-protection bound on the node count.
    #[serde(default = "default_hard_node_limit")]
    pub hard_node_limit: u64,
}

fn default_hard_node_limit() -> u64 {
    100_000_000
}

impl SimConfig {
    pub fn with_max_nodes(max_nodes: u64) -> Self {
        SimConfig {
            max_nodes: Some(max_nodes),
            max_ticks: None,
            rounding_rule: RoundingRule::default(),
            engine: EngineKind::default(),
            hard_node_limit: default_hard_node_limit(),
        }
    }

    pub fn with_max_ticks(max_ticks: u64) -> Self {
        SimConfig {
            max_nodes: None,
            max_ticks: Some(max_ticks),
            rounding_rule: RoundingRule::default(),
            engine: EngineKind::default(),
            hard_node_limit: default_hard_node_limit(),
        }
    }

    pub fn validate(&self) -> Result<(), EngineError> {
        if self.max_nodes.is_none() && self.max_ticks.is_none() {
            return Err(EngineError::NoStopCriterion);
        }
        if self.hard_node_limit > u64::from(u32::MAX - 2) {
            // Node labels are u32.
            return Err(EngineError::ResourceLimit {
                requested: self.hard_node_limit,
                limit: u64::from(u32::MAX - 2),
            });
        }
        Ok(())
    }
}

/// One vertex of the growing network.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct NodeRecord {
    /// Integer label in birth order, starting at 1.
    pub id: u32,
    /// Spawning parent; `None` only for node 1.
    pub parent_id: Option<u32>,
    pub birth_tick: u64,
    /// Edge count: parent link plus children spawned so far.
    pub degree: u32,
    /// Tick at which this node's countdown next expires.
    pub next_spawn_tick: u64,
}

/// One birth event.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SpawnEvent {
    pub tick: u64,
    pub parent_id: u32,
    pub child_id: u32,
    pub parent_degree_after: u32,
}

/// Complete deterministic outcome of a run.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimResult {
    /// The configuration that produced this run.
    pub config: SimConfig,
    /// Last tick swept (equals `max_ticks` when the run is tick-limited).
    pub final_tick: u64,
    pub nodes: Vec<NodeRecord>,
    pub events: Vec<SpawnEvent>,
    /// Dense series over every swept tick, zero counts included.
    pub births_per_tick: Vec<(u64, u32)>,
}

impl SimResult {
    pub fn node_count(&self) -> u64 {
        self.nodes.len() as u64
    }

    pub fn degree_sum(&self) -> u64 {
        self.nodes.iter().map(|n| u64::from(n.degree)).sum()
    }

    pub fn degrees(&self) -> Vec<u32> {
        self.nodes.iter().map(|n| n.degree).collect()
    }
}

/// Whole ticks until a parent of prior degree `q_prior` spawns again after a
/// birth at tick `t`.
///
/// The countdown timer is set to `t/q_prior - 1` and the spawn is discovered
/// one tick after it reaches zero, so the realized interval is `t/q_prior`,
/// rounded per rule when fractional and always at least 1.
pub fn spawn_interval(t: u64, q_prior: u32, rule: RoundingRule) -> Result<u64, EngineError> {
    if q_prior == 0 {
        return Err(EngineError::ZeroDegree);
    }
    if t == 0 {
        return Err(EngineError::NonPositiveTick(t));
    }
    let q = u64::from(q_prior);
    Ok(match rule {
        RoundingRule::Ceiling => t.div_ceil(q),
        RoundingRule::Floor => (t / q).max(1),
    })
}

/// First spawn tick of a child born at tick `t`: its timer starts at `t - 1`,
/// so with the one-tick discovery delay it first spawns at `2t`.
pub fn child_first_spawn(t: u64) -> u64 {
    debug_assert!(t >= 2);
    2 * t
}

/// Exact spawn-time recursion `T(n) = T(n-1) + T(n-1)/(n-1)`, evaluated in
/// rational arithmetic; collapses to `n * T1`.
pub fn spawn_time_recursion(t1: u64, n: u64) -> u64 {
    debug_assert!(t1 >= 1 && n >= 1);
    let mut t = Ratio::from_integer(t1 as u128);
    for k in 1..n as u128 {
        t += t / Ratio::from_integer(k);
    }
    debug_assert!(t.is_integer());
    u64::try_from(t.to_integer()).expect("spawn time overflows u64")
}

/// Run the configured engine to completion.
pub fn run(config: &SimConfig) -> Result<SimResult, EngineError> {
    config.validate()?;
    match config.engine {
        EngineKind::Sweep => run_sweep(config),
        EngineKind::EventDriven => run_event_driven(config),
    }
}
