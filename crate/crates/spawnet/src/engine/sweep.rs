//! Tick-sweep reference engine: every existing node is examined once per
//! tick, oldest first, against a literal countdown timer.

use super::{
    child_first_spawn, spawn_interval, EngineError, NodeRecord, RoundingRule, SimConfig, SimResult,
    SpawnEvent,
};
use num_rational::Ratio;

type Timer = Ratio<i64>;

/// Mutable state of a sweep run.
#[derive(Debug, Clone)]
pub struct NetworkState {
    /// Tick examined by the next `advance_tick` call.
    pub tick: u64,
    pub nodes: Vec<NodeRecord>,
    pub events: Vec<SpawnEvent>,
    pub births_per_tick: Vec<(u64, u32)>,
    rule: RoundingRule,
    /// Per-node countdown; the node spawns when examined at or below zero.
    timers: Vec<Timer>,
}

impl NetworkState {
    pub fn edge_count(&self) -> u64 {
        self.nodes.iter().filter(|n| n.parent_id.is_some()).count() as u64
    }

    pub fn degree_sum(&self) -> u64 {
        self.nodes.iter().map(|n| u64::from(n.degree)).sum()
    }
}

/// Initial state at tick 3: node 1 (spawns at 3) and node 2 (spawns at 4),
/// joined by one edge.
pub fn seed_network(rule: RoundingRule) -> NetworkState {
    let nodes = vec![
        NodeRecord {
            id: 1,
            parent_id: None,
            birth_tick: 1,
            degree: 1,
            next_spawn_tick: 3,
        },
        NodeRecord {
            id: 2,
            parent_id: Some(1),
            birth_tick: 2,
            degree: 1,
            next_spawn_tick: 4,
        },
    ];
    // At tick 3, node 1 is due now and node 2 one tick later.
    let timers = vec![Timer::from_integer(0), Timer::from_integer(1)];
    NetworkState {
        tick: 3,
        nodes,
        events: Vec::new(),
        births_per_tick: Vec::new(),
        rule,
        timers,
    }
}

fn reset_timer(t: u64, q_prior: u32, rule: RoundingRule) -> Timer {
    match rule {
        // Literal rule: timer = t/q - 1, kept exact.
        RoundingRule::Ceiling => Timer::new(t as i64, i64::from(q_prior)) - Timer::from_integer(1),
        // Floor variant realized through the rounded interval.
        RoundingRule::Floor => {
            let interval = spawn_interval(t, q_prior, RoundingRule::Floor)
                .expect("reachable states have t >= 1, q >= 1");
            Timer::from_integer(interval as i64 - 1)
        }
    }
}

/// Examine every node (ascending id), deliver due spawns, then advance the
/// global tick by one. Children born this tick are not examined until the
/// next call. Returns this tick's events.
pub fn advance_tick(state: &mut NetworkState) -> Vec<SpawnEvent> {
    let t = state.tick;
    let existing = state.nodes.len();
    let mut events = Vec::new();
    for idx in 0..existing {
        if state.timers[idx] <= Timer::from_integer(0) {
            let q_prior = state.nodes[idx].degree;
            let child_id = (state.nodes.len() + 1) as u32;
            let parent_id = state.nodes[idx].id;
            debug_assert_eq!(state.nodes[idx].next_spawn_tick, t);
            state.nodes[idx].degree += 1;
            state.timers[idx] = reset_timer(t, q_prior, state.rule);
            state.nodes[idx].next_spawn_tick = t + spawn_interval(t, q_prior, state.rule)
                .expect("reachable states have t >= 1, q >= 1");
            state.nodes.push(NodeRecord {
                id: child_id,
                parent_id: Some(parent_id),
                birth_tick: t,
                degree: 1,
                next_spawn_tick: child_first_spawn(t),
            });
            state.timers.push(Timer::from_integer(t as i64 - 1));
            events.push(SpawnEvent {
                tick: t,
                parent_id,
                child_id,
                parent_degree_after: q_prior + 1,
            });
        } else {
            state.timers[idx] -= Timer::from_integer(1);
        }
    }
    state.births_per_tick.push((t, events.len() as u32));
    state.events.extend_from_slice(&events);
    state.tick += 1;
    events
}

/// Run the sweep engine to completion under `config`.
pub fn run_sweep(config: &SimConfig) -> Result<SimResult, EngineError> {
    let mut state = seed_network(config.rounding_rule);
    let max_nodes = config.max_nodes.unwrap_or(u64::MAX);
    let max_ticks = config.max_ticks.unwrap_or(u64::MAX);
    let mut final_tick = max_ticks.min(state.tick - 1);
    while state.tick <= max_ticks && (state.nodes.len() as u64) < max_nodes {
        final_tick = state.tick;
        advance_tick(&mut state);
        if state.nodes.len() as u64 > config.hard_node_limit {
            return Err(EngineError::ResourceLimit {
                requested: state.nodes.len() as u64,
                limit: config.hard_node_limit,
            });
        }
    }
    if (state.nodes.len() as u64) < max_nodes {
        // Tick-limited run: every tick through max_ticks was swept.
        final_tick = max_ticks;
    }
    Ok(SimResult {
        config: config.clone(),
        final_tick,
        nodes: state.nodes,
        events: state.events,
        births_per_tick: state.births_per_tick,
    })
}
