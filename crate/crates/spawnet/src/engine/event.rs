//! Event-driven engine: instead of sweeping every node each tick, nodes wait
//! in a priority queue keyed on (next_spawn_tick, id) and whole ticks are
//! processed as batches. Observationally identical to the sweep engine.

use super::{
    child_first_spawn, spawn_interval, EngineError, NodeRecord, SimConfig, SimResult, SpawnEvent,
};
use std::cmp::Reverse;
use std::collections::BinaryHeap;

/// Run the event-driven engine to completion under `config`.
pub fn run_event_driven(config: &SimConfig) -> Result<SimResult, EngineError> {
    let max_nodes = config.max_nodes.unwrap_or(u64::MAX);
    let max_ticks = config.max_ticks.unwrap_or(u64::MAX);
    let rule = config.rounding_rule;

    let mut nodes = vec![
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
    let mut events: Vec<SpawnEvent> = Vec::new();
    let mut birth_counts: Vec<(u64, u32)> = Vec::new();
    // Min-heap orders by (tick, id): within one tick, parents pop oldest
    // first, which is exactly the sweep's examination order.
    let mut schedule: BinaryHeap<Reverse<(u64, u32)>> = BinaryHeap::new();
    schedule.push(Reverse((3, 1)));
    schedule.push(Reverse((4, 2)));

    let mut final_tick = max_ticks.min(2);
    while let Some(&Reverse((tick, _))) = schedule.peek() {
        if tick > max_ticks || nodes.len() as u64 >= max_nodes {
            break;
        }
        // Drain the whole tick: reschedules always land strictly later, so
        // the batch is closed under pops at this tick.
        let mut births_this_tick = 0u32;
        while let Some(&Reverse((t, id))) = schedule.peek() {
            if t != tick {
                break;
            }
            schedule.pop();
            let parent_idx = (id - 1) as usize;
            let q_prior = nodes[parent_idx].degree;
            let child_id = (nodes.len() + 1) as u32;
            nodes[parent_idx].degree = q_prior + 1;
            let next = tick + spawn_interval(tick, q_prior, rule)?;
            nodes[parent_idx].next_spawn_tick = next;
            schedule.push(Reverse((next, id)));
            let first = child_first_spawn(tick);
            nodes.push(NodeRecord {
                id: child_id,
                parent_id: Some(id),
                birth_tick: tick,
                degree: 1,
                next_spawn_tick: first,
            });
            schedule.push(Reverse((first, child_id)));
            events.push(SpawnEvent {
                tick,
                parent_id: id,
                child_id,
                parent_degree_after: q_prior + 1,
            });
            births_this_tick += 1;
        }
        birth_counts.push((tick, births_this_tick));
        final_tick = tick;
        if nodes.len() as u64 > config.hard_node_limit {
            return Err(EngineError::ResourceLimit {
                requested: nodes.len() as u64,
                limit: config.hard_node_limit,
            });
        }
    }
    if (nodes.len() as u64) < max_nodes {
        final_tick = max_ticks;
    }

    // Densify the births series over every conceptually swept tick.
    let mut births_per_tick = Vec::new();
    if final_tick >= 3 {
        births_per_tick.reserve((final_tick - 2) as usize);
        let mut it = birth_counts.iter().peekable();
        for t in 3..=final_tick {
            let count = match it.peek() {
                Some(&&(bt, c)) if bt == t => {
                    it.next();
                    c
                }
                _ => 0,
            };
            births_per_tick.push((t, count));
        }
    }

    Ok(SimResult {
        config: config.clone(),
        final_tick,
        nodes,
        events,
        births_per_tick,
    })
}
