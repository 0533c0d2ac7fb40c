//! Structural validation of a completed run: tree shape, label discipline,
//! ordering, and degree bookkeeping, all recomputed from the event log.

use super::SimResult;

/// One structural defect, with enough context to locate it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Violation {
    NodeCountMismatch {
        nodes: u64,
        events: u64,
    },
    ChildIdNotContiguous {
        position: usize,
        expected: u32,
        found: u32,
    },
    UnknownParent {
        event_position: usize,
        parent_id: u32,
    },
    ParentNotOlder {
        node_id: u32,
        parent_id: u32,
    },
    EventOrder {
        position: usize,
    },
    BirthTickOrder {
        node_id: u32,
    },
    DegreeMismatch {
        node_id: u32,
        recorded: u32,
        recomputed: u32,
    },
    DegreeSumMismatch {
        sum: u64,
        expected: u64,
    },
    Disconnected {
        node_id: u32,
    },
}

impl std::fmt::Display for Violation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Violation::NodeCountMismatch { nodes, events } => {
                write!(
                    f,
                    "expected nodes = events + 2, got {nodes} nodes / {events} events"
                )
            }
            Violation::ChildIdNotContiguous {
                position,
                expected,
                found,
            } => {
                write!(f, "event {position}: child id {found}, expected {expected}")
            }
            Violation::UnknownParent {
                event_position,
                parent_id,
            } => {
                write!(f, "event {event_position}: parent {parent_id} not yet born")
            }
            Violation::ParentNotOlder { node_id, parent_id } => {
                write!(
                    f,
                    "node {node_id} has parent {parent_id} with a higher label"
                )
            }
            Violation::EventOrder { position } => {
                write!(f, "event {position} breaks (tick, parent) ordering")
            }
            Violation::BirthTickOrder { node_id } => {
                write!(f, "node {node_id} born before its predecessor")
            }
            Violation::DegreeMismatch {
                node_id,
                recorded,
                recomputed,
            } => {
                write!(
                    f,
                    "node {node_id}: recorded degree {recorded}, event log gives {recomputed}"
                )
            }
            Violation::DegreeSumMismatch { sum, expected } => {
                write!(f, "degree sum {sum}, tree requires {expected}")
            }
            Violation::Disconnected { node_id } => {
                write!(f, "node {node_id} has no parent link")
            }
        }
    }
}

/// Outcome of `verify_tree`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TreeReport {
    pub node_count: u64,
    pub edge_count: u64,
    pub violations: Vec<Violation>,
}

impl TreeReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn first_violation(&self) -> Option<&Violation> {
        self.violations.first()
    }
}

/// Recompute the network from the event log and report every structural
/// violation (empty report means the run is a well-formed growth tree).
pub fn verify_tree(result: &SimResult) -> TreeReport {
    let mut violations = Vec::new();
    let nodes = &result.nodes;
    let events = &result.events;
    let n = nodes.len() as u64;

    if n != events.len() as u64 + 2 {
        violations.push(Violation::NodeCountMismatch {
            nodes: n,
            events: events.len() as u64,
        });
    }

    // Recompute degrees by replaying the log over the two seed nodes.
    let mut recomputed = vec![0u32; nodes.len() + 1];
    if !nodes.is_empty() {
        recomputed[1] = 1;
    }
    if nodes.len() >= 2 {
        recomputed[2] = 1;
    }
    for (pos, ev) in events.iter().enumerate() {
        let expected_child = (pos + 3) as u32;
        if ev.child_id != expected_child {
            violations.push(Violation::ChildIdNotContiguous {
                position: pos,
                expected: expected_child,
                found: ev.child_id,
            });
            continue;
        }
        if ev.parent_id == 0 || ev.parent_id >= ev.child_id {
            violations.push(Violation::UnknownParent {
                event_position: pos,
                parent_id: ev.parent_id,
            });
            continue;
        }
        if (ev.child_id as usize) < recomputed.len() {
            recomputed[ev.child_id as usize] = 1;
        }
        if (ev.parent_id as usize) < recomputed.len() {
            recomputed[ev.parent_id as usize] += 1;
        }
        if pos > 0 {
            let prev = &events[pos - 1];
            let ordered =
                prev.tick < ev.tick || (prev.tick == ev.tick && prev.parent_id < ev.parent_id);
            if !ordered {
                violations.push(Violation::EventOrder { position: pos });
            }
        }
    }

    let mut edge_count = 0u64;
    for (idx, node) in nodes.iter().enumerate() {
        match node.parent_id {
            Some(p) => {
                edge_count += 1;
                if p >= node.id {
                    violations.push(Violation::ParentNotOlder {
                        node_id: node.id,
                        parent_id: p,
                    });
                }
            }
            None => {
                if node.id != 1 {
                    violations.push(Violation::Disconnected { node_id: node.id });
                }
            }
        }
        if idx > 0 && node.birth_tick < nodes[idx - 1].birth_tick {
            violations.push(Violation::BirthTickOrder { node_id: node.id });
        }
        let expect = recomputed.get(node.id as usize).copied().unwrap_or(0);
        if node.degree != expect {
            violations.push(Violation::DegreeMismatch {
                node_id: node.id,
                recorded: node.degree,
                recomputed: expect,
            });
        }
    }

    let degree_sum: u64 = nodes.iter().map(|x| u64::from(x.degree)).sum();
    if n > 0 && degree_sum != 2 * (n - 1) {
        violations.push(Violation::DegreeSumMismatch {
            sum: degree_sum,
            expected: 2 * (n - 1),
        });
    }

    TreeReport {
        node_count: n,
        edge_count,
        violations,
    }
}
