use std::collections::BTreeSet;
use std::fmt::Write;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::{BehaviorGraph, EventsError};

/// A run through the behavior graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Trace {
    pub seed: u64,
    pub steps: Vec<String>,
}

impl Trace {
    /// `# seed=<n>` followed by one event id per line.
    pub fn to_text(&self) -> String {
        let mut out = format!("# seed={}\n", self.seed);
        for s in &self.steps {
            let _ = writeln!(out, "{s}");
        }
        out
    }
}

/// Walks the graph from a seeded uniform choice among `start`, then at each
/// step follows a seeded uniform choice among the current event's outgoing
/// edges. Stops after `max_steps` moves or at an event with no successors,
/// so a trace holds at most `max_steps + 1` events. Start events missing
/// from the graph are an [`EventsError::UnknownEvent`].
pub fn simulate(
    g: &BehaviorGraph,
    start: &BTreeSet<String>,
    seed: u64,
    max_steps: usize,
) -> Result<Trace, EventsError> {
    if start.is_empty() {
        return Err(EventsError::EmptyStartSet);
    }
    if let Some(bad) = start.iter().find(|s| !g.contains_event(s)) {
        return Err(EventsError::UnknownEvent(bad.clone()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let starts: Vec<&String> = start.iter().collect();
    let mut current = starts[rng.random_range(0..starts.len())].clone();
    let mut steps = vec![current.clone()];
    for _ in 0..max_steps {
        let out: Vec<_> = g.successors(&current).collect();
        if out.is_empty() {
            break;
        }
        current = out[rng.random_range(0..out.len())].to.clone();
        steps.push(current.clone());
    }
    Ok(Trace { seed, steps })
}
