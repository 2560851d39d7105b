use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use super::syntax::EventsDocument;
use super::{EdgeKind, EventsError};
use crate::report::{error, ValidationReport};

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct EventNode {
    pub id: String,
    pub description: String,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
}

/// Consecutive pair of a method path with no edge between them.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BrokenPath {
    pub method: String,
    pub from: String,
    pub to: String,
}

impl fmt::Display for BrokenPath {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}: no edge {} -> {}", self.method, self.from, self.to)
    }
}

/// Events, their successor edges, and method bindings (method name →
/// event path). Event regions live in [`EventDef`](super::EventDef)s.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BehaviorGraph {
    events: BTreeMap<String, String>,
    edges: Vec<Edge>,
    methods: BTreeMap<String, Vec<String>>,
}

impl BehaviorGraph {
    pub fn events(&self) -> impl Iterator<Item = EventNode> + '_ {
        self.events.iter().map(|(id, d)| EventNode {
            id: id.clone(),
            description: d.clone(),
        })
    }

    pub fn event_ids(&self) -> impl Iterator<Item = &str> {
        self.events.keys().map(String::as_str)
    }

    pub fn contains_event(&self, id: &str) -> bool {
        self.events.contains_key(id)
    }

    /// Edges sorted by (from, to, kind).
    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn methods(&self) -> &BTreeMap<String, Vec<String>> {
        &self.methods
    }

    pub fn has_edge(&self, from: &str, to: &str) -> bool {
        self.edges.iter().any(|e| e.from == from && e.to == to)
    }

    /// Outgoing edges of `id` in sorted order.
    pub fn successors<'a>(&'a self, id: &'a str) -> impl Iterator<Item = &'a Edge> + 'a {
        self.edges.iter().filter(move |e| e.from == id)
    }

    /// Events with no incoming edge, or every event when there are none.
    pub fn entry_events(&self) -> BTreeSet<String> {
        let targets: BTreeSet<&str> = self.edges.iter().map(|e| e.to.as_str()).collect();
        let sources: BTreeSet<String> = self
            .events
            .keys()
            .filter(|id| !targets.contains(id.as_str()))
            .cloned()
            .collect();
        if sources.is_empty() {
            self.events.keys().cloned().collect()
        } else {
            sources
        }
    }
}

/// Assembles a graph and checks that edge endpoints and method events are
/// declared. Method paths are not checked against edges.
fn assemble(
    events: Vec<EventNode>,
    edges: Vec<Edge>,
    methods: Vec<(String, Vec<String>)>,
) -> Result<BehaviorGraph, EventsError> {
    let mut g = BehaviorGraph::default();
    for e in events {
        if g.events.contains_key(&e.id) {
            return Err(EventsError::DuplicateEventId {
                id: e.id,
                line: 0,
                column: 0,
            });
        }
        g.events.insert(e.id, e.description);
    }
    for e in &edges {
        for id in [&e.from, &e.to] {
            if !g.events.contains_key(id) {
                return Err(EventsError::UnknownEvent(id.clone()));
            }
        }
    }
    g.edges = edges;
    g.edges.sort();
    g.edges.dedup();
    for (name, path) in methods {
        if let Some(id) = path.iter().find(|id| !g.events.contains_key(*id)) {
            return Err(EventsError::UnknownEvent(id.clone()));
        }
        if g.methods.insert(name.clone(), path).is_some() {
            return Err(EventsError::DuplicateMethod(name));
        }
    }
    Ok(g)
}

/// Builds a behavior graph and rejects it unless every method path runs
/// along edges.
pub fn build_behavior(
    events: Vec<EventNode>,
    edges: Vec<Edge>,
    methods: Vec<(String, Vec<String>)>,
) -> Result<BehaviorGraph, EventsError> {
    let g = assemble(events, edges, methods)?;
    let broken = broken_paths(&g);
    if broken.is_empty() {
        Ok(g)
    } else {
        Err(EventsError::PathBroken(broken))
    }
}

/// Graph from a parsed events file, without the method-path gate, so that
/// broken paths can be reported rather than refused.
pub fn graph_from_document(doc: &EventsDocument) -> Result<BehaviorGraph, EventsError> {
    for (i, e) in doc.events.iter().enumerate() {
        if doc.events[..i].iter().any(|p| p.id == e.id) {
            return Err(EventsError::DuplicateEventId {
                id: e.id.clone(),
                line: e.pos.0.line,
                column: e.pos.0.column,
            });
        }
    }
    assemble(
        doc.events
            .iter()
            .map(|e| EventNode {
                id: e.id.clone(),
                description: e.description.clone(),
            })
            .collect(),
        doc.edges
            .iter()
            .map(|e| Edge {
                from: e.from.clone(),
                to: e.to.clone(),
                kind: e.kind,
            })
            .collect(),
        doc.methods
            .iter()
            .map(|m| (m.name.clone(), m.path.clone()))
            .collect(),
    )
}

fn broken_paths(g: &BehaviorGraph) -> Vec<BrokenPath> {
    let mut out = Vec::new();
    for (name, path) in &g.methods {
        for pair in path.windows(2) {
            if !g.has_edge(&pair[0], &pair[1]) {
                out.push(BrokenPath {
                    method: name.clone(),
                    from: pair[0].clone(),
                    to: pair[1].clone(),
                });
            }
        }
    }
    out
}

/// Reports a `PATH_BROKEN` finding for every consecutive pair of a method
/// path that is not an edge.
pub fn check_method_paths(g: &BehaviorGraph) -> ValidationReport {
    ValidationReport::from_findings(
        broken_paths(g)
            .into_iter()
            .map(|b| {
                error(
                    crate::report::Code::PathBroken,
                    format!("method {}", b.method),
                    format!("no edge {} -> {}", b.from, b.to),
                )
            })
            .collect(),
    )
}

/// Every contiguous occurrence of every method path in `trace`, as
/// (method, 0-based start index), sorted by index then name.
pub fn recognize_methods(g: &BehaviorGraph, trace: &[String]) -> Vec<(String, usize)> {
    let mut out = Vec::new();
    for (name, path) in &g.methods {
        if path.is_empty() || path.len() > trace.len() {
            continue;
        }
        for (i, window) in trace.windows(path.len()).enumerate() {
            if window == path.as_slice() {
                out.push((name.clone(), i));
            }
        }
    }
    out.sort_by(|a, b| (a.1, &a.0).cmp(&(b.1, &b.0)));
    out
}
