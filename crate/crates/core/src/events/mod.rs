//! Events and behavior.
//!
//! An event is a region of the static model: a set of machines, stages,
//! storage nodes, and arcs. Events are linked into a behavior graph whose
//! paths give class methods their meaning. The static model never refers
//! back to events.

mod behavior;
mod regions;
mod simulate;
pub mod syntax;

use std::fmt;

use thiserror::Error;

use crate::lexer::ParseError;
use crate::tm::{Endpoint, ResolveError, StaticModel, Target};

pub use behavior::{
    build_behavior, check_method_paths, graph_from_document, recognize_methods, BehaviorGraph,
    BrokenPath, Edge, EventNode,
};
pub use regions::{region_components, validate_regions};
pub use simulate::{simulate, Trace};
pub use syntax::{parse_events_document, print_events_document, EventsDocument, MemberRef};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum EdgeKind {
    Sequence,
    Trigger,
}

impl fmt::Display for EdgeKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            EdgeKind::Sequence => "sequence",
            EdgeKind::Trigger => "trigger",
        })
    }
}

/// A resolved region member.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum RegionRef {
    Element(Target),
    /// Index into [`StaticModel::flows`].
    Flow(usize),
    /// Index into [`StaticModel::triggers`].
    Trigger(usize),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDef {
    pub id: String,
    pub description: String,
    pub region: Vec<RegionRef>,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum EventsError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("{line}:{column}: unknown reference `{name}`")]
    UnknownReference {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: ambiguous reference `{name}`")]
    AmbiguousReference {
        name: String,
        line: usize,
        column: usize,
    },
    #[error("{line}:{column}: duplicate event id `{id}`")]
    DuplicateEventId {
        id: String,
        line: usize,
        column: usize,
    },
    #[error("unknown event `{0}`")]
    UnknownEvent(String),
    #[error("method `{0}` defined twice")]
    DuplicateMethod(String),
    #[error("{} broken method path(s): {}", .0.len(), .0.iter().map(|b| b.to_string()).collect::<Vec<_>>().join("; "))]
    PathBroken(Vec<BrokenPath>),
    #[error("simulation needs at least one start event")]
    EmptyStartSet,
}

/// Resolves every region member of `doc` against `model`. Stage and
/// storage members must exist on their machine.
pub fn resolve_events(
    doc: &EventsDocument,
    model: &StaticModel,
) -> Result<Vec<EventDef>, EventsError> {
    let mut out: Vec<EventDef> = Vec::new();
    for decl in &doc.events {
        if out.iter().any(|e| e.id == decl.id) {
            return Err(EventsError::DuplicateEventId {
                id: decl.id.clone(),
                line: decl.pos.0.line,
                column: decl.pos.0.column,
            });
        }
        let mut region = Vec::new();
        for m in &decl.members {
            let pos = m.pos.0;
            let fail = |e: ResolveError| match e {
                ResolveError::Unknown(name) => EventsError::UnknownReference {
                    name,
                    line: pos.line,
                    column: pos.column,
                },
                ResolveError::Ambiguous(name) => EventsError::AmbiguousReference {
                    name,
                    line: pos.line,
                    column: pos.column,
                },
            };
            let endpoint = |segs: &[String]| -> Result<Endpoint, EventsError> {
                match model.resolve(segs).map_err(fail)? {
                    Target::Port(ep) if model.endpoint_exists(ep) => Ok(ep),
                    _ => Err(fail(ResolveError::Unknown(segs.join(".")))),
                }
            };
            let r = match &m.reference {
                MemberRef::Element(segs) => match model.resolve(segs).map_err(fail)? {
                    Target::Port(ep) if !model.endpoint_exists(ep) => {
                        return Err(fail(ResolveError::Unknown(segs.join("."))))
                    }
                    t => RegionRef::Element(t),
                },
                MemberRef::Flow(a, b) => {
                    let (a, b) = (endpoint(a)?, endpoint(b)?);
                    let idx = model
                        .flows
                        .iter()
                        .position(|f| f.from == a && f.to == b)
                        .ok_or_else(|| fail(ResolveError::Unknown(m.reference.to_text())))?;
                    RegionRef::Flow(idx)
                }
                MemberRef::Trigger(a, b) => {
                    let (a, b) = (endpoint(a)?, endpoint(b)?);
                    let idx = model
                        .triggers
                        .iter()
                        .position(|t| t.from == a && t.to == b)
                        .ok_or_else(|| fail(ResolveError::Unknown(m.reference.to_text())))?;
                    RegionRef::Trigger(idx)
                }
            };
            if !region.contains(&r) {
                region.push(r);
            }
        }
        out.push(EventDef {
            id: decl.id.clone(),
            description: decl.description.clone(),
            region,
        });
    }
    Ok(out)
}

/// Parses an events file against a static model: regions are resolved and
/// edges and methods are checked to name declared events. Method paths are
/// not required to follow edges here; see [`check_method_paths`].
pub fn parse_events(
    text: &str,
    model: &StaticModel,
) -> Result<(Vec<EventDef>, BehaviorGraph), EventsError> {
    let doc = parse_events_document(text)?;
    let events = resolve_events(&doc, model)?;
    let graph = graph_from_document(&doc)?;
    Ok((events, graph))
}

/// Text for a region member, using full machine paths.
pub fn region_ref_text(model: &StaticModel, r: RegionRef) -> String {
    match r {
        RegionRef::Element(Target::Machine(id)) => model.machine_path(id),
        RegionRef::Element(Target::Port(ep)) => model.endpoint_path(ep),
        RegionRef::Flow(i) => match model.flows.get(i) {
            Some(f) => format!(
                "flow {} -> {}",
                model.endpoint_path(f.from),
                model.endpoint_path(f.to)
            ),
            None => format!("flow #{i}"),
        },
        RegionRef::Trigger(i) => match model.triggers.get(i) {
            Some(t) => format!(
                "trigger {} -> {}",
                model.endpoint_path(t.from),
                model.endpoint_path(t.to)
            ),
            None => format!("trigger #{i}"),
        },
    }
}
