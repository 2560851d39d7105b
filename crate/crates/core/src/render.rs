//! Graphviz DOT output for the three levels of description: the static
//! model, the event overlay, and the behavior graph.
//!
//! Machines become nested `cluster_m<n>` subgraphs following containment,
//! numbered in name order. Flows are solid edges and triggers dashed.
//! Every machine cluster carries an invisible anchor node `m<n>` so that
//! empty machines still render and whole-machine region members have
//! something to point at.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;
use std::str::FromStr;

use thiserror::Error;

use crate::events::{BehaviorGraph, EdgeKind, EventDef, RegionRef};
use crate::tm::{Direction, Endpoint, MachineId, Port, StageKind, StaticModel, Target};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum View {
    Static,
    Events,
    Behavior,
}

impl FromStr for View {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "static" => Ok(View::Static),
            "events" => Ok(View::Events),
            "behavior" => Ok(View::Behavior),
            other => Err(format!("unknown view `{other}` (static, events, behavior)")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderOptions {
    pub show_storage: bool,
    pub condition_labels: bool,
}

impl Default for RenderOptions {
    fn default() -> Self {
        RenderOptions {
            show_storage: true,
            condition_labels: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RenderView {
    pub view: View,
    pub options: RenderOptions,
}

impl RenderView {
    pub fn new(view: View) -> Self {
        RenderView {
            view,
            options: RenderOptions::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RenderError {
    #[error("the {0} view needs {1}")]
    MissingInput(&'static str, &'static str),
}

fn esc(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

fn port_slug(p: Port) -> &'static str {
    match p {
        Port::Stage(StageKind::Create) => "create",
        Port::Stage(StageKind::Process) => "process",
        Port::Stage(StageKind::Release) => "release",
        Port::Stage(StageKind::Transfer(Direction::In)) => "transfer_in",
        Port::Stage(StageKind::Transfer(Direction::Out)) => "transfer_out",
        Port::Stage(StageKind::Receive) => "receive",
        Port::Storage => "storage",
    }
}

struct Layout {
    /// Canonical number of each rendered machine.
    number: BTreeMap<MachineId, usize>,
    declared: BTreeSet<String>,
}

impl Layout {
    fn node(&self, ep: Endpoint) -> Option<String> {
        let n = self.number.get(&ep.machine)?;
        let id = format!("m{n}_{}", port_slug(ep.port));
        self.declared.contains(&id).then_some(id)
    }

    fn anchor(&self, id: MachineId) -> Option<String> {
        self.number.get(&id).map(|n| format!("m{n}"))
    }
}

fn sorted_children(model: &StaticModel, parent: Option<MachineId>) -> Vec<MachineId> {
    let mut ids: Vec<_> = model
        .ids()
        .filter(|&c| model.machines[c.0].parent == parent)
        .collect();
    ids.sort_by(|a, b| (&model.machines[a.0].name, a).cmp(&(&model.machines[b.0].name, b)));
    ids
}

fn emit_machine(
    model: &StaticModel,
    id: MachineId,
    depth: usize,
    opts: &RenderOptions,
    layout: &mut Layout,
    out: &mut String,
) {
    let n = layout.number.len();
    layout.number.insert(id, n);
    let m = &model.machines[id.0];
    let pad = "  ".repeat(depth);
    let _ = writeln!(out, "{pad}subgraph cluster_m{n} {{");
    let _ = writeln!(out, "{pad}  label={};", esc(&m.name));
    let _ = writeln!(out, "{pad}  m{n} [shape=point, style=invis, label=\"\"];");
    layout.declared.insert(format!("m{n}"));
    let mut stages = m.stages.clone();
    stages.sort();
    stages.dedup_by_key(|s| s.kind);
    for s in stages {
        let id = format!("m{n}_{}", port_slug(Port::Stage(s.kind)));
        let label = if s.decreate {
            "decreate".to_string()
        } else {
            s.kind.to_string()
        };
        let _ = writeln!(out, "{pad}  {id} [label={}];", esc(&label));
        layout.declared.insert(id);
    }
    if m.storage > 0 && opts.show_storage {
        let id = format!("m{n}_storage");
        let _ = writeln!(out, "{pad}  {id} [label=\"storage\", shape=cylinder];");
        layout.declared.insert(id);
    }
    for c in sorted_children(model, Some(id)) {
        emit_machine(model, c, depth + 1, opts, layout, out);
    }
    let _ = writeln!(out, "{pad}}}");
}

fn emit_static_body(model: &StaticModel, opts: &RenderOptions, out: &mut String) -> Layout {
    let mut layout = Layout {
        number: BTreeMap::new(),
        declared: BTreeSet::new(),
    };
    for root in sorted_children(model, None) {
        emit_machine(model, root, 1, opts, &mut layout, out);
    }

    let mut flows: Vec<String> = model
        .flows
        .iter()
        .filter_map(|f| {
            let (a, b) = (layout.node(f.from)?, layout.node(f.to)?);
            Some(match &f.label {
                Some(l) => format!("  {a} -> {b} [style=solid, label={}];", esc(l)),
                None => format!("  {a} -> {b} [style=solid];"),
            })
        })
        .collect();
    flows.sort();
    let mut triggers: Vec<String> = model
        .triggers
        .iter()
        .filter_map(|t| {
            let (a, b) = (layout.node(t.from)?, layout.node(t.to)?);
            Some(match &t.condition {
                Some(c) if opts.condition_labels => {
                    format!("  {a} -> {b} [style=dashed, label={}];", esc(c))
                }
                _ => format!("  {a} -> {b} [style=dashed];"),
            })
        })
        .collect();
    triggers.sort();
    for line in flows.into_iter().chain(triggers) {
        out.push_str(&line);
        out.push('\n');
    }
    layout
}

/// Renders the requested view as a DOT digraph. The events view needs
/// `events`; the behavior view needs `graph`. Output is deterministic.
pub fn emit_dot(
    model: &StaticModel,
    events: Option<&[EventDef]>,
    graph: Option<&BehaviorGraph>,
    view: &RenderView,
) -> Result<String, RenderError> {
    let mut out = String::new();
    match view.view {
        View::Static => {
            out.push_str("digraph tm {\n  compound=true;\n  node [shape=box, style=rounded];\n");
            emit_static_body(model, &view.options, &mut out);
        }
        View::Events => {
            let events = events.ok_or(RenderError::MissingInput("events", "an events file"))?;
            out.push_str(
                "digraph tm_events {\n  compound=true;\n  node [shape=box, style=rounded];\n",
            );
            let layout = emit_static_body(model, &view.options, &mut out);
            for (k, e) in events.iter().enumerate() {
                let _ = writeln!(out, "  subgraph cluster_e{k} {{");
                let _ = writeln!(out, "    label={};", esc(&e.id));
                out.push_str("    style=filled;\n    fillcolor=\"#eeeeee\";\n");
                let label = if e.description.is_empty() {
                    e.id.clone()
                } else {
                    format!("{}: {}", e.id, e.description)
                };
                let _ = writeln!(out, "    ev{k} [shape=note, label={}];", esc(&label));
                out.push_str("  }\n");
                let mut targets = BTreeSet::new();
                for &r in &e.region {
                    match r {
                        RegionRef::Element(Target::Machine(id)) => {
                            targets.extend(layout.anchor(id));
                        }
                        RegionRef::Element(Target::Port(ep)) => {
                            targets.extend(layout.node(ep));
                        }
                        RegionRef::Flow(i) => {
                            if let Some(f) = model.flows.get(i) {
                                targets.extend(layout.node(f.from));
                                targets.extend(layout.node(f.to));
                            }
                        }
                        RegionRef::Trigger(i) => {
                            if let Some(t) = model.triggers.get(i) {
                                targets.extend(layout.node(t.from));
                                targets.extend(layout.node(t.to));
                            }
                        }
                    }
                }
                for t in targets {
                    let _ = writeln!(out, "  ev{k} -> {t} [style=dotted, arrowhead=none];");
                }
            }
        }
        View::Behavior => {
            let g = graph.ok_or(RenderError::MissingInput("behavior", "a behavior graph"))?;
            out.push_str("digraph behavior {\n  node [shape=ellipse];\n");
            let mut number = BTreeMap::new();
            for (k, e) in g.events().enumerate() {
                number.insert(e.id.clone(), k);
                let label = if e.description.is_empty() {
                    e.id.clone()
                } else {
                    format!("{}\n{}", e.id, e.description)
                };
                let _ = writeln!(out, "  e{k} [label={}];", esc(&label));
            }
            for edge in g.edges() {
                let style = match edge.kind {
                    EdgeKind::Sequence => "solid",
                    EdgeKind::Trigger => "dashed",
                };
                let _ = writeln!(
                    out,
                    "  e{} -> e{} [style={style}];",
                    number[&edge.from], number[&edge.to]
                );
            }
        }
    }
    out.push_str("}\n");
    Ok(out)
}
