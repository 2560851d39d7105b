use std::fmt::Write;

use super::{MachineId, Role, StaticModel};
use crate::lexer::quote;

pub(crate) const HEADER: &str = "# thinging machine model";

/// Canonical text form: machines nested by containment with siblings in
/// name order, then flows, triggers, and methods each sorted.
pub fn print_tm(model: &StaticModel) -> String {
    let mut out = String::new();
    out.push_str(HEADER);
    out.push('\n');

    for root in sorted(model, model.roots().collect()) {
        print_machine(model, root, 0, &mut out);
    }

    let mut flows: Vec<_> = model
        .flows
        .iter()
        .map(|f| {
            (
                model.endpoint_path(f.from),
                model.endpoint_path(f.to),
                f.label.clone(),
            )
        })
        .collect();
    flows.sort();
    for (from, to, label) in flows {
        let _ = write!(out, "flow {from} -> {to}");
        if let Some(l) = label {
            let _ = write!(out, " label {}", quote(&l));
        }
        out.push('\n');
    }

    let mut triggers: Vec<_> = model
        .triggers
        .iter()
        .map(|t| {
            (
                model.endpoint_path(t.from),
                model.endpoint_path(t.to),
                t.condition.clone(),
            )
        })
        .collect();
    triggers.sort();
    for (from, to, cond) in triggers {
        let _ = write!(out, "trigger {from} -> {to}");
        if let Some(c) = cond {
            let _ = write!(out, " when {}", quote(&c));
        }
        out.push('\n');
    }

    let mut methods = model.declared_methods.clone();
    methods.sort();
    for m in methods {
        let _ = writeln!(out, "method {m}");
    }
    out
}

fn sorted(model: &StaticModel, mut ids: Vec<MachineId>) -> Vec<MachineId> {
    ids.sort_by(|a, b| (&model.machines[a.0].name, a).cmp(&(&model.machines[b.0].name, b)));
    ids
}

fn print_machine(model: &StaticModel, id: MachineId, depth: usize, out: &mut String) {
    let m = &model.machines[id.0];
    let pad = "  ".repeat(depth);
    let _ = write!(out, "{pad}machine {}", m.name);
    if m.role != Role::Generic {
        let _ = write!(out, " role {}", m.role);
    }
    let children = sorted(model, model.children(id).collect());
    if m.stages.is_empty() && m.storage == 0 && children.is_empty() {
        out.push_str(" {}\n");
        return;
    }
    out.push_str(" {\n");
    let mut stages = m.stages.clone();
    stages.sort();
    for s in stages {
        let _ = write!(out, "{pad}  stage {}", s.kind);
        if s.decreate {
            out.push_str(" decreate");
        }
        out.push('\n');
    }
    for _ in 0..m.storage {
        let _ = writeln!(out, "{pad}  storage");
    }
    for c in children {
        print_machine(model, c, depth + 1, out);
    }
    let _ = writeln!(out, "{pad}}}");
}
