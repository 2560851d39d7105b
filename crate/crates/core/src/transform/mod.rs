//! UML → TM transformation.
//!
//! [`transform_usecase`] turns a use-case model into the internal-structure
//! skeleton, [`transform_class`] turns a class model into class and
//! attribute machines, and [`merge_models`] places the class machines inside
//! the skeleton to form one static model.

mod bindings;

use std::collections::BTreeMap;

use thiserror::Error;

use crate::lexer::ParseError;
use crate::tm::{
    Direction, Endpoint, FlowArc, MachineId, Role, Stage, StageKind, StaticModel, Target,
    TriggerArc,
};
use crate::uml::{ClassModel, UseCaseModel};

pub use bindings::{parse_bindings, BindingMap};

/// Condition put on an extend trigger when the input gives none.
pub const DEFAULT_EXTEND_CONDITION: &str = "extension";

/// Name of the nested machine that carries a class's decreate stage.
pub const LIFECYCLE_MACHINE: &str = "Lifecycle";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TransformError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error("unknown binding `{0}`")]
    UnknownBinding(String),
    #[error("merged machines share the name `{0}`")]
    NameCollision(String),
}

fn push_flow(model: &mut StaticModel, from: Endpoint, to: Endpoint) {
    let exists = model
        .flows
        .iter()
        .any(|f| f.from == from && f.to == to && f.label.is_none());
    if !exists {
        model.flows.push(FlowArc {
            from,
            to,
            label: None,
        });
    }
}

fn chain(model: &mut StaticModel, id: MachineId, kinds: &[StageKind]) {
    for &k in kinds {
        model.ensure_stage(id, Stage::new(k));
    }
    for pair in kinds.windows(2) {
        push_flow(
            model,
            Endpoint::stage(id, pair[0]),
            Endpoint::stage(id, pair[1]),
        );
    }
}

const ACTOR_CHAIN: [StageKind; 3] = [
    StageKind::Create,
    StageKind::Release,
    StageKind::Transfer(Direction::Out),
];
const SUBJECT_CHAIN: [StageKind; 3] = [
    StageKind::Transfer(Direction::In),
    StageKind::Receive,
    StageKind::Process,
];

/// Builds the internal-structure skeleton of a use-case model.
///
/// - each actor becomes an actor-region machine and the subject a root
///   subject machine;
/// - each use case becomes a machine (create → process) inside the subject;
/// - an association adds the actor lane create → release → transfer.out,
///   the flow into the subject's transfer.in → receive → process, and a
///   trigger from the subject's process to the use case's create;
/// - `include` adds an unconditional trigger base.process → included.create;
/// - `extend` adds a conditional trigger base.process → extension.create;
/// - a generalization nests the specific element inside the general one
///   (the first general by name when there are several).
///
/// Flows are added once even when several associations need them;
/// triggers are one per relation.
pub fn transform_usecase(uc: &UseCaseModel) -> StaticModel {
    let mut model = StaticModel::new();
    let subject = model.add_machine(&uc.subject, Role::Subject, None);

    let mut actors = BTreeMap::new();
    for a in &uc.actors {
        actors.insert(a.as_str(), model.add_machine(a, Role::ActorRegion, None));
    }
    for (s, g) in &uc.actor_generalizations {
        let id = actors[s.as_str()];
        if model.machines[id.0].parent.is_none() {
            model.machines[id.0].parent = Some(actors[g.as_str()]);
        }
    }

    let mut usecases = BTreeMap::new();
    for u in &uc.usecases {
        let id = model.add_machine(u, Role::UsecaseMachine, Some(subject));
        chain(&mut model, id, &[StageKind::Create, StageKind::Process]);
        usecases.insert(u.as_str(), id);
    }
    for (s, g) in &uc.usecase_generalizations {
        let id = usecases[s.as_str()];
        if model.machines[id.0].parent == Some(subject) {
            model.machines[id.0].parent = Some(usecases[g.as_str()]);
        }
    }

    for (a, u) in &uc.associations {
        let actor = actors[a.as_str()];
        chain(&mut model, actor, &ACTOR_CHAIN);
        chain(&mut model, subject, &SUBJECT_CHAIN);
        push_flow(
            &mut model,
            Endpoint::stage(actor, StageKind::Transfer(Direction::Out)),
            Endpoint::stage(subject, StageKind::Transfer(Direction::In)),
        );
        model.triggers.push(TriggerArc {
            from: Endpoint::stage(subject, StageKind::Process),
            to: Endpoint::stage(usecases[u.as_str()], StageKind::Create),
            condition: None,
        });
    }

    for (b, i) in &uc.includes {
        model.triggers.push(TriggerArc {
            from: Endpoint::stage(usecases[b.as_str()], StageKind::Process),
            to: Endpoint::stage(usecases[i.as_str()], StageKind::Create),
            condition: None,
        });
    }
    for e in &uc.extends {
        model.triggers.push(TriggerArc {
            from: Endpoint::stage(usecases[e.base.as_str()], StageKind::Process),
            to: Endpoint::stage(usecases[e.extension.as_str()], StageKind::Create),
            condition: Some(
                e.condition
                    .clone()
                    .unwrap_or_else(|| DEFAULT_EXTEND_CONDITION.to_string()),
            ),
        });
    }
    model
}

/// Whether an operation deletes instances: an explicit `@decreate` marker
/// wins; without any marker in the class, a `delete` name prefix decides.
fn decreate_ops(class: &crate::uml::Class) -> Vec<&str> {
    let explicit: Vec<&str> = class
        .operations
        .iter()
        .filter(|o| o.decreate)
        .map(|o| o.name.as_str())
        .collect();
    if !explicit.is_empty() {
        return explicit;
    }
    class
        .operations
        .iter()
        .filter(|o| o.name.to_lowercase().starts_with("delete"))
        .map(|o| o.name.as_str())
        .collect()
}

/// Builds class fragments: one class machine (create) per class, one
/// attribute machine per attribute with a storage node it stores into from
/// create and retrieves from into release, and a nested lifecycle machine
/// with a decreate stage when the class can delete instances. Every
/// operation name becomes a declared method.
pub fn transform_class(cm: &ClassModel) -> StaticModel {
    let mut cm = cm.clone();
    cm.canonicalize();
    let mut model = StaticModel::new();
    for class in &cm.classes {
        let cid = model.add_machine(&class.name, Role::ClassMachine, None);
        model.ensure_stage(cid, Stage::new(StageKind::Create));

        for attr in &class.attributes {
            let aid = model.add_machine(attr.machine_name(), Role::AttributeMachine, Some(cid));
            model.ensure_stage(aid, Stage::new(StageKind::Create));
            model.ensure_stage(aid, Stage::new(StageKind::Release));
            model.machines[aid.0].storage = 1;
            push_flow(
                &mut model,
                Endpoint::stage(aid, StageKind::Create),
                Endpoint::storage(aid),
            );
            push_flow(
                &mut model,
                Endpoint::storage(aid),
                Endpoint::stage(aid, StageKind::Release),
            );
        }

        if !decreate_ops(class).is_empty() {
            let mut name = LIFECYCLE_MACHINE.to_string();
            while model.child_named(Some(cid), &name).is_some() {
                name.push('_');
            }
            let lid = model.add_machine(name, Role::Generic, Some(cid));
            model.machines[lid.0].stages.push(Stage::decreate());
        }

        model
            .declared_methods
            .extend(class.operations.iter().map(|o| o.name.clone()));
    }
    model
}

/// Merges class fragments into a skeleton. Each bound class machine is
/// re-parented under its target; unbound classes stay at the root.
/// Declared methods are the skeleton's followed by the fragments', with
/// fragment operations renamed through `operation_bindings`.
pub fn merge_models(
    skeleton: &StaticModel,
    fragments: &StaticModel,
    bind: &BindingMap,
) -> Result<StaticModel, TransformError> {
    let mut out = skeleton.clone();
    let offset = out.machines.len();
    let shift = |id: MachineId| MachineId(id.0 + offset);
    let shift_ep = |ep: Endpoint| Endpoint {
        machine: shift(ep.machine),
        port: ep.port,
    };

    for m in &fragments.machines {
        let mut m = m.clone();
        m.parent = m.parent.map(shift);
        out.machines.push(m);
    }
    out.flows.extend(fragments.flows.iter().map(|f| FlowArc {
        from: shift_ep(f.from),
        to: shift_ep(f.to),
        label: f.label.clone(),
    }));
    out.triggers
        .extend(fragments.triggers.iter().map(|t| TriggerArc {
            from: shift_ep(t.from),
            to: shift_ep(t.to),
            condition: t.condition.clone(),
        }));

    for (class, target) in &bind.class_to_subject {
        let class_id = fragments
            .roots()
            .find(|&id| {
                let m = &fragments.machines[id.0];
                m.name == *class && m.role == Role::ClassMachine
            })
            .ok_or_else(|| TransformError::UnknownBinding(class.clone()))?;
        let segs: Vec<String> = target.split('.').map(String::from).collect();
        let target_id = match skeleton.resolve(&segs) {
            Ok(Target::Machine(id)) => id,
            _ => return Err(TransformError::UnknownBinding(target.clone())),
        };
        out.machines[shift(class_id).0].parent = Some(target_id);
    }

    for op in bind.operation_bindings.keys() {
        if !fragments.declared_methods.contains(op) {
            return Err(TransformError::UnknownBinding(op.clone()));
        }
    }
    out.declared_methods
        .extend(fragments.declared_methods.iter().map(|op| {
            bind.operation_bindings
                .get(op)
                .cloned()
                .unwrap_or_else(|| op.clone())
        }));

    let mut seen = BTreeMap::new();
    for id in out.ids() {
        let m = &out.machines[id.0];
        if seen.insert((m.parent, m.name.clone()), id).is_some() {
            return Err(TransformError::NameCollision(out.machine_path(id)));
        }
    }
    Ok(out)
}

/// The whole transformation: marks `@decreate` operations, builds the
/// skeleton and class fragments, and merges them.
pub fn build_static(
    uc: &UseCaseModel,
    cm: &ClassModel,
    bind: &BindingMap,
) -> Result<StaticModel, TransformError> {
    let mut cm = cm.clone();
    bind.apply_decreate(&mut cm)?;
    merge_models(&transform_usecase(uc), &transform_class(&cm), bind)
}
