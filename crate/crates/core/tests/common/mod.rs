//! Shared fixtures and random model generators for the integration tests.
#![allow(dead_code)]

pub mod dot;

use std::collections::BTreeSet;
use std::path::PathBuf;

use proptest::prelude::*;

use tmuml_core::events::syntax::{EdgeDecl, EventDecl, Member, MemberRef, MethodDecl, SourcePos};
use tmuml_core::events::{EdgeKind, EventsDocument};
use tmuml_core::tm::{
    Endpoint, FlowArc, MachineId, Port, Role, Stage, StageKind, StaticModel, TriggerArc,
};
use tmuml_core::transform::BindingMap;
use tmuml_core::uml::{Attribute, Class, ClassModel, Extend, Operation, UseCaseModel};

pub fn corpus(rel: &str) -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR"))
        .join("../../corpus")
        .join(rel)
}

pub fn read_corpus(rel: &str) -> String {
    std::fs::read_to_string(corpus(rel)).unwrap_or_else(|e| panic!("{rel}: {e}"))
}

const MACHINE_NAMES: [&str; 8] = [
    "Alpha", "Beta", "Gamma", "Delta", "Omega", "Sys", "Unit", "Node",
];

const ROLES: [Role; 6] = [
    Role::ActorRegion,
    Role::Subject,
    Role::UsecaseMachine,
    Role::ClassMachine,
    Role::AttributeMachine,
    Role::Generic,
];

/// Free text including the characters that need escaping.
pub fn label_text() -> impl Strategy<Value = String> {
    "[a-z \"\\\\\n]{0,8}"
}

#[derive(Debug, Clone)]
struct MachineSpec {
    name: usize,
    role: usize,
    parent: Option<usize>,
    stages: Vec<bool>,
    decreate: bool,
    storage: bool,
}

fn machine_spec(max_index: usize) -> impl Strategy<Value = MachineSpec> {
    (
        0..MACHINE_NAMES.len(),
        0..ROLES.len(),
        prop::option::of(0..max_index.max(1)),
        prop::collection::vec(any::<bool>(), 6),
        any::<bool>(),
        any::<bool>(),
    )
        .prop_map(
            |(name, role, parent, stages, decreate, storage)| MachineSpec {
                name,
                role,
                parent,
                stages,
                decreate,
                storage,
            },
        )
}

fn all_endpoints(m: &StaticModel) -> Vec<Endpoint> {
    let mut eps = Vec::new();
    for id in m.ids() {
        let mach = &m.machines[id.0];
        for s in &mach.stages {
            eps.push(Endpoint::stage(id, s.kind));
        }
        if mach.storage > 0 {
            eps.push(Endpoint::storage(id));
        }
    }
    eps
}

fn build_tm(
    specs: Vec<MachineSpec>,
    arc_picks: Vec<(usize, usize, Option<String>, bool)>,
    methods: Vec<String>,
) -> StaticModel {
    let mut m = StaticModel::new();
    for (i, s) in specs.iter().enumerate() {
        // only earlier machines can be parents, so containment is a forest
        let parent = s.parent.filter(|&p| p < i).map(MachineId);
        let mut name = MACHINE_NAMES[s.name].to_string();
        let mut n = 0;
        while m.child_named(parent, &name).is_some() {
            n += 1;
            name = format!("{}{n}", MACHINE_NAMES[s.name]);
        }
        let id = m.add_machine(name, ROLES[s.role], parent);
        for (k, on) in StageKind::ALL.iter().zip(&s.stages) {
            if *on {
                let decreate = *k == StageKind::Create && s.decreate;
                m.machines[id.0].stages.push(Stage { kind: *k, decreate });
            }
        }
        m.machines[id.0].storage = usize::from(s.storage);
    }
    let eps = all_endpoints(&m);
    if !eps.is_empty() {
        for (a, b, text, is_flow) in arc_picks {
            let from = eps[a % eps.len()];
            let to = eps[b % eps.len()];
            if is_flow {
                m.flows.push(FlowArc {
                    from,
                    to,
                    label: text,
                });
            } else if matches!(to.port, Port::Stage(StageKind::Create | StageKind::Process)) {
                m.triggers.push(TriggerArc {
                    from,
                    to,
                    condition: text,
                });
            }
        }
    }
    m.declared_methods = methods;
    m
}

/// Random static models: a containment forest with arbitrary stages and
/// storage, and arcs between existing endpoints. Arcs need not respect the
/// adjacency table; trigger targets are always create or process.
pub fn tm_model() -> impl Strategy<Value = StaticModel> {
    (1usize..9)
        .prop_flat_map(|n| {
            (
                prop::collection::vec(machine_spec(n), n),
                prop::collection::vec(
                    (
                        any::<usize>(),
                        any::<usize>(),
                        prop::option::of(label_text()),
                        any::<bool>(),
                    ),
                    0..12,
                ),
                prop::collection::vec("[A-Z][a-z]{0,6}", 0..4),
            )
        })
        .prop_map(|(specs, arcs, methods)| build_tm(specs, arcs, methods))
}

/// Names for use-case models; actors, use cases, and the subject never
/// share one.
fn uc_names(prefix: &'static str, max: usize) -> impl Strategy<Value = Vec<String>> {
    (0..=max).prop_map(move |n| (0..n).map(|i| format!("{prefix}{i}")).collect())
}

fn condition_text() -> impl Strategy<Value = String> {
    "[a-z]{1,5}( [a-z]{1,5}){0,2}"
}

/// Random valid use-case models: every relation names declared elements,
/// nothing includes or extends itself, and generalizations only point from
/// later to earlier names, so they are acyclic.
pub fn usecase_model() -> impl Strategy<Value = UseCaseModel> {
    (uc_names("Actor", 4), uc_names("Case", 7))
        .prop_flat_map(|(actors, ucs)| {
            let na = actors.len().max(1);
            let nu = ucs.len().max(1);
            (
                Just(actors),
                Just(ucs),
                prop::collection::vec((0..na, 0..nu), 0..10),
                prop::collection::vec((0..nu, 0..nu), 0..6),
                prop::collection::vec((0..nu, 0..nu, prop::option::of(condition_text())), 0..6),
                prop::collection::vec((0..na, 0..na), 0..3),
                prop::collection::vec((0..nu, 0..nu), 0..3),
            )
        })
        .prop_map(|(actors, ucs, assoc, inc, ext, agen, ugen)| {
            let mut m = UseCaseModel::new("Subject");
            m.actors = actors.iter().cloned().collect();
            m.usecases = ucs.iter().cloned().collect();
            if !actors.is_empty() && !ucs.is_empty() {
                m.associations = assoc
                    .into_iter()
                    .map(|(a, u)| (actors[a].clone(), ucs[u].clone()))
                    .collect();
            }
            if !ucs.is_empty() {
                m.includes = inc
                    .into_iter()
                    .filter(|(b, i)| b != i)
                    .map(|(b, i)| (ucs[b].clone(), ucs[i].clone()))
                    .collect();
                m.extends = ext
                    .into_iter()
                    .filter(|(x, b, _)| x != b)
                    .map(|(x, b, condition)| Extend {
                        extension: ucs[x].clone(),
                        base: ucs[b].clone(),
                        condition,
                    })
                    .collect();
                m.usecase_generalizations = ugen
                    .into_iter()
                    .filter(|(s, g)| s > g)
                    .map(|(s, g)| (ucs[s].clone(), ucs[g].clone()))
                    .collect();
            }
            if !actors.is_empty() {
                m.actor_generalizations = agen
                    .into_iter()
                    .filter(|(s, g)| s > g)
                    .map(|(s, g)| (actors[s].clone(), actors[g].clone()))
                    .collect();
            }
            m
        })
}

const TYPES: [&str; 5] = ["", "String", "Int", "List<String>", "Map<String, Int>"];
const PARAMS: [&str; 4] = ["x: Int", "name: String", "m: Map<String, Int>", "flag"];
const OP_NAMES: [&str; 6] = ["create", "update", "send", "deleteAll", "print", "register"];

fn class_strategy(index: usize) -> impl Strategy<Value = Class> {
    (
        prop::collection::vec((0..TYPES.len(), any::<bool>()), 0..4),
        prop::collection::btree_set(0..OP_NAMES.len(), 0..4),
        prop::collection::vec(
            (prop::collection::vec(0..PARAMS.len(), 0..3), any::<bool>()),
            4,
        ),
    )
        .prop_map(move |(attrs, ops, op_detail)| {
            let mut c = Class::new(format!("Class{index}"));
            for (i, (ty, labelled)) in attrs.into_iter().enumerate() {
                c.attributes.push(Attribute {
                    name: format!("attr{i}"),
                    ty: TYPES[ty].to_string(),
                    label: labelled.then(|| format!("Field{i}")),
                });
            }
            for (k, op) in ops.into_iter().enumerate() {
                let (params, decreate) = &op_detail[k];
                c.operations.push(Operation {
                    name: OP_NAMES[op].to_string(),
                    params: params.iter().map(|&p| PARAMS[p].to_string()).collect(),
                    decreate: *decreate,
                });
            }
            c
        })
}

/// Random valid class models in canonical order.
pub fn class_model() -> impl Strategy<Value = ClassModel> {
    (0usize..4)
        .prop_flat_map(|n| (0..n).map(class_strategy).collect::<Vec<_>>())
        .prop_map(|classes| {
            let mut m = ClassModel { classes };
            m.canonicalize();
            m
        })
}

/// A use-case model, a class model, and bindings that place some classes
/// inside the subject or one of its use-case machines.
pub fn transform_inputs() -> impl Strategy<Value = (UseCaseModel, ClassModel, BindingMap)> {
    (
        usecase_model(),
        class_model(),
        prop::collection::vec(any::<Option<prop::sample::Index>>(), 4),
    )
        .prop_map(|(uc, cm, picks)| {
            let mut targets = vec![uc.subject.clone()];
            // names are unique, so a nested use case still resolves by name
            targets.extend(uc.usecases.iter().cloned());
            let mut bind = BindingMap::default();
            for (class, pick) in cm.classes.iter().zip(picks) {
                if let Some(ix) = pick {
                    bind.class_to_subject
                        .insert(class.name.clone(), ix.get(&targets).clone());
                }
            }
            (uc, cm, bind)
        })
}

const MEMBER_SEGS: [&str; 9] = [
    "Alpha", "Beta", "Sys", "create", "process", "transfer", "in", "storage", "release",
];

fn dotted_path() -> impl Strategy<Value = Vec<String>> {
    (0..3usize, prop::collection::vec(0..MEMBER_SEGS.len(), 0..3)).prop_map(|(head, rest)| {
        let mut p = vec![MEMBER_SEGS[head].to_string()];
        p.extend(rest.into_iter().map(|i| MEMBER_SEGS[i].to_string()));
        p
    })
}

fn member_ref() -> impl Strategy<Value = MemberRef> {
    prop_oneof![
        3 => dotted_path().prop_map(MemberRef::Element),
        1 => (dotted_path(), dotted_path()).prop_map(|(a, b)| MemberRef::Flow(a, b)),
        1 => (dotted_path(), dotted_path()).prop_map(|(a, b)| MemberRef::Trigger(a, b)),
    ]
}

/// Random events documents: unique event ids, edges and method paths
/// between declared ids. Members are syntactic paths that need not
/// resolve against any model.
pub fn events_document() -> impl Strategy<Value = EventsDocument> {
    (1usize..8)
        .prop_flat_map(|n| {
            (
                prop::collection::vec((label_text(), prop::collection::vec(member_ref(), 0..4)), n),
                prop::collection::vec((0..n, 0..n, any::<bool>()), 0..10),
                prop::collection::vec(prop::collection::vec(0..n, 1..4), 0..3),
            )
        })
        .prop_map(|(events, edges, methods)| {
            let pos = SourcePos::default();
            let id = |i: usize| {
                if i == 0 {
                    "E".to_string()
                } else {
                    format!("E{i}")
                }
            };
            EventsDocument {
                events: events
                    .into_iter()
                    .enumerate()
                    .map(|(i, (description, members))| EventDecl {
                        id: id(i),
                        description,
                        members: members
                            .into_iter()
                            .map(|reference| Member { reference, pos })
                            .collect(),
                        pos,
                    })
                    .collect(),
                edges: edges
                    .into_iter()
                    .map(|(a, b, t)| EdgeDecl {
                        from: id(a),
                        to: id(b),
                        kind: if t {
                            EdgeKind::Trigger
                        } else {
                            EdgeKind::Sequence
                        },
                        pos,
                    })
                    .collect(),
                methods: methods
                    .into_iter()
                    .enumerate()
                    .map(|(i, path)| MethodDecl {
                        name: format!("method{i}"),
                        path: path.into_iter().map(id).collect(),
                        pos,
                    })
                    .collect(),
            }
        })
}

/// Random behavior graph as (event ids, edges): ids `E0..En`, arbitrary
/// edges including self-loops.
pub fn behavior_parts() -> impl Strategy<Value = (Vec<String>, BTreeSet<(String, String)>)> {
    (1usize..10).prop_flat_map(|n| {
        (
            Just((0..n).map(|i| format!("E{i}")).collect::<Vec<_>>()),
            prop::collection::btree_set((0..n, 0..n), 0..(n * 3)).prop_map(|s| {
                s.into_iter()
                    .map(|(a, b)| (format!("E{a}"), format!("E{b}")))
                    .collect()
            }),
        )
    })
}
