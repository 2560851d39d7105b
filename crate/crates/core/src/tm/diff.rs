use std::collections::BTreeMap;
use std::fmt;

use thiserror::Error;

use super::{Role, StaticModel};
use crate::lexer::quote;

/// One discrepancy between two models. "Missing" means present in the
/// left (reference) model only; "Extra" means present in the right only.
/// Machines are keyed by their dotted name path, arcs by their rendered
/// endpoints.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub enum DiffEntry {
    MissingMachine(String),
    ExtraMachine(String),
    StageMismatch {
        machine: String,
        left: String,
        right: String,
    },
    RoleMismatch {
        machine: String,
        left: Role,
        right: Role,
    },
    MissingFlow(String),
    ExtraFlow(String),
    MissingTrigger(String),
    ExtraTrigger(String),
    MissingMethod(String),
    ExtraMethod(String),
}

impl fmt::Display for DiffEntry {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DiffEntry::MissingMachine(m) => write!(f, "- machine {m}"),
            DiffEntry::ExtraMachine(m) => write!(f, "+ machine {m}"),
            DiffEntry::StageMismatch {
                machine,
                left,
                right,
            } => write!(f, "~ machine {machine} stages [{left}] vs [{right}]"),
            DiffEntry::RoleMismatch {
                machine,
                left,
                right,
            } => write!(f, "~ machine {machine} role {left} vs {right}"),
            DiffEntry::MissingFlow(a) => write!(f, "- flow {a}"),
            DiffEntry::ExtraFlow(a) => write!(f, "+ flow {a}"),
            DiffEntry::MissingTrigger(a) => write!(f, "- trigger {a}"),
            DiffEntry::ExtraTrigger(a) => write!(f, "+ trigger {a}"),
            DiffEntry::MissingMethod(m) => write!(f, "- method {m}"),
            DiffEntry::ExtraMethod(m) => write!(f, "+ method {m}"),
        }
    }
}

pub type Diff = Vec<DiffEntry>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DiffError {
    #[error("sibling machines share the name `{0}`")]
    AmbiguousName(String),
}

struct Shape {
    role: Role,
    stages: String,
}

fn shapes(model: &StaticModel) -> Result<BTreeMap<String, Shape>, DiffError> {
    let mut out = BTreeMap::new();
    for id in model.ids() {
        let m = &model.machines[id.0];
        let mut stages: Vec<_> = m.stages.clone();
        stages.sort();
        let mut parts: Vec<String> = stages
            .iter()
            .map(|s| {
                if s.decreate {
                    format!("{} decreate", s.kind)
                } else {
                    s.kind.to_string()
                }
            })
            .collect();
        parts.extend(std::iter::repeat_n("storage".to_string(), m.storage));
        let path = model.machine_path(id);
        if out
            .insert(
                path.clone(),
                Shape {
                    role: m.role,
                    stages: parts.join(", "),
                },
            )
            .is_some()
        {
            return Err(DiffError::AmbiguousName(path));
        }
    }
    Ok(out)
}

fn arc_key(from: String, to: String, text: Option<&str>) -> String {
    match text {
        Some(t) => format!("{from} -> {to} {}", quote(t)),
        None => format!("{from} -> {to}"),
    }
}

fn multiset(keys: impl Iterator<Item = String>) -> BTreeMap<String, usize> {
    let mut out = BTreeMap::new();
    for k in keys {
        *out.entry(k).or_default() += 1;
    }
    out
}

fn compare_multisets(
    left: &BTreeMap<String, usize>,
    right: &BTreeMap<String, usize>,
    missing: fn(String) -> DiffEntry,
    extra: fn(String) -> DiffEntry,
    out: &mut Diff,
) {
    for (k, &n) in left {
        let m = right.get(k).copied().unwrap_or(0);
        out.extend((m..n).map(|_| missing(k.clone())));
    }
    for (k, &n) in right {
        let m = left.get(k).copied().unwrap_or(0);
        out.extend((m..n).map(|_| extra(k.clone())));
    }
}

/// Name-based structural comparison. The result is empty exactly when the
/// two models agree on machine paths, roles, stages, storage, arcs
/// (as multisets), and declared methods, regardless of internal ids.
pub fn structural_diff(left: &StaticModel, right: &StaticModel) -> Result<Diff, DiffError> {
    let ls = shapes(left)?;
    let rs = shapes(right)?;
    let mut out = Diff::new();

    for (path, l) in &ls {
        match rs.get(path) {
            None => out.push(DiffEntry::MissingMachine(path.clone())),
            Some(r) => {
                if l.stages != r.stages {
                    out.push(DiffEntry::StageMismatch {
                        machine: path.clone(),
                        left: l.stages.clone(),
                        right: r.stages.clone(),
                    });
                }
                if l.role != r.role {
                    out.push(DiffEntry::RoleMismatch {
                        machine: path.clone(),
                        left: l.role,
                        right: r.role,
                    });
                }
            }
        }
    }
    for path in rs.keys().filter(|p| !ls.contains_key(*p)) {
        out.push(DiffEntry::ExtraMachine(path.clone()));
    }

    let flows = |m: &StaticModel| {
        multiset(m.flows.iter().map(|f| {
            arc_key(
                m.endpoint_path(f.from),
                m.endpoint_path(f.to),
                f.label.as_deref(),
            )
        }))
    };
    compare_multisets(
        &flows(left),
        &flows(right),
        DiffEntry::MissingFlow,
        DiffEntry::ExtraFlow,
        &mut out,
    );

    let triggers = |m: &StaticModel| {
        multiset(m.triggers.iter().map(|t| {
            arc_key(
                m.endpoint_path(t.from),
                m.endpoint_path(t.to),
                t.condition.as_deref(),
            )
        }))
    };
    compare_multisets(
        &triggers(left),
        &triggers(right),
        DiffEntry::MissingTrigger,
        DiffEntry::ExtraTrigger,
        &mut out,
    );

    compare_multisets(
        &multiset(left.declared_methods.iter().cloned()),
        &multiset(right.declared_methods.iter().cloned()),
        DiffEntry::MissingMethod,
        DiffEntry::ExtraMethod,
        &mut out,
    );

    out.sort();
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::parse_tm;

    const BASE: &str = "\
machine A role actor-region { stage create; stage release; stage transfer.out }
machine S role subject {
  stage transfer.in; stage receive; stage process
  machine U role usecase-machine { stage create; stage process }
}
flow A.create -> A.release
flow A.release -> A.transfer.out
flow A.transfer.out -> S.transfer.in
trigger S.process -> U.create
method Run
";

    #[test]
    fn identity_is_empty() {
        let m = parse_tm(BASE).unwrap();
        assert_eq!(structural_diff(&m, &m).unwrap(), vec![]);
    }

    #[test]
    fn removed_trigger_is_one_missing_trigger() {
        let a = parse_tm(BASE).unwrap();
        let mut b = a.clone();
        b.triggers.clear();
        assert_eq!(
            structural_diff(&a, &b).unwrap(),
            vec![DiffEntry::MissingTrigger("S.process -> S.U.create".into())]
        );
        assert_eq!(
            structural_diff(&b, &a).unwrap(),
            vec![DiffEntry::ExtraTrigger("S.process -> S.U.create".into())]
        );
    }

    #[test]
    fn ids_do_not_matter() {
        let a = parse_tm(BASE).unwrap();
        let reordered = "\
machine S role subject {
  machine U role usecase-machine { stage process; stage create }
  stage process; stage receive; stage transfer.in
}
machine A role actor-region { stage transfer.out; stage release; stage create }
method Run
trigger S.process -> U.create
flow A.transfer.out -> S.transfer.in
flow A.release -> A.transfer.out
flow A.create -> A.release
";
        let b = parse_tm(reordered).unwrap();
        assert_ne!(a, b);
        assert!(structural_diff(&a, &b).unwrap().is_empty());
    }

    #[test]
    fn stage_and_machine_differences() {
        let a = parse_tm("machine A { stage create }\nmachine B {}").unwrap();
        let b = parse_tm("machine A { stage create decreate }\nmachine C {}").unwrap();
        assert_eq!(
            structural_diff(&a, &b).unwrap(),
            vec![
                DiffEntry::MissingMachine("B".into()),
                DiffEntry::ExtraMachine("C".into()),
                DiffEntry::StageMismatch {
                    machine: "A".into(),
                    left: "create".into(),
                    right: "create decreate".into()
                },
            ]
        );
    }

    #[test]
    fn duplicate_parallel_triggers_count() {
        let text = "machine S { stage process\n machine U { stage create } }\ntrigger S.process -> S.U.create\n";
        let a = parse_tm(&format!("{text}trigger S.process -> S.U.create\n")).unwrap();
        let b = parse_tm(text).unwrap();
        assert_eq!(structural_diff(&a, &b).unwrap().len(), 1);
    }

    #[test]
    fn sibling_name_clash_is_ambiguous() {
        let mut m = StaticModel::new();
        m.add_machine("X", Role::Generic, None);
        m.add_machine("X", Role::Generic, None);
        assert_eq!(
            structural_diff(&m, &StaticModel::new()),
            Err(DiffError::AmbiguousName("X".into()))
        );
    }
}
