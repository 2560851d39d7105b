//! Well-formedness rules for static models.
//!
//! | rule | code |
//! |------|------|
//! | solid flows follow the stage adjacency table | `FLOW_ADJ` |
//! | one stage per (kind, direction); `decreate` only on Create | `DUP_STAGE`, `DECREATE_KIND` |
//! | at most one storage node per machine | `DUP_STORAGE` |
//! | triggers land on Create or Process | `TRIGGER_TARGET` |
//! | arcs and parent links name existing elements | `UNKNOWN_REF` |
//! | containment is a forest | `CONTAINMENT_CYCLE` |

use std::collections::BTreeMap;

use super::{Direction, Endpoint, Port, StageKind, StaticModel};
use crate::report::{error, Code, Finding, ValidationReport};

use Direction::{In, Out};
use StageKind::{Create, Process, Receive, Release, Transfer};

/// Whether a solid flow from `from` to `to` is legal. `same_machine` says
/// whether both endpoints belong to one machine; storage arcs must stay
/// inside their machine.
pub fn flow_allowed(from: Port, to: Port, same_machine: bool) -> bool {
    match (from, to) {
        (Port::Stage(a), Port::Storage) => {
            same_machine && matches!(a, Create | Process | Receive | Release)
        }
        (Port::Storage, Port::Stage(b)) => same_machine && matches!(b, Process | Release),
        (Port::Storage, Port::Storage) => false,
        (Port::Stage(a), Port::Stage(b)) if same_machine => matches!(
            (a, b),
            (Transfer(In), Receive)
                | (Receive, Process)
                | (Receive, Release)
                | (Create, Process)
                | (Create, Release)
                | (Process, Release)
                | (Release, Transfer(Out))
        ),
        (Port::Stage(a), Port::Stage(b)) => a == Transfer(Out) && b == Transfer(In),
    }
}

/// Checks every well-formedness rule and returns all violations, sorted by
/// location then code.
pub fn validate_static(model: &StaticModel) -> ValidationReport {
    let mut findings = Vec::new();
    check_machines(model, &mut findings);
    check_containment(model, &mut findings);
    check_flows(model, &mut findings);
    check_triggers(model, &mut findings);
    ValidationReport::from_findings(findings)
}

fn check_machines(model: &StaticModel, findings: &mut Vec<Finding>) {
    for id in model.ids() {
        let m = &model.machines[id.0];
        let loc = model.machine_path(id);
        let mut counts: BTreeMap<StageKind, usize> = BTreeMap::new();
        for s in &m.stages {
            *counts.entry(s.kind).or_default() += 1;
            if s.decreate && s.kind != Create {
                findings.push(error(
                    Code::DecreateKind,
                    format!("{loc}.{}", s.kind),
                    "decreate is only allowed on a create stage",
                ));
            }
        }
        for (kind, n) in counts {
            if n > 1 {
                findings.push(error(
                    Code::DupStage,
                    format!("{loc}.{kind}"),
                    format!("{n} {kind} stages in one machine"),
                ));
            }
        }
        if m.storage > 1 {
            findings.push(error(
                Code::DupStorage,
                format!("{loc}.storage"),
                format!("{} storage nodes in one machine", m.storage),
            ));
        }
    }
}

fn check_containment(model: &StaticModel, findings: &mut Vec<Finding>) {
    for id in model.ids() {
        let Some(parent) = model.machines[id.0].parent else {
            continue;
        };
        if model.machine(parent).is_none() {
            findings.push(error(
                Code::UnknownRef,
                model.machine_path(id),
                format!("parent {parent} does not exist"),
            ));
            continue;
        }
        // walk up; a cycle shows as returning to `id`
        let mut cur = Some(parent);
        let mut steps = 0;
        while let Some(c) = cur {
            if c == id {
                findings.push(error(
                    Code::ContainmentCycle,
                    model.machine_path(id),
                    format!(
                        "machine `{}` is its own ancestor",
                        model.machines[id.0].name
                    ),
                ));
                break;
            }
            steps += 1;
            if steps > model.machines.len() {
                break;
            }
            cur = model.machine(c).and_then(|m| m.parent);
        }
    }
}

fn check_endpoint(
    model: &StaticModel,
    loc: &str,
    what: &str,
    ep: Endpoint,
    findings: &mut Vec<Finding>,
) -> bool {
    if model.machine(ep.machine).is_none() {
        findings.push(error(
            Code::UnknownRef,
            loc,
            format!("{what} machine {} does not exist", ep.machine),
        ));
        false
    } else if !model.endpoint_exists(ep) {
        findings.push(error(
            Code::UnknownRef,
            loc,
            format!("{what} {} is not declared", model.endpoint_path(ep)),
        ));
        false
    } else {
        true
    }
}

fn check_flows(model: &StaticModel, findings: &mut Vec<Finding>) {
    for f in &model.flows {
        let loc = format!(
            "flow {} -> {}",
            model.endpoint_path(f.from),
            model.endpoint_path(f.to)
        );
        let a = check_endpoint(model, &loc, "source", f.from, findings);
        let b = check_endpoint(model, &loc, "target", f.to, findings);
        if a && b && !flow_allowed(f.from.port, f.to.port, f.from.machine == f.to.machine) {
            let scope = if f.from.machine == f.to.machine {
                "within a machine"
            } else {
                "between machines"
            };
            findings.push(error(
                Code::FlowAdj,
                &loc,
                format!("{} may not flow to {} {scope}", f.from.port, f.to.port),
            ));
        }
    }
}

fn check_triggers(model: &StaticModel, findings: &mut Vec<Finding>) {
    for t in &model.triggers {
        let loc = format!(
            "trigger {} -> {}",
            model.endpoint_path(t.from),
            model.endpoint_path(t.to)
        );
        check_endpoint(model, &loc, "source", t.from, findings);
        check_endpoint(model, &loc, "target", t.to, findings);
        let lands_well = matches!(t.to.port, Port::Stage(Create) | Port::Stage(Process));
        if !lands_well && model.machine(t.to.machine).is_some() {
            findings.push(error(
                Code::TriggerTarget,
                &loc,
                format!(
                    "trigger lands on {}; only create or process may be triggered",
                    t.to.port
                ),
            ));
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::tm::{parse_tm, MachineId, Role, Stage, TriggerArc};

    fn codes(text: &str) -> Vec<Code> {
        validate_static(&parse_tm(text).unwrap()).codes()
    }

    #[test]
    fn empty_model_is_clean() {
        assert!(validate_static(&StaticModel::new()).is_empty());
    }

    #[test]
    fn duplicate_create() {
        assert_eq!(
            codes("machine A { stage create; stage create }"),
            vec![Code::DupStage]
        );
    }

    #[test]
    fn process_to_process_between_machines() {
        assert_eq!(
            codes("machine A { stage process }\nmachine B { stage process }\nflow A.process -> B.process"),
            vec![Code::FlowAdj]
        );
    }

    #[test]
    fn adjacency_table() {
        let same = [
            (Transfer(In), Receive),
            (Receive, Process),
            (Receive, Release),
            (Create, Process),
            (Create, Release),
            (Process, Release),
            (Release, Transfer(Out)),
        ];
        for a in StageKind::ALL {
            for b in StageKind::ALL {
                let expect_same = same.contains(&(a, b));
                assert_eq!(
                    flow_allowed(Port::Stage(a), Port::Stage(b), true),
                    expect_same,
                    "{a}->{b}"
                );
                let expect_cross = a == Transfer(Out) && b == Transfer(In);
                assert_eq!(
                    flow_allowed(Port::Stage(a), Port::Stage(b), false),
                    expect_cross,
                    "{a}=>{b}"
                );
            }
            let store = matches!(a, Create | Process | Receive | Release);
            assert_eq!(flow_allowed(Port::Stage(a), Port::Storage, true), store);
            assert!(!flow_allowed(Port::Stage(a), Port::Storage, false));
            let retrieve = matches!(a, Process | Release);
            assert_eq!(flow_allowed(Port::Storage, Port::Stage(a), true), retrieve);
        }
    }

    #[test]
    fn storage_and_decreate_rules() {
        assert_eq!(
            codes("machine A { storage; storage }"),
            vec![Code::DupStorage]
        );
        assert_eq!(
            codes("machine A { stage process decreate }"),
            vec![Code::DecreateKind]
        );
        assert!(codes("machine A { stage create decreate }").is_empty());
    }

    #[test]
    fn trigger_must_land_on_create_or_process() {
        assert_eq!(
            codes("machine A { stage process }\nmachine B { stage release }\ntrigger A.process -> B.release"),
            vec![Code::TriggerTarget]
        );
        assert!(codes("machine A { stage process }\nmachine B { stage process }\ntrigger A.process -> B.process").is_empty());
    }

    #[test]
    fn dangling_references() {
        assert_eq!(
            codes("machine A { stage create }\nmachine B { }\nflow A.create -> B.receive"),
            vec![Code::UnknownRef]
        );
        let mut m = parse_tm("machine A { stage process }").unwrap();
        m.triggers.push(TriggerArc {
            from: Endpoint::stage(MachineId(0), Process),
            to: Endpoint::stage(MachineId(7), Create),
            condition: None,
        });
        assert_eq!(validate_static(&m).codes(), vec![Code::UnknownRef]);
    }

    #[test]
    fn containment_cycle() {
        let mut m = StaticModel::new();
        let a = m.add_machine("A", Role::Generic, None);
        let b = m.add_machine("B", Role::Generic, Some(a));
        m.machines[a.0].parent = Some(b);
        m.machines[a.0].stages.push(Stage::new(Create));
        let r = validate_static(&m);
        assert_eq!(
            r.codes(),
            vec![Code::ContainmentCycle, Code::ContainmentCycle]
        );
    }

    #[test]
    fn report_is_deterministic() {
        let text = "machine B { stage create; stage create; storage; storage }\nmachine A { stage process }\nflow A.process -> B.create";
        let m = parse_tm(text).unwrap();
        assert_eq!(
            validate_static(&m).to_string(),
            validate_static(&m).to_string()
        );
        let locs: Vec<_> = validate_static(&m)
            .findings()
            .iter()
            .map(|f| f.location.clone())
            .collect();
        let mut sorted = locs.clone();
        sorted.sort();
        assert_eq!(locs, sorted);
    }
}
