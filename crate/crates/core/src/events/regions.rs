use std::collections::{BTreeSet, VecDeque};

use super::{region_ref_text, EventDef, RegionRef};
use crate::report::{error, warning, Code, Finding, ValidationReport};
use crate::tm::{Endpoint, MachineId, Port, StaticModel, Target};

/// Whether two region members touch: a machine and its parent, a machine
/// and one of its own stages or storage, two endpoints joined by any flow
/// or trigger, or an arc and one of its endpoints.
fn touches(model: &StaticModel, a: RegionRef, b: RegionRef) -> bool {
    use RegionRef::*;
    let arc_ends = |r: RegionRef| -> Option<(Endpoint, Endpoint)> {
        match r {
            Flow(i) => model.flows.get(i).map(|f| (f.from, f.to)),
            Trigger(i) => model.triggers.get(i).map(|t| (t.from, t.to)),
            Element(_) => None,
        }
    };
    match (a, b) {
        (Element(Target::Machine(x)), Element(Target::Machine(y))) => {
            let parent = |id: MachineId| model.machine(id).and_then(|m| m.parent);
            parent(x) == Some(y) || parent(y) == Some(x)
        }
        (Element(Target::Machine(m)), Element(Target::Port(ep)))
        | (Element(Target::Port(ep)), Element(Target::Machine(m))) => ep.machine == m,
        (Element(Target::Port(p)), Element(Target::Port(q))) => {
            let joined = |f: Endpoint, t: Endpoint| (f == p && t == q) || (f == q && t == p);
            model.flows.iter().any(|f| joined(f.from, f.to))
                || model.triggers.iter().any(|t| joined(t.from, t.to))
        }
        (Element(Target::Port(p)), arc) | (arc, Element(Target::Port(p))) => {
            arc_ends(arc).is_some_and(|(f, t)| f == p || t == p)
        }
        _ => false,
    }
}

/// Number of connected components of a region's induced subgraph.
pub fn region_components(model: &StaticModel, region: &[RegionRef]) -> usize {
    let n = region.len();
    let mut seen = vec![false; n];
    let mut components = 0;
    for start in 0..n {
        if seen[start] {
            continue;
        }
        components += 1;
        seen[start] = true;
        let mut queue = VecDeque::from([start]);
        while let Some(i) = queue.pop_front() {
            for j in 0..n {
                if !seen[j] && touches(model, region[i], region[j]) {
                    seen[j] = true;
                    queue.push_back(j);
                }
            }
        }
    }
    components
}

fn dangling(model: &StaticModel, r: RegionRef) -> bool {
    match r {
        RegionRef::Element(Target::Machine(id)) => model.machine(id).is_none(),
        RegionRef::Element(Target::Port(ep)) => !model.endpoint_exists(ep),
        RegionRef::Flow(i) => i >= model.flows.len(),
        RegionRef::Trigger(i) => i >= model.triggers.len(),
    }
}

/// Checks that each region is non-empty and connected, and warns about
/// machines, stages, and storage nodes that no region covers. Naming a
/// machine covers its own stages and storage; naming a stage, storage
/// node, or arc covers the machines it touches.
pub fn validate_regions(model: &StaticModel, events: &[EventDef]) -> ValidationReport {
    let mut findings: Vec<Finding> = Vec::new();
    let mut covered_machines = BTreeSet::new();
    let mut covered_ports = BTreeSet::new();

    for e in events {
        let loc = format!("event {}", e.id);
        if e.region.is_empty() {
            findings.push(error(Code::RegionEmpty, &loc, "region has no members"));
            continue;
        }
        let bad: Vec<_> = e.region.iter().filter(|r| dangling(model, **r)).collect();
        for r in &bad {
            findings.push(error(
                Code::UnknownRef,
                &loc,
                format!("member {} does not exist", region_ref_text(model, **r)),
            ));
        }
        if !bad.is_empty() {
            continue;
        }
        let parts = region_components(model, &e.region);
        if parts > 1 {
            findings.push(error(
                Code::RegionDisconnected,
                &loc,
                format!("region splits into {parts} disconnected parts"),
            ));
        }
        for &r in &e.region {
            let mut cover = |ep: Endpoint| {
                covered_ports.insert(ep);
                covered_machines.insert(ep.machine);
            };
            match r {
                RegionRef::Element(Target::Machine(id)) => {
                    covered_machines.insert(id);
                    let m = &model.machines[id.0];
                    for s in &m.stages {
                        covered_ports.insert(Endpoint::stage(id, s.kind));
                    }
                    if m.storage > 0 {
                        covered_ports.insert(Endpoint::storage(id));
                    }
                }
                RegionRef::Element(Target::Port(ep)) => cover(ep),
                RegionRef::Flow(i) => {
                    let f = &model.flows[i];
                    cover(f.from);
                    cover(f.to);
                }
                RegionRef::Trigger(i) => {
                    let t = &model.triggers[i];
                    cover(t.from);
                    cover(t.to);
                }
            }
        }
    }

    for id in model.ids() {
        let m = &model.machines[id.0];
        if !covered_machines.contains(&id) {
            findings.push(warning(
                Code::UncoveredElement,
                model.machine_path(id),
                "machine is in no event region",
            ));
        }
        let mut ports: Vec<Port> = m.stages.iter().map(|s| Port::Stage(s.kind)).collect();
        if m.storage > 0 {
            ports.push(Port::Storage);
        }
        ports.sort();
        ports.dedup();
        for p in ports {
            let ep = Endpoint {
                machine: id,
                port: p,
            };
            if !covered_ports.contains(&ep) {
                findings.push(warning(
                    Code::UncoveredElement,
                    model.endpoint_path(ep),
                    "element is in no event region",
                ));
            }
        }
    }
    ValidationReport::from_findings(findings)
}
