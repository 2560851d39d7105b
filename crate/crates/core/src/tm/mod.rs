//! Thinging-machine static models.
//!
//! A [`StaticModel`] is a containment forest of [`Machine`]s. Each machine
//! owns at most one stage per generic action (transfer is split into an
//! inbound and an outbound port) and at most one storage node. Things move
//! along solid [`FlowArc`]s; [`TriggerArc`]s start a new flow elsewhere.
//! The static model carries no events or time.

mod diff;
mod parse;
mod print;
mod validate;

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

use crate::lexer::ParseError;

pub use diff::{structural_diff, Diff, DiffEntry, DiffError};
pub use parse::parse_tm;
pub use print::print_tm;
pub use validate::{flow_allowed, validate_static};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Direction {
    In,
    Out,
}

/// The five generic actions. Ordering is the canonical print order.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum StageKind {
    Create,
    Process,
    Release,
    Transfer(Direction),
    Receive,
}

impl StageKind {
    pub const ALL: [StageKind; 6] = [
        StageKind::Create,
        StageKind::Process,
        StageKind::Release,
        StageKind::Transfer(Direction::In),
        StageKind::Transfer(Direction::Out),
        StageKind::Receive,
    ];
}

impl fmt::Display for StageKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            StageKind::Create => "create",
            StageKind::Process => "process",
            StageKind::Release => "release",
            StageKind::Transfer(Direction::In) => "transfer.in",
            StageKind::Transfer(Direction::Out) => "transfer.out",
            StageKind::Receive => "receive",
        })
    }
}

/// A stage node. `decreate` marks the inverse of creation and is only
/// meaningful on a Create stage.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Stage {
    pub kind: StageKind,
    pub decreate: bool,
}

impl Stage {
    pub fn new(kind: StageKind) -> Self {
        Stage {
            kind,
            decreate: false,
        }
    }

    pub fn decreate() -> Self {
        Stage {
            kind: StageKind::Create,
            decreate: true,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Port {
    Stage(StageKind),
    Storage,
}

impl fmt::Display for Port {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Port::Stage(k) => k.fmt(f),
            Port::Storage => f.write_str("storage"),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub enum Role {
    ActorRegion,
    Subject,
    UsecaseMachine,
    ClassMachine,
    AttributeMachine,
    #[default]
    Generic,
}

impl Role {
    pub const ALL: [Role; 6] = [
        Role::ActorRegion,
        Role::Subject,
        Role::UsecaseMachine,
        Role::ClassMachine,
        Role::AttributeMachine,
        Role::Generic,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Role::ActorRegion => "actor-region",
            Role::Subject => "subject",
            Role::UsecaseMachine => "usecase-machine",
            Role::ClassMachine => "class-machine",
            Role::AttributeMachine => "attribute-machine",
            Role::Generic => "generic",
        }
    }
}

impl fmt::Display for Role {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Role {
    type Err = ();

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Role::ALL.into_iter().find(|r| r.as_str() == s).ok_or(())
    }
}

/// Index of a machine in [`StaticModel::machines`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct MachineId(pub usize);

impl fmt::Display for MachineId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Machine {
    pub name: String,
    pub role: Role,
    pub parent: Option<MachineId>,
    pub stages: Vec<Stage>,
    /// Number of storage nodes; well-formed machines have zero or one.
    pub storage: usize,
}

impl Machine {
    pub fn new(name: impl Into<String>, role: Role) -> Self {
        Machine {
            name: name.into(),
            role,
            parent: None,
            stages: Vec::new(),
            storage: 0,
        }
    }

    pub fn has_stage(&self, kind: StageKind) -> bool {
        self.stages.iter().any(|s| s.kind == kind)
    }

    pub fn has_port(&self, port: Port) -> bool {
        match port {
            Port::Stage(k) => self.has_stage(k),
            Port::Storage => self.storage > 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Endpoint {
    pub machine: MachineId,
    pub port: Port,
}

impl Endpoint {
    pub fn stage(machine: MachineId, kind: StageKind) -> Self {
        Endpoint {
            machine,
            port: Port::Stage(kind),
        }
    }

    pub fn storage(machine: MachineId) -> Self {
        Endpoint {
            machine,
            port: Port::Storage,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FlowArc {
    pub from: Endpoint,
    pub to: Endpoint,
    pub label: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TriggerArc {
    pub from: Endpoint,
    pub to: Endpoint,
    pub condition: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct StaticModel {
    pub machines: Vec<Machine>,
    pub flows: Vec<FlowArc>,
    pub triggers: Vec<TriggerArc>,
    pub declared_methods: Vec<String>,
}

/// What a dotted reference such as `System.Invoice.create` names.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Target {
    Machine(MachineId),
    Port(Endpoint),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ResolveError {
    #[error("unknown reference `{0}`")]
    Unknown(String),
    #[error("ambiguous reference `{0}`")]
    Ambiguous(String),
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TmError {
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
}

fn parse_port(segs: &[String]) -> Option<Port> {
    let lower: Vec<String> = segs.iter().map(|s| s.to_ascii_lowercase()).collect();
    let words: Vec<&str> = lower.iter().map(String::as_str).collect();
    Some(match words.as_slice() {
        ["create"] => Port::Stage(StageKind::Create),
        ["process"] => Port::Stage(StageKind::Process),
        ["release"] => Port::Stage(StageKind::Release),
        ["receive"] => Port::Stage(StageKind::Receive),
        ["transfer", "in"] => Port::Stage(StageKind::Transfer(Direction::In)),
        ["transfer", "out"] => Port::Stage(StageKind::Transfer(Direction::Out)),
        ["storage"] => Port::Storage,
        _ => return None,
    })
}

impl StaticModel {
    pub fn new() -> Self {
        StaticModel::default()
    }

    pub fn add_machine(
        &mut self,
        name: impl Into<String>,
        role: Role,
        parent: Option<MachineId>,
    ) -> MachineId {
        let id = MachineId(self.machines.len());
        let mut m = Machine::new(name, role);
        m.parent = parent;
        self.machines.push(m);
        id
    }

    /// Adds a stage unless one of the same kind already exists.
    pub fn ensure_stage(&mut self, id: MachineId, stage: Stage) {
        let m = &mut self.machines[id.0];
        if !m.stages.iter().any(|s| s.kind == stage.kind) {
            m.stages.push(stage);
        }
    }

    pub fn machine(&self, id: MachineId) -> Option<&Machine> {
        self.machines.get(id.0)
    }

    pub fn ids(&self) -> impl Iterator<Item = MachineId> {
        (0..self.machines.len()).map(MachineId)
    }

    pub fn roots(&self) -> impl Iterator<Item = MachineId> + '_ {
        self.ids()
            .filter(|&id| self.machines[id.0].parent.is_none())
    }

    pub fn children(&self, id: MachineId) -> impl Iterator<Item = MachineId> + '_ {
        self.ids()
            .filter(move |&c| self.machines[c.0].parent == Some(id))
    }

    pub fn child_named(&self, parent: Option<MachineId>, name: &str) -> Option<MachineId> {
        self.ids().find(|&c| {
            let m = &self.machines[c.0];
            m.parent == parent && m.name == name
        })
    }

    /// Machines with the given name at any depth.
    pub fn find_by_name<'a>(&'a self, name: &'a str) -> impl Iterator<Item = MachineId> + 'a {
        self.ids()
            .filter(move |&id| self.machines[id.0].name == name)
    }

    /// Ancestor chain from the root down to `id`. Returns `None` when the
    /// parent links are dangling or cyclic.
    pub fn path(&self, id: MachineId) -> Option<Vec<MachineId>> {
        let mut chain = vec![id];
        let mut cur = self.machine(id)?;
        while let Some(p) = cur.parent {
            if chain.len() > self.machines.len() {
                return None;
            }
            chain.push(p);
            cur = self.machine(p)?;
        }
        chain.reverse();
        Some(chain)
    }

    /// Dotted name path from the root, e.g. `System.Invoice.ID`. Falls back
    /// to `#<index>` for machines that are missing or have a broken path.
    pub fn machine_path(&self, id: MachineId) -> String {
        match self.path(id) {
            Some(chain) => chain
                .iter()
                .map(|c| self.machines[c.0].name.as_str())
                .collect::<Vec<_>>()
                .join("."),
            None => id.to_string(),
        }
    }

    pub fn endpoint_path(&self, ep: Endpoint) -> String {
        format!("{}.{}", self.machine_path(ep.machine), ep.port)
    }

    /// True when the endpoint's machine exists and owns the port.
    pub fn endpoint_exists(&self, ep: Endpoint) -> bool {
        self.machine(ep.machine)
            .is_some_and(|m| m.has_port(ep.port))
    }

    /// Resolves a dotted reference. The first segment names any machine;
    /// later segments descend into children and may end with a stage word
    /// (`create`, `transfer.in`, `storage`, ...). Child names take
    /// precedence over stage words. Port targets are not checked for
    /// existence on the machine.
    pub fn resolve(&self, segs: &[String]) -> Result<Target, ResolveError> {
        let full = segs.join(".");
        let Some(first) = segs.first() else {
            return Err(ResolveError::Unknown(full));
        };
        let mut hits: Vec<(bool, Target)> = Vec::new();
        for start in self.find_by_name(first) {
            if let Some(t) = self.walk(start, &segs[1..]) {
                hits.push((self.machines[start.0].parent.is_none(), t));
            }
        }
        if hits.is_empty() {
            let name = if self.find_by_name(first).next().is_none() {
                first.clone()
            } else {
                full
            };
            return Err(ResolveError::Unknown(name));
        }
        if hits.len() > 1 {
            hits.retain(|(root, _)| *root);
        }
        match hits.as_slice() {
            [(_, t)] => Ok(*t),
            _ => Err(ResolveError::Ambiguous(full)),
        }
    }

    fn walk(&self, at: MachineId, rest: &[String]) -> Option<Target> {
        let Some(next) = rest.first() else {
            return Some(Target::Machine(at));
        };
        if let Some(child) = self.child_named(Some(at), next) {
            return self.walk(child, &rest[1..]);
        }
        parse_port(rest).map(|port| Target::Port(Endpoint { machine: at, port }))
    }
}
