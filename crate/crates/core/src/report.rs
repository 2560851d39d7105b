use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Error,
    Warning,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Error => "error",
            Severity::Warning => "warning",
        })
    }
}

/// Finding codes produced by the static, region, and behavior checks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Code {
    /// Solid flow between stages that may not follow each other.
    FlowAdj,
    /// More than one stage for a (kind, direction) pair.
    DupStage,
    /// `decreate` on a stage that is not a Create.
    DecreateKind,
    /// More than one storage node in a machine.
    DupStorage,
    /// Trigger landing on something other than Create or Process.
    TriggerTarget,
    /// Arc or parent link naming an element that does not exist.
    UnknownRef,
    /// Machine is its own ancestor.
    ContainmentCycle,
    RegionEmpty,
    RegionDisconnected,
    UncoveredElement,
    PathBroken,
}

impl Code {
    pub fn as_str(self) -> &'static str {
        match self {
            Code::FlowAdj => "FLOW_ADJ",
            Code::DupStage => "DUP_STAGE",
            Code::DecreateKind => "DECREATE_KIND",
            Code::DupStorage => "DUP_STORAGE",
            Code::TriggerTarget => "TRIGGER_TARGET",
            Code::UnknownRef => "UNKNOWN_REF",
            Code::ContainmentCycle => "CONTAINMENT_CYCLE",
            Code::RegionEmpty => "REGION_EMPTY",
            Code::RegionDisconnected => "REGION_DISCONNECTED",
            Code::UncoveredElement => "UNCOVERED_ELEMENT",
            Code::PathBroken => "PATH_BROKEN",
        }
    }
}

impl fmt::Display for Code {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub code: Code,
    pub location: String,
    pub message: String,
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{} {} at {}: {}",
            self.severity, self.code, self.location, self.message
        )
    }
}

/// Ordered list of findings. An empty report means the checked artifact
/// is well formed.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct ValidationReport {
    findings: Vec<Finding>,
}

impl ValidationReport {
    /// Builds a report sorted by location, then code, then message.
    pub fn from_findings(mut findings: Vec<Finding>) -> Self {
        findings.sort_by(|a, b| {
            (&a.location, a.code, &a.message).cmp(&(&b.location, b.code, &b.message))
        });
        ValidationReport { findings }
    }

    pub fn findings(&self) -> &[Finding] {
        &self.findings
    }

    pub fn is_empty(&self) -> bool {
        self.findings.is_empty()
    }

    pub fn len(&self) -> usize {
        self.findings.len()
    }

    pub fn has_errors(&self) -> bool {
        self.findings.iter().any(|f| f.severity == Severity::Error)
    }

    pub fn errors(&self) -> impl Iterator<Item = &Finding> {
        self.findings
            .iter()
            .filter(|f| f.severity == Severity::Error)
    }

    pub fn codes(&self) -> Vec<Code> {
        self.findings.iter().map(|f| f.code).collect()
    }

    pub fn merge(self, other: ValidationReport) -> ValidationReport {
        let mut all = self.findings;
        all.extend(other.findings);
        ValidationReport::from_findings(all)
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for finding in &self.findings {
            writeln!(f, "{finding}")?;
        }
        Ok(())
    }
}

pub(crate) fn error(
    code: Code,
    location: impl Into<String>,
    message: impl Into<String>,
) -> Finding {
    Finding {
        severity: Severity::Error,
        code,
        location: location.into(),
        message: message.into(),
    }
}

pub(crate) fn warning(
    code: Code,
    location: impl Into<String>,
    message: impl Into<String>,
) -> Finding {
    Finding {
        severity: Severity::Warning,
        code,
        location: location.into(),
        message: message.into(),
    }
}
