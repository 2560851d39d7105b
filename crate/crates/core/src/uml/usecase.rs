use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::UmlError;
use crate::lexer::{tokenize, Cursor, ParseError, Pos, TokenKind};

pub(crate) const HEADER: &str = "# use case model";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Extend {
    pub extension: String,
    pub base: String,
    pub condition: Option<String>,
}

/// Use-case model. Relations are sets, so two models with the same
/// content compare equal whatever order their files listed it in.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct UseCaseModel {
    pub subject: String,
    pub actors: BTreeSet<String>,
    pub usecases: BTreeSet<String>,
    /// (actor, use case)
    pub associations: BTreeSet<(String, String)>,
    /// (base, included)
    pub includes: BTreeSet<(String, String)>,
    pub extends: BTreeSet<Extend>,
    /// (specific, general)
    pub actor_generalizations: BTreeSet<(String, String)>,
    /// (specific, general)
    pub usecase_generalizations: BTreeSet<(String, String)>,
}

impl UseCaseModel {
    pub fn new(subject: impl Into<String>) -> Self {
        UseCaseModel {
            subject: subject.into(),
            ..Default::default()
        }
    }
}

#[derive(PartialEq)]
enum Kind {
    Actor,
    UseCase,
}

/// Skips multiplicity decorations such as `1`, `*`, `0..*`, or `[1..*]`.
fn skip_multiplicity(cur: &mut Cursor<'_>) {
    loop {
        match cur.peek_kind() {
            Some(TokenKind::Bracketed(_))
            | Some(TokenKind::Sym('*'))
            | Some(TokenKind::Sym('.')) => {
                cur.next();
            }
            Some(TokenKind::Ident(s)) if s.chars().all(|c| c.is_ascii_digit()) => {
                cur.next();
            }
            _ => return,
        }
    }
}

pub fn parse_usecase(text: &str) -> Result<UseCaseModel, UmlError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut subject: Option<String> = None;
    let mut declared: BTreeMap<String, Kind> = BTreeMap::new();
    let mut model = UseCaseModel::default();
    // relations are checked after all declarations are known
    let mut refs: Vec<(String, Pos, Kind)> = Vec::new();

    loop {
        cur.skip_newlines();
        if cur.at_end() {
            break;
        }
        let (kw, pos) = cur.ident("a use-case statement")?;
        match kw.as_str() {
            "subject" => {
                let (name, npos) = cur.ident("subject name")?;
                if subject.is_some() {
                    return Err(ParseError::at(pos, "subject declared twice").into());
                }
                if declared.contains_key(&name) {
                    return Err(UmlError::duplicate(&name, npos));
                }
                subject = Some(name);
            }
            "actor" | "usecase" => {
                let (name, npos) = cur.ident("name")?;
                if declared.contains_key(&name) || subject.as_deref() == Some(name.as_str()) {
                    return Err(UmlError::duplicate(&name, npos));
                }
                if kw == "actor" {
                    model.actors.insert(name.clone());
                    declared.insert(name, Kind::Actor);
                } else {
                    model.usecases.insert(name.clone());
                    declared.insert(name, Kind::UseCase);
                }
            }
            "assoc" => {
                let (a, apos) = cur.ident("actor name")?;
                skip_multiplicity(&mut cur);
                cur.expect(&TokenKind::DashDash)?;
                skip_multiplicity(&mut cur);
                let (u, upos) = cur.ident("use case name")?;
                skip_multiplicity(&mut cur);
                refs.push((a.clone(), apos, Kind::Actor));
                refs.push((u.clone(), upos, Kind::UseCase));
                model.associations.insert((a, u));
            }
            "include" => {
                let (b, bpos) = cur.ident("base use case")?;
                cur.keyword("includes")?;
                let (i, ipos) = cur.ident("included use case")?;
                if b == i {
                    return Err(UmlError::SelfRelation {
                        name: b,
                        line: ipos.line,
                        column: ipos.column,
                    });
                }
                refs.push((b.clone(), bpos, Kind::UseCase));
                refs.push((i.clone(), ipos, Kind::UseCase));
                model.includes.insert((b, i));
            }
            "extend" => {
                let (x, xpos) = cur.ident("extension use case")?;
                cur.keyword("extends")?;
                let (b, bpos) = cur.ident("base use case")?;
                let condition = match cur.peek_kind() {
                    Some(TokenKind::Bracketed(c)) => {
                        cur.next();
                        Some(c.clone())
                    }
                    _ => None,
                };
                if x == b {
                    return Err(UmlError::SelfRelation {
                        name: x,
                        line: bpos.line,
                        column: bpos.column,
                    });
                }
                refs.push((x.clone(), xpos, Kind::UseCase));
                refs.push((b.clone(), bpos, Kind::UseCase));
                model.extends.insert(Extend {
                    extension: x,
                    base: b,
                    condition,
                });
            }
            "actorgen" | "ucgen" => {
                let (s, spos) = cur.ident("specific name")?;
                cur.expect(&TokenKind::Arrow)?;
                let (g, gpos) = cur.ident("general name")?;
                let kind = || {
                    if kw == "actorgen" {
                        Kind::Actor
                    } else {
                        Kind::UseCase
                    }
                };
                refs.push((s.clone(), spos, kind()));
                refs.push((g.clone(), gpos, kind()));
                if kw == "actorgen" {
                    model.actor_generalizations.insert((s, g));
                } else {
                    model.usecase_generalizations.insert((s, g));
                }
            }
            other => return Err(ParseError::at(pos, format!("unknown statement `{other}`")).into()),
        }
        cur.end_of_line()?;
    }

    for (name, pos, kind) in refs {
        if declared.get(&name) != Some(&kind) {
            return Err(UmlError::undeclared(&name, pos));
        }
    }
    model.subject =
        subject.ok_or_else(|| ParseError::new(1, 1, "missing `subject` declaration"))?;
    check_acyclic(&model.actor_generalizations)?;
    check_acyclic(&model.usecase_generalizations)?;
    Ok(model)
}

fn check_acyclic(edges: &BTreeSet<(String, String)>) -> Result<(), UmlError> {
    let mut succ: BTreeMap<&str, Vec<&str>> = BTreeMap::new();
    for (s, g) in edges {
        succ.entry(s).or_default().push(g);
    }
    // 0 = unseen, 1 = on stack, 2 = done
    let mut state: BTreeMap<&str, u8> = BTreeMap::new();
    fn visit<'a>(
        n: &'a str,
        succ: &BTreeMap<&'a str, Vec<&'a str>>,
        state: &mut BTreeMap<&'a str, u8>,
    ) -> Result<(), UmlError> {
        match state.get(n) {
            Some(1) => return Err(UmlError::CyclicGeneralization(n.to_string())),
            Some(2) => return Ok(()),
            _ => {}
        }
        state.insert(n, 1);
        for &m in succ.get(n).map(Vec::as_slice).unwrap_or(&[]) {
            visit(m, succ, state)?;
        }
        state.insert(n, 2);
        Ok(())
    }
    for &n in succ.keys() {
        visit(n, &succ, &mut state)?;
    }
    Ok(())
}

/// Canonical text: declarations then relations, each group sorted.
/// Extend conditions must not contain `]` or line breaks.
pub fn serialize_usecase(m: &UseCaseModel) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    let _ = writeln!(out, "subject {}", m.subject);
    for a in &m.actors {
        let _ = writeln!(out, "actor {a}");
    }
    for u in &m.usecases {
        let _ = writeln!(out, "usecase {u}");
    }
    for (a, u) in &m.associations {
        let _ = writeln!(out, "assoc {a} -- {u}");
    }
    for (b, i) in &m.includes {
        let _ = writeln!(out, "include {b} includes {i}");
    }
    for e in &m.extends {
        let _ = write!(out, "extend {} extends {}", e.extension, e.base);
        if let Some(c) = &e.condition {
            let _ = write!(out, " [{c}]");
        }
        out.push('\n');
    }
    for (s, g) in &m.actor_generalizations {
        let _ = writeln!(out, "actorgen {s} -> {g}");
    }
    for (s, g) in &m.usecase_generalizations {
        let _ = writeln!(out, "ucgen {s} -> {g}");
    }
    out
}
