//! Events file syntax, independent of any static model.
//!
//! ```text
//! event E1 "The operator requests a new invoice" = { Operator.create, System.receive }
//! edge E1 -> E2
//! edge E -> E_O trigger
//! method Createinvoice = E1 -> E2
//! ```

use std::fmt::Write;

use crate::lexer::{dotted, quote, tokenize, Cursor, ParseError, Pos, TokenKind};

use super::EdgeKind;

/// Source position that never affects equality, so parsed documents can
/// be compared by content.
#[derive(Debug, Clone, Copy, Default)]
pub struct SourcePos(pub Pos);

impl PartialEq for SourcePos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

impl Eq for SourcePos {}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MemberRef {
    /// Machine, stage, or storage path.
    Element(Vec<String>),
    Flow(Vec<String>, Vec<String>),
    Trigger(Vec<String>, Vec<String>),
}

impl MemberRef {
    pub fn to_text(&self) -> String {
        match self {
            MemberRef::Element(p) => p.join("."),
            MemberRef::Flow(a, b) => format!("flow {} -> {}", a.join("."), b.join(".")),
            MemberRef::Trigger(a, b) => format!("trigger {} -> {}", a.join("."), b.join(".")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Member {
    pub reference: MemberRef,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EventDecl {
    pub id: String,
    pub description: String,
    pub members: Vec<Member>,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EdgeDecl {
    pub from: String,
    pub to: String,
    pub kind: EdgeKind,
    pub pos: SourcePos,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodDecl {
    pub name: String,
    pub path: Vec<String>,
    pub pos: SourcePos,
}

/// Parsed events file, in declaration order.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct EventsDocument {
    pub events: Vec<EventDecl>,
    pub edges: Vec<EdgeDecl>,
    pub methods: Vec<MethodDecl>,
}

fn member(cur: &mut Cursor<'_>) -> Result<Member, ParseError> {
    let pos = SourcePos(cur.pos());
    let arc = match (cur.peek_kind(), cur.peek_nth(1)) {
        // `flow.create` names a machine called flow
        (Some(TokenKind::Ident(kw)), Some(next))
            if (kw == "flow" || kw == "trigger") && *next != TokenKind::Sym('.') =>
        {
            Some(kw == "flow")
        }
        _ => None,
    };
    let reference = match arc {
        Some(is_flow) => {
            cur.next();
            let (a, _) = dotted(cur, "arc source")?;
            cur.expect(&TokenKind::Arrow)?;
            let (b, _) = dotted(cur, "arc target")?;
            if is_flow {
                MemberRef::Flow(a, b)
            } else {
                MemberRef::Trigger(a, b)
            }
        }
        None => MemberRef::Element(dotted(cur, "region member")?.0),
    };
    Ok(Member { reference, pos })
}

pub fn parse_events_document(text: &str) -> Result<EventsDocument, ParseError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut doc = EventsDocument::default();
    loop {
        cur.skip_newlines();
        if cur.at_end() {
            break;
        }
        let (kw, pos) = cur.ident("`event`, `edge`, or `method`")?;
        match kw.as_str() {
            "event" => {
                let (id, _) = cur.ident("event id")?;
                let description = match cur.peek_kind() {
                    Some(TokenKind::Str(_)) => cur.string("description")?,
                    _ => String::new(),
                };
                cur.expect(&TokenKind::Sym('='))?;
                cur.skip_newlines();
                cur.expect(&TokenKind::Sym('{'))?;
                let mut members = Vec::new();
                cur.skip_newlines();
                if !cur.eat(&TokenKind::Sym('}')) {
                    loop {
                        cur.skip_newlines();
                        members.push(member(&mut cur)?);
                        cur.skip_newlines();
                        if cur.eat(&TokenKind::Sym('}')) {
                            break;
                        }
                        cur.expect(&TokenKind::Sym(','))?;
                    }
                }
                doc.events.push(EventDecl {
                    id,
                    description,
                    members,
                    pos: SourcePos(pos),
                });
            }
            "edge" => {
                let (from, _) = cur.ident("event id")?;
                cur.expect(&TokenKind::Arrow)?;
                let (to, _) = cur.ident("event id")?;
                let kind = match cur.peek_kind() {
                    Some(TokenKind::Ident(s)) if s == "trigger" => {
                        cur.next();
                        EdgeKind::Trigger
                    }
                    Some(TokenKind::Bracketed(s)) if s == "trigger" => {
                        cur.next();
                        EdgeKind::Trigger
                    }
                    _ => EdgeKind::Sequence,
                };
                doc.edges.push(EdgeDecl {
                    from,
                    to,
                    kind,
                    pos: SourcePos(pos),
                });
            }
            "method" => {
                let (name, _) = cur.ident("method name")?;
                cur.expect(&TokenKind::Sym('='))?;
                let mut path = vec![cur.ident("event id")?.0];
                while cur.eat(&TokenKind::Arrow) {
                    path.push(cur.ident("event id")?.0);
                }
                doc.methods.push(MethodDecl {
                    name,
                    path,
                    pos: SourcePos(pos),
                });
            }
            other => return Err(ParseError::at(pos, format!("unknown statement `{other}`"))),
        }
        cur.end_of_line()?;
    }
    Ok(doc)
}

/// Prints a document in declaration order; `parse_events_document` of the
/// result equals the input.
pub fn print_events_document(doc: &EventsDocument) -> String {
    let mut out = String::new();
    for e in &doc.events {
        let members: Vec<String> = e.members.iter().map(|m| m.reference.to_text()).collect();
        let _ = writeln!(
            out,
            "event {} {} = {{ {} }}",
            e.id,
            quote(&e.description),
            members.join(", ")
        );
    }
    for e in &doc.edges {
        let _ = write!(out, "edge {} -> {}", e.from, e.to);
        if e.kind == EdgeKind::Trigger {
            out.push_str(" trigger");
        }
        out.push('\n');
    }
    for m in &doc.methods {
        let _ = writeln!(out, "method {} = {}", m.name, m.path.join(" -> "));
    }
    out
}
