use std::collections::BTreeSet;
use std::fmt::Write;

use super::UmlError;
use crate::lexer::{tokenize, Cursor, ParseError, Token, TokenKind};

pub(crate) const HEADER: &str = "# class model";

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Attribute {
    pub name: String,
    /// Type text as written; may be empty.
    pub ty: String,
    /// Display name for the attribute's machine (`as <Label>`).
    pub label: Option<String>,
}

impl Attribute {
    /// Name of the TM machine that represents this attribute: the label
    /// if given, otherwise the name with its first letter capitalized.
    pub fn machine_name(&self) -> String {
        if let Some(l) = &self.label {
            return l.clone();
        }
        let mut chars = self.name.chars();
        match chars.next() {
            Some(c) => c.to_uppercase().chain(chars).collect(),
            None => String::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Operation {
    pub name: String,
    pub params: Vec<String>,
    /// Explicit `@decreate` marker.
    pub decreate: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Class {
    pub name: String,
    pub attributes: Vec<Attribute>,
    pub operations: Vec<Operation>,
}

impl Class {
    pub fn new(name: impl Into<String>) -> Self {
        Class {
            name: name.into(),
            attributes: Vec::new(),
            operations: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ClassModel {
    pub classes: Vec<Class>,
}

impl ClassModel {
    /// Sorts classes, attributes, and operations by name.
    pub fn canonicalize(&mut self) {
        for c in &mut self.classes {
            c.attributes.sort();
            c.operations.sort();
        }
        self.classes.sort();
    }

    pub fn class(&self, name: &str) -> Option<&Class> {
        self.classes.iter().find(|c| c.name == name)
    }
}

fn skip_visibility(cur: &mut Cursor<'_>) {
    while matches!(
        cur.peek_kind(),
        Some(TokenKind::Sym('+')) | Some(TokenKind::Sym('-')) | Some(TokenKind::Sym('~'))
    ) {
        cur.next();
    }
}

fn slice(text: &str, toks: &[&Token]) -> String {
    match (toks.first(), toks.last()) {
        (Some(a), Some(b)) => text[a.span.0..b.span.1].to_string(),
        _ => String::new(),
    }
}

pub fn parse_class(text: &str) -> Result<ClassModel, UmlError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut model = ClassModel::default();
    let mut class_names = BTreeSet::new();
    let mut attr_names = BTreeSet::new();
    let mut machine_names = BTreeSet::new();
    let mut op_names = BTreeSet::new();

    loop {
        cur.skip_newlines();
        if cur.at_end() {
            break;
        }
        let (kw, pos) = cur.ident("`class`, `attr`, or `op`")?;
        match kw.as_str() {
            "class" => {
                let (name, npos) = cur.ident("class name")?;
                if !class_names.insert(name.clone()) {
                    return Err(UmlError::duplicate(&name, npos));
                }
                // stereotypes and similar trailing decoration
                while !matches!(cur.peek_kind(), None | Some(TokenKind::Newline)) {
                    cur.next();
                }
                attr_names.clear();
                machine_names.clear();
                op_names.clear();
                model.classes.push(Class::new(name));
            }
            "attr" => {
                let Some(class) = model.classes.last_mut() else {
                    return Err(ParseError::at(pos, "`attr` outside of a class").into());
                };
                skip_visibility(&mut cur);
                let (name, npos) = cur.ident("attribute name")?;
                let mut ty = Vec::new();
                let mut label = None;
                if cur.eat(&TokenKind::Sym(':')) {
                    while let Some(t) = cur.peek() {
                        match &t.kind {
                            TokenKind::Newline | TokenKind::Bracketed(_) => break,
                            TokenKind::Ident(s) if s == "as" => break,
                            _ => {
                                ty.push(t);
                                cur.next();
                            }
                        }
                    }
                }
                while matches!(cur.peek_kind(), Some(TokenKind::Bracketed(_))) {
                    cur.next();
                }
                if cur.eat_keyword("as") {
                    label = Some(cur.ident("machine label")?.0);
                }
                let attr = Attribute {
                    name: name.clone(),
                    ty: slice(text, &ty),
                    label,
                };
                if !attr_names.insert(name.clone()) || !machine_names.insert(attr.machine_name()) {
                    return Err(UmlError::duplicate(&name, npos));
                }
                class.attributes.push(attr);
            }
            "op" => {
                let Some(class) = model.classes.last_mut() else {
                    return Err(ParseError::at(pos, "`op` outside of a class").into());
                };
                skip_visibility(&mut cur);
                let (name, npos) = cur.ident("operation name")?;
                cur.expect(&TokenKind::Sym('('))?;
                let mut params = Vec::new();
                let mut current: Vec<&Token> = Vec::new();
                let mut depth = 0usize;
                loop {
                    let Some(t) = cur.peek() else {
                        return Err(cur.unexpected("`)`").into());
                    };
                    match t.kind {
                        TokenKind::Newline => return Err(cur.unexpected("`)`").into()),
                        TokenKind::Sym(')') if depth == 0 => {
                            cur.next();
                            break;
                        }
                        TokenKind::Sym(',') if depth == 0 => {
                            params.push(slice(text, &current));
                            current.clear();
                            cur.next();
                            continue;
                        }
                        TokenKind::Sym('(') | TokenKind::Sym('<') => depth += 1,
                        TokenKind::Sym(')') | TokenKind::Sym('>') => {
                            depth = depth.saturating_sub(1)
                        }
                        _ => {}
                    }
                    current.push(t);
                    cur.next();
                }
                if !current.is_empty() || !params.is_empty() {
                    params.push(slice(text, &current));
                }
                // return type is accepted and dropped
                if cur.eat(&TokenKind::Sym(':')) {
                    while !matches!(
                        cur.peek_kind(),
                        None | Some(TokenKind::Newline) | Some(TokenKind::Sym('@'))
                    ) {
                        cur.next();
                    }
                }
                let mut decreate = false;
                if cur.eat(&TokenKind::Sym('@')) {
                    cur.keyword("decreate")?;
                    decreate = true;
                }
                if !op_names.insert(name.clone()) {
                    return Err(UmlError::duplicate(&name, npos));
                }
                class.operations.push(Operation {
                    name,
                    params,
                    decreate,
                });
            }
            other => return Err(ParseError::at(pos, format!("unknown statement `{other}`")).into()),
        }
        cur.end_of_line()?;
    }
    model.canonicalize();
    Ok(model)
}

/// Canonical text: classes by name, each with attributes then operations
/// in name order.
pub fn serialize_class(m: &ClassModel) -> String {
    let mut m = m.clone();
    m.canonicalize();
    let mut out = String::new();
    let _ = writeln!(out, "{HEADER}");
    for c in &m.classes {
        let _ = writeln!(out, "class {}", c.name);
        for a in &c.attributes {
            let _ = write!(out, "  attr {}", a.name);
            if !a.ty.is_empty() {
                let _ = write!(out, " : {}", a.ty);
            }
            if let Some(l) = &a.label {
                let _ = write!(out, " as {l}");
            }
            out.push('\n');
        }
        for o in &c.operations {
            let _ = write!(out, "  op {}({})", o.name, o.params.join(", "));
            if o.decreate {
                out.push_str(" @decreate");
            }
            out.push('\n');
        }
    }
    out
}
