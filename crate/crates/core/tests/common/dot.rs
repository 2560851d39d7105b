//! A small DOT reader for checking emitted graphs. It accepts the subset
//! of the Graphviz grammar the tests care about (strict statement syntax,
//! nested subgraphs, attribute lists) and rejects anything malformed.

use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Id(String),
    Punct(&'static str),
}

fn lex(text: &str) -> Result<Vec<Tok>, String> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c == '"' {
            let mut s = String::new();
            i += 1;
            loop {
                match chars.get(i) {
                    None => return Err("unterminated string".into()),
                    Some('"') => break,
                    Some('\\') => {
                        s.push('\\');
                        s.push(*chars.get(i + 1).ok_or("dangling escape")?);
                        i += 2;
                    }
                    Some(&ch) => {
                        s.push(ch);
                        i += 1;
                    }
                }
            }
            i += 1;
            out.push(Tok::Id(s));
        } else if c == '-' && chars.get(i + 1) == Some(&'>') {
            out.push(Tok::Punct("->"));
            i += 2;
        } else if let Some(p) = ["{", "}", "[", "]", "=", ";", ","]
            .iter()
            .find(|p| p.starts_with(c))
        {
            out.push(Tok::Punct(p));
            i += 1;
        } else if c.is_alphanumeric() || c == '_' || c == '#' || c == '.' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || "_#.".contains(chars[i])) {
                i += 1;
            }
            out.push(Tok::Id(chars[start..i].iter().collect()));
        } else {
            return Err(format!("unexpected character {c:?}"));
        }
    }
    Ok(out)
}

#[derive(Debug, Default)]
pub struct DotGraph {
    pub name: String,
    /// Names of every subgraph, in order of appearance.
    pub subgraphs: Vec<String>,
    /// Declared nodes with their attributes.
    pub nodes: BTreeMap<String, BTreeMap<String, String>>,
    /// Edges with their attributes.
    pub edges: Vec<(String, String, BTreeMap<String, String>)>,
    /// Deepest subgraph nesting seen.
    pub max_depth: usize,
}

struct Reader {
    toks: Vec<Tok>,
    at: usize,
}

impl Reader {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at)
    }

    fn punct(&mut self, p: &str) -> Result<(), String> {
        match self.toks.get(self.at) {
            Some(Tok::Punct(q)) if *q == p => {
                self.at += 1;
                Ok(())
            }
            other => Err(format!("expected `{p}`, found {other:?}")),
        }
    }

    fn eat(&mut self, p: &str) -> bool {
        self.punct(p).is_ok()
    }

    fn id(&mut self) -> Result<String, String> {
        match self.toks.get(self.at) {
            Some(Tok::Id(s)) => {
                self.at += 1;
                Ok(s.clone())
            }
            other => Err(format!("expected identifier, found {other:?}")),
        }
    }

    fn attrs(&mut self) -> Result<BTreeMap<String, String>, String> {
        let mut out = BTreeMap::new();
        while self.eat("[") {
            while !self.eat("]") {
                let k = self.id()?;
                self.punct("=")?;
                let v = self.id()?;
                out.insert(k, v);
                if !self.eat(",") {
                    self.eat(";");
                }
            }
        }
        Ok(out)
    }

    fn stmts(&mut self, g: &mut DotGraph, depth: usize) -> Result<(), String> {
        g.max_depth = g.max_depth.max(depth);
        loop {
            match self.peek() {
                Some(Tok::Punct("}")) => {
                    self.at += 1;
                    return Ok(());
                }
                None => return Err("missing `}`".into()),
                _ => {}
            }
            let first = self.id()?;
            match first.as_str() {
                "subgraph" => {
                    let name = self.id()?;
                    g.subgraphs.push(name);
                    self.punct("{")?;
                    self.stmts(g, depth + 1)?;
                }
                "graph" | "node" | "edge" => {
                    self.attrs()?;
                }
                _ => {
                    if self.eat("=") {
                        self.id()?;
                    } else if self.eat("->") {
                        let to = self.id()?;
                        let a = self.attrs()?;
                        for end in [&first, &to] {
                            if !g.nodes.contains_key(end) {
                                return Err(format!("edge endpoint {end} was never declared"));
                            }
                        }
                        g.edges.push((first, to, a));
                    } else {
                        let a = self.attrs()?;
                        g.nodes.insert(first, a);
                    }
                }
            }
            self.eat(";");
        }
    }
}

/// Parses a `digraph`. Edge endpoints must have been declared as nodes
/// earlier, which the emitter guarantees.
pub fn parse_dot(text: &str) -> Result<DotGraph, String> {
    let mut r = Reader {
        toks: lex(text)?,
        at: 0,
    };
    if r.id()? != "digraph" {
        return Err("not a digraph".into());
    }
    let mut g = DotGraph {
        name: r.id()?,
        ..Default::default()
    };
    r.punct("{")?;
    r.stmts(&mut g, 0)?;
    if r.at != r.toks.len() {
        return Err("trailing tokens after graph".into());
    }
    Ok(g)
}
