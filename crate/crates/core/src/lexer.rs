//! Line-aware tokenizer shared by the TM, use-case, class, binding, and
//! events formats.
//!
//! All formats are line oriented with `#` comments. A `#` starts a comment
//! when it appears at the start of a line or after whitespace; inside a
//! string literal it is ordinary text.

use std::fmt;

use thiserror::Error;

/// A syntax error with a 1-based source position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{line}:{column}: {message}")]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    pub(crate) fn at(pos: Pos, message: impl Into<String>) -> Self {
        ParseError::new(pos.line, pos.column, message)
    }
}

/// 1-based line and column (columns count characters, not bytes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Default)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum TokenKind {
    /// Name-like run: letters, digits, `_`, and interior `-` (as in `actor-region`).
    Ident(String),
    /// Double-quoted string with `\"` and `\\` escapes.
    Str(String),
    /// Raw text between `[` and `]` on one line.
    Bracketed(String),
    Arrow,
    FatArrow,
    DashDash,
    Newline,
    Sym(char),
}

impl fmt::Display for TokenKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokenKind::Ident(s) => write!(f, "`{s}`"),
            TokenKind::Str(_) => f.write_str("string literal"),
            TokenKind::Bracketed(_) => f.write_str("bracketed text"),
            TokenKind::Arrow => f.write_str("`->`"),
            TokenKind::FatArrow => f.write_str("`=>`"),
            TokenKind::DashDash => f.write_str("`--`"),
            TokenKind::Newline => f.write_str("end of line"),
            TokenKind::Sym(c) => write!(f, "`{c}`"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub pos: Pos,
    /// Byte range in the source text.
    pub span: (usize, usize),
}

fn is_name_char(c: char) -> bool {
    c.is_alphanumeric() || c == '_'
}

/// Tokenizes `text`. Every line, including the last, ends with a `Newline`
/// token so that parsers can treat line ends uniformly.
pub fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let mut out = Vec::new();
    let mut chars = text.char_indices().peekable();
    let mut line = 1;
    let mut col = 1;
    let mut prev_ws = true;

    while let Some(&(start, c)) = chars.peek() {
        let pos = Pos { line, column: col };
        if c == '\n' {
            chars.next();
            out.push(Token {
                kind: TokenKind::Newline,
                pos,
                span: (start, start + 1),
            });
            line += 1;
            col = 1;
            prev_ws = true;
            continue;
        }
        if c.is_whitespace() {
            chars.next();
            col += 1;
            prev_ws = true;
            continue;
        }
        if c == '#' && prev_ws {
            while let Some(&(_, c)) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                col += 1;
            }
            continue;
        }
        prev_ws = false;

        if is_name_char(c) {
            let mut s = String::new();
            let mut end = start;
            while let Some(&(i, c)) = chars.peek() {
                if is_name_char(c) {
                    s.push(c);
                    end = i + c.len_utf8();
                    chars.next();
                    col += 1;
                } else if c == '-' {
                    // interior hyphen only when a name char follows
                    let mut look = chars.clone();
                    look.next();
                    match look.peek() {
                        Some(&(_, n)) if is_name_char(n) => {
                            s.push('-');
                            end = i + 1;
                            chars.next();
                            col += 1;
                        }
                        _ => break,
                    }
                } else {
                    break;
                }
            }
            out.push(Token {
                kind: TokenKind::Ident(s),
                pos,
                span: (start, end),
            });
            continue;
        }

        match c {
            '"' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                let end;
                loop {
                    match chars.next() {
                        None | Some((_, '\n')) => {
                            return Err(ParseError::at(pos, "unterminated string literal"))
                        }
                        Some((i, '"')) => {
                            col += 1;
                            end = i + 1;
                            break;
                        }
                        Some((_, '\\')) => {
                            col += 1;
                            match chars.next() {
                                Some((_, '"')) => s.push('"'),
                                Some((_, '\\')) => s.push('\\'),
                                Some((_, 'n')) => s.push('\n'),
                                _ => {
                                    return Err(ParseError::new(
                                        line,
                                        col,
                                        "invalid escape in string literal",
                                    ))
                                }
                            }
                            col += 1;
                        }
                        Some((_, c)) => {
                            s.push(c);
                            col += 1;
                        }
                    }
                }
                out.push(Token {
                    kind: TokenKind::Str(s),
                    pos,
                    span: (start, end),
                });
            }
            '[' => {
                chars.next();
                col += 1;
                let mut s = String::new();
                let end;
                loop {
                    match chars.next() {
                        None | Some((_, '\n')) => {
                            return Err(ParseError::at(pos, "unterminated `[`"))
                        }
                        Some((i, ']')) => {
                            col += 1;
                            end = i + 1;
                            break;
                        }
                        Some((_, c)) => {
                            s.push(c);
                            col += 1;
                        }
                    }
                }
                out.push(Token {
                    kind: TokenKind::Bracketed(s.trim().to_string()),
                    pos,
                    span: (start, end),
                });
            }
            '-' | '=' => {
                chars.next();
                col += 1;
                let kind = match (c, chars.peek().map(|&(_, n)| n)) {
                    ('-', Some('>')) => Some(TokenKind::Arrow),
                    ('-', Some('-')) => Some(TokenKind::DashDash),
                    ('=', Some('>')) => Some(TokenKind::FatArrow),
                    _ => None,
                };
                match kind {
                    Some(kind) => {
                        chars.next();
                        col += 1;
                        out.push(Token {
                            kind,
                            pos,
                            span: (start, start + 2),
                        });
                    }
                    None => out.push(Token {
                        kind: TokenKind::Sym(c),
                        pos,
                        span: (start, start + 1),
                    }),
                }
            }
            _ => {
                chars.next();
                col += 1;
                out.push(Token {
                    kind: TokenKind::Sym(c),
                    pos,
                    span: (start, start + c.len_utf8()),
                });
            }
        }
    }
    let pos = Pos { line, column: col };
    if out.last().is_none_or(|t| t.kind != TokenKind::Newline) {
        out.push(Token {
            kind: TokenKind::Newline,
            pos,
            span: (text.len(), text.len()),
        });
    }
    Ok(out)
}

/// Cursor over a token stream with the small set of helpers every format
/// parser needs.
pub(crate) struct Cursor<'a> {
    tokens: &'a [Token],
    idx: usize,
}

impl<'a> Cursor<'a> {
    pub fn new(tokens: &'a [Token]) -> Self {
        Cursor { tokens, idx: 0 }
    }

    pub fn peek(&self) -> Option<&'a Token> {
        self.tokens.get(self.idx)
    }

    pub fn peek_kind(&self) -> Option<&'a TokenKind> {
        self.peek().map(|t| &t.kind)
    }

    pub fn peek_nth(&self, n: usize) -> Option<&'a TokenKind> {
        self.tokens.get(self.idx + n).map(|t| &t.kind)
    }

    pub fn next(&mut self) -> Option<&'a Token> {
        let t = self.tokens.get(self.idx);
        if t.is_some() {
            self.idx += 1;
        }
        t
    }

    pub fn at_end(&self) -> bool {
        self.idx >= self.tokens.len()
    }

    /// Position of the next token, or the end of input.
    pub fn pos(&self) -> Pos {
        self.peek()
            .or_else(|| self.tokens.last())
            .map(|t| t.pos)
            .unwrap_or(Pos { line: 1, column: 1 })
    }

    pub fn skip_newlines(&mut self) {
        while matches!(self.peek_kind(), Some(TokenKind::Newline)) {
            self.idx += 1;
        }
    }

    pub fn unexpected(&self, wanted: &str) -> ParseError {
        match self.peek() {
            Some(t) => ParseError::at(t.pos, format!("expected {wanted}, found {}", t.kind)),
            None => ParseError::at(self.pos(), format!("expected {wanted}, found end of input")),
        }
    }

    pub fn ident(&mut self, wanted: &str) -> Result<(String, Pos), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                pos,
                ..
            }) => {
                self.idx += 1;
                Ok((s.clone(), *pos))
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    pub fn keyword(&mut self, kw: &str) -> Result<Pos, ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokenKind::Ident(s),
                pos,
                ..
            }) if s == kw => {
                self.idx += 1;
                Ok(*pos)
            }
            _ => Err(self.unexpected(&format!("`{kw}`"))),
        }
    }

    pub fn eat_keyword(&mut self, kw: &str) -> bool {
        match self.peek_kind() {
            Some(TokenKind::Ident(s)) if s == kw => {
                self.idx += 1;
                true
            }
            _ => false,
        }
    }

    pub fn expect(&mut self, kind: &TokenKind) -> Result<Pos, ParseError> {
        match self.peek() {
            Some(t) if &t.kind == kind => {
                self.idx += 1;
                Ok(t.pos)
            }
            _ => Err(self.unexpected(&kind.to_string())),
        }
    }

    pub fn eat(&mut self, kind: &TokenKind) -> bool {
        if self.peek_kind() == Some(kind) {
            self.idx += 1;
            true
        } else {
            false
        }
    }

    pub fn string(&mut self, wanted: &str) -> Result<String, ParseError> {
        match self.peek_kind() {
            Some(TokenKind::Str(s)) => {
                self.idx += 1;
                Ok(s.clone())
            }
            _ => Err(self.unexpected(wanted)),
        }
    }

    /// Requires the end of the current line.
    pub fn end_of_line(&mut self) -> Result<(), ParseError> {
        match self.peek_kind() {
            None => Ok(()),
            Some(TokenKind::Newline) => {
                self.idx += 1;
                Ok(())
            }
            _ => Err(self.unexpected("end of line")),
        }
    }
}

/// Dotted name such as `System.Invoice.ID.create`.
pub(crate) fn dotted(cur: &mut Cursor<'_>, wanted: &str) -> Result<(Vec<String>, Pos), ParseError> {
    let (first, pos) = cur.ident(wanted)?;
    let mut parts = vec![first];
    while cur.eat(&TokenKind::Sym('.')) {
        parts.push(cur.ident("name after `.`")?.0);
    }
    Ok((parts, pos))
}

/// Escapes `s` as a double-quoted literal readable by [`tokenize`].
pub(crate) fn quote(s: &str) -> String {
    let mut out = String::with_capacity(s.len() + 2);
    out.push('"');
    for c in s.chars() {
        match c {
            '"' => out.push_str("\\\""),
            '\\' => out.push_str("\\\\"),
            '\n' => out.push_str("\\n"),
            c => out.push(c),
        }
    }
    out.push('"');
    out
}

/// True when `s` lexes as exactly one identifier token.
pub fn is_plain_name(s: &str) -> bool {
    matches!(tokenize(s).as_deref(), Ok([Token { kind: TokenKind::Ident(t), .. }, Token { kind: TokenKind::Newline, .. }]) if t == s)
}
