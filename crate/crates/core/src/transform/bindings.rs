use std::collections::{BTreeMap, BTreeSet};
use std::fmt::Write;

use super::TransformError;
use crate::lexer::{dotted, tokenize, Cursor, ParseError, TokenKind};
use crate::uml::ClassModel;

/// How class fragments attach to the use-case skeleton.
///
/// File format, one directive per line:
///
/// ```text
/// bind Invoice -> System
/// @decreate Deleteinvoice
/// ```
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct BindingMap {
    /// Class name → dotted path of the machine it goes inside.
    pub class_to_subject: BTreeMap<String, String>,
    /// Operation name → declared method name.
    pub operation_bindings: BTreeMap<String, String>,
    /// Operations explicitly marked as deleting instances.
    pub decreate_ops: BTreeSet<String>,
}

impl BindingMap {
    /// Marks the `@decreate` operations in `cm`. Every listed operation
    /// must exist in some class.
    pub fn apply_decreate(&self, cm: &mut ClassModel) -> Result<(), TransformError> {
        for op in &self.decreate_ops {
            let mut found = false;
            for o in cm
                .classes
                .iter_mut()
                .flat_map(|c| c.operations.iter_mut())
                .filter(|o| &o.name == op)
            {
                o.decreate = true;
                found = true;
            }
            if !found {
                return Err(TransformError::UnknownBinding(op.clone()));
            }
        }
        Ok(())
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        for (c, t) in &self.class_to_subject {
            let _ = writeln!(out, "bind {c} -> {t}");
        }
        for op in &self.decreate_ops {
            let _ = writeln!(out, "@decreate {op}");
        }
        out
    }
}

pub fn parse_bindings(text: &str) -> Result<BindingMap, TransformError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut map = BindingMap::default();
    loop {
        cur.skip_newlines();
        if cur.at_end() {
            break;
        }
        if cur.eat(&TokenKind::Sym('@')) {
            cur.keyword("decreate")?;
            let (op, _) = cur.ident("operation name")?;
            map.decreate_ops.insert(op);
        } else {
            let pos = cur.keyword("bind")?;
            let (class, _) = cur.ident("class name")?;
            cur.expect(&TokenKind::Arrow)?;
            let (target, _) = dotted(&mut cur, "machine name")?;
            if map
                .class_to_subject
                .insert(class.clone(), target.join("."))
                .is_some()
            {
                return Err(ParseError::at(pos, format!("class `{class}` bound twice")).into());
            }
        }
        cur.end_of_line()?;
    }
    Ok(map)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::uml::parse_class;

    #[test]
    fn parses_both_directives() {
        let map = parse_bindings(
            "# where classes live\nbind Invoice -> System.Billing\n@decreate Purge\n",
        )
        .unwrap();
        assert_eq!(map.class_to_subject["Invoice"], "System.Billing");
        assert!(map.decreate_ops.contains("Purge"));
        assert_eq!(parse_bindings(&map.to_text()).unwrap(), map);
    }

    #[test]
    fn double_binding_is_an_error() {
        assert!(parse_bindings("bind A -> X\nbind A -> Y").is_err());
        assert!(parse_bindings("bound A -> X").is_err());
    }

    #[test]
    fn decreate_directive_marks_operation() {
        let mut cm = parse_class("class C\n  op purge()").unwrap();
        let map = parse_bindings("@decreate purge").unwrap();
        map.apply_decreate(&mut cm).unwrap();
        assert!(cm.classes[0].operations[0].decreate);
        let map = parse_bindings("@decreate ghost").unwrap();
        assert_eq!(
            map.apply_decreate(&mut cm),
            Err(TransformError::UnknownBinding("ghost".into()))
        );
    }
}
