use super::{
    Direction, Endpoint, FlowArc, MachineId, ResolveError, Role, Stage, StageKind, StaticModel,
    Target, TmError, TriggerArc,
};
use crate::lexer::{dotted, tokenize, Cursor, ParseError, Pos, TokenKind};

struct PendingArc {
    trigger: bool,
    from: (Vec<String>, Pos),
    to: (Vec<String>, Pos),
    text: Option<String>,
}

/// Parses the TM text format.
///
/// Statements are separated by line ends or `;`. Machine references in
/// arcs must resolve; whether the named stage exists on that machine is a
/// well-formedness question left to [`validate_static`](super::validate_static).
pub fn parse_tm(text: &str) -> Result<StaticModel, TmError> {
    let tokens = tokenize(text)?;
    let mut cur = Cursor::new(&tokens);
    let mut model = StaticModel::new();
    let mut arcs = Vec::new();

    loop {
        skip_separators(&mut cur);
        if cur.at_end() {
            break;
        }
        let (kw, pos) = cur.ident("`machine`, `flow`, `trigger`, or `method`")?;
        match kw.as_str() {
            "machine" => parse_machine(&mut cur, &mut model, None)?,
            "flow" | "trigger" => {
                let trigger = kw == "trigger";
                let from = dotted(&mut cur, "stage reference")?;
                cur.expect(&TokenKind::Arrow)?;
                let to = dotted(&mut cur, "stage reference")?;
                let text = if cur.eat_keyword(if trigger { "when" } else { "label" }) {
                    Some(cur.string("quoted text")?)
                } else {
                    None
                };
                end_statement(&mut cur)?;
                arcs.push(PendingArc {
                    trigger,
                    from,
                    to,
                    text,
                });
            }
            "method" => {
                let (name, _) = cur.ident("method name")?;
                end_statement(&mut cur)?;
                model.declared_methods.push(name);
            }
            other => return Err(ParseError::at(pos, format!("unknown statement `{other}`")).into()),
        }
    }

    for arc in arcs {
        let from = resolve_endpoint(&model, &arc.from)?;
        let to = resolve_endpoint(&model, &arc.to)?;
        if arc.trigger {
            model.triggers.push(TriggerArc {
                from,
                to,
                condition: arc.text,
            });
        } else {
            model.flows.push(FlowArc {
                from,
                to,
                label: arc.text,
            });
        }
    }
    Ok(model)
}

fn skip_separators(cur: &mut Cursor<'_>) {
    while matches!(
        cur.peek_kind(),
        Some(TokenKind::Newline) | Some(TokenKind::Sym(';'))
    ) {
        cur.next();
    }
}

fn end_statement(cur: &mut Cursor<'_>) -> Result<(), ParseError> {
    match cur.peek_kind() {
        None | Some(TokenKind::Newline) | Some(TokenKind::Sym(';')) | Some(TokenKind::Sym('}')) => {
            Ok(())
        }
        _ => Err(cur.unexpected("end of statement")),
    }
}

fn parse_machine(
    cur: &mut Cursor<'_>,
    model: &mut StaticModel,
    parent: Option<MachineId>,
) -> Result<(), TmError> {
    let (name, pos) = cur.ident("machine name")?;
    if model.child_named(parent, &name).is_some() {
        return Err(
            ParseError::at(pos, format!("duplicate machine `{name}` in the same scope")).into(),
        );
    }
    let role = if cur.eat_keyword("role") {
        let (r, rpos) = cur.ident("role name")?;
        r.parse::<Role>()
            .map_err(|_| ParseError::at(rpos, format!("unknown role `{r}`")))?
    } else {
        Role::Generic
    };
    let id = model.add_machine(name, role, parent);
    cur.skip_newlines();
    cur.expect(&TokenKind::Sym('{'))?;
    loop {
        skip_separators(cur);
        if cur.eat(&TokenKind::Sym('}')) {
            break;
        }
        if cur.at_end() {
            return Err(cur.unexpected("`}`").into());
        }
        let (kw, pos) = cur.ident("`stage`, `storage`, `machine`, or `}`")?;
        match kw.as_str() {
            "stage" => {
                let stage = parse_stage(cur)?;
                model.machines[id.0].stages.push(stage);
            }
            "storage" => model.machines[id.0].storage += 1,
            "machine" => parse_machine(cur, model, Some(id))?,
            other => {
                return Err(ParseError::at(pos, format!("unknown machine item `{other}`")).into())
            }
        }
        end_statement(cur)?;
    }
    end_statement(cur)?;
    Ok(())
}

fn parse_stage(cur: &mut Cursor<'_>) -> Result<Stage, ParseError> {
    let (word, pos) = cur.ident("stage kind")?;
    let kind = match word.to_ascii_lowercase().as_str() {
        "create" => StageKind::Create,
        "process" => StageKind::Process,
        "release" => StageKind::Release,
        "receive" => StageKind::Receive,
        "transfer" => {
            if !cur.eat(&TokenKind::Sym('.')) {
                return Err(ParseError::at(pos, "transfer stage needs `.in` or `.out`"));
            }
            let (dir, dpos) = cur.ident("`in` or `out`")?;
            match dir.as_str() {
                "in" => StageKind::Transfer(Direction::In),
                "out" => StageKind::Transfer(Direction::Out),
                _ => return Err(ParseError::at(dpos, "expected `in` or `out`")),
            }
        }
        _ => return Err(ParseError::at(pos, format!("unknown stage kind `{word}`"))),
    };
    let decreate = cur.eat_keyword("decreate");
    Ok(Stage { kind, decreate })
}

fn resolve_endpoint(
    model: &StaticModel,
    (segs, pos): &(Vec<String>, Pos),
) -> Result<Endpoint, TmError> {
    match model.resolve(segs) {
        Ok(Target::Port(ep)) => Ok(ep),
        Ok(Target::Machine(_)) => Err(ParseError::at(
            *pos,
            format!(
                "`{}` names a machine; arcs need a stage or storage",
                segs.join(".")
            ),
        )
        .into()),
        Err(ResolveError::Unknown(name)) => Err(TmError::UnknownReference {
            name,
            line: pos.line,
            column: pos.column,
        }),
        Err(ResolveError::Ambiguous(name)) => Err(TmError::AmbiguousReference {
            name,
            line: pos.line,
            column: pos.column,
        }),
    }
}
