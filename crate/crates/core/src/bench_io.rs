//! BENCH-format reader and writer.
//!
//! The dialect is the ISCAS'85 grammar extended with `KEYINPUT(x)`,
//! `DFF(x)`, `CDFF(x)`, `MUX2(s,a,b)` and `CONST0()`/`CONST1()`. Keywords are
//! case-insensitive, net names are case-sensitive, `#` starts a comment.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::netlist::{GateKind, NetId, Netlist, NetlistError};

enum Decl {
    Input(String),
    KeyInput(String),
    Output(String),
    Gate {
        name: String,
        kind: GateKind,
        fanins: Vec<String>,
    },
}

fn is_name_char(c: char) -> bool {
    c.is_ascii_alphanumeric() || matches!(c, '_' | '.' | '[' | ']' | '$' | '-')
}

fn syntax(line: usize, msg: impl Into<String>) -> NetlistError {
    NetlistError::Syntax {
        line,
        msg: msg.into(),
    }
}

fn parse_call(line_no: usize, s: &str) -> Result<(String, Vec<String>), NetlistError> {
    let open = s
        .find('(')
        .ok_or_else(|| syntax(line_no, "expected `(`"))?;
    let close = s
        .rfind(')')
        .ok_or_else(|| syntax(line_no, "expected `)`"))?;
    if close < open || !s[close + 1..].trim().is_empty() {
        return Err(syntax(line_no, "malformed argument list"));
    }
    let head = s[..open].trim().to_string();
    let inner = s[open + 1..close].trim();
    let args = if inner.is_empty() {
        Vec::new()
    } else {
        inner
            .split(',')
            .map(|a| a.trim().to_string())
            .collect::<Vec<_>>()
    };
    for a in &args {
        if a.is_empty() || !a.chars().all(is_name_char) {
            return Err(syntax(line_no, format!("invalid net name `{a}`")));
        }
    }
    Ok((head, args))
}

fn parse_line(line_no: usize, raw: &str) -> Result<Option<Decl>, NetlistError> {
    let line = match raw.find('#') {
        Some(i) => &raw[..i],
        None => raw,
    }
    .trim();
    if line.is_empty() {
        return Ok(None);
    }

    if let Some(eq) = line.find('=') {
        let name = line[..eq].trim();
        if name.is_empty() || !name.chars().all(is_name_char) {
            return Err(syntax(line_no, format!("invalid net name `{name}`")));
        }
        let (kw, fanins) = parse_call(line_no, line[eq + 1..].trim())?;
        let kind = GateKind::from_keyword(&kw)
            .filter(|k| !k.is_source())
            .ok_or_else(|| syntax(line_no, format!("unknown gate keyword `{kw}`")))?;
        if !kind.arity_ok(fanins.len()) {
            return Err(NetlistError::Arity {
                kind,
                name: name.to_string(),
                got: fanins.len(),
            });
        }
        return Ok(Some(Decl::Gate {
            name: name.to_string(),
            kind,
            fanins,
        }));
    }

    let (kw, mut args) = parse_call(line_no, line)?;
    if args.len() != 1 {
        return Err(syntax(line_no, format!("`{kw}` takes exactly one net name")));
    }
    let arg = args.pop().expect("checked length");
    match kw.to_ascii_uppercase().as_str() {
        "INPUT" => Ok(Some(Decl::Input(arg))),
        "KEYINPUT" => Ok(Some(Decl::KeyInput(arg))),
        "OUTPUT" => Ok(Some(Decl::Output(arg))),
        other => Err(syntax(line_no, format!("unknown declaration `{other}`"))),
    }
}

/// Parse BENCH text into a validated [`Netlist`]. Declaration order of
/// inputs, key inputs, outputs and gates is preserved; forward references
/// are allowed.
pub fn parse_bench(text: &str) -> Result<Netlist, NetlistError> {
    let mut decls = Vec::new();
    for (i, raw) in text.lines().enumerate() {
        if let Some(d) = parse_line(i + 1, raw)? {
            decls.push((i + 1, d));
        }
    }

    let mut netlist = Netlist::new();
    let mut by_name: HashMap<String, NetId> = HashMap::new();
    let mut outputs: Vec<(usize, String)> = Vec::new();
    // First pass defines every net so fanins may reference later lines.
    for (line_no, decl) in &decls {
        let (name, id) = match decl {
            Decl::Input(name) => (name, netlist.add_input(name.clone())),
            Decl::KeyInput(name) => (name, netlist.add_key_input(name.clone())),
            Decl::Output(name) => {
                outputs.push((*line_no, name.clone()));
                continue;
            }
            Decl::Gate { name, kind, .. } => {
                (name, netlist.push_gate(*kind, Vec::new(), name.clone()))
            }
        };
        if by_name.insert(name.clone(), id).is_some() {
            return Err(NetlistError::DuplicateNet(name.clone()));
        }
    }
    // Second pass resolves fanins and output markers.
    for (_, decl) in &decls {
        if let Decl::Gate { name, fanins, .. } = decl {
            let id = by_name[name.as_str()];
            let resolved = fanins
                .iter()
                .map(|f| {
                    by_name
                        .get(f.as_str())
                        .copied()
                        .ok_or_else(|| NetlistError::UndefinedNet(f.clone()))
                })
                .collect::<Result<Vec<_>, _>>()?;
            netlist.gates_mut_fanins(id, resolved);
        }
    }
    for (_, name) in outputs {
        let id = by_name
            .get(name.as_str())
            .copied()
            .ok_or_else(|| NetlistError::UndefinedNet(name.clone()))?;
        netlist.mark_output(id);
    }

    netlist.require_valid()?;
    Ok(netlist)
}

/// Serialize to BENCH text. `parse_bench(write_bench(n))` is structurally
/// identical to `n` for any valid netlist.
pub fn write_bench(n: &Netlist) -> String {
    let mut out = String::new();
    for &i in n.primary_inputs() {
        let _ = writeln!(out, "INPUT({})", n.name_of(i));
    }
    for &k in n.key_inputs() {
        let _ = writeln!(out, "KEYINPUT({})", n.name_of(k));
    }
    for &o in n.primary_outputs() {
        let _ = writeln!(out, "OUTPUT({})", n.name_of(o));
    }
    for g in n.gates() {
        if g.kind.is_source() {
            continue;
        }
        let fanins = g
            .fanins
            .iter()
            .map(|f| n.name_of(*f))
            .collect::<Vec<_>>()
            .join(", ");
        let _ = writeln!(out, "{} = {}({})", g.name, g.kind.keyword(), fanins);
    }
    out
}
