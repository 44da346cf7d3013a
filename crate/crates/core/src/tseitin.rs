//! Tseitin encoding of netlists.
//!
//! One CNF variable per primary input, key input and logic gate; BUF, DFF
//! and CDFF act as wires and alias their fanin's literal (the combinational
//! abstraction), constants fold into the consuming gate's clauses.
//! Restricted to the input/key variables, satisfying assignments biject
//! with [`Netlist::eval_comb`].

use crate::cnf::{Cnf, Lit};
use crate::netlist::{GateKind, Netlist, NetlistError};

/// Literal-or-constant value a net maps to after encoding.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NetLit {
    Const(bool),
    Lit(Lit),
}

impl NetLit {
    pub fn as_lit(self) -> Option<Lit> {
        match self {
            NetLit::Lit(l) => Some(l),
            NetLit::Const(_) => None,
        }
    }
}

/// Tseitin encoding of one netlist, with the variable groups the attack
/// needs exposed.
#[derive(Debug, Clone)]
pub struct CircuitEncoding {
    pub cnf: Cnf,
    pub input_vars: Vec<u32>,
    pub key_vars: Vec<u32>,
    /// Net id → literal (dense, parallel to the gate list).
    pub net_lits: Vec<NetLit>,
    pub output_lits: Vec<NetLit>,
}

fn equivalence(cnf: &mut Cnf, y: Lit, a: Lit) {
    cnf.add_clause(vec![!y, a]);
    cnf.add_clause(vec![y, !a]);
}

fn encode_and_family(cnf: &mut Cnf, y: Lit, fanins: &[NetLit], negated: bool) {
    // AND with output inverted (NAND) flips y in every clause.
    let y = if negated { !y } else { y };
    if fanins.iter().any(|f| *f == NetLit::Const(false)) {
        cnf.add_unit(!y);
        return;
    }
    let lits: Vec<Lit> = fanins.iter().filter_map(|f| f.as_lit()).collect();
    match lits.len() {
        0 => cnf.add_unit(y),
        1 => equivalence(cnf, y, lits[0]),
        _ => {
            for &a in &lits {
                cnf.add_clause(vec![!y, a]);
            }
            let mut long: Vec<Lit> = lits.iter().map(|&a| !a).collect();
            long.push(y);
            cnf.add_clause(long);
        }
    }
}

fn encode_or_family(cnf: &mut Cnf, y: Lit, fanins: &[NetLit], negated: bool) {
    let y = if negated { !y } else { y };
    if fanins.iter().any(|f| *f == NetLit::Const(true)) {
        cnf.add_unit(y);
        return;
    }
    let lits: Vec<Lit> = fanins.iter().filter_map(|f| f.as_lit()).collect();
    match lits.len() {
        0 => cnf.add_unit(!y),
        1 => equivalence(cnf, y, lits[0]),
        _ => {
            for &a in &lits {
                cnf.add_clause(vec![y, !a]);
            }
            let mut long = lits;
            long.push(!y);
            cnf.add_clause(long);
        }
    }
}

fn encode_xor2(cnf: &mut Cnf, y: Lit, a: NetLit, b: NetLit, negated: bool) {
    // XNOR is XOR with output inverted.
    let y = if negated { !y } else { y };
    match (a, b) {
        (NetLit::Const(x), NetLit::Const(z)) => cnf.add_unit(if x ^ z { y } else { !y }),
        (NetLit::Const(c), NetLit::Lit(l)) | (NetLit::Lit(l), NetLit::Const(c)) => {
            equivalence(cnf, y, if c { !l } else { l })
        }
        (NetLit::Lit(a), NetLit::Lit(b)) => {
            cnf.add_clause(vec![!y, a, b]);
            cnf.add_clause(vec![!y, !a, !b]);
            cnf.add_clause(vec![y, !a, b]);
            cnf.add_clause(vec![y, a, !b]);
        }
    }
}

fn encode_mux2(cnf: &mut Cnf, y: Lit, sel: NetLit, in0: NetLit, in1: NetLit) {
    let branch = |cnf: &mut Cnf, y: Lit, v: NetLit, guard: Option<Lit>| match v {
        NetLit::Const(true) => {
            let mut c = vec![y];
            c.extend(guard.map(|g| !g));
            cnf.add_clause(c);
        }
        NetLit::Const(false) => {
            let mut c = vec![!y];
            c.extend(guard.map(|g| !g));
            cnf.add_clause(c);
        }
        NetLit::Lit(l) => {
            let mut c1 = vec![!y, l];
            let mut c2 = vec![y, !l];
            if let Some(g) = guard {
                c1.push(!g);
                c2.push(!g);
            }
            cnf.add_clause(c1);
            cnf.add_clause(c2);
        }
    };
    match sel {
        NetLit::Const(false) => branch(cnf, y, in0, None),
        NetLit::Const(true) => branch(cnf, y, in1, None),
        NetLit::Lit(s) => {
            branch(cnf, y, in0, Some(!s));
            branch(cnf, y, in1, Some(s));
        }
    }
}

/// Encode `n` into `cnf`, using the caller's literals (or constants) for
/// the primary and key inputs: the miter shares input variables across two
/// copies, and observation copies pin inputs to a concrete pattern.
/// Returns the literal each net maps to.
pub fn encode_into(
    cnf: &mut Cnf,
    n: &Netlist,
    input_lits: &[NetLit],
    key_lits: &[NetLit],
) -> Result<Vec<NetLit>, NetlistError> {
    assert_eq!(input_lits.len(), n.primary_inputs().len());
    assert_eq!(key_lits.len(), n.key_inputs().len());
    let order = n.topo_order()?;
    let mut net_lits = vec![NetLit::Const(false); n.len()];
    for (i, &id) in n.primary_inputs().iter().enumerate() {
        net_lits[id.index()] = input_lits[i];
    }
    for (i, &id) in n.key_inputs().iter().enumerate() {
        net_lits[id.index()] = key_lits[i];
    }
    for id in order {
        let g = n.gate(id);
        let fanins: Vec<NetLit> = g.fanins.iter().map(|f| net_lits[f.index()]).collect();
        let out = match g.kind {
            GateKind::Input | GateKind::KeyInput => continue,
            GateKind::Const0 => NetLit::Const(false),
            GateKind::Const1 => NetLit::Const(true),
            GateKind::Buf | GateKind::Dff | GateKind::Cdff => fanins[0],
            GateKind::Not => match fanins[0] {
                NetLit::Const(b) => {
                    let y = Lit::positive(cnf.fresh_var());
                    cnf.add_unit(if b { !y } else { y });
                    NetLit::Lit(y)
                }
                NetLit::Lit(a) => {
                    let y = Lit::positive(cnf.fresh_var());
                    equivalence(cnf, y, !a);
                    NetLit::Lit(y)
                }
            },
            GateKind::And | GateKind::Nand => {
                let y = Lit::positive(cnf.fresh_var());
                encode_and_family(cnf, y, &fanins, g.kind == GateKind::Nand);
                NetLit::Lit(y)
            }
            GateKind::Or | GateKind::Nor => {
                let y = Lit::positive(cnf.fresh_var());
                encode_or_family(cnf, y, &fanins, g.kind == GateKind::Nor);
                NetLit::Lit(y)
            }
            GateKind::Xor | GateKind::Xnor => {
                let y = Lit::positive(cnf.fresh_var());
                encode_xor2(cnf, y, fanins[0], fanins[1], g.kind == GateKind::Xnor);
                NetLit::Lit(y)
            }
            GateKind::Mux2 => {
                let y = Lit::positive(cnf.fresh_var());
                encode_mux2(cnf, y, fanins[0], fanins[1], fanins[2]);
                NetLit::Lit(y)
            }
        };
        net_lits[id.index()] = out;
    }
    Ok(net_lits)
}

/// Encode a netlist with fresh input and key variables.
pub fn encode_tseitin(n: &Netlist) -> Result<CircuitEncoding, NetlistError> {
    n.require_valid()?;
    let mut cnf = Cnf::new();
    let input_vars: Vec<u32> = n.primary_inputs().iter().map(|_| cnf.fresh_var()).collect();
    let key_vars: Vec<u32> = n.key_inputs().iter().map(|_| cnf.fresh_var()).collect();
    let input_lits: Vec<NetLit> = input_vars
        .iter()
        .map(|&v| NetLit::Lit(Lit::positive(v)))
        .collect();
    let key_lits: Vec<NetLit> = key_vars
        .iter()
        .map(|&v| NetLit::Lit(Lit::positive(v)))
        .collect();
    let net_lits = encode_into(&mut cnf, n, &input_lits, &key_lits)?;
    let output_lits = n
        .primary_outputs()
        .iter()
        .map(|o| net_lits[o.index()])
        .collect();
    Ok(CircuitEncoding {
        cnf,
        input_vars,
        key_vars,
        net_lits,
        output_lits,
    })
}
