//! Netlist intermediate representation.
//!
//! A [`Netlist`] is a flat list of gates over densely numbered nets: the gate
//! stored at index `i` drives net `NetId(i)`, so every net is defined exactly
//! once by construction. Primary inputs, key inputs and primary outputs are
//! ordered port lists referencing those nets. DFF/CDFF gates are pipeline
//! delays, not feedback registers, so the whole graph is required to be
//! acyclic.

use std::collections::HashMap;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Gate kinds understood by the IR.
///
/// `Buf` models zero-latency transport (JTL/splitter); `Cdff` is the
/// camouflaged DFF that looks like a register but passes pulses through
/// unclocked. `Input`/`KeyInput` are source gates with no fanins.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum GateKind {
    And,
    Nand,
    Or,
    Nor,
    Xor,
    Xnor,
    Not,
    Buf,
    Mux2,
    Dff,
    Cdff,
    Const0,
    Const1,
    Input,
    KeyInput,
}

impl GateKind {
    pub const ALL: [GateKind; 15] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
        GateKind::Mux2,
        GateKind::Dff,
        GateKind::Cdff,
        GateKind::Const0,
        GateKind::Const1,
        GateKind::Input,
        GateKind::KeyInput,
    ];

    /// BENCH keyword for this kind.
    pub fn keyword(self) -> &'static str {
        match self {
            GateKind::And => "AND",
            GateKind::Nand => "NAND",
            GateKind::Or => "OR",
            GateKind::Nor => "NOR",
            GateKind::Xor => "XOR",
            GateKind::Xnor => "XNOR",
            GateKind::Not => "NOT",
            GateKind::Buf => "BUF",
            GateKind::Mux2 => "MUX2",
            GateKind::Dff => "DFF",
            GateKind::Cdff => "CDFF",
            GateKind::Const0 => "CONST0",
            GateKind::Const1 => "CONST1",
            GateKind::Input => "INPUT",
            GateKind::KeyInput => "KEYINPUT",
        }
    }

    pub fn from_keyword(kw: &str) -> Option<GateKind> {
        let up = kw.to_ascii_uppercase();
        GateKind::ALL.iter().copied().find(|k| k.keyword() == up)
    }

    /// Permitted fanin count. `None` in `max` means unbounded (n-ary AND/OR
    /// families).
    pub fn arity(self) -> (usize, Option<usize>) {
        match self {
            GateKind::And | GateKind::Nand | GateKind::Or | GateKind::Nor => (2, None),
            GateKind::Xor | GateKind::Xnor => (2, Some(2)),
            GateKind::Not | GateKind::Buf | GateKind::Dff | GateKind::Cdff => (1, Some(1)),
            GateKind::Mux2 => (3, Some(3)),
            GateKind::Const0 | GateKind::Const1 | GateKind::Input | GateKind::KeyInput => {
                (0, Some(0))
            }
        }
    }

    pub fn arity_ok(self, n: usize) -> bool {
        let (lo, hi) = self.arity();
        n >= lo && hi.is_none_or(|h| n <= h)
    }

    /// Evaluate the gate combinationally. DFF and CDFF are identity wires in
    /// this abstraction; MUX2 fanins are ordered (select, in0, in1).
    pub fn eval(self, fanins: &[bool]) -> bool {
        match self {
            GateKind::And => fanins.iter().all(|&b| b),
            GateKind::Nand => !fanins.iter().all(|&b| b),
            GateKind::Or => fanins.iter().any(|&b| b),
            GateKind::Nor => !fanins.iter().any(|&b| b),
            GateKind::Xor => fanins[0] ^ fanins[1],
            GateKind::Xnor => !(fanins[0] ^ fanins[1]),
            GateKind::Not => !fanins[0],
            GateKind::Buf | GateKind::Dff | GateKind::Cdff => fanins[0],
            GateKind::Mux2 => {
                if fanins[0] {
                    fanins[2]
                } else {
                    fanins[1]
                }
            }
            GateKind::Const0 => false,
            GateKind::Const1 => true,
            GateKind::Input | GateKind::KeyInput => {
                unreachable!("source gates are driven externally")
            }
        }
    }

    pub fn is_source(self) -> bool {
        matches!(self, GateKind::Input | GateKind::KeyInput)
    }

    /// Ports (INPUT/KEYINPUT) are excluded from gate-count statistics.
    pub fn counts_as_gate(self) -> bool {
        !self.is_source()
    }
}

impl fmt::Display for GateKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.keyword())
    }
}

/// Dense net identifier; index into [`Netlist::gates`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct NetId(pub u32);

impl NetId {
    #[inline]
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for NetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "n{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Gate {
    pub kind: GateKind,
    pub fanins: Vec<NetId>,
    pub name: String,
}

#[derive(Debug, Error)]
pub enum NetlistError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("undefined net `{0}`")]
    UndefinedNet(String),
    #[error("duplicate definition of net `{0}`")]
    DuplicateNet(String),
    #[error("{kind} gate `{name}` has {got} fanins")]
    Arity {
        kind: GateKind,
        name: String,
        got: usize,
    },
    #[error("combinational cycle through net `{0}`")]
    Cycle(String),
    #[error("{what} width mismatch: expected {expected}, got {got}")]
    WidthMismatch {
        what: &'static str,
        expected: usize,
        got: usize,
    },
    #[error("no JJ cost entry for gate kind {0}")]
    MissingJjCost(GateKind),
    #[error("netlist is invalid: {0}")]
    Invalid(String),
}

/// One rule violation found by [`Netlist::validate`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Diagnostic {
    pub net: Option<NetId>,
    pub rule: &'static str,
    pub message: String,
}

impl fmt::Display for Diagnostic {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.net {
            Some(n) => write!(f, "[{}] {}: {}", self.rule, n, self.message),
            None => write!(f, "[{}] {}", self.rule, self.message),
        }
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct Netlist {
    gates: Vec<Gate>,
    primary_inputs: Vec<NetId>,
    key_inputs: Vec<NetId>,
    primary_outputs: Vec<NetId>,
}

impl Netlist {
    pub fn new() -> Self {
        Netlist::default()
    }

    pub fn gates(&self) -> &[Gate] {
        &self.gates
    }

    pub fn gate(&self, id: NetId) -> &Gate {
        &self.gates[id.index()]
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn net_ids(&self) -> impl Iterator<Item = NetId> + '_ {
        (0..self.gates.len() as u32).map(NetId)
    }

    pub fn primary_inputs(&self) -> &[NetId] {
        &self.primary_inputs
    }

    pub fn key_inputs(&self) -> &[NetId] {
        &self.key_inputs
    }

    pub fn primary_outputs(&self) -> &[NetId] {
        &self.primary_outputs
    }

    pub fn name_of(&self, id: NetId) -> &str {
        &self.gates[id.index()].name
    }

    pub fn find_net(&self, name: &str) -> Option<NetId> {
        self.gates
            .iter()
            .position(|g| g.name == name)
            .map(|i| NetId(i as u32))
    }

    /// Append a gate driving a fresh net. The name must be unique; use
    /// [`Netlist::fresh_name`] when deriving names mechanically.
    pub fn push_gate(&mut self, kind: GateKind, fanins: Vec<NetId>, name: impl Into<String>) -> NetId {
        let id = NetId(self.gates.len() as u32);
        self.gates.push(Gate {
            kind,
            fanins,
            name: name.into(),
        });
        id
    }

    pub fn add_input(&mut self, name: impl Into<String>) -> NetId {
        let id = self.push_gate(GateKind::Input, Vec::new(), name);
        self.primary_inputs.push(id);
        id
    }

    pub fn add_key_input(&mut self, name: impl Into<String>) -> NetId {
        let id = self.push_gate(GateKind::KeyInput, Vec::new(), name);
        self.key_inputs.push(id);
        id
    }

    pub fn mark_output(&mut self, id: NetId) {
        self.primary_outputs.push(id);
    }

    /// Replace the fanin list of an existing gate (two-pass construction).
    pub fn gates_mut_fanins(&mut self, id: NetId, fanins: Vec<NetId>) {
        self.gates[id.index()].fanins = fanins;
    }

    pub fn set_output(&mut self, position: usize, id: NetId) {
        self.primary_outputs[position] = id;
    }

    /// Rewire every consumer of `old` (fanins and output markers) to `new`,
    /// except fanins of the gate `except` itself.
    pub fn rewire(&mut self, old: NetId, new: NetId, except: NetId) {
        for (i, gate) in self.gates.iter_mut().enumerate() {
            if NetId(i as u32) == except {
                continue;
            }
            for f in &mut gate.fanins {
                if *f == old {
                    *f = new;
                }
            }
        }
        for o in &mut self.primary_outputs {
            if *o == old {
                *o = new;
            }
        }
    }

    /// Replace every gate of kind `from` with kind `to` (arities must agree).
    pub fn substitute_kind(&mut self, from: GateKind, to: GateKind) -> usize {
        let mut n = 0;
        for g in &mut self.gates {
            if g.kind == from {
                g.kind = to;
                n += 1;
            }
        }
        n
    }

    /// A name not yet used by any net, derived from `base`.
    pub fn fresh_name(&self, base: &str) -> String {
        let mut used: HashMap<&str, ()> = HashMap::with_capacity(self.gates.len());
        for g in &self.gates {
            used.insert(g.name.as_str(), ());
        }
        if !used.contains_key(base) {
            return base.to_string();
        }
        for i in 1.. {
            let cand = format!("{base}_{i}");
            if !used.contains_key(cand.as_str()) {
                return cand;
            }
        }
        unreachable!()
    }

    /// Check every IR invariant, returning one diagnostic per violation. An
    /// empty list means the netlist is valid.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut diags = Vec::new();
        let count = self.gates.len();

        let mut seen_names: HashMap<&str, NetId> = HashMap::with_capacity(count);
        for (i, g) in self.gates.iter().enumerate() {
            let id = NetId(i as u32);
            if let Some(prev) = seen_names.insert(&g.name, id) {
                diags.push(Diagnostic {
                    net: Some(id),
                    rule: "unique-name",
                    message: format!("net name `{}` already used by {}", g.name, prev),
                });
            }
            if !g.kind.arity_ok(g.fanins.len()) {
                diags.push(Diagnostic {
                    net: Some(id),
                    rule: "arity",
                    message: format!(
                        "{} gate `{}` has {} fanins",
                        g.kind,
                        g.name,
                        g.fanins.len()
                    ),
                });
            }
            for f in &g.fanins {
                if f.index() >= count {
                    diags.push(Diagnostic {
                        net: Some(id),
                        rule: "undefined-net",
                        message: format!("gate `{}` references undefined net {}", g.name, f),
                    });
                }
            }
        }

        for (list, kind, rule) in [
            (&self.primary_inputs, GateKind::Input, "input-port"),
            (&self.key_inputs, GateKind::KeyInput, "key-port"),
        ] {
            for &id in list {
                if id.index() >= count || self.gates[id.index()].kind != kind {
                    diags.push(Diagnostic {
                        net: Some(id),
                        rule,
                        message: format!("port list entry {id} is not an {} gate", kind),
                    });
                }
            }
        }
        let n_inputs = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::Input)
            .count();
        let n_keys = self
            .gates
            .iter()
            .filter(|g| g.kind == GateKind::KeyInput)
            .count();
        if n_inputs != self.primary_inputs.len() {
            diags.push(Diagnostic {
                net: None,
                rule: "input-port",
                message: format!(
                    "{} INPUT gates but {} primary input ports",
                    n_inputs,
                    self.primary_inputs.len()
                ),
            });
        }
        if n_keys != self.key_inputs.len() {
            diags.push(Diagnostic {
                net: None,
                rule: "key-port",
                message: format!(
                    "{} KEYINPUT gates but {} key input ports",
                    n_keys,
                    self.key_inputs.len()
                ),
            });
        }

        for &o in &self.primary_outputs {
            if o.index() >= count {
                diags.push(Diagnostic {
                    net: Some(o),
                    rule: "undefined-net",
                    message: format!("primary output references undefined net {o}"),
                });
            }
        }

        if let Err(on_cycle) = self.topo_order_checked() {
            diags.push(Diagnostic {
                net: Some(on_cycle),
                rule: "acyclic",
                message: format!(
                    "combinational cycle through net `{}`",
                    self.gates
                        .get(on_cycle.index())
                        .map(|g| g.name.as_str())
                        .unwrap_or("?")
                ),
            });
        }

        diags
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    pub fn require_valid(&self) -> Result<(), NetlistError> {
        let diags = self.validate();
        if diags.is_empty() {
            Ok(())
        } else {
            Err(NetlistError::Invalid(
                diags
                    .iter()
                    .map(|d| d.to_string())
                    .collect::<Vec<_>>()
                    .join("; "),
            ))
        }
    }

    /// Topological order over all gates, deterministic: among ready gates the
    /// lowest net id (declaration order) comes first.
    pub fn topo_order(&self) -> Result<Vec<NetId>, NetlistError> {
        self.topo_order_checked()
            .map_err(|id| NetlistError::Cycle(self.gates[id.index()].name.clone()))
    }

    fn topo_order_checked(&self) -> Result<Vec<NetId>, NetId> {
        let n = self.gates.len();
        let mut indegree = vec![0u32; n];
        let mut fanouts: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (i, g) in self.gates.iter().enumerate() {
            for f in &g.fanins {
                if f.index() < n {
                    indegree[i] += 1;
                    fanouts[f.index()].push(i as u32);
                }
            }
        }
        // Min-heap on net id keeps ties in declaration order.
        let mut ready = std::collections::BinaryHeap::new();
        for (i, &d) in indegree.iter().enumerate() {
            if d == 0 {
                ready.push(std::cmp::Reverse(i as u32));
            }
        }
        let mut order = Vec::with_capacity(n);
        while let Some(std::cmp::Reverse(i)) = ready.pop() {
            order.push(NetId(i));
            for &s in &fanouts[i as usize] {
                indegree[s as usize] -= 1;
                if indegree[s as usize] == 0 {
                    ready.push(std::cmp::Reverse(s));
                }
            }
        }
        if order.len() < n {
            // Some gate never became ready: it sits on a cycle.
            let stuck = indegree
                .iter()
                .position(|&d| d > 0)
                .expect("incomplete order implies a stuck gate");
            return Err(NetId(stuck as u32));
        }
        Ok(order)
    }

    /// Combinational evaluation: DFF/CDFF act as wires, so this is the
    /// steady-state function the attacker reasons about.
    pub fn eval_comb(&self, inputs: &BitVector, keys: &BitVector) -> Result<BitVector, NetlistError> {
        if inputs.width() != self.primary_inputs.len() {
            return Err(NetlistError::WidthMismatch {
                what: "input pattern",
                expected: self.primary_inputs.len(),
                got: inputs.width(),
            });
        }
        if keys.width() != self.key_inputs.len() {
            return Err(NetlistError::WidthMismatch {
                what: "key pattern",
                expected: self.key_inputs.len(),
                got: keys.width(),
            });
        }
        let order = self.topo_order()?;
        let mut values = vec![false; self.gates.len()];
        for (i, &id) in self.primary_inputs.iter().enumerate() {
            values[id.index()] = inputs.get(i);
        }
        for (i, &id) in self.key_inputs.iter().enumerate() {
            values[id.index()] = keys.get(i);
        }
        let mut fanin_buf = Vec::new();
        for id in order {
            let g = &self.gates[id.index()];
            if g.kind.is_source() {
                continue;
            }
            fanin_buf.clear();
            fanin_buf.extend(g.fanins.iter().map(|f| values[f.index()]));
            values[id.index()] = g.kind.eval(&fanin_buf);
        }
        Ok(BitVector::from_bits(
            self.primary_outputs
                .iter()
                .map(|o| values[o.index()])
                .collect(),
        ))
    }

    /// Per-kind gate counts and the JJ estimate under `costs`.
    pub fn area_stats(&self, costs: &JjCostModel) -> Result<AreaReport, NetlistError> {
        let mut counts = std::collections::BTreeMap::new();
        for g in &self.gates {
            if g.kind.counts_as_gate() {
                *counts.entry(g.kind).or_insert(0usize) += 1;
            }
        }
        let mut jj = 0u64;
        for (&kind, &n) in &counts {
            let c = costs.cost(kind).ok_or(NetlistError::MissingJjCost(kind))?;
            jj += c as u64 * n as u64;
        }
        let total = counts.values().sum();
        Ok(AreaReport {
            counts,
            total,
            jj_estimate: jj,
        })
    }
}

/// Fixed-width bit sequence; index 0 corresponds to the first declared port.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitVector {
    bits: Vec<bool>,
}

impl BitVector {
    pub fn zeros(width: usize) -> Self {
        BitVector {
            bits: vec![false; width],
        }
    }

    pub fn from_bits(bits: Vec<bool>) -> Self {
        BitVector { bits }
    }

    /// Low bits of `value`, index 0 = bit 0.
    pub fn from_uint(value: u64, width: usize) -> Self {
        BitVector {
            bits: (0..width).map(|i| (value >> i) & 1 == 1).collect(),
        }
    }

    pub fn to_uint(&self) -> u64 {
        assert!(self.width() <= 64);
        self.bits
            .iter()
            .enumerate()
            .fold(0u64, |acc, (i, &b)| acc | ((b as u64) << i))
    }

    /// Parse a bit string in declaration order: first character = index 0.
    pub fn parse(s: &str) -> Result<Self, NetlistError> {
        let mut bits = Vec::with_capacity(s.len());
        for (i, c) in s.chars().enumerate() {
            match c {
                '0' => bits.push(false),
                '1' => bits.push(true),
                _ => {
                    return Err(NetlistError::Syntax {
                        line: 1,
                        msg: format!("invalid bit character `{c}` at position {i}"),
                    })
                }
            }
        }
        Ok(BitVector { bits })
    }

    pub fn width(&self) -> usize {
        self.bits.len()
    }

    pub fn get(&self, i: usize) -> bool {
        self.bits[i]
    }

    pub fn set(&mut self, i: usize, v: bool) {
        self.bits[i] = v;
    }

    pub fn bits(&self) -> &[bool] {
        &self.bits
    }

    pub fn iter(&self) -> impl Iterator<Item = bool> + '_ {
        self.bits.iter().copied()
    }

    pub fn concat(&self, other: &BitVector) -> BitVector {
        let mut bits = self.bits.clone();
        bits.extend_from_slice(&other.bits);
        BitVector { bits }
    }
}

impl fmt::Display for BitVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.bits {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl Serialize for BitVector {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for BitVector {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        BitVector::parse(&s).map_err(serde::de::Error::custom)
    }
}

/// Per-kind Josephson-junction cost table used for area estimates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct JjCostModel {
    pub costs: std::collections::BTreeMap<GateKind, u32>,
}

impl JjCostModel {
    pub fn cost(&self, kind: GateKind) -> Option<u32> {
        self.costs.get(&kind).copied()
    }
}

impl Default for JjCostModel {
    /// Representative per-cell JJ counts for an RSFQ library. The table is
    /// configurable; these defaults only set the scale of estimates.
    fn default() -> Self {
        let costs = [
            (GateKind::And, 11),
            (GateKind::Nand, 13),
            (GateKind::Or, 9),
            (GateKind::Nor, 11),
            (GateKind::Xor, 8),
            (GateKind::Xnor, 10),
            (GateKind::Not, 10),
            (GateKind::Buf, 2),
            (GateKind::Mux2, 14),
            (GateKind::Dff, 6),
            (GateKind::Cdff, 6),
            (GateKind::Const0, 1),
            (GateKind::Const1, 2),
        ]
        .into_iter()
        .collect();
        JjCostModel { costs }
    }
}

/// Gate-count/area summary for one netlist.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AreaReport {
    pub counts: std::collections::BTreeMap<GateKind, usize>,
    pub total: usize,
    pub jj_estimate: u64,
}

impl AreaReport {
    pub fn count(&self, kind: GateKind) -> usize {
        self.counts.get(&kind).copied().unwrap_or(0)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn chain3() -> Netlist {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        let b = n.push_gate(GateKind::Not, vec![a], "b");
        let c = n.push_gate(GateKind::Not, vec![b], "c");
        n.mark_output(c);
        n
    }

    #[test]
    fn topo_order_chain() {
        let n = chain3();
        let order = n.topo_order().unwrap();
        assert_eq!(order, vec![NetId(0), NetId(1), NetId(2)]);
    }

    #[test]
    fn topo_order_detects_cycle() {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        // b = AND(a, c); c = NOT(b) — a combinational loop.
        let b = n.push_gate(GateKind::And, vec![a, NetId(2)], "b");
        let c = n.push_gate(GateKind::Not, vec![b], "c");
        n.mark_output(c);
        let err = n.topo_order().unwrap_err();
        assert!(matches!(err, NetlistError::Cycle(_)));
        assert!(n.validate().iter().any(|d| d.rule == "acyclic"));
    }

    #[test]
    fn validate_flags_dangling_fanin() {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        n.push_gate(GateKind::Buf, vec![NetId(7)], "y");
        let _ = a;
        let diags = n.validate();
        assert_eq!(
            diags
                .iter()
                .filter(|d| d.rule == "undefined-net")
                .count(),
            1
        );
    }

    #[test]
    fn validate_flags_bad_arity() {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        let b = n.add_input("b");
        let c = n.add_input("c");
        n.push_gate(GateKind::Xor, vec![a, b, c], "y");
        let diags = n.validate();
        assert_eq!(diags.iter().filter(|d| d.rule == "arity").count(), 1);
    }

    #[test]
    fn eval_and_gate() {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        let b = n.add_input("b");
        let y = n.push_gate(GateKind::And, vec![a, b], "y");
        n.mark_output(y);
        let out = n
            .eval_comb(&BitVector::parse("11").unwrap(), &BitVector::zeros(0))
            .unwrap();
        assert_eq!(out.to_uint(), 1);
        let out = n
            .eval_comb(&BitVector::parse("10").unwrap(), &BitVector::zeros(0))
            .unwrap();
        assert_eq!(out.to_uint(), 0);
    }

    #[test]
    fn eval_rejects_width_mismatch() {
        let n = chain3();
        let err = n
            .eval_comb(&BitVector::zeros(2), &BitVector::zeros(0))
            .unwrap_err();
        assert!(matches!(err, NetlistError::WidthMismatch { .. }));
    }

    #[test]
    fn area_counts_exclude_ports() {
        let mut n = Netlist::new();
        let a = n.add_input("a");
        let y = n.push_gate(GateKind::Buf, vec![a], "y");
        n.mark_output(y);
        let report = n.area_stats(&JjCostModel::default()).unwrap();
        assert_eq!(report.total, 1);
        assert_eq!(report.count(GateKind::Buf), 1);
        assert_eq!(report.count(GateKind::Input), 0);
    }

    #[test]
    fn bitvector_display_is_declaration_order() {
        let v = BitVector::from_uint(4, 3); // bit 2 set
        assert_eq!(v.to_string(), "001");
        assert_eq!(BitVector::parse("001").unwrap(), v);
    }

    #[test]
    fn fresh_name_avoids_collisions() {
        let n = chain3();
        assert_eq!(n.fresh_name("z"), "z");
        assert_eq!(n.fresh_name("b"), "b_1");
    }
}
