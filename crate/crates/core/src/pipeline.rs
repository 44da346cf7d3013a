//! Gate-level pipelining semantics.
//!
//! Every clocked gate behaves like a combinational cell with an
//! edge-triggered register at its output: logic gates and DFFs cost one
//! clock cycle, a MUX2 costs two, while JTL-like transport (BUF), the
//! camouflaged DFF and constants cost none. [`path_balance`] inserts plain
//! DFFs so that all fanins of every clocked gate — and all primary outputs —
//! carry equal pipeline depth, which makes the clocked circuit compute the
//! same function as [`Netlist::eval_comb`] after a warm-up of
//! [`output_latency`] cycles.

use crate::netlist::{BitVector, GateKind, NetId, Netlist, NetlistError};

/// Clock-cycle cost per gate kind.
#[derive(Debug, Clone)]
pub struct LatencyModel;

impl LatencyModel {
    pub fn latency(&self, kind: GateKind) -> usize {
        match kind {
            GateKind::And
            | GateKind::Nand
            | GateKind::Or
            | GateKind::Nor
            | GateKind::Xor
            | GateKind::Xnor
            | GateKind::Not
            | GateKind::Dff => 1,
            GateKind::Mux2 => 2,
            GateKind::Buf
            | GateKind::Cdff
            | GateKind::Const0
            | GateKind::Const1
            | GateKind::Input
            | GateKind::KeyInput => 0,
        }
    }
}

impl Default for LatencyModel {
    fn default() -> Self {
        LatencyModel
    }
}

/// Sequential depth per net: clock cycles from the inputs to the cycle in
/// which that net's value becomes available.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DepthMap {
    depths: Vec<usize>,
}

impl DepthMap {
    pub fn depth(&self, id: NetId) -> usize {
        self.depths[id.index()]
    }

    pub fn max_depth(&self) -> usize {
        self.depths.iter().copied().max().unwrap_or(0)
    }
}

/// Depth recurrence: depth(g) = latency(kind) + max over fanins.
pub fn sequential_depths(n: &Netlist, model: &LatencyModel) -> Result<DepthMap, NetlistError> {
    let order = n.topo_order()?;
    let mut depths = vec![0usize; n.len()];
    for id in order {
        let g = n.gate(id);
        let base = g
            .fanins
            .iter()
            .map(|f| depths[f.index()])
            .max()
            .unwrap_or(0);
        depths[id.index()] = base + model.latency(g.kind);
    }
    Ok(DepthMap { depths })
}

/// Clocked gates whose fanins do not all share one depth.
pub fn unbalanced_gates(n: &Netlist, model: &LatencyModel) -> Result<Vec<NetId>, NetlistError> {
    let depths = sequential_depths(n, model)?;
    let mut bad = Vec::new();
    for id in n.net_ids() {
        let g = n.gate(id);
        if model.latency(g.kind) == 0 || g.fanins.is_empty() {
            continue;
        }
        let first = depths.depth(g.fanins[0]);
        if g.fanins.iter().any(|f| depths.depth(*f) != first) {
            bad.push(id);
        }
    }
    Ok(bad)
}

/// True iff every clocked gate has equal-depth fanins and all primary
/// outputs sit at one common depth.
pub fn is_balanced(n: &Netlist, model: &LatencyModel) -> Result<bool, NetlistError> {
    if !unbalanced_gates(n, model)?.is_empty() {
        return Ok(false);
    }
    let depths = sequential_depths(n, model)?;
    let mut outs = n.primary_outputs().iter().map(|o| depths.depth(*o));
    match outs.next() {
        None => Ok(true),
        Some(first) => Ok(outs.all(|d| d == first)),
    }
}

/// Insert path-balancing DFFs so every clocked gate sees equal-depth fanins
/// and every primary output reaches the maximum output depth. Only DFF gates
/// are added; the combinational function is unchanged. Idempotent on already
/// balanced netlists.
pub fn path_balance(n: &Netlist, model: &LatencyModel) -> Result<Netlist, NetlistError> {
    n.require_valid()?;
    let depths = sequential_depths(n, model)?;
    let mut result = n.clone();

    // Lift requirement per (consumer gate, fanin position) and per output
    // marker, expressed as (source net, cycles of delay needed).
    let mut gate_lifts: Vec<(NetId, usize, usize)> = Vec::new(); // (gate, fanin idx, lift)
    for id in n.net_ids() {
        let g = n.gate(id);
        if model.latency(g.kind) == 0 || g.fanins.is_empty() {
            continue;
        }
        let target = g
            .fanins
            .iter()
            .map(|f| depths.depth(*f))
            .max()
            .expect("nonempty fanins");
        for (i, f) in g.fanins.iter().enumerate() {
            let lift = target - depths.depth(*f);
            if lift > 0 {
                gate_lifts.push((id, i, lift));
            }
        }
    }
    let out_target = n
        .primary_outputs()
        .iter()
        .map(|o| depths.depth(*o))
        .max()
        .unwrap_or(0);
    let mut out_lifts: Vec<(usize, usize)> = Vec::new(); // (output position, lift)
    for (pos, o) in n.primary_outputs().iter().enumerate() {
        let lift = out_target - depths.depth(*o);
        if lift > 0 {
            out_lifts.push((pos, lift));
        }
    }

    // One shared DFF chain per source net, tapped at each required delay.
    let mut chains: std::collections::HashMap<NetId, Vec<NetId>> = std::collections::HashMap::new();
    let mut tap = |result: &mut Netlist, src: NetId, lift: usize| -> NetId {
        let chain = chains.entry(src).or_default();
        while chain.len() < lift {
            let prev = chain.last().copied().unwrap_or(src);
            let name = result.fresh_name(&format!(
                "{}_pb{}",
                result.name_of(src),
                chain.len() + 1
            ));
            let d = result.push_gate(GateKind::Dff, vec![prev], name);
            chain.push(d);
        }
        chain[lift - 1]
    };

    for (gate, fanin_idx, lift) in gate_lifts {
        let src = n.gate(gate).fanins[fanin_idx];
        let tapped = tap(&mut result, src, lift);
        let mut fanins = result.gate(gate).fanins.clone();
        fanins[fanin_idx] = tapped;
        result.gates_mut_fanins(gate, fanins);
    }
    for (pos, lift) in out_lifts {
        let src = n.primary_outputs()[pos];
        let tapped = tap(&mut result, src, lift);
        result.set_output(pos, tapped);
    }

    debug_assert!(is_balanced(&result, model)?);
    Ok(result)
}

/// Common primary-output depth of a balanced netlist.
pub fn output_latency(n: &Netlist, model: &LatencyModel) -> Result<usize, NetlistError> {
    let depths = sequential_depths(n, model)?;
    let mut latency = None;
    for &o in n.primary_outputs() {
        let d = depths.depth(o);
        match latency {
            None => latency = Some(d),
            Some(prev) if prev != d => {
                return Err(NetlistError::Invalid(format!(
                    "primary outputs are not depth-balanced: {prev} vs {d}"
                )))
            }
            _ => {}
        }
    }
    Ok(latency.unwrap_or(0))
}

/// Register file and per-net values for one clocked simulation instance.
/// Separated from the netlist reference so owners of a [`Netlist`] (the
/// oracle, candidate banks) can hold both without self-reference.
#[derive(Debug, Clone)]
pub struct SimCore {
    order: Vec<NetId>,
    values: Vec<bool>,
    // reg holds the output-stage register; reg2 the MUX2 input stage.
    reg: Vec<bool>,
    reg2: Vec<bool>,
    cycle: usize,
}

impl SimCore {
    pub fn new(netlist: &Netlist) -> Result<Self, NetlistError> {
        netlist.require_valid()?;
        let order = netlist.topo_order()?;
        Ok(SimCore {
            order,
            values: vec![false; netlist.len()],
            reg: vec![false; netlist.len()],
            reg2: vec![false; netlist.len()],
            cycle: 0,
        })
    }

    pub fn cycle(&self) -> usize {
        self.cycle
    }

    /// Advance one clock cycle under the given stimulus and return the
    /// primary-output values for this cycle. Must always be called with the
    /// netlist it was created from.
    pub fn step(
        &mut self,
        netlist: &Netlist,
        inputs: &BitVector,
        keys: &BitVector,
    ) -> Result<BitVector, NetlistError> {
        let model = LatencyModel;
        let pis = netlist.primary_inputs();
        let kis = netlist.key_inputs();
        if inputs.width() != pis.len() {
            return Err(NetlistError::WidthMismatch {
                what: "input pattern",
                expected: pis.len(),
                got: inputs.width(),
            });
        }
        if keys.width() != kis.len() {
            return Err(NetlistError::WidthMismatch {
                what: "key pattern",
                expected: kis.len(),
                got: keys.width(),
            });
        }
        for (i, &id) in pis.iter().enumerate() {
            self.values[id.index()] = inputs.get(i);
        }
        for (i, &id) in kis.iter().enumerate() {
            self.values[id.index()] = keys.get(i);
        }
        let mut fanin_buf = Vec::new();
        for idx in 0..self.order.len() {
            let id = self.order[idx];
            let g = netlist.gate(id);
            if g.kind.is_source() {
                continue;
            }
            fanin_buf.clear();
            fanin_buf.extend(g.fanins.iter().map(|f| self.values[f.index()]));
            let combinational = g.kind.eval(&fanin_buf);
            let i = id.index();
            match model.latency(g.kind) {
                0 => self.values[i] = combinational,
                1 => {
                    self.values[i] = self.reg[i];
                    self.reg[i] = combinational;
                }
                2 => {
                    self.values[i] = self.reg[i];
                    self.reg[i] = self.reg2[i];
                    self.reg2[i] = combinational;
                }
                other => unreachable!("no gate kind has latency {other}"),
            }
        }
        self.cycle += 1;
        Ok(BitVector::from_bits(
            netlist
                .primary_outputs()
                .iter()
                .map(|o| self.values[o.index()])
                .collect(),
        ))
    }
}

/// Cycle-accurate synchronous simulator over a borrowed netlist.
///
/// Per cycle, in topological order: zero-latency gates produce the
/// current-cycle value of their fanins; each clocked gate emits its register
/// (initialized to 0) and latches the current-cycle value of its fanins; a
/// MUX2 holds two cascaded registers.
#[derive(Debug, Clone)]
pub struct ClockedSim<'a> {
    netlist: &'a Netlist,
    core: SimCore,
}

impl<'a> ClockedSim<'a> {
    pub fn new(netlist: &'a Netlist) -> Result<Self, NetlistError> {
        Ok(ClockedSim {
            netlist,
            core: SimCore::new(netlist)?,
        })
    }

    pub fn cycle(&self) -> usize {
        self.core.cycle()
    }

    pub fn step(&mut self, inputs: &BitVector, keys: &BitVector) -> Result<BitVector, NetlistError> {
        self.core.step(self.netlist, inputs, keys)
    }
}

/// Recorded clocked run: one output row per simulated cycle, alongside the
/// stimulus that was applied at that cycle. Cycles below `warmup_cycles`
/// still reflect register initialization and must not be used to draw
/// functional conclusions.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimTrace {
    pub stimulus: Vec<(BitVector, BitVector)>,
    pub outputs: Vec<BitVector>,
    pub warmup_cycles: usize,
}

impl SimTrace {
    pub fn cycles(&self) -> usize {
        self.outputs.len()
    }

    /// CSV dump: cycle, input bits, key bits, output bits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("cycle,inputs,keys,outputs\n");
        for (c, ((i, k), o)) in self.stimulus.iter().zip(&self.outputs).enumerate() {
            out.push_str(&format!("{c},{i},{k},{o}\n"));
        }
        out
    }
}

/// Run the clocked simulator over a per-cycle stimulus sequence.
pub fn simulate_clocked(
    n: &Netlist,
    stimulus: &[(BitVector, BitVector)],
) -> Result<SimTrace, NetlistError> {
    let mut sim = ClockedSim::new(n)?;
    let warmup = sequential_depths(n, &LatencyModel)?.max_depth();
    let mut outputs = Vec::with_capacity(stimulus.len());
    for (inputs, keys) in stimulus {
        outputs.push(sim.step(inputs, keys)?);
    }
    Ok(SimTrace {
        stimulus: stimulus.to_vec(),
        outputs,
        warmup_cycles: warmup,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench_io::parse_bench;

    fn stim(n: &Netlist, inputs: &str, cycles: usize) -> Vec<(BitVector, BitVector)> {
        let i = BitVector::parse(inputs).unwrap();
        let k = BitVector::zeros(n.key_inputs().len());
        vec![(i, k); cycles]
    }

    #[test]
    fn depths_of_clocked_chain() {
        let n = parse_bench("INPUT(a)\nOUTPUT(c)\nx = NOT(a)\nb = NOT(x)\nc = NOT(b)").unwrap();
        let d = sequential_depths(&n, &LatencyModel).unwrap();
        assert_eq!(d.depth(n.find_net("x").unwrap()), 1);
        assert_eq!(d.depth(n.find_net("b").unwrap()), 2);
        assert_eq!(d.depth(n.find_net("c").unwrap()), 3);
    }

    #[test]
    fn cdff_contributes_zero_depth() {
        let n =
            parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\nc = CDFF(a)\ny = AND(c, b)").unwrap();
        let d = sequential_depths(&n, &LatencyModel).unwrap();
        assert_eq!(d.depth(n.find_net("c").unwrap()), 0);
        assert_eq!(d.depth(n.find_net("y").unwrap()), 1);
    }

    #[test]
    fn balance_inserts_two_dffs_for_depth_gap() {
        // Fanin depths 1 (single NOT) vs 3 (NOT chain).
        let text = "INPUT(a)\nINPUT(b)\nOUTPUT(y)\n\
                    p = NOT(a)\n\
                    q1 = NOT(b)\nq2 = NOT(q1)\nq3 = NOT(q2)\n\
                    y = AND(p, q3)";
        let n = parse_bench(text).unwrap();
        let balanced = path_balance(&n, &LatencyModel).unwrap();
        let dffs = balanced
            .gates()
            .iter()
            .filter(|g| g.kind == GateKind::Dff)
            .count();
        assert_eq!(dffs, 2);
        assert!(is_balanced(&balanced, &LatencyModel).unwrap());
    }

    #[test]
    fn balance_is_idempotent() {
        let n = parse_bench("INPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = AND(a, b)").unwrap();
        let balanced = path_balance(&n, &LatencyModel).unwrap();
        assert_eq!(balanced.len(), n.len());
        let again = path_balance(&balanced, &LatencyModel).unwrap();
        assert_eq!(again.len(), balanced.len());
    }

    #[test]
    fn dff_delays_one_cycle_cdff_none() {
        let n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = DFF(a)").unwrap();
        let mut sim = ClockedSim::new(&n).unwrap();
        let one = BitVector::parse("1").unwrap();
        let keys = BitVector::zeros(0);
        assert_eq!(sim.step(&one, &keys).unwrap().to_uint(), 0);
        assert_eq!(sim.step(&one, &keys).unwrap().to_uint(), 1);

        let n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = CDFF(a)").unwrap();
        let mut sim = ClockedSim::new(&n).unwrap();
        assert_eq!(sim.step(&one, &keys).unwrap().to_uint(), 1);
    }

    #[test]
    fn mux2_takes_two_cycles() {
        let n = parse_bench("INPUT(s)\nINPUT(a)\nINPUT(b)\nOUTPUT(y)\ny = MUX2(s, a, b)").unwrap();
        let mut sim = ClockedSim::new(&n).unwrap();
        let keys = BitVector::zeros(0);
        // select=1 picks in1 (third fanin).
        let v = BitVector::parse("101").unwrap();
        assert_eq!(sim.step(&v, &keys).unwrap().to_uint(), 0);
        assert_eq!(sim.step(&v, &keys).unwrap().to_uint(), 0);
        assert_eq!(sim.step(&v, &keys).unwrap().to_uint(), 1);
    }

    #[test]
    fn buf_passthrough_has_zero_latency() {
        let n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = BUF(a)").unwrap();
        assert_eq!(output_latency(&n, &LatencyModel).unwrap(), 0);
        let trace = simulate_clocked(&n, &stim(&n, "1", 2)).unwrap();
        assert_eq!(trace.outputs[0].to_uint(), 1);
    }

    #[test]
    fn three_level_balanced_circuit_needs_three_cycles() {
        // Balanced 3-level netlist: latency 3, and the held stimulus
        // reaches eval_comb at cycle 3.
        let text = "INPUT(a)\nINPUT(b)\nINPUT(c)\nINPUT(d)\nOUTPUT(y)\n\
                    g1 = AND(a, b)\ng2 = OR(c, d)\n\
                    g3 = XOR(g1, g2)\n\
                    y = NOT(g3)";
        let n = parse_bench(text).unwrap();
        assert_eq!(output_latency(&n, &LatencyModel).unwrap(), 3);
        let inputs = BitVector::parse("1101").unwrap();
        let trace = simulate_clocked(&n, &stim(&n, "1101", 6)).unwrap();
        let expect = n.eval_comb(&inputs, &BitVector::zeros(0)).unwrap();
        for c in 3..6 {
            assert_eq!(trace.outputs[c], expect, "cycle {c}");
        }
    }

    #[test]
    fn unbalanced_outputs_error() {
        let n = parse_bench("INPUT(a)\nOUTPUT(a)\nOUTPUT(y)\ny = NOT(a)").unwrap();
        assert!(output_latency(&n, &LatencyModel).is_err());
    }

    #[test]
    fn trace_csv_shape() {
        let n = parse_bench("INPUT(a)\nOUTPUT(y)\ny = NOT(a)").unwrap();
        let trace = simulate_clocked(&n, &stim(&n, "1", 2)).unwrap();
        let csv = trace.to_csv();
        let mut lines = csv.lines();
        assert_eq!(lines.next(), Some("cycle,inputs,keys,outputs"));
        assert_eq!(lines.next(), Some("0,1,,0"));
    }
}
