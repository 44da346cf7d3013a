//! Word-packed candidate-key simulation bank.
//!
//! Every candidate key is one bit lane: lane `l` simulates the locked
//! netlist with key value `l`, 64 lanes per machine word. All lanes share
//! the input stimulus, so one pass over the gates in topological order
//! advances 64 candidate simulations at once. Lanes are split into
//! independent chunks (each with its own register file), which run the
//! whole schedule as a pure map — in parallel under the `parallel` feature,
//! sequentially otherwise.

use crate::netlist::{BitVector, GateKind, Netlist};
use crate::pipeline::LatencyModel;

/// Execution strategy for the bank map. `Parallel` falls back to
/// sequential when the `parallel` feature is disabled.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Execution {
    Sequential,
    Parallel,
}

/// One stimulus segment: a pattern applied for a number of cycles.
pub type Segment = (BitVector, usize);

/// First observed-cycle index at which each lane's output stream differed
/// from the oracle's; `None` lanes survive.
#[derive(Debug, Clone)]
pub struct BankOutcome {
    pub eliminated_at: Vec<Option<u32>>,
}

impl BankOutcome {
    pub fn survivors(&self) -> impl Iterator<Item = usize> + '_ {
        self.eliminated_at
            .iter()
            .enumerate()
            .filter(|(_, e)| e.is_none())
            .map(|(l, _)| l)
    }

    pub fn survivor_count(&self) -> usize {
        self.eliminated_at.iter().filter(|e| e.is_none()).count()
    }
}

const LANES_PER_WORD: usize = 64;
/// Words per parallel chunk: 256 lanes keeps per-chunk state small while
/// giving rayon enough tasks on the grid sizes the tables use.
const WORDS_PER_CHUNK: usize = 4;

struct GatePlan {
    kind: GateKind,
    fanins: Vec<usize>,
    latency: usize,
    net: usize,
}

/// Shared, read-only description of the bank run.
struct Plan {
    gates: Vec<GatePlan>,
    input_nets: Vec<usize>,
    key_nets: Vec<usize>,
    output_nets: Vec<usize>,
    net_count: usize,
    latency: usize,
    total_cycles: usize,
    /// Observation slots below this index may still carry register
    /// initialization through paths deeper than the nominal latency and
    /// are not conclusive.
    warmup_slots: usize,
}

struct Chunk {
    lane_base: usize,
    lanes: usize,
    words: usize,
}

struct ChunkState {
    values: Vec<u64>,
    reg: Vec<u64>,
    reg2: Vec<u64>,
    /// Per key bit, per word: that key bit across the chunk's lanes.
    key_words: Vec<Vec<u64>>,
    alive: Vec<u64>,
    lane_mask: Vec<u64>,
    eliminated_at: Vec<Option<u32>>,
}

impl ChunkState {
    fn new(plan: &Plan, chunk: &Chunk) -> ChunkState {
        let w = chunk.words;
        let mut key_words = vec![vec![0u64; w]; plan.key_nets.len()];
        for (bit, words) in key_words.iter_mut().enumerate() {
            for (wi, word) in words.iter_mut().enumerate() {
                let mut v = 0u64;
                for b in 0..LANES_PER_WORD {
                    let lane = chunk.lane_base + wi * LANES_PER_WORD + b;
                    if lane < chunk.lane_base + chunk.lanes && (lane >> bit) & 1 == 1 {
                        v |= 1 << b;
                    }
                }
                *word = v;
            }
        }
        let mut lane_mask = vec![!0u64; w];
        let tail = chunk.lanes % LANES_PER_WORD;
        if tail != 0 {
            lane_mask[w - 1] = (1u64 << tail) - 1;
        }
        ChunkState {
            values: vec![0; plan.net_count * w],
            reg: vec![0; plan.net_count * w],
            reg2: vec![0; plan.net_count * w],
            key_words,
            alive: lane_mask.clone(),
            lane_mask,
            eliminated_at: vec![None; chunk.lanes],
        }
    }
}

fn run_chunk(plan: &Plan, chunk: &Chunk, segments: &[Segment], oracle_obs: &[BitVector]) -> ChunkState {
    let w = chunk.words;
    let mut state = ChunkState::new(plan, chunk);
    let mut scratch = vec![0u64; w];
    // Counted stimulus cycles followed by an uncounted pipeline-fill tail
    // holding the final pattern; observations align slot = wall - latency.
    let mut slot: usize = 0;
    let mut wall = 0usize;
    let step = |state: &mut ChunkState, scratch: &mut Vec<u64>, pattern: &BitVector| {
        for (i, &net) in plan.input_nets.iter().enumerate() {
            let word = if pattern.get(i) { !0u64 } else { 0u64 };
            state.values[net * w..net * w + w].fill(word);
        }
        for (i, &net) in plan.key_nets.iter().enumerate() {
            state.values[net * w..net * w + w].copy_from_slice(&state.key_words[i]);
        }
        for gate in &plan.gates {
            match gate.kind {
                GateKind::Input | GateKind::KeyInput => continue,
                GateKind::Const0 => scratch.fill(0),
                GateKind::Const1 => scratch.fill(!0u64),
                GateKind::Buf | GateKind::Dff | GateKind::Cdff | GateKind::Not => {
                    let f = gate.fanins[0] * w;
                    scratch.copy_from_slice(&state.values[f..f + w]);
                    if gate.kind == GateKind::Not {
                        for s in scratch.iter_mut() {
                            *s = !*s;
                        }
                    }
                }
                GateKind::And | GateKind::Nand => {
                    scratch.fill(!0u64);
                    for &f in &gate.fanins {
                        for (s, v) in scratch.iter_mut().zip(&state.values[f * w..f * w + w]) {
                            *s &= v;
                        }
                    }
                    if gate.kind == GateKind::Nand {
                        for s in scratch.iter_mut() {
                            *s = !*s;
                        }
                    }
                }
                GateKind::Or | GateKind::Nor => {
                    scratch.fill(0);
                    for &f in &gate.fanins {
                        for (s, v) in scratch.iter_mut().zip(&state.values[f * w..f * w + w]) {
                            *s |= v;
                        }
                    }
                    if gate.kind == GateKind::Nor {
                        for s in scratch.iter_mut() {
                            *s = !*s;
                        }
                    }
                }
                GateKind::Xor | GateKind::Xnor => {
                    let a = gate.fanins[0] * w;
                    let b = gate.fanins[1] * w;
                    for i in 0..w {
                        scratch[i] = state.values[a + i] ^ state.values[b + i];
                    }
                    if gate.kind == GateKind::Xnor {
                        for s in scratch.iter_mut() {
                            *s = !*s;
                        }
                    }
                }
                GateKind::Mux2 => {
                    let s = gate.fanins[0] * w;
                    let i0 = gate.fanins[1] * w;
                    let i1 = gate.fanins[2] * w;
                    for i in 0..w {
                        let sel = state.values[s + i];
                        scratch[i] =
                            (sel & state.values[i1 + i]) | (!sel & state.values[i0 + i]);
                    }
                }
            }
            let base = gate.net * w;
            match gate.latency {
                0 => state.values[base..base + w].copy_from_slice(scratch),
                1 => {
                    for i in 0..w {
                        state.values[base + i] = state.reg[base + i];
                        state.reg[base + i] = scratch[i];
                    }
                }
                _ => {
                    for i in 0..w {
                        state.values[base + i] = state.reg[base + i];
                        state.reg[base + i] = state.reg2[base + i];
                        state.reg2[base + i] = scratch[i];
                    }
                }
            }
        }
    };

    let observe = |state: &mut ChunkState, slot: usize| {
        if slot < plan.warmup_slots {
            return;
        }
        let obs = &oracle_obs[slot];
        for (oi, &net) in plan.output_nets.iter().enumerate() {
            let oracle_word = if obs.get(oi) { !0u64 } else { 0u64 };
            for wi in 0..w {
                let diff =
                    (state.values[net * w + wi] ^ oracle_word) & state.lane_mask[wi] & state.alive[wi];
                if diff != 0 {
                    let mut d = diff;
                    while d != 0 {
                        let b = d.trailing_zeros() as usize;
                        state.eliminated_at[wi * LANES_PER_WORD + b] = Some(slot as u32);
                        d &= d - 1;
                    }
                    state.alive[wi] &= !diff;
                }
            }
        }
    };

    for (pattern, cycles) in segments {
        for _ in 0..*cycles {
            step(&mut state, &mut scratch, pattern);
            if wall >= plan.latency {
                observe(&mut state, slot);
                slot += 1;
            }
            wall += 1;
        }
    }
    if let Some((last, _)) = segments.last() {
        while slot < plan.total_cycles {
            step(&mut state, &mut scratch, last);
            if wall >= plan.latency {
                observe(&mut state, slot);
                slot += 1;
            }
            wall += 1;
        }
    }
    state
}

/// Simulate all `2^n_key` candidate keys over the stimulus segments and
/// eliminate every lane whose observed output stream differs from
/// `oracle_obs` (one entry per counted cycle). Differences at slots whose
/// wall-clock read-out precedes the deepest output path still reflect
/// register initialization and are skipped; a real flip can never land
/// there.
pub fn run_bank(
    netlist: &Netlist,
    latency: usize,
    n_key: usize,
    segments: &[Segment],
    oracle_obs: &[BitVector],
    exec: Execution,
) -> BankOutcome {
    let order = netlist.topo_order().expect("validated netlist");
    let model = LatencyModel;
    let gates = order
        .iter()
        .map(|&id| {
            let g = netlist.gate(id);
            GatePlan {
                kind: g.kind,
                fanins: g.fanins.iter().map(|f| f.index()).collect(),
                latency: model.latency(g.kind),
                net: id.index(),
            }
        })
        .collect();
    let total_cycles: usize = segments.iter().map(|(_, c)| c).sum();
    debug_assert_eq!(total_cycles, oracle_obs.len());
    let depths = crate::pipeline::sequential_depths(netlist, &model).expect("valid netlist");
    let max_output_depth = netlist
        .primary_outputs()
        .iter()
        .map(|&o| depths.depth(o))
        .max()
        .unwrap_or(0);
    let plan = Plan {
        gates,
        input_nets: netlist.primary_inputs().iter().map(|i| i.index()).collect(),
        key_nets: netlist.key_inputs().iter().map(|i| i.index()).collect(),
        output_nets: netlist.primary_outputs().iter().map(|o| o.index()).collect(),
        net_count: netlist.len(),
        latency,
        total_cycles,
        warmup_slots: max_output_depth.saturating_sub(latency),
    };

    let lanes_total = 1usize << n_key;
    let lanes_per_chunk = WORDS_PER_CHUNK * LANES_PER_WORD;
    let chunks: Vec<Chunk> = (0..lanes_total.div_ceil(lanes_per_chunk))
        .map(|c| {
            let lane_base = c * lanes_per_chunk;
            let lanes = lanes_per_chunk.min(lanes_total - lane_base);
            Chunk {
                lane_base,
                lanes,
                words: lanes.div_ceil(LANES_PER_WORD),
            }
        })
        .collect();

    let run = |chunk: &Chunk| run_chunk(&plan, chunk, segments, oracle_obs);
    let states: Vec<ChunkState> = match exec {
        Execution::Sequential => chunks.iter().map(run).collect(),
        Execution::Parallel => {
            #[cfg(feature = "parallel")]
            {
                use rayon::prelude::*;
                chunks.par_iter().map(run).collect()
            }
            #[cfg(not(feature = "parallel"))]
            chunks.iter().map(run).collect()
        }
    };

    let mut eliminated_at = Vec::with_capacity(lanes_total);
    for state in &states {
        eliminated_at.extend_from_slice(&state.eliminated_at);
    }
    BankOutcome { eliminated_at }
}
