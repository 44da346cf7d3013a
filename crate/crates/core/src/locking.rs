//! The four locking transforms and overhead accounting.
//!
//! All schemes attach fresh key inputs to a host netlist and guarantee
//! correct-key transparency: with the correct key applied, the locked
//! circuit computes the host function. LL, SARLock and RSAT are
//! combinational constructions rebalanced by [`path_balance`]; C-SAR is
//! assembled with explicit pipeline depths because its defense *is* a
//! deliberate depth skew between the two MUX arms, which a global rebalance
//! would erase.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::netlist::{AreaReport, BitVector, GateKind, JjCostModel, NetId, Netlist, NetlistError};
use crate::pipeline::{output_latency, path_balance, sequential_depths, LatencyModel};

/// C-SAR block depth from key/pattern inputs to the MUX output when no DFF
/// array is inserted: 2 (MUX) + 1 (XOR) + 1 (OR) + 1 (DFF) + 1 (AND).
pub const CSAR_BLOCK_DEPTH: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Scheme {
    Ll,
    SarLock,
    Rsat,
    Csar,
}

impl Scheme {
    pub fn name(self) -> &'static str {
        match self {
            Scheme::Ll => "ll",
            Scheme::SarLock => "sarlock",
            Scheme::Rsat => "rsat",
            Scheme::Csar => "csar",
        }
    }
}

impl std::fmt::Display for Scheme {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for Scheme {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "ll" => Ok(Scheme::Ll),
            "sarlock" => Ok(Scheme::SarLock),
            "rsat" => Ok(Scheme::Rsat),
            "csar" | "c-sar" => Ok(Scheme::Csar),
            other => Err(format!("unknown scheme `{other}`")),
        }
    }
}

/// Derived C-SAR pipeline quantities: `n = n_s0 + t` and
/// `n_s1 = n_c + n_s0` hold by construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CsarParams {
    pub t: usize,
    pub n: usize,
    pub n_s0: usize,
    pub n_s1: usize,
}

#[derive(Debug, Error)]
pub enum LockError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("n_key {n_key} exceeds available resource ({available} {what})")]
    KeyTooLarge {
        n_key: usize,
        available: usize,
        what: &'static str,
    },
    #[error("n_key must be at least {min} for this scheme, got {got}")]
    KeyTooSmall { min: usize, got: usize },
    #[error("flip output index {0} out of range ({1} outputs)")]
    BadFlipOutput(usize, usize),
    #[error("correct key width {got} does not match n_key {expected}")]
    KeyWidth { expected: usize, got: usize },
    #[error("n_c must be at least 1")]
    BadNc,
    #[error("host netlist already has key inputs")]
    AlreadyLocked,
}

/// A locked netlist together with the scheme metadata and the correct key
/// (the tamper-proof-memory value, exposed only to the oracle side).
#[derive(Debug, Clone)]
pub struct LockedNetlist {
    pub netlist: Netlist,
    pub scheme: Scheme,
    pub correct_key: BitVector,
    /// Nominal input-to-output pipeline latency in clock cycles.
    pub latency: usize,
    pub n_key: usize,
    /// Camouflaged-DFF count; 0 for every scheme except C-SAR.
    pub n_c: usize,
    pub seed: Option<u64>,
    pub flip_output: Option<usize>,
    pub csar: Option<CsarParams>,
}

impl LockedNetlist {
    /// Wrap an already-functional netlist with an empty key (used to feed
    /// the attack machinery an unlocked circuit).
    pub fn unlocked(netlist: Netlist, model: &LatencyModel) -> Result<Self, LockError> {
        let balanced = path_balance(&netlist, model)?;
        let latency = output_latency(&balanced, model)?;
        Ok(LockedNetlist {
            netlist: balanced,
            scheme: Scheme::Ll,
            correct_key: BitVector::zeros(0),
            latency,
            n_key: 0,
            n_c: 0,
            seed: None,
            flip_output: None,
            csar: None,
        })
    }

    pub fn sidecar(&self) -> SidecarRecord {
        SidecarRecord {
            scheme: self.scheme,
            n_key: self.n_key,
            n_c: self.n_c,
            seed: self.seed,
            correct_key: self.correct_key.to_string(),
            flip_output: self.flip_output,
            t: self.csar.map(|c| c.t),
            n: self.csar.map(|c| c.n),
            n_s0: self.csar.map(|c| c.n_s0),
            n_s1: self.csar.map(|c| c.n_s1),
        }
    }

    /// Rebuild from a serialized netlist plus its sidecar record.
    pub fn from_parts(
        netlist: Netlist,
        record: &SidecarRecord,
        model: &LatencyModel,
    ) -> Result<Self, LockError> {
        netlist.require_valid()?;
        let correct_key = BitVector::parse(&record.correct_key)?;
        if correct_key.width() != netlist.key_inputs().len() {
            return Err(LockError::KeyWidth {
                expected: netlist.key_inputs().len(),
                got: correct_key.width(),
            });
        }
        let csar = match (record.t, record.n, record.n_s0, record.n_s1) {
            (Some(t), Some(n), Some(n_s0), Some(n_s1)) => Some(CsarParams { t, n, n_s0, n_s1 }),
            _ => None,
        };
        let latency = match csar {
            Some(c) => c.n + 1,
            None => output_latency(&netlist, model)?,
        };
        Ok(LockedNetlist {
            netlist,
            scheme: record.scheme,
            correct_key,
            latency,
            n_key: record.n_key,
            n_c: record.n_c,
            seed: record.seed,
            flip_output: record.flip_output,
            csar,
        })
    }
}

/// Sidecar JSON record accompanying a locked `.bench` file.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SidecarRecord {
    pub scheme: Scheme,
    pub n_key: usize,
    pub n_c: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub correct_key: String,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub flip_output: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub t: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_s0: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub n_s1: Option<usize>,
}

/// Deterministic correct-key derivation for harness runs: `n_key` bits
/// drawn from a seeded stream.
pub fn derive_key(seed: u64, n_key: usize) -> BitVector {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    BitVector::from_bits((0..n_key).map(|_| rng.random()).collect())
}

fn check_host(n: &Netlist) -> Result<(), LockError> {
    n.require_valid()?;
    if !n.key_inputs().is_empty() {
        return Err(LockError::AlreadyLocked);
    }
    Ok(())
}

fn check_flip(n: &Netlist, flip_output: usize) -> Result<(), LockError> {
    if flip_output >= n.primary_outputs().len() {
        return Err(LockError::BadFlipOutput(
            flip_output,
            n.primary_outputs().len(),
        ));
    }
    Ok(())
}

/// n-ary reduce; a single signal passes through unreduced.
fn reduce(n: &mut Netlist, kind: GateKind, signals: &[NetId], name: &str) -> NetId {
    assert!(!signals.is_empty());
    if signals.len() == 1 {
        signals[0]
    } else {
        let name = n.fresh_name(name);
        n.push_gate(kind, signals.to_vec(), name)
    }
}

fn dff_chain(n: &mut Netlist, src: NetId, len: usize, base: &str) -> NetId {
    let mut cur = src;
    for i in 1..=len {
        let name = n.fresh_name(&format!("{base}_d{i}"));
        cur = n.push_gate(GateKind::Dff, vec![cur], name);
    }
    cur
}

/// Per-bit key-mismatch nets `K'_i`: XOR against ground where the correct
/// bit is 0, XNOR where it is 1, so the net is 1 iff the applied bit is
/// wrong.
fn mismatch_bits(
    n: &mut Netlist,
    keys: &[NetId],
    ground: NetId,
    correct_key: &BitVector,
    base: &str,
) -> Vec<NetId> {
    keys.iter()
        .enumerate()
        .map(|(i, &k)| {
            let kind = if correct_key.get(i) {
                GateKind::Xnor
            } else {
                GateKind::Xor
            };
            let name = n.fresh_name(&format!("{base}{i}"));
            n.push_gate(kind, vec![k, ground], name)
        })
        .collect()
}

fn add_key_inputs(n: &mut Netlist, n_key: usize) -> Vec<NetId> {
    (0..n_key)
        .map(|i| {
            let name = n.fresh_name(&format!("keyin{i}"));
            n.add_key_input(name)
        })
        .collect()
}

/// XOR/XNOR key-gate insertion on `n_key` seeded internal nets.
pub fn lock_ll(n: &Netlist, n_key: usize, seed: u64) -> Result<LockedNetlist, LockError> {
    check_host(n)?;
    let candidates: Vec<NetId> = n
        .net_ids()
        .filter(|&id| n.gate(id).kind.counts_as_gate())
        .collect();
    if n_key > candidates.len() {
        return Err(LockError::KeyTooLarge {
            n_key,
            available: candidates.len(),
            what: "internal nets",
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = rand::seq::index::sample(&mut rng, candidates.len(), n_key);
    let correct_key = BitVector::from_bits((0..n_key).map(|_| rng.random()).collect());

    let mut locked = n.clone();
    for (i, pick) in picks.iter().enumerate() {
        let target = candidates[pick];
        let key_name = locked.fresh_name(&format!("keyin{i}"));
        let key = locked.add_key_input(key_name);
        let kind = if correct_key.get(i) {
            GateKind::Xnor
        } else {
            GateKind::Xor
        };
        let name = locked.fresh_name(&format!("{}_kg", locked.name_of(target)));
        let gate = locked.push_gate(kind, vec![target, key], name);
        locked.rewire(target, gate, gate);
    }

    let model = LatencyModel;
    let balanced = path_balance(&locked, &model)?;
    let latency = output_latency(&balanced, &model)?;
    Ok(LockedNetlist {
        netlist: balanced,
        scheme: Scheme::Ll,
        correct_key,
        latency,
        n_key,
        n_c: 0,
        seed: Some(seed),
        flip_output: None,
        csar: None,
    })
}

/// SARLock-style one-point flip: the selected output is corrupted exactly
/// when the first `n_key` primary inputs equal the applied key and the key
/// is wrong. The correct key is hard-wired to all-zeros by the per-bit
/// mismatch network (the transform takes no key parameter).
pub fn lock_sarlock(
    n: &Netlist,
    n_key: usize,
    flip_output: usize,
) -> Result<LockedNetlist, LockError> {
    check_host(n)?;
    check_flip(n, flip_output)?;
    if n_key == 0 {
        return Err(LockError::KeyTooSmall { min: 1, got: 0 });
    }
    if n_key > n.primary_inputs().len() {
        return Err(LockError::KeyTooLarge {
            n_key,
            available: n.primary_inputs().len(),
            what: "primary inputs",
        });
    }
    let correct_key = BitVector::zeros(n_key);

    let mut locked = n.clone();
    let keys = add_key_inputs(&mut locked, n_key);
    let ground = {
        let name = locked.fresh_name("sar_gnd");
        locked.push_gate(GateKind::Const0, vec![], name)
    };

    // Pattern comparator: 1 iff the input prefix equals the applied key.
    let eq_bits: Vec<NetId> = (0..n_key)
        .map(|i| {
            let pi = locked.primary_inputs()[i];
            let name = locked.fresh_name(&format!("sar_eq{i}"));
            locked.push_gate(GateKind::Xnor, vec![pi, keys[i]], name)
        })
        .collect();
    let prefix_match = reduce(&mut locked, GateKind::And, &eq_bits, "sar_match");
    let mis = mismatch_bits(&mut locked, &keys, ground, &correct_key, "sar_mis");
    let wrong_key = reduce(&mut locked, GateKind::Or, &mis, "sar_wrong");
    let flip = {
        let name = locked.fresh_name("sar_flip");
        locked.push_gate(GateKind::And, vec![prefix_match, wrong_key], name)
    };
    let old = locked.primary_outputs()[flip_output];
    let flipped = {
        let name = locked.fresh_name("sar_out");
        locked.push_gate(GateKind::Xor, vec![old, flip], name)
    };
    locked.set_output(flip_output, flipped);

    let model = LatencyModel;
    let balanced = path_balance(&locked, &model)?;
    let latency = output_latency(&balanced, &model)?;
    Ok(LockedNetlist {
        netlist: balanced,
        scheme: Scheme::SarLock,
        correct_key,
        latency,
        n_key,
        n_c: 0,
        seed: None,
        flip_output: Some(flip_output),
        csar: None,
    })
}

fn check_keyed(
    n: &Netlist,
    n_key: usize,
    correct_key: &BitVector,
    flip_output: usize,
    min_key: usize,
) -> Result<(), LockError> {
    check_host(n)?;
    check_flip(n, flip_output)?;
    if n_key < min_key {
        return Err(LockError::KeyTooSmall {
            min: min_key,
            got: n_key,
        });
    }
    if n_key > n.primary_inputs().len() {
        return Err(LockError::KeyTooLarge {
            n_key,
            available: n.primary_inputs().len(),
            what: "primary inputs",
        });
    }
    if correct_key.width() != n_key {
        return Err(LockError::KeyWidth {
            expected: n_key,
            got: correct_key.width(),
        });
    }
    Ok(())
}

/// RSAT block: key-mismatch OR `X` selects between itself and the inverted
/// input comparator, and the MUX output is XORed into one primary output.
/// Combinationally the flip fires iff the key is wrong *and* the input
/// prefix equals the applied key.
pub fn lock_rsat(
    n: &Netlist,
    n_key: usize,
    correct_key: &BitVector,
    flip_output: usize,
) -> Result<LockedNetlist, LockError> {
    check_keyed(n, n_key, correct_key, flip_output, 1)?;

    let mut locked = n.clone();
    let keys = add_key_inputs(&mut locked, n_key);
    let ground = {
        let name = locked.fresh_name("rsat_gnd");
        locked.push_gate(GateKind::Const0, vec![], name)
    };
    let mis = mismatch_bits(&mut locked, &keys, ground, correct_key, "rsat_kp");
    let x = reduce(&mut locked, GateKind::Or, &mis, "rsat_x");
    let cmp: Vec<NetId> = (0..n_key)
        .map(|i| {
            let pi = locked.primary_inputs()[i];
            let name = locked.fresh_name(&format!("rsat_cmp{i}"));
            locked.push_gate(GateKind::Xor, vec![pi, keys[i]], name)
        })
        .collect();
    let y = reduce(&mut locked, GateKind::Or, &cmp, "rsat_y");
    let ybar = {
        let name = locked.fresh_name("rsat_ybar");
        locked.push_gate(GateKind::Not, vec![y], name)
    };
    let mout = {
        let name = locked.fresh_name("rsat_mout");
        locked.push_gate(GateKind::Mux2, vec![x, x, ybar], name)
    };
    let old = locked.primary_outputs()[flip_output];
    let flipped = {
        let name = locked.fresh_name("rsat_out");
        locked.push_gate(GateKind::Xor, vec![old, mout], name)
    };
    locked.set_output(flip_output, flipped);

    let model = LatencyModel;
    let balanced = path_balance(&locked, &model)?;
    let latency = output_latency(&balanced, &model)?;
    Ok(LockedNetlist {
        netlist: balanced,
        scheme: Scheme::Rsat,
        correct_key: correct_key.clone(),
        latency,
        n_key,
        n_c: 0,
        seed: None,
        flip_output: Some(flip_output),
        csar: None,
    })
}

/// C-SAR: the RSAT block extended with a camouflaged-DFF array and a
/// consecutive-cycle AND guard.
///
/// The host is balanced first (and output-padded when shallower than the
/// block depth `T`); the block is then attached at explicit depths so that
/// the correct-key arm lands exactly at the host latency `N` while the
/// wrong-key arm lands `n_c` cycles later, gated by `n_c + 1` consecutive
/// prefix-match cycles. No global rebalance runs afterwards.
pub fn lock_csar(
    n: &Netlist,
    n_key: usize,
    correct_key: &BitVector,
    n_c: usize,
    flip_output: usize,
) -> Result<LockedNetlist, LockError> {
    check_keyed(n, n_key, correct_key, flip_output, 2)?;
    if n_c < 1 {
        return Err(LockError::BadNc);
    }

    let model = LatencyModel;
    let mut locked = path_balance(n, &model)?;
    let host_latency = output_latency(&locked, &model)?;

    // Hosts shallower than the block get their outputs padded up to T.
    if host_latency < CSAR_BLOCK_DEPTH {
        let pad = CSAR_BLOCK_DEPTH - host_latency;
        let mut pads: std::collections::HashMap<NetId, NetId> = std::collections::HashMap::new();
        for pos in 0..locked.primary_outputs().len() {
            let src = locked.primary_outputs()[pos];
            let padded = *pads.entry(src).or_insert_with(|| {
                let base = format!("{}_pad", locked.name_of(src));
                dff_chain(&mut locked, src, pad, &base)
            });
            locked.set_output(pos, padded);
        }
    }
    let n_total = host_latency.max(CSAR_BLOCK_DEPTH);
    let n_s0 = n_total - CSAR_BLOCK_DEPTH;
    let n_s1 = n_s0 + n_c;

    let keys = add_key_inputs(&mut locked, n_key);
    let ground = {
        let name = locked.fresh_name("csar_gnd");
        locked.push_gate(GateKind::Const0, vec![], name)
    };

    // X arm: mismatch OR (depth 2), D5 register (depth 3).
    let mis = mismatch_bits(&mut locked, &keys, ground, correct_key, "csar_kp");
    let x = reduce(&mut locked, GateKind::Or, &mis, "csar_x");
    let v0 = {
        let name = locked.fresh_name("csar_d5");
        locked.push_gate(GateKind::Dff, vec![x], name)
    };

    // Key-equality comparator into the camouflaged array: per-bit check,
    // AND reduce, D4 register aligning with D5, then n_c zero-delay CDFFs.
    let eq: Vec<NetId> = keys
        .iter()
        .enumerate()
        .map(|(i, &k)| {
            let kind = if correct_key.get(i) {
                GateKind::Xor
            } else {
                GateKind::Xnor
            };
            let name = locked.fresh_name(&format!("csar_eq{i}"));
            locked.push_gate(kind, vec![k, ground], name)
        })
        .collect();
    let eq_all = reduce(&mut locked, GateKind::And, &eq, "csar_eqall");
    let d4 = {
        let name = locked.fresh_name("csar_d4");
        locked.push_gate(GateKind::Dff, vec![eq_all], name)
    };
    let mut cd_taps = Vec::with_capacity(n_c);
    let mut cur = d4;
    for j in 1..=n_c {
        let name = locked.fresh_name(&format!("csar_cd{j}"));
        cur = locked.push_gate(GateKind::Cdff, vec![cur], name);
        cd_taps.push(cur);
    }
    let mut g2_fanins = vec![v0];
    g2_fanins.extend(&cd_taps);
    let g2 = {
        let name = locked.fresh_name("csar_g2");
        locked.push_gate(GateKind::And, g2_fanins, name)
    };
    let x_tail = dff_chain(&mut locked, g2, n_s0, "csar_xarm");
    let sel = dff_chain(&mut locked, v0, n_s0 + 1, "csar_sel");

    // Ybar arm: input comparator (depth 2), inverter (depth 3), u-tap DFF
    // chain and the (n_c+1)-input consecutive-cycle AND G3.
    let cmp: Vec<NetId> = (0..n_key)
        .map(|i| {
            let pi = locked.primary_inputs()[i];
            let name = locked.fresh_name(&format!("csar_cmp{i}"));
            locked.push_gate(GateKind::Xor, vec![pi, keys[i]], name)
        })
        .collect();
    let y = reduce(&mut locked, GateKind::Or, &cmp, "csar_y");
    let ybar = {
        let name = locked.fresh_name("csar_ybar");
        locked.push_gate(GateKind::Not, vec![y], name)
    };
    let mut u_taps = Vec::with_capacity(n_c);
    let mut cur = ybar;
    for j in 1..=n_c {
        let name = locked.fresh_name(&format!("csar_u{j}"));
        cur = locked.push_gate(GateKind::Dff, vec![cur], name);
        u_taps.push(cur);
    }
    let mut g3_fanins = vec![ybar];
    g3_fanins.extend(&u_taps);
    let g3 = {
        let name = locked.fresh_name("csar_g3");
        locked.push_gate(GateKind::And, g3_fanins, name)
    };
    let y_tail = dff_chain(&mut locked, g3, n_s1, "csar_yarm");

    let mout = {
        let name = locked.fresh_name("csar_mout");
        locked.push_gate(GateKind::Mux2, vec![sel, x_tail, y_tail], name)
    };
    let old = locked.primary_outputs()[flip_output];
    let flipped = {
        let name = locked.fresh_name("csar_out");
        locked.push_gate(GateKind::Xor, vec![old, mout], name)
    };
    locked.set_output(flip_output, flipped);
    // The flip XOR costs one cycle; every other output gets one aligning DFF.
    let mut lifted: std::collections::HashMap<NetId, NetId> = std::collections::HashMap::new();
    for pos in 0..locked.primary_outputs().len() {
        if pos == flip_output {
            continue;
        }
        let src = locked.primary_outputs()[pos];
        let aligned = *lifted.entry(src).or_insert_with(|| {
            let base = format!("{}_al", locked.name_of(src));
            dff_chain(&mut locked, src, 1, &base)
        });
        locked.set_output(pos, aligned);
    }

    locked.require_valid()?;
    if cfg!(debug_assertions) {
        let depths = sequential_depths(&locked, &model)?;
        debug_assert_eq!(depths.depth(x_tail), n_total - 2);
        debug_assert_eq!(depths.depth(sel), n_total - 2);
        // G3's fanins are consecutive-cycle taps, so its longest structural
        // path runs through u_{n_c}: the Ybar arm reads n_c deeper than its
        // functional delay.
        debug_assert_eq!(depths.depth(y_tail), n_total - 2 + 2 * n_c);
        debug_assert_eq!(depths.depth(flipped), n_total + 2 * n_c + 1);
    }

    Ok(LockedNetlist {
        netlist: locked,
        scheme: Scheme::Csar,
        correct_key: correct_key.clone(),
        latency: n_total + 1,
        n_key,
        n_c,
        seed: None,
        flip_output: Some(flip_output),
        csar: Some(CsarParams {
            t: CSAR_BLOCK_DEPTH,
            n: n_total,
            n_s0,
            n_s1,
        }),
    })
}

/// Componentwise area deltas between a baseline netlist and its locked
/// version.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OverheadReport {
    pub baseline: AreaReport,
    pub locked: AreaReport,
    pub delta_counts: std::collections::BTreeMap<GateKind, i64>,
    pub delta_total: i64,
    pub delta_jj: i64,
}

pub fn overhead(
    baseline: &Netlist,
    locked: &LockedNetlist,
    costs: &JjCostModel,
) -> Result<OverheadReport, NetlistError> {
    let base = baseline.area_stats(costs)?;
    let lock = locked.netlist.area_stats(costs)?;
    let mut delta_counts = std::collections::BTreeMap::new();
    for kind in GateKind::ALL {
        let d = lock.count(kind) as i64 - base.count(kind) as i64;
        if d != 0 {
            delta_counts.insert(kind, d);
        }
    }
    Ok(OverheadReport {
        delta_total: lock.total as i64 - base.total as i64,
        delta_jj: lock.jj_estimate as i64 - base.jj_estimate as i64,
        baseline: base,
        locked: lock,
        delta_counts,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench_io::parse_bench;

    const C17: &str = "INPUT(1)\nINPUT(2)\nINPUT(3)\nINPUT(6)\nINPUT(7)\n\
                       OUTPUT(22)\nOUTPUT(23)\n\
                       10 = NAND(1, 3)\n11 = NAND(3, 6)\n16 = NAND(2, 11)\n\
                       19 = NAND(11, 7)\n22 = NAND(10, 16)\n23 = NAND(16, 19)";

    fn c17() -> Netlist {
        parse_bench(C17).unwrap()
    }

    fn eval_all(n: &Netlist, keys: &BitVector) -> Vec<u64> {
        let width = n.primary_inputs().len();
        (0..1u64 << width)
            .map(|v| {
                n.eval_comb(&BitVector::from_uint(v, width), keys)
                    .unwrap()
                    .to_uint()
            })
            .collect()
    }

    #[test]
    fn ll_correct_key_is_transparent_and_some_wrong_key_corrupts() {
        let host = c17();
        let baseline = eval_all(&host, &BitVector::zeros(0));
        let locked = lock_ll(&host, 3, 7).unwrap();
        assert_eq!(eval_all(&locked.netlist, &locked.correct_key), baseline);
        let corrupting = (0..8u64)
            .filter(|&k| eval_all(&locked.netlist, &BitVector::from_uint(k, 3)) != baseline)
            .count();
        assert!(corrupting >= 1, "some wrong key must corrupt some input");
    }

    #[test]
    fn ll_is_deterministic_in_seed() {
        let host = c17();
        let a = lock_ll(&host, 3, 42).unwrap();
        let b = lock_ll(&host, 3, 42).unwrap();
        assert_eq!(a.netlist, b.netlist);
        assert_eq!(a.correct_key, b.correct_key);
        let c = lock_ll(&host, 3, 43).unwrap();
        assert!(a.netlist != c.netlist || a.correct_key != c.correct_key);
    }

    #[test]
    fn ll_rejects_oversized_key() {
        let host = c17();
        assert!(matches!(
            lock_ll(&host, 7, 1),
            Err(LockError::KeyTooLarge { .. })
        ));
    }

    /// Corruption profile shared by SARLock, RSAT and (combinationally)
    /// C-SAR: wrong key k corrupts exactly the patterns whose prefix is k.
    fn assert_one_point(locked: &LockedNetlist, host: &Netlist) {
        let n_in = host.primary_inputs().len();
        let n_key = locked.n_key;
        let baseline = eval_all(host, &BitVector::zeros(0));
        for k in 0..1u64 << n_key {
            let key = BitVector::from_uint(k, n_key);
            let outs = eval_all(&locked.netlist, &key);
            for v in 0..1u64 << n_in {
                let prefix = v & ((1 << n_key) - 1);
                let should_corrupt = key != locked.correct_key && prefix == k;
                assert_eq!(
                    outs[v as usize] != baseline[v as usize],
                    should_corrupt,
                    "key {key} input {v:b}"
                );
            }
        }
    }

    #[test]
    fn sarlock_one_point_corruption() {
        let host = c17();
        let locked = lock_sarlock(&host, 3, 0).unwrap();
        assert_one_point(&locked, &host);
    }

    #[test]
    fn rsat_one_point_corruption() {
        let host = c17();
        let key = BitVector::parse("101").unwrap();
        let locked = lock_rsat(&host, 3, &key, 1).unwrap();
        assert_one_point(&locked, &host);
    }

    #[test]
    fn csar_one_point_combinationally_and_params() {
        let host = c17();
        let key = BitVector::parse("001").unwrap();
        let locked = lock_csar(&host, 3, &key, 2, 0).unwrap();
        assert_one_point(&locked, &host);
        let p = locked.csar.unwrap();
        assert_eq!(p.t, 6);
        assert_eq!(p.n, p.n_s0 + p.t);
        assert_eq!(p.n_s1, 2 + p.n_s0);
        assert_eq!(locked.latency, p.n + 1);
    }

    #[test]
    fn csar_requires_nc_and_enough_keys() {
        let host = c17();
        let key = BitVector::parse("01").unwrap();
        assert!(matches!(
            lock_csar(&host, 2, &key, 0, 0),
            Err(LockError::BadNc)
        ));
        assert!(matches!(
            lock_csar(&host, 1, &BitVector::parse("1").unwrap(), 1, 0),
            Err(LockError::KeyTooSmall { .. })
        ));
    }

    #[test]
    fn sidecar_round_trip() {
        let host = c17();
        let key = BitVector::parse("011").unwrap();
        let locked = lock_csar(&host, 3, &key, 1, 0).unwrap();
        let json = serde_json::to_string(&locked.sidecar()).unwrap();
        let record: SidecarRecord = serde_json::from_str(&json).unwrap();
        let back = LockedNetlist::from_parts(locked.netlist.clone(), &record, &LatencyModel).unwrap();
        assert_eq!(back.latency, locked.latency);
        assert_eq!(back.correct_key, locked.correct_key);
        assert_eq!(back.csar, locked.csar);
    }

    #[test]
    fn overhead_zero_for_identical() {
        let host = c17();
        let unlocked = LockedNetlist::unlocked(host.clone(), &LatencyModel).unwrap();
        let report = overhead(&unlocked.netlist.clone(), &unlocked, &JjCostModel::default())
            .unwrap();
        assert_eq!(report.delta_total, 0);
        assert_eq!(report.delta_jj, 0);
        assert!(report.delta_counts.is_empty());
    }

    #[test]
    fn csar_nc_increment_costs_one_cdff_and_two_dffs() {
        let host = c17();
        let key = BitVector::parse("110").unwrap();
        let costs = JjCostModel::default();
        let a = lock_csar(&host, 3, &key, 1, 0).unwrap();
        let b = lock_csar(&host, 3, &key, 2, 0).unwrap();
        let ra = overhead(&host, &a, &costs).unwrap();
        let rb = overhead(&host, &b, &costs).unwrap();
        let d = |r: &OverheadReport, k: GateKind| r.delta_counts.get(&k).copied().unwrap_or(0);
        assert_eq!(d(&rb, GateKind::Cdff) - d(&ra, GateKind::Cdff), 1);
        assert_eq!(d(&rb, GateKind::Dff) - d(&ra, GateKind::Dff), 2);
        assert_eq!(rb.delta_total - ra.delta_total, 3);
    }
}
