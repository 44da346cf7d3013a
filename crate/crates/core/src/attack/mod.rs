//! Key-recovery attacks against locked netlists.
//!
//! [`Oracle`] models the activated functional IC: a clocked simulation of
//! the locked netlist with the correct key applied, queryable for output
//! bits only. Its `n_clk` counter tallies applied stimulus cycles — the
//! pipeline fill needed to read observations out is a benchmark constant
//! and is excluded.
//!
//! [`sweep::sweep_attack`] is the cycle-counting attack: it drives the
//! oracle and a bank of candidate-keyed simulations with a pattern
//! sequence, eliminating every candidate whose aligned output stream
//! differs. [`sat::miter_sat_attack`] is the classic oracle-guided SAT
//! attack over the combinational abstraction.

pub mod bank;
pub mod sat;
pub mod sweep;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::locking::{LockedNetlist, Scheme};
use crate::netlist::{BitVector, Netlist, NetlistError};
use crate::pipeline::SimCore;

pub use sat::{miter_sat_attack, MiterAttackOptions};
pub use sweep::{sweep_attack, SweepMode};

/// Candidate key sets are tracked explicitly; beyond this width the bank
/// would not fit in memory.
pub const MAX_BANK_KEY_BITS: usize = 24;

#[derive(Debug, Error)]
pub enum AttackError {
    #[error(transparent)]
    Netlist(#[from] NetlistError),
    #[error("hold must be at least 1")]
    BadHold,
    #[error("key width {0} exceeds the explicit candidate-tracking limit {MAX_BANK_KEY_BITS}")]
    KeySpaceTooLarge(usize),
    #[error("scripted pattern {0} is not a distinguishing input for the current constraints")]
    ScriptedDipInvalid(BitVector),
    #[error("soundness violation: the correct key was eliminated (slot {0})")]
    CorrectKeyEliminated(usize),
}

/// The activated functional IC. Holds the locked netlist and the correct
/// key behind a query interface that reveals output bits only.
#[derive(Debug, Clone)]
pub struct Oracle {
    netlist: Netlist,
    key: BitVector,
    latency: usize,
    core: SimCore,
    n_clk: u64,
}

impl Oracle {
    pub fn new(locked: &LockedNetlist) -> Result<Self, AttackError> {
        let core = SimCore::new(&locked.netlist)?;
        Ok(Oracle {
            netlist: locked.netlist.clone(),
            key: locked.correct_key.clone(),
            latency: locked.latency,
            core,
            n_clk: 0,
        })
    }

    /// Nominal input-to-output latency of the activated netlist.
    pub fn latency(&self) -> usize {
        self.latency
    }

    /// Total stimulus cycles consumed so far.
    pub fn n_clk(&self) -> u64 {
        self.n_clk
    }

    pub fn input_width(&self) -> usize {
        self.netlist.primary_inputs().len()
    }

    pub fn output_width(&self) -> usize {
        self.netlist.primary_outputs().len()
    }

    /// Apply a stimulus stream of `(pattern, cycles)` segments and return
    /// one output vector per applied cycle, aligned with the stimulus cycle
    /// that caused it (observations are read `latency` wall cycles later;
    /// the read-out happens on a scratch copy so the live pipeline state is
    /// exactly the post-stimulus state).
    pub fn apply_stream(
        &mut self,
        segments: &[(BitVector, usize)],
    ) -> Result<Vec<BitVector>, AttackError> {
        let total: usize = segments.iter().map(|(_, c)| c).sum();
        let mut observed = Vec::with_capacity(total);
        let mut wall = 0usize;
        let keys = self.key.clone();
        for (pattern, cycles) in segments {
            for _ in 0..*cycles {
                let out = self.core.step(&self.netlist, pattern, &keys)?;
                if wall >= self.latency {
                    observed.push(out);
                }
                wall += 1;
            }
        }
        self.n_clk += total as u64;
        if total > 0 {
            // Flush the in-flight tail on a scratch copy, holding the final
            // pattern. The extra cycles are pipeline fill, not stimulus:
            // they are not counted and their own effects land beyond the
            // observed window.
            let last = &segments[segments.len() - 1].0;
            let mut scratch = self.core.clone();
            while observed.len() < total {
                let out = scratch.step(&self.netlist, last, &keys)?;
                if wall >= self.latency {
                    observed.push(out);
                }
                wall += 1;
            }
        }
        debug_assert_eq!(observed.len(), total);
        Ok(observed)
    }

    /// Apply `pattern` for `hold` cycles and return the `hold` output
    /// vectors it produces. State persists across queries.
    pub fn query(
        &mut self,
        pattern: &BitVector,
        hold: usize,
    ) -> Result<Vec<BitVector>, AttackError> {
        if hold == 0 {
            return Err(AttackError::BadHold);
        }
        self.apply_stream(&[(pattern.clone(), hold)])
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AttackStatus {
    KeyRecovered,
    Failed,
    BudgetExhausted,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AttackKind {
    Sweep,
    Miter,
}

/// One attack step: the applied pattern, its hold length, and the keys
/// whose elimination was observed during this step's cycles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct TraceStep {
    pub pattern: BitVector,
    pub hold: usize,
    pub eliminated: Vec<BitVector>,
}

/// Attack outcome with enough bookkeeping to recount `n_clk` from the
/// trace: sum of hold values plus drain cycles.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AttackReport {
    pub scheme: Scheme,
    pub attack: AttackKind,
    pub n_key: usize,
    pub n_c: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub mode: Option<String>,
    pub hold: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub seed: Option<u64>,
    pub status: AttackStatus,
    pub iterations: usize,
    pub n_clk: u64,
    pub drain_cycles: usize,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub recovered_key: Option<BitVector>,
    pub survivor_count: usize,
    /// Surviving candidates, capped at 16 entries in reports.
    pub survivors: Vec<BitVector>,
    pub trace: Vec<TraceStep>,
}

impl AttackReport {
    /// Independent recount of the cycle cost from the trace.
    pub fn recount_n_clk(&self) -> u64 {
        self.trace.iter().map(|s| s.hold as u64).sum::<u64>() + self.drain_cycles as u64
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }
}
