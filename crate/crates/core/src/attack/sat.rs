//! Oracle-guided miter SAT attack.
//!
//! Loop: solve the miter for a distinguishing input pattern, query the
//! functional IC at that pattern (one cycle), constrain both key copies to
//! reproduce the observation, repeat until the miter is unsatisfiable;
//! every key satisfying the accumulated observations is then functionally
//! correct on all distinguishing inputs.

use super::{AttackError, AttackKind, AttackReport, AttackStatus, Oracle, TraceStep};
use crate::cnf::{Cnf, Lit};
use crate::locking::LockedNetlist;
use crate::miter::{build_miter, Miter};
use crate::netlist::BitVector;
use crate::solver::{solve, SatStatus};
use crate::tseitin::{encode_into, NetLit};

/// Keys spaces up to this width get per-iteration elimination sets in the
/// report trace (computed by candidate enumeration).
const TRACE_KEY_LIMIT: usize = 16;

#[derive(Debug, Clone, Default)]
pub struct MiterAttackOptions {
    /// Maximum distinguishing-input iterations before giving up.
    pub budget: Option<usize>,
    /// Scripted patterns to use as the DIP sequence. Each is validated
    /// against the current miter before use (it must still distinguish two
    /// surviving keys); the run errs out otherwise.
    pub dip_schedule: Option<Vec<BitVector>>,
}

/// Accumulates the observation constraints over a private key-variable
/// group, so the surviving key can be extracted once the miter goes UNSAT.
struct Recovery {
    cnf: Cnf,
    key_vars: Vec<u32>,
}

impl Recovery {
    fn new(n_key: usize) -> Recovery {
        let mut cnf = Cnf::new();
        let key_vars = (0..n_key).map(|_| cnf.fresh_var()).collect();
        Recovery { cnf, key_vars }
    }

    fn add_observation(
        &mut self,
        locked: &LockedNetlist,
        pattern: &BitVector,
        observed: &BitVector,
    ) -> Result<(), AttackError> {
        let inputs: Vec<NetLit> = pattern.iter().map(NetLit::Const).collect();
        let keys: Vec<NetLit> = self
            .key_vars
            .iter()
            .map(|&v| NetLit::Lit(Lit::positive(v)))
            .collect();
        let nets = encode_into(&mut self.cnf, &locked.netlist, &inputs, &keys)?;
        for (i, &o) in locked.netlist.primary_outputs().iter().enumerate() {
            let want = observed.get(i);
            match nets[o.index()] {
                NetLit::Const(b) => {
                    if b != want {
                        self.cnf.add_clause(Vec::new());
                    }
                }
                NetLit::Lit(l) => self.cnf.add_unit(if want { l } else { !l }),
            }
        }
        Ok(())
    }

    fn extract_key(&self) -> Option<BitVector> {
        let r = solve(&self.cnf, &[]);
        if !r.is_sat() {
            return None;
        }
        Some(BitVector::from_bits(
            self.key_vars
                .iter()
                .map(|&v| r.value(v))
                .collect(),
        ))
    }
}

fn next_dip(
    miter: &Miter,
    options: &MiterAttackOptions,
    iteration: usize,
) -> Result<Option<BitVector>, AttackError> {
    if let Some(schedule) = &options.dip_schedule {
        if let Some(pattern) = schedule.get(iteration) {
            // A scripted pattern must still be distinguishing under the
            // accumulated constraints.
            let assumptions = miter.pattern_assumptions(pattern);
            let r = solve(&miter.cnf, &assumptions);
            if r.status != SatStatus::Sat {
                return Err(AttackError::ScriptedDipInvalid(pattern.clone()));
            }
            return Ok(Some(pattern.clone()));
        }
    }
    let r = solve(&miter.cnf, &[]);
    Ok(match r.status {
        SatStatus::Unsat => None,
        SatStatus::Sat => Some(miter.pattern_of_model(&r.model.expect("SAT model"))),
    })
}

/// Run the miter SAT attack against `locked`, querying `oracle` for one
/// cycle per distinguishing input.
pub fn miter_sat_attack(
    locked: &LockedNetlist,
    oracle: &mut Oracle,
    options: &MiterAttackOptions,
) -> Result<AttackReport, AttackError> {
    let n_key = locked.n_key;
    let mut miter = build_miter(locked)?;
    let mut recovery = Recovery::new(n_key);
    let n_clk_start = oracle.n_clk();

    // Explicit candidate tracking for the trace on small key spaces.
    let mut candidates: Option<Vec<u64>> = if n_key <= TRACE_KEY_LIMIT {
        Some((0..1u64 << n_key).collect())
    } else {
        None
    };

    let mut trace = Vec::new();
    let mut iterations = 0usize;
    let budget = options.budget.unwrap_or(usize::MAX);
    let status = loop {
        if iterations >= budget {
            break AttackStatus::BudgetExhausted;
        }
        // The miter goes UNSAT exactly when no two surviving keys disagree
        // on any input.
        let Some(pattern) = next_dip(&miter, options, iterations)? else {
            break AttackStatus::KeyRecovered;
        };
        let observed = oracle
            .query(&pattern, 1)?
            .pop()
            .expect("hold-1 query yields one observation");
        miter.add_observation(&locked.netlist, &pattern, &observed)?;
        recovery.add_observation(locked, &pattern, &observed)?;

        let eliminated = match &mut candidates {
            Some(alive) => {
                let mut killed = Vec::new();
                alive.retain(|&k| {
                    let key = BitVector::from_uint(k, n_key);
                    let out = locked
                        .netlist
                        .eval_comb(&pattern, &key)
                        .expect("widths checked");
                    if out == observed {
                        true
                    } else {
                        killed.push(key);
                        false
                    }
                });
                killed
            }
            None => Vec::new(),
        };
        trace.push(TraceStep {
            pattern,
            hold: 1,
            eliminated,
        });
        iterations += 1;
    };

    let recovered_key = match status {
        AttackStatus::KeyRecovered => {
            let key = recovery.extract_key();
            debug_assert!(key.is_some(), "UNSAT miter implies a consistent key");
            key
        }
        _ => None,
    };
    if let Some(alive) = &candidates {
        if !alive.contains(&locked.correct_key.to_uint()) {
            return Err(AttackError::CorrectKeyEliminated(iterations));
        }
    }
    let survivors: Vec<BitVector> = candidates
        .as_ref()
        .map(|alive| {
            alive
                .iter()
                .take(16)
                .map(|&k| BitVector::from_uint(k, n_key))
                .collect()
        })
        .unwrap_or_default();

    Ok(AttackReport {
        scheme: locked.scheme,
        attack: AttackKind::Miter,
        n_key,
        n_c: locked.n_c,
        mode: None,
        hold: 1,
        seed: None,
        status,
        iterations,
        n_clk: oracle.n_clk() - n_clk_start,
        drain_cycles: 0,
        recovered_key,
        survivor_count: candidates.as_ref().map(|a| a.len()).unwrap_or(0),
        survivors,
        trace,
    })
}
