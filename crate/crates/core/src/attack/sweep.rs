//! Cycle-counting sweep attack (and its pattern-holding S-SAT variant).
//!
//! The attack enumerates the `2^n_key` patterns of the key-compared input
//! prefix — ascending in `Exhaustive` mode, as a seeded permutation in
//! `Random` mode — holding each at the oracle and at a bank of
//! candidate-keyed simulations for `hold` cycles, plus `n_c` drain cycles
//! of the final pattern to catch delayed flips. A candidate is eliminated
//! the first time its aligned output stream differs from the oracle's on
//! any observed cycle, including cycles that land during later attempts.
//!
//! The whole sequence is simulated for determinism; in `Random` mode the
//! reported `n_clk` is the stimulus prefix up to the cycle whose
//! observation left a single surviving candidate (pipeline fill is a
//! benchmark constant and is excluded from the metric throughout).

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::bank::{run_bank, Execution, Segment};
use super::{AttackError, AttackKind, AttackReport, AttackStatus, Oracle, TraceStep, MAX_BANK_KEY_BITS};
use crate::locking::LockedNetlist;
use crate::netlist::BitVector;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepMode {
    /// Seeded random permutation of the pattern universe with random fill
    /// of the non-compared inputs; stops once a single candidate survives.
    Random(u64),
    /// Ascending pattern order, zero fill, full sweep regardless of early
    /// convergence: the deterministic table-reproduction path.
    Exhaustive,
}

impl SweepMode {
    pub fn label(self) -> &'static str {
        match self {
            SweepMode::Random(_) => "random",
            SweepMode::Exhaustive => "exhaustive",
        }
    }

    pub fn seed(self) -> Option<u64> {
        match self {
            SweepMode::Random(s) => Some(s),
            SweepMode::Exhaustive => None,
        }
    }
}

fn report_skeleton(locked: &LockedNetlist, mode: SweepMode, hold: usize) -> AttackReport {
    AttackReport {
        scheme: locked.scheme,
        attack: AttackKind::Sweep,
        n_key: locked.n_key,
        n_c: locked.n_c,
        mode: Some(mode.label().to_string()),
        hold,
        seed: mode.seed(),
        status: AttackStatus::Failed,
        iterations: 0,
        n_clk: 0,
        drain_cycles: 0,
        recovered_key: None,
        survivor_count: 0,
        survivors: Vec::new(),
        trace: Vec::new(),
    }
}

/// Run the sweep attack. `budget` caps the number of attempted patterns
/// (default: the full `2^n_key` universe).
pub fn sweep_attack(
    locked: &LockedNetlist,
    oracle: &mut Oracle,
    hold: usize,
    mode: SweepMode,
    budget: Option<usize>,
    exec: Execution,
) -> Result<AttackReport, AttackError> {
    if hold == 0 {
        return Err(AttackError::BadHold);
    }
    let n_key = locked.n_key;
    if n_key > MAX_BANK_KEY_BITS {
        return Err(AttackError::KeySpaceTooLarge(n_key));
    }
    let mut report = report_skeleton(locked, mode, hold);
    if n_key == 0 {
        report.status = AttackStatus::KeyRecovered;
        report.recovered_key = Some(BitVector::zeros(0));
        report.survivor_count = 1;
        report.survivors.push(BitVector::zeros(0));
        return Ok(report);
    }

    let n_in = locked.netlist.primary_inputs().len();
    let universe = 1usize << n_key;
    let attempts_allowed = budget.unwrap_or(universe).min(universe);
    let truncated = attempts_allowed < universe;

    // Pattern sequence over the key-compared prefix; each prefix appears
    // once. Random mode fills the remaining inputs per attempt from the
    // seeded RNG, exhaustive mode holds them at zero.
    let mut prefixes: Vec<u64> = (0..universe as u64).collect();
    let mut rng = match mode {
        SweepMode::Random(seed) => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            prefixes.shuffle(&mut rng);
            Some(rng)
        }
        SweepMode::Exhaustive => None,
    };
    let patterns: Vec<BitVector> = prefixes[..attempts_allowed]
        .iter()
        .map(|&prefix| {
            let mut bits = Vec::with_capacity(n_in);
            for i in 0..n_key {
                bits.push((prefix >> i) & 1 == 1);
            }
            for _ in n_key..n_in {
                bits.push(rng.as_mut().map(|r| r.random()).unwrap_or(false));
            }
            BitVector::from_bits(bits)
        })
        .collect();

    let drain = locked.n_c;
    let mut segments: Vec<Segment> = patterns.iter().map(|p| (p.clone(), hold)).collect();
    if drain > 0 {
        let last = patterns.last().expect("n_key >= 1 yields attempts").clone();
        segments.push((last, drain));
    }
    let attempt_cycles = attempts_allowed * hold;
    let total_cycles = attempt_cycles + drain;

    let oracle_obs = oracle.apply_stream(&segments)?;
    debug_assert_eq!(oracle_obs.len(), total_cycles);
    let outcome = run_bank(
        &locked.netlist,
        locked.latency,
        n_key,
        &segments,
        &oracle_obs,
        exec,
    );

    let correct_lane = locked.correct_key.to_uint() as usize;
    if let Some(slot) = outcome.eliminated_at[correct_lane] {
        return Err(AttackError::CorrectKeyEliminated(slot as usize));
    }

    // Replay eliminations in observation order to find the cycle at which
    // a single candidate remained.
    let mut by_slot: Vec<(u32, usize)> = outcome
        .eliminated_at
        .iter()
        .enumerate()
        .filter_map(|(lane, e)| e.map(|slot| (slot, lane)))
        .collect();
    by_slot.sort_unstable();
    let mut survivors = universe;
    let mut singleton_slot: Option<usize> = None;
    for &(slot, _) in &by_slot {
        survivors -= 1;
        if survivors == 1 {
            singleton_slot = Some(slot as usize);
            break;
        }
    }

    // Consumed stimulus: everything in exhaustive mode; in random mode the
    // attempts (and drain cycles) up to the singleton observation.
    let (included_attempts, drain_consumed, n_clk) = match (mode, singleton_slot) {
        (SweepMode::Exhaustive, _) | (SweepMode::Random(_), None) => {
            (attempts_allowed, drain, total_cycles as u64)
        }
        (SweepMode::Random(_), Some(slot)) => {
            if slot < attempt_cycles {
                let attempt = slot / hold;
                (attempt + 1, 0, ((attempt + 1) * hold) as u64)
            } else {
                (attempts_allowed, slot + 1 - attempt_cycles, (slot + 1) as u64)
            }
        }
    };
    let included_cycles = included_attempts * hold
        + if included_attempts == attempts_allowed {
            drain_consumed
        } else {
            0
        };

    let mut trace: Vec<TraceStep> = patterns[..included_attempts]
        .iter()
        .map(|p| TraceStep {
            pattern: p.clone(),
            hold,
            eliminated: Vec::new(),
        })
        .collect();
    for &(slot, lane) in &by_slot {
        let slot = slot as usize;
        if slot >= included_cycles {
            continue;
        }
        let attempt = (slot / hold).min(included_attempts.saturating_sub(1));
        trace[attempt]
            .eliminated
            .push(BitVector::from_uint(lane as u64, n_key));
    }

    let surviving_now: Vec<usize> = match (mode, singleton_slot) {
        // Under early stop the survivor set is what the attacker knows at
        // the singleton observation; later eliminations are not consumed.
        (SweepMode::Random(_), Some(slot)) => outcome
            .eliminated_at
            .iter()
            .enumerate()
            .filter(|(_, e)| e.map(|s| s as usize > slot).unwrap_or(true))
            .map(|(l, _)| l)
            .collect(),
        _ => outcome.survivors().collect(),
    };

    report.iterations = included_attempts;
    report.n_clk = n_clk;
    report.drain_cycles = drain_consumed;
    report.survivor_count = surviving_now.len();
    report.survivors = surviving_now
        .iter()
        .take(16)
        .map(|&l| BitVector::from_uint(l as u64, n_key))
        .collect();
    report.trace = trace;
    report.status = if surviving_now.len() == 1 {
        report.recovered_key = Some(BitVector::from_uint(surviving_now[0] as u64, n_key));
        AttackStatus::KeyRecovered
    } else if truncated {
        AttackStatus::BudgetExhausted
    } else {
        AttackStatus::Failed
    };
    Ok(report)
}
