//! Complete DPLL decision procedure.
//!
//! Deterministic by construction: unit propagation over two watched
//! literals, branching on the lowest-index unassigned variable (false
//! first), chronological backtracking. No clause learning — the instances
//! this crate produces are small miters where reproducibility matters more
//! than raw speed. The formula is never mutated, so repeated calls under
//! the same assumptions return identical results.

use crate::cnf::{Cnf, Lit};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SatStatus {
    Sat,
    Unsat,
}

/// Search statistics for one `solve` call.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SolverStats {
    pub decisions: u64,
    pub propagations: u64,
    pub conflicts: u64,
}

#[derive(Debug, Clone)]
pub struct SatResult {
    pub status: SatStatus,
    /// Assignment indexed by variable (entry 0 unused); present iff SAT.
    /// The model is re-checked against every clause before being returned.
    pub model: Option<Vec<bool>>,
    pub stats: SolverStats,
}

impl SatResult {
    pub fn is_sat(&self) -> bool {
        self.status == SatStatus::Sat
    }

    pub fn value(&self, var: u32) -> bool {
        self.model.as_ref().expect("SAT result has a model")[var as usize]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Value {
    Unassigned,
    True,
    False,
}

impl Value {
    fn from_bool(b: bool) -> Value {
        if b {
            Value::True
        } else {
            Value::False
        }
    }
}

struct Solver<'a> {
    clauses: &'a [Vec<Lit>],
    values: Vec<Value>,
    /// clause indices watching each literal; indexed by watch_slot(lit).
    watches: Vec<Vec<u32>>,
    /// first two positions of each clause hold its watched literals.
    watched: Vec<[Lit; 2]>,
    trail: Vec<Lit>,
    trail_marks: Vec<usize>,
    stats: SolverStats,
}

fn watch_slot(lit: Lit, _num_vars: u32) -> usize {
    let base = (lit.var() - 1) as usize * 2;
    if lit.is_positive() {
        base
    } else {
        base + 1
    }
}

impl<'a> Solver<'a> {
    fn new(cnf: &'a Cnf) -> Result<Self, ()> {
        let num_vars = cnf.num_vars();
        let mut solver = Solver {
            clauses: cnf.clauses(),
            values: vec![Value::Unassigned; num_vars as usize + 1],
            watches: vec![Vec::new(); (num_vars as usize) * 2],
            watched: Vec::with_capacity(cnf.num_clauses()),
            trail: Vec::new(),
            trail_marks: Vec::new(),
            stats: SolverStats::default(),
        };
        // Set up watches; empty clauses are immediate conflicts, unit
        // clauses go straight onto the trail.
        let mut units = Vec::new();
        for (ci, clause) in cnf.clauses().iter().enumerate() {
            match clause.len() {
                0 => return Err(()),
                1 => {
                    units.push(clause[0]);
                    solver.watched.push([clause[0], clause[0]]);
                }
                _ => {
                    let w = [clause[0], clause[1]];
                    solver.watched.push(w);
                    solver.watches[watch_slot(w[0], num_vars)].push(ci as u32);
                    solver.watches[watch_slot(w[1], num_vars)].push(ci as u32);
                }
            }
        }
        for u in units {
            if !solver.enqueue(u) {
                return Err(());
            }
        }
        Ok(solver)
    }

    fn value_of(&self, lit: Lit) -> Value {
        match self.values[lit.var() as usize] {
            Value::Unassigned => Value::Unassigned,
            Value::True => Value::from_bool(lit.is_positive()),
            Value::False => Value::from_bool(!lit.is_positive()),
        }
    }

    fn enqueue(&mut self, lit: Lit) -> bool {
        match self.value_of(lit) {
            Value::True => true,
            Value::False => false,
            Value::Unassigned => {
                self.values[lit.var() as usize] = Value::from_bool(lit.is_positive());
                self.trail.push(lit);
                true
            }
        }
    }

    /// Propagate all consequences of the trail suffix starting at `from`.
    /// Returns false on conflict.
    fn propagate(&mut self, mut from: usize) -> bool {
        let num_vars = (self.values.len() - 1) as u32;
        while from < self.trail.len() {
            let lit = self.trail[from];
            from += 1;
            self.stats.propagations += 1;
            let falsified = !lit;
            let slot = watch_slot(falsified, num_vars);
            let mut i = 0;
            'clauses: while i < self.watches[slot].len() {
                let ci = self.watches[slot][i] as usize;
                let mut w = self.watched[ci];
                // Normalize so w[0] is the falsified watch.
                if w[0] != falsified {
                    w.swap(0, 1);
                }
                debug_assert_eq!(w[0], falsified);
                if self.value_of(w[1]) == Value::True {
                    i += 1;
                    continue;
                }
                // Look for a replacement watch.
                for &cand in &self.clauses[ci] {
                    if cand != w[0] && cand != w[1] && self.value_of(cand) != Value::False {
                        self.watched[ci] = [cand, w[1]];
                        self.watches[slot].swap_remove(i);
                        self.watches[watch_slot(cand, num_vars)].push(ci as u32);
                        continue 'clauses;
                    }
                }
                // No replacement: clause is unit or conflicting.
                self.watched[ci] = w;
                if !self.enqueue(w[1]) {
                    self.stats.conflicts += 1;
                    return false;
                }
                i += 1;
            }
        }
        true
    }

    fn push_level(&mut self) {
        self.trail_marks.push(self.trail.len());
    }

    fn pop_level(&mut self) {
        let mark = self.trail_marks.pop().expect("level to pop");
        for lit in self.trail.drain(mark..) {
            self.values[lit.var() as usize] = Value::Unassigned;
        }
    }

    fn next_unassigned(&self) -> Option<u32> {
        (1..self.values.len()).find(|&v| self.values[v] == Value::Unassigned).map(|v| v as u32)
    }

    /// Decision loop. Expects the current trail to be fully propagated.
    fn search(&mut self) -> bool {
        // Iterative DPLL: each frame remembers the variable it branched on
        // and whether the second phase was already tried.
        let mut frames: Vec<(u32, bool)> = Vec::new();
        loop {
            match self.next_unassigned() {
                None => return true,
                Some(var) => {
                    self.stats.decisions += 1;
                    self.push_level();
                    let mark = self.trail.len();
                    let ok = self.enqueue(Lit::negative(var)) && self.propagate(mark);
                    if ok {
                        frames.push((var, false));
                        continue;
                    }
                    // First phase failed immediately; flip in place.
                    let mut flip = Some(var);
                    while let Some(v) = flip {
                        self.pop_level();
                        self.push_level();
                        let mark = self.trail.len();
                        let ok = self.enqueue(Lit::positive(v)) && self.propagate(mark);
                        if ok {
                            frames.push((v, true));
                            flip = None;
                        } else {
                            // Both phases of v fail: backtrack to the most
                            // recent frame still on its first phase.
                            self.pop_level();
                            loop {
                                match frames.pop() {
                                    None => return false,
                                    Some((_, true)) => self.pop_level(),
                                    Some((u, false)) => {
                                        flip = Some(u);
                                        break;
                                    }
                                }
                            }
                        }
                    }
                }
            }
        }
    }
}

/// Decide `cnf` under the given assumption literals.
///
/// Assumptions are enqueued before search; a conflict among them yields
/// UNSAT. SAT models assign every variable and satisfy every clause
/// (asserted before returning). The base formula is never mutated.
pub fn solve(cnf: &Cnf, assumptions: &[Lit]) -> SatResult {
    let mut solver = match Solver::new(cnf) {
        Ok(s) => s,
        Err(()) => {
            return SatResult {
                status: SatStatus::Unsat,
                model: None,
                stats: SolverStats::default(),
            }
        }
    };
    let mut ok = solver.propagate(0);
    if ok {
        for &a in assumptions {
            let mark = solver.trail.len();
            if !solver.enqueue(a) || !solver.propagate(mark) {
                ok = false;
                break;
            }
        }
    }
    let sat = ok && solver.search();
    let stats = solver.stats;
    if sat {
        let model: Vec<bool> = solver
            .values
            .iter()
            .map(|v| matches!(v, Value::True))
            .collect();
        assert!(
            cnf.is_satisfied_by(&model),
            "solver returned a model violating some clause"
        );
        assert!(
            assumptions
                .iter()
                .all(|a| model[a.var() as usize] == a.is_positive()),
            "solver returned a model violating an assumption"
        );
        SatResult {
            status: SatStatus::Sat,
            model: Some(model),
            stats,
        }
    } else {
        SatResult {
            status: SatStatus::Unsat,
            model: None,
            stats,
        }
    }
}
