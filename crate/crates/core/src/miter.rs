//! Miter construction for the oracle-guided SAT attack.
//!
//! Two Tseitin copies of the locked circuit share the primary-input
//! variables but carry independent key variables, and at least one output
//! pair is asserted to differ. A satisfying assignment therefore yields a
//! distinguishing input pattern together with two key candidates it
//! separates. Observed oracle behavior is appended as constant-input copies
//! pinning both key groups to reproduce the observation.

use crate::cnf::{Cnf, Lit};
use crate::locking::LockedNetlist;
use crate::netlist::{BitVector, Netlist, NetlistError};
use crate::tseitin::{encode_into, NetLit};

#[derive(Debug, Clone)]
pub struct Miter {
    pub cnf: Cnf,
    pub input_vars: Vec<u32>,
    pub key_a_vars: Vec<u32>,
    pub key_b_vars: Vec<u32>,
}

impl Miter {
    /// Extract the shared input pattern from a SAT model.
    pub fn pattern_of_model(&self, model: &[bool]) -> BitVector {
        BitVector::from_bits(
            self.input_vars
                .iter()
                .map(|&v| model[v as usize])
                .collect(),
        )
    }

    /// Assumption literals pinning the shared inputs to `pattern`.
    pub fn pattern_assumptions(&self, pattern: &BitVector) -> Vec<Lit> {
        self.input_vars
            .iter()
            .enumerate()
            .map(|(i, &v)| Lit::with_sign(v, pattern.get(i)))
            .collect()
    }

    /// Append one circuit copy with inputs pinned to `pattern`, keys wired
    /// to `key_vars`, and outputs pinned to `observed`.
    fn add_pinned_copy(
        &mut self,
        netlist: &Netlist,
        key_vars: &[u32],
        pattern: &BitVector,
        observed: &BitVector,
    ) -> Result<(), NetlistError> {
        let input_lits: Vec<NetLit> = pattern.iter().map(NetLit::Const).collect();
        let key_lits: Vec<NetLit> = key_vars
            .iter()
            .map(|&v| NetLit::Lit(Lit::positive(v)))
            .collect();
        let nets = encode_into(&mut self.cnf, netlist, &input_lits, &key_lits)?;
        for (i, &o) in netlist.primary_outputs().iter().enumerate() {
            let want = observed.get(i);
            match nets[o.index()] {
                NetLit::Const(b) => {
                    if b != want {
                        // The observation contradicts the circuit: the key
                        // space under these constraints is empty.
                        self.cnf.add_clause(Vec::new());
                    }
                }
                NetLit::Lit(l) => self.cnf.add_unit(if want { l } else { !l }),
            }
        }
        Ok(())
    }

    /// Constrain both key copies to reproduce `observed` at `pattern`.
    pub fn add_observation(
        &mut self,
        netlist: &Netlist,
        pattern: &BitVector,
        observed: &BitVector,
    ) -> Result<(), NetlistError> {
        self.add_pinned_copy(netlist, &self.key_a_vars.clone(), pattern, observed)?;
        self.add_pinned_copy(netlist, &self.key_b_vars.clone(), pattern, observed)
    }
}

/// Build the two-copy miter over the locked netlist's combinational
/// abstraction.
pub fn build_miter(locked: &LockedNetlist) -> Result<Miter, NetlistError> {
    let n = &locked.netlist;
    n.require_valid()?;
    let mut cnf = Cnf::new();
    let input_vars: Vec<u32> = n.primary_inputs().iter().map(|_| cnf.fresh_var()).collect();
    let key_a_vars: Vec<u32> = n.key_inputs().iter().map(|_| cnf.fresh_var()).collect();
    let key_b_vars: Vec<u32> = n.key_inputs().iter().map(|_| cnf.fresh_var()).collect();
    let input_lits: Vec<NetLit> = input_vars
        .iter()
        .map(|&v| NetLit::Lit(Lit::positive(v)))
        .collect();
    let to_lits = |vars: &[u32]| -> Vec<NetLit> {
        vars.iter().map(|&v| NetLit::Lit(Lit::positive(v))).collect()
    };
    let nets_a = encode_into(&mut cnf, n, &input_lits, &to_lits(&key_a_vars))?;
    let nets_b = encode_into(&mut cnf, n, &input_lits, &to_lits(&key_b_vars))?;

    // Difference disjunction over the output pairs.
    let mut diff_lits = Vec::new();
    let mut constant_diff = false;
    for &o in n.primary_outputs() {
        match (nets_a[o.index()], nets_b[o.index()]) {
            (NetLit::Const(a), NetLit::Const(b)) => constant_diff |= a != b,
            (NetLit::Const(c), NetLit::Lit(l)) | (NetLit::Lit(l), NetLit::Const(c)) => {
                // Differs iff the literal disagrees with the constant.
                diff_lits.push(if c { !l } else { l });
            }
            (NetLit::Lit(a), NetLit::Lit(b)) => {
                let d = Lit::positive(cnf.fresh_var());
                cnf.add_clause(vec![!d, a, b]);
                cnf.add_clause(vec![!d, !a, !b]);
                cnf.add_clause(vec![d, !a, b]);
                cnf.add_clause(vec![d, a, !b]);
                diff_lits.push(d);
            }
        }
    }
    if !constant_diff {
        // Force at least one differing output; no literals at all means the
        // copies are constant-equal, i.e. the miter is UNSAT.
        cnf.add_clause(diff_lits);
    }

    Ok(Miter {
        cnf,
        input_vars,
        key_a_vars,
        key_b_vars,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::bench_io::parse_bench;
    use crate::locking::{lock_ll, LockedNetlist};
    use crate::pipeline::LatencyModel;
    use crate::solver::{solve, SatStatus};

    const C17: &str = "INPUT(1)\nINPUT(2)\nINPUT(3)\nINPUT(6)\nINPUT(7)\n\
                       OUTPUT(22)\nOUTPUT(23)\n\
                       10 = NAND(1, 3)\n11 = NAND(3, 6)\n16 = NAND(2, 11)\n\
                       19 = NAND(11, 7)\n22 = NAND(10, 16)\n23 = NAND(16, 19)";

    #[test]
    fn miter_of_unlocked_circuit_is_unsat() {
        let n = parse_bench(C17).unwrap();
        let unlocked = LockedNetlist::unlocked(n, &LatencyModel).unwrap();
        let miter = build_miter(&unlocked).unwrap();
        assert_eq!(solve(&miter.cnf, &[]).status, SatStatus::Unsat);
    }

    #[test]
    fn miter_of_locked_circuit_is_sat_and_forced_keys_unsat() {
        let n = parse_bench(C17).unwrap();
        let locked = lock_ll(&n, 3, 11).unwrap();
        let miter = build_miter(&locked).unwrap();
        let r = solve(&miter.cnf, &[]);
        assert_eq!(r.status, SatStatus::Sat);

        // Forcing both key groups to the correct key removes every
        // difference.
        let mut assumptions = Vec::new();
        for (i, &v) in miter.key_a_vars.iter().enumerate() {
            assumptions.push(Lit::with_sign(v, locked.correct_key.get(i)));
        }
        for (i, &v) in miter.key_b_vars.iter().enumerate() {
            assumptions.push(Lit::with_sign(v, locked.correct_key.get(i)));
        }
        assert_eq!(solve(&miter.cnf, &assumptions).status, SatStatus::Unsat);
    }
}
