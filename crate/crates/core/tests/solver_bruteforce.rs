//! Solver completeness against a bit-sliced brute-force oracle, plus
//! Tseitin/eval agreement on the benchmark fixtures.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use locklab::cnf::{Cnf, Lit};
use locklab::netlist::BitVector;
use locklab::parse_bench;
use locklab::solver::{solve, SatStatus};
use locklab::tseitin::{encode_tseitin, NetLit};

/// Enumerate all assignments 64 at a time: variables 0..6 come from fixed
/// bit patterns, higher variables from the block index.
pub fn brute_force_is_sat(num_vars: u32, clauses: &[Vec<Lit>]) -> bool {
    const PAT: [u64; 6] = [
        0xAAAA_AAAA_AAAA_AAAA,
        0xCCCC_CCCC_CCCC_CCCC,
        0xF0F0_F0F0_F0F0_F0F0,
        0xFF00_FF00_FF00_FF00,
        0xFFFF_0000_FFFF_0000,
        0xFFFF_FFFF_0000_0000,
    ];
    let in_word = (num_vars as usize).min(6);
    let word_mask = if num_vars >= 6 {
        !0u64
    } else {
        (1u64 << (1u64 << num_vars)) - 1
    };
    let blocks: u64 = 1u64 << (num_vars as u64).saturating_sub(6);
    for block in 0..blocks {
        let mut all = word_mask;
        for clause in clauses {
            let mut sat = 0u64;
            for lit in clause {
                let v = lit.var() - 1;
                let w = if (v as usize) < in_word {
                    PAT[v as usize]
                } else if (block >> (v - 6)) & 1 == 1 {
                    !0u64
                } else {
                    0u64
                };
                sat |= if lit.is_positive() { w } else { !w };
            }
            all &= sat;
            if all == 0 {
                break;
            }
        }
        if all != 0 {
            return true;
        }
    }
    false
}

fn random_3cnf(rng: &mut ChaCha8Rng, num_vars: u32) -> Cnf {
    let mut cnf = Cnf::new();
    cnf.reserve_vars(num_vars);
    // Near the satisfiability threshold so both outcomes appear.
    let n_clauses = ((num_vars as f64) * 4.3).round() as usize;
    for _ in 0..n_clauses {
        let mut lits = Vec::with_capacity(3);
        for _ in 0..3 {
            let var = rng.random_range(1..=num_vars);
            lits.push(Lit::with_sign(var, rng.random()));
        }
        cnf.add_clause(lits);
    }
    cnf
}

#[test]
fn solver_agrees_with_brute_force_on_random_3cnfs() {
    let mut rng = ChaCha8Rng::seed_from_u64(0xC0FFEE);
    let mut sat = 0;
    let mut unsat = 0;
    for round in 0..150 {
        let num_vars = 5 + (round % 16) as u32; // 5..=20
        let cnf = random_3cnf(&mut rng, num_vars);
        let expect = brute_force_is_sat(cnf.num_vars(), cnf.clauses());
        let got = solve(&cnf, &[]);
        assert_eq!(
            got.status == SatStatus::Sat,
            expect,
            "round {round}, {num_vars} vars"
        );
        if expect {
            sat += 1;
        } else {
            unsat += 1;
        }
    }
    assert!(sat > 10 && unsat > 10, "mix of outcomes: {sat} SAT / {unsat} UNSAT");
}

#[test]
fn solver_handles_mixed_clause_lengths() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for round in 0..80 {
        let num_vars = 3 + (round % 10) as u32;
        let mut cnf = Cnf::new();
        cnf.reserve_vars(num_vars);
        for _ in 0..rng.random_range(1..30usize) {
            let len = rng.random_range(1..=4usize);
            let lits: Vec<Lit> = (0..len)
                .map(|_| Lit::with_sign(rng.random_range(1..=num_vars), rng.random()))
                .collect();
            cnf.add_clause(lits);
        }
        let expect = brute_force_is_sat(cnf.num_vars(), cnf.clauses());
        assert_eq!(solve(&cnf, &[]).status == SatStatus::Sat, expect, "round {round}");
    }
}

fn fixture(name: &str) -> locklab::Netlist {
    let path = format!("{}/../../fixtures/{name}.bench", env!("CARGO_MANIFEST_DIR"));
    parse_bench(&std::fs::read_to_string(path).unwrap()).unwrap()
}

#[test]
fn tseitin_assignments_agree_with_eval_on_fixtures() {
    let mut rng = ChaCha8Rng::seed_from_u64(42);
    for name in ["c17", "74283", "74182", "74181", "c499", "c880"] {
        let n = fixture(name);
        let enc = encode_tseitin(&n).unwrap();
        let width = n.primary_inputs().len();
        for _ in 0..200 {
            let inputs = BitVector::from_bits((0..width).map(|_| rng.random()).collect());
            let keys = BitVector::zeros(0);
            let expect = n.eval_comb(&inputs, &keys).unwrap();
            let mut assumptions: Vec<Lit> = enc
                .input_vars
                .iter()
                .enumerate()
                .map(|(i, &v)| Lit::with_sign(v, inputs.get(i)))
                .collect();
            for (i, out) in enc.output_lits.iter().enumerate() {
                match out {
                    NetLit::Const(b) => assert_eq!(*b, expect.get(i), "{name}"),
                    NetLit::Lit(l) => {
                        assumptions.push(if expect.get(i) { *l } else { !*l })
                    }
                }
            }
            assert_eq!(
                solve(&enc.cnf, &assumptions).status,
                SatStatus::Sat,
                "{name}: matching outputs must be satisfiable"
            );
            // Flipping one output bit makes the assignment inconsistent.
            if let Some(NetLit::Lit(l)) = enc.output_lits.first() {
                let flipped = if expect.get(0) { !*l } else { *l };
                let base = assumptions.len() - enc.output_lits.iter().filter(|o| matches!(o, NetLit::Lit(_))).count();
                let mut bad = assumptions[..base].to_vec();
                bad.push(flipped);
                for (i, out) in enc.output_lits.iter().enumerate().skip(1) {
                    if let NetLit::Lit(l) = out {
                        bad.push(if expect.get(i) { *l } else { !*l });
                    }
                }
                assert_eq!(
                    solve(&enc.cnf, &bad).status,
                    SatStatus::Unsat,
                    "{name}: contradicting an output must be unsatisfiable"
                );
            }
        }
    }
}
