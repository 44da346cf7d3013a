//! Reference fixtures used by tests and the experiment harness.
//!
//! The locked reference function is a 3-input, 3-key-bit, single-output
//! netlist whose behavior under every (pattern, key) pair matches the
//! analysis truth table exactly: the host function is the majority of the
//! three inputs, and each wrong key corrupts the rows listed in the table.
//! Key inputs are declared most-significant first (`K3`, `K2`, `K1`) so a
//! displayed key string reads as the usual `K3K2K1` numeral; the correct
//! key is `001`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::locking::{LockedNetlist, Scheme};
use crate::netlist::{BitVector, GateKind, NetId, Netlist};
use crate::pipeline::{output_latency, path_balance, LatencyModel};

/// Correct output `S` per input row `ABC` (row index is the `ABC` numeral,
/// A most significant).
pub const TABLE1_S: [bool; 8] = [false, false, false, true, false, true, true, true];

/// Locked output per input row and key column. Column index `j` is the
/// `K3K2K1` numeral of the applied key; column 1 equals `TABLE1_S`.
pub const TABLE1_LOCKED: [[bool; 8]; 8] = [
    // k0     k1     k2    k3    k4     k5     k6    k7        ABC
    [false, false, true, true, true, true, true, true],      // 000
    [false, false, true, true, true, true, true, true],      // 001
    [false, false, true, true, true, true, true, true],      // 010
    [true, true, true, true, false, false, true, true],      // 011
    [true, false, false, true, true, true, true, true],      // 100
    [true, true, true, true, true, false, false, true],      // 101
    [false, true, true, false, true, true, true, true],      // 110
    [false, true, true, false, true, true, true, true],      // 111
];

/// Build the reference locked netlist realizing [`TABLE1_LOCKED`].
pub fn table1_fixture() -> LockedNetlist {
    let mut n = Netlist::new();
    let a = n.add_input("A");
    let b = n.add_input("B");
    let c = n.add_input("C");
    let k3 = n.add_key_input("K3");
    let k2 = n.add_key_input("K2");
    let k1 = n.add_key_input("K1");

    let inv = |n: &mut Netlist, x: NetId, name: &str| -> NetId {
        n.push_gate(GateKind::Not, vec![x], name.to_string())
    };
    let an = inv(&mut n, a, "An");
    let bn = inv(&mut n, b, "Bn");
    let cn = inv(&mut n, c, "Cn");
    let k3n = inv(&mut n, k3, "K3n");
    let k2n = inv(&mut n, k2, "K2n");
    let k1n = inv(&mut n, k1, "K1n");

    let ab = n.push_gate(GateKind::And, vec![a, b], "maj_ab");
    let ac = n.push_gate(GateKind::And, vec![a, c], "maj_ac");
    let bc = n.push_gate(GateKind::And, vec![b, c], "maj_bc");
    let maj = n.push_gate(GateKind::Or, vec![ab, ac, bc], "maj");

    // One minterm per corrupted (pattern, key) cell.
    let mut minterms = Vec::new();
    for abc in 0..8usize {
        for j in 0..8usize {
            if TABLE1_LOCKED[abc][j] == TABLE1_S[abc] {
                continue;
            }
            let pick = |bit: bool, pos: NetId, neg: NetId| if bit { pos } else { neg };
            let fanins = vec![
                pick((abc >> 2) & 1 == 1, a, an),
                pick((abc >> 1) & 1 == 1, b, bn),
                pick(abc & 1 == 1, c, cn),
                pick((j >> 2) & 1 == 1, k3, k3n),
                pick((j >> 1) & 1 == 1, k2, k2n),
                pick(j & 1 == 1, k1, k1n),
            ];
            let name = format!("flip_{abc}_{j}");
            minterms.push(n.push_gate(GateKind::And, fanins, name));
        }
    }
    let flip = n.push_gate(GateKind::Or, minterms, "flip");
    let out = n.push_gate(GateKind::Xor, vec![maj, flip], "S");
    n.mark_output(out);

    let model = LatencyModel;
    let balanced = path_balance(&n, &model).expect("fixture netlist is valid");
    let latency = output_latency(&balanced, &model).expect("fixture is balanced");
    LockedNetlist {
        netlist: balanced,
        scheme: Scheme::Ll,
        correct_key: BitVector::parse("001").expect("literal"),
        latency,
        n_key: 3,
        n_c: 0,
        seed: None,
        flip_output: Some(0),
        csar: None,
    }
}

/// Seeded random combinational host: a layered DAG over the basic gate
/// kinds, every output driven by a gate. Useful as a host circuit for
/// locking-property and cost-law tests.
pub fn random_host(seed: u64, n_inputs: usize, n_gates: usize, n_outputs: usize) -> Netlist {
    assert!(n_inputs >= 1 && n_gates >= 1 && n_outputs >= 1);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut n = Netlist::new();
    let mut nets: Vec<NetId> = (0..n_inputs).map(|i| n.add_input(format!("in{i}"))).collect();
    const KINDS: [GateKind; 8] = [
        GateKind::And,
        GateKind::Nand,
        GateKind::Or,
        GateKind::Nor,
        GateKind::Xor,
        GateKind::Xnor,
        GateKind::Not,
        GateKind::Buf,
    ];
    for g in 0..n_gates {
        let kind = KINDS[rng.random_range(0..KINDS.len())];
        let arity = match kind {
            GateKind::Not | GateKind::Buf => 1,
            GateKind::And | GateKind::Or => rng.random_range(2..=3),
            _ => 2,
        };
        let fanins = (0..arity)
            .map(|_| nets[rng.random_range(0..nets.len())])
            .collect();
        let id = n.push_gate(kind, fanins, format!("g{g}"));
        nets.push(id);
    }
    let gate_nets: Vec<NetId> = nets[n_inputs..].to_vec();
    for o in 0..n_outputs.min(gate_nets.len()) {
        let pick = gate_nets[gate_nets.len() - 1 - (o * 7919) % gate_nets.len()];
        n.mark_output(pick);
    }
    n
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn fixture_matches_truth_table_exhaustively() {
        let fixture = table1_fixture();
        for abc in 0..8u64 {
            let inputs = BitVector::from_bits(vec![
                (abc >> 2) & 1 == 1,
                (abc >> 1) & 1 == 1,
                abc & 1 == 1,
            ]);
            for j in 0..8u64 {
                let keys = BitVector::from_bits(vec![
                    (j >> 2) & 1 == 1,
                    (j >> 1) & 1 == 1,
                    j & 1 == 1,
                ]);
                let out = fixture.netlist.eval_comb(&inputs, &keys).unwrap();
                assert_eq!(
                    out.get(0),
                    TABLE1_LOCKED[abc as usize][j as usize],
                    "ABC={abc:03b} key={j:03b}"
                );
            }
        }
    }

    #[test]
    fn fixture_row_101_under_correct_key_is_one() {
        let fixture = table1_fixture();
        let out = fixture
            .netlist
            .eval_comb(
                &BitVector::parse("101").unwrap(),
                &fixture.correct_key,
            )
            .unwrap();
        assert!(out.get(0));
    }

    #[test]
    fn fixture_row_011_under_k4_is_corrupted_to_zero() {
        let fixture = table1_fixture();
        let out = fixture
            .netlist
            .eval_comb(
                &BitVector::parse("011").unwrap(),
                &BitVector::parse("100").unwrap(),
            )
            .unwrap();
        assert!(!out.get(0), "S=1 but k4 yields 0 on row 011");
    }

    #[test]
    fn random_host_is_valid_and_deterministic() {
        let a = random_host(5, 6, 20, 3);
        let b = random_host(5, 6, 20, 3);
        assert!(a.is_valid());
        assert_eq!(a, b);
        assert_ne!(a, random_host(6, 6, 20, 3));
    }
}
