//! Sanity checks for the vendored benchmark fixtures: port counts,
//! functional validation of the re-derived 74-series parts, and the pinned
//! reference netlist.

use locklab::fixtures::table1_fixture;
use locklab::locking::{LockedNetlist, SidecarRecord};
use locklab::netlist::{BitVector, GateKind, Netlist};
use locklab::pipeline::LatencyModel;
use locklab::{parse_bench, write_bench};

fn fixture_path(name: &str) -> String {
    format!("{}/../../fixtures/{name}", env!("CARGO_MANIFEST_DIR"))
}

fn fixture(name: &str) -> Netlist {
    parse_bench(&std::fs::read_to_string(fixture_path(name)).unwrap()).unwrap()
}

#[test]
fn all_fixtures_parse_validate_and_round_trip() {
    for (name, inputs, outputs) in [
        ("c17.bench", 5, 2),
        ("74283.bench", 9, 5),
        ("74182.bench", 9, 5),
        ("74181.bench", 14, 8),
        ("c499.bench", 41, 32),
        ("c880.bench", 60, 26),
        ("table1.bench", 3, 1),
    ] {
        let n = fixture(name);
        assert!(n.is_valid(), "{name}");
        assert_eq!(n.primary_inputs().len(), inputs, "{name}");
        assert_eq!(n.primary_outputs().len(), outputs, "{name}");
        let back = parse_bench(&write_bench(&n)).unwrap();
        assert_eq!(back, n, "{name} round trip");
    }
}

#[test]
fn c17_has_six_nands() {
    let n = fixture("c17.bench");
    assert_eq!(
        n.gates().iter().filter(|g| g.kind == GateKind::Nand).count(),
        6
    );
    let report = n.area_stats(&locklab::JjCostModel::default()).unwrap();
    assert_eq!(report.count(GateKind::Nand), 6);
    assert_eq!(report.total, 6);
}

#[test]
fn adder_74283_adds_exhaustively() {
    let n = fixture("74283.bench");
    // Inputs are declared A1..A4, B1..B4, C0.
    for a in 0..16u64 {
        for b in 0..16u64 {
            for cin in 0..2u64 {
                let inputs = BitVector::from_uint(a | (b << 4) | (cin << 8), 9);
                let out = n.eval_comb(&inputs, &BitVector::zeros(0)).unwrap();
                // Outputs are S1..S4, C4.
                assert_eq!(out.to_uint(), a + b + cin, "{a}+{b}+{cin}");
            }
        }
    }
}

#[test]
fn carry_generator_74182_matches_equations() {
    let n = fixture("74182.bench");
    // Declared GB0,PB0,..,GB3,PB3,CN; outputs CNX,CNY,CNZ,GBOUT,PBOUT.
    for v in 0..512u64 {
        let inputs = BitVector::from_uint(v, 9);
        let gb = |i: u64| (v >> (2 * i)) & 1;
        let pb = |i: u64| (v >> (2 * i + 1)) & 1;
        let g = |i: u64| 1 - gb(i);
        let p = |i: u64| 1 - pb(i);
        let cn = (v >> 8) & 1;
        let cnx = g(0) | (p(0) & cn);
        let cny = g(1) | (p(1) & g(0)) | (p(1) & p(0) & cn);
        let cnz = g(2) | (p(2) & g(1)) | (p(2) & p(1) & g(0)) | (p(2) & p(1) & p(0) & cn);
        let gout = g(3) | (p(3) & g(2)) | (p(3) & p(2) & g(1)) | (p(3) & p(2) & p(1) & g(0));
        let pout = p(3) & p(2) & p(1) & p(0);
        let out = n.eval_comb(&inputs, &BitVector::zeros(0)).unwrap();
        let expect = cnx | (cny << 1) | (cnz << 2) | ((1 - gout) << 3) | ((1 - pout) << 4);
        assert_eq!(out.to_uint(), expect, "v={v:09b}");
    }
}

#[test]
fn alu_74181_add_xor_and_modes() {
    let n = fixture("74181.bench");
    // Declared A0..3, B0..3, S0..3, M, CN; outputs F0..3, AEQB, PB, GB, CN4.
    let eval = |a: u64, b: u64, s: u64, m: u64, cn: u64| -> BitVector {
        let v = a | (b << 4) | (s << 8) | (m << 12) | (cn << 13);
        n.eval_comb(&BitVector::from_uint(v, 14), &BitVector::zeros(0))
            .unwrap()
    };
    for a in 0..16u64 {
        for b in 0..16u64 {
            // S=1001, M=0: F = A plus B plus CN, CN4 is the carry out.
            for cn in 0..2u64 {
                let out = eval(a, b, 0b1001, 0, cn);
                let f = out.to_uint() & 0xF;
                let c4 = (out.to_uint() >> 7) & 1;
                let sum = a + b + cn;
                assert_eq!(f, sum & 0xF, "add {a}+{b}+{cn}");
                assert_eq!(c4, sum >> 4, "carry {a}+{b}+{cn}");
            }
            // S=0110, M=1: F = A xor B; AEQB = all F bits high.
            let out = eval(a, b, 0b0110, 1, 0);
            assert_eq!(out.to_uint() & 0xF, a ^ b, "xor {a}^{b}");
            let aeqb = (out.to_uint() >> 4) & 1;
            assert_eq!(aeqb == 1, (a ^ b) == 0xF, "aeqb {a} {b}");
            // S=1011, M=1: F = A and B.
            let out = eval(a, b, 0b1011, 1, 0);
            assert_eq!(out.to_uint() & 0xF, a & b, "and {a}&{b}");
        }
    }
}

#[test]
fn table1_fixture_file_is_pinned_to_the_builder() {
    let built = table1_fixture();
    let file = fixture("table1.bench");
    assert_eq!(file, built.netlist);
    let sidecar: SidecarRecord =
        serde_json::from_str(&std::fs::read_to_string(fixture_path("table1.json")).unwrap())
            .unwrap();
    let from_file = LockedNetlist::from_parts(file, &sidecar, &LatencyModel).unwrap();
    assert_eq!(from_file.correct_key, built.correct_key);
    assert_eq!(from_file.latency, built.latency);
}
