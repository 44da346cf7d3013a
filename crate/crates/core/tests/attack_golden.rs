//! Golden attack behaviors: the reference-table elimination trace, sweep
//! cycle counts per scheme, and miter-attack key recovery.

use locklab::attack::bank::Execution;
use locklab::attack::{
    miter_sat_attack, sweep_attack, AttackStatus, MiterAttackOptions, Oracle, SweepMode,
};
use locklab::fixtures::table1_fixture;
use locklab::locking::{lock_csar, lock_ll, lock_rsat, lock_sarlock, LockedNetlist};
use locklab::netlist::{BitVector, Netlist};
use locklab::pipeline::LatencyModel;
use locklab::{parse_bench, AttackReport};

fn fixture_netlist(name: &str) -> Netlist {
    let path = format!("{}/../../fixtures/{name}.bench", env!("CARGO_MANIFEST_DIR"));
    parse_bench(&std::fs::read_to_string(path).expect("fixture file")).expect("fixture parses")
}

fn bits(s: &str) -> BitVector {
    BitVector::parse(s).unwrap()
}

fn check_recount(report: &AttackReport) {
    assert_eq!(report.recount_n_clk(), report.n_clk, "trace recount mismatch");
}

fn key_set(keys: &[BitVector]) -> std::collections::BTreeSet<String> {
    keys.iter().map(|k| k.to_string()).collect()
}

#[test]
fn scripted_miter_trace_on_reference_fixture() {
    let locked = table1_fixture();
    let mut oracle = Oracle::new(&locked).unwrap();
    let options = MiterAttackOptions {
        budget: None,
        dip_schedule: Some(vec![bits("101"), bits("111"), bits("000")]),
    };
    let report = miter_sat_attack(&locked, &mut oracle, &options).unwrap();

    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert_eq!(report.iterations, 3);
    assert_eq!(report.n_clk, 3);
    assert_eq!(report.recovered_key.as_ref().unwrap().to_string(), "001");

    assert_eq!(report.trace[0].pattern.to_string(), "101");
    assert_eq!(key_set(&report.trace[0].eliminated), key_set(&[bits("101"), bits("110")]));
    assert_eq!(report.trace[1].pattern.to_string(), "111");
    assert_eq!(key_set(&report.trace[1].eliminated), key_set(&[bits("000"), bits("011")]));
    assert_eq!(report.trace[2].pattern.to_string(), "000");
    assert_eq!(
        key_set(&report.trace[2].eliminated),
        key_set(&[bits("010"), bits("100"), bits("111")])
    );
}

#[test]
fn miter_attack_on_unlocked_circuit_finishes_without_queries() {
    let host = fixture_netlist("c17");
    let unlocked = LockedNetlist::unlocked(host, &LatencyModel).unwrap();
    let mut oracle = Oracle::new(&unlocked).unwrap();
    let report = miter_sat_attack(&unlocked, &mut oracle, &MiterAttackOptions::default()).unwrap();
    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert_eq!(report.iterations, 0);
    assert_eq!(report.n_clk, 0);
}

#[test]
fn miter_attack_recovers_functionally_correct_key_on_ll_c17() {
    let host = fixture_netlist("c17");
    let locked = lock_ll(&host, 3, 7).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = miter_sat_attack(&locked, &mut oracle, &MiterAttackOptions::default()).unwrap();
    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert!(report.iterations <= 8, "iterations = {}", report.iterations);
    let recovered = report.recovered_key.unwrap();
    for v in 0..32u64 {
        let inputs = BitVector::from_uint(v, 5);
        let want = host.eval_comb(&inputs, &BitVector::zeros(0)).unwrap();
        let got = locked.netlist.eval_comb(&inputs, &recovered).unwrap();
        assert_eq!(got, want, "input {v:05b}");
    }
}

#[test]
fn oracle_query_aligns_observations_and_counts_cycles() {
    let locked = table1_fixture();
    let mut oracle = Oracle::new(&locked).unwrap();
    let obs = oracle.query(&bits("101"), 1).unwrap();
    assert_eq!(obs.len(), 1);
    assert!(obs[0].get(0), "row 101 under the correct key reads 1");
    assert_eq!(oracle.n_clk(), 1);

    let obs2 = oracle.query(&bits("101"), 2).unwrap();
    assert_eq!(oracle.n_clk(), 3, "hold 2 adds exactly 2 cycles");
    assert_eq!(obs2, vec![obs[0].clone(), obs[0].clone()]);

    let obs3 = oracle.query(&bits("011"), 1).unwrap();
    assert!(obs3[0].get(0), "row 011 reads 1");
}

#[test]
fn sarlock_exhaustive_costs_exactly_two_to_the_n() {
    let host = fixture_netlist("c17");
    let locked = lock_sarlock(&host, 3, 0).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = sweep_attack(
        &locked,
        &mut oracle,
        1,
        SweepMode::Exhaustive,
        None,
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert_eq!(report.n_clk, 8);
    assert_eq!(report.iterations, 8);
    assert_eq!(
        report.recovered_key.as_ref().unwrap(),
        &locked.correct_key
    );
    check_recount(&report);
}

#[test]
fn sarlock_random_rounds_finish_at_position_seven_or_eight() {
    let host = fixture_netlist("c17");
    let locked = lock_sarlock(&host, 3, 0).unwrap();
    let mut seen = Vec::new();
    for seed in 1..=10u64 {
        let mut oracle = Oracle::new(&locked).unwrap();
        let report = sweep_attack(
            &locked,
            &mut oracle,
            1,
            SweepMode::Random(seed),
            None,
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(report.status, AttackStatus::KeyRecovered, "seed {seed}");
        assert!(
            report.n_clk == 7 || report.n_clk == 8,
            "seed {seed}: n_clk = {}",
            report.n_clk
        );
        check_recount(&report);
        seen.push(report.n_clk);
    }
    let mean = seen.iter().sum::<u64>() as f64 / seen.len() as f64;
    assert!(mean >= 7.5, "rounds {seen:?} mean {mean}");
}

#[test]
fn rsat_exhaustive_costs_exactly_two_to_the_n() {
    let host = fixture_netlist("c17");
    let locked = lock_rsat(&host, 3, &bits("101"), 0).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = sweep_attack(
        &locked,
        &mut oracle,
        1,
        SweepMode::Exhaustive,
        None,
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert_eq!(report.n_clk, 8);
    assert_eq!(report.recovered_key.as_ref().unwrap(), &locked.correct_key);
}

#[test]
fn csar_immune_to_single_cycle_hold_in_all_rounds() {
    let host = fixture_netlist("c17");
    let locked = lock_csar(&host, 3, &bits("001"), 1, 0).unwrap();
    for seed in 1..=10u64 {
        let mut oracle = Oracle::new(&locked).unwrap();
        let report = sweep_attack(
            &locked,
            &mut oracle,
            1,
            SweepMode::Random(seed),
            None,
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(report.status, AttackStatus::Failed, "seed {seed}");
        assert_eq!(report.survivor_count, 8, "seed {seed}: no key may be pruned");
        assert!(
            report.trace.iter().all(|s| s.eliminated.is_empty()),
            "seed {seed}: zero eliminations expected"
        );
        check_recount(&report);
    }
}

#[test]
fn csar_sssat_hold_two_costs_seventeen() {
    let host = fixture_netlist("c17");
    let locked = lock_csar(&host, 3, &bits("001"), 1, 0).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = sweep_attack(
        &locked,
        &mut oracle,
        2,
        SweepMode::Exhaustive,
        None,
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(report.status, AttackStatus::KeyRecovered);
    assert_eq!(report.n_clk, 17);
    assert_eq!(report.drain_cycles, 1);
    assert_eq!(report.recovered_key.as_ref().unwrap(), &locked.correct_key);
    check_recount(&report);
}

#[test]
fn csar_cost_steps_linearly_in_camouflaged_dff_count() {
    let host = fixture_netlist("c17");
    let mut costs = Vec::new();
    for n_c in 1..=5usize {
        let locked = lock_csar(&host, 3, &bits("011"), n_c, 0).unwrap();
        let mut oracle = Oracle::new(&locked).unwrap();
        let report = sweep_attack(
            &locked,
            &mut oracle,
            n_c + 1,
            SweepMode::Exhaustive,
            None,
            Execution::Parallel,
        )
        .unwrap();
        assert_eq!(report.status, AttackStatus::KeyRecovered, "n_c {n_c}");
        check_recount(&report);
        costs.push(report.n_clk);
    }
    assert_eq!(costs, vec![17, 26, 35, 44, 53]);
}

#[test]
fn sweep_budget_exhaustion_reports_partial_run() {
    let host = fixture_netlist("c17");
    let locked = lock_sarlock(&host, 3, 0).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = sweep_attack(
        &locked,
        &mut oracle,
        1,
        SweepMode::Exhaustive,
        Some(2),
        Execution::Parallel,
    )
    .unwrap();
    assert_eq!(report.status, AttackStatus::BudgetExhausted);
    assert_eq!(report.iterations, 2);
    assert!(report.survivor_count > 1);
}

#[test]
fn sweep_report_round_trips_through_json() {
    let host = fixture_netlist("c17");
    let locked = lock_sarlock(&host, 3, 1).unwrap();
    let mut oracle = Oracle::new(&locked).unwrap();
    let report = sweep_attack(
        &locked,
        &mut oracle,
        1,
        SweepMode::Random(3),
        None,
        Execution::Sequential,
    )
    .unwrap();
    let json = report.to_json();
    let back = AttackReport::from_json(&json).unwrap();
    assert_eq!(back.n_clk, report.n_clk);
    assert_eq!(back.status, report.status);
    assert_eq!(back.recovered_key, report.recovered_key);
    assert_eq!(back.trace.len(), report.trace.len());
}
