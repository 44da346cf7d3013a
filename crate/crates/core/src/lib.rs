//! Logic-locking laboratory for gate-level-pipelined combinational netlists.
//!
//! The crate provides:
//!
//! - a BENCH-format netlist IR with validation, topological ordering,
//!   combinational evaluation and area statistics ([`netlist`], [`bench_io`]);
//! - pipelining semantics: sequential depths, path-balancing DFF insertion
//!   and a cycle-accurate clocked simulator with camouflaged-DFF (zero-delay)
//!   cells ([`pipeline`]);
//! - four locking transforms — XOR/XNOR key gates (LL), SARLock, RSAT and
//!   C-SAR — plus overhead accounting ([`locking`]);
//! - Tseitin encoding, miter construction, a DIMACS-compatible CNF type and
//!   a complete DPLL solver ([`cnf`], [`tseitin`], [`miter`], [`solver`]);
//! - the oracle model and two key-recovery attacks: the miter-based SAT
//!   attack and the cycle-counting sweep attack with configurable hold
//!   ([`attack`]).
//!
//! With the default `parallel` feature the candidate-bank sweep evaluates
//! lane chunks through rayon; without it the same code runs sequentially.

pub mod attack;
pub mod bench_io;
pub mod cnf;
pub mod fixtures;
pub mod locking;
pub mod miter;
pub mod netlist;
pub mod pipeline;
pub mod solver;
pub mod tseitin;

pub use attack::{AttackError, AttackKind, AttackReport, AttackStatus, Oracle, SweepMode};
pub use bench_io::{parse_bench, write_bench};
pub use locking::{LockError, LockedNetlist, OverheadReport, Scheme, SidecarRecord};
pub use netlist::{AreaReport, BitVector, Diagnostic, Gate, GateKind, JjCostModel, NetId, Netlist, NetlistError};
pub use pipeline::{
    is_balanced, output_latency, path_balance, sequential_depths, simulate_clocked, ClockedSim,
    DepthMap, LatencyModel, SimTrace,
};
