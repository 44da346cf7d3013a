//! Experiment harness for the locklab laboratory: configuration loading,
//! grid execution with per-cell JSON reports, table emission and auditing.

pub mod config;
pub mod runner;
pub mod tables;

pub use config::{ExperimentConfig, TableId};
pub use runner::{audit, build_grid, run_experiment, ExperimentOutcome, Overrides};
