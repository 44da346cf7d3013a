//! Table artifacts: deterministic CSV renderings of a finished grid.
//! Failed attacks print as `x`; every cell is backed by a persisted JSON
//! report.

use std::collections::BTreeMap;

use thiserror::Error;

use locklab::AttackStatus;

use crate::config::{ExperimentConfig, TableId};
use crate::runner::{CellData, CellOutcome};

#[derive(Debug, Error)]
pub enum TableError {
    #[error("missing grid cell {0}")]
    MissingCell(String),
    #[error("cell {0} failed: {1}")]
    FailedCell(String, String),
}

/// n_clk rendering: the cycle count for recovered keys, `x` otherwise.
fn cell_value(report: &locklab::AttackReport) -> String {
    match report.status {
        AttackStatus::KeyRecovered => report.n_clk.to_string(),
        AttackStatus::Failed | AttackStatus::BudgetExhausted => "x".to_string(),
    }
}

fn format_mean(values: &[u64]) -> String {
    let mean = values.iter().sum::<u64>() as f64 / values.len() as f64;
    if mean.fract() == 0.0 {
        format!("{mean:.0}")
    } else {
        format!("{mean:.1}")
    }
}

struct Grid<'a> {
    attacks: BTreeMap<(String, String, usize, usize, usize), &'a locklab::AttackReport>,
    areas: BTreeMap<(String, String, usize, usize), &'a crate::runner::AreaRecord>,
}

impl<'a> Grid<'a> {
    fn new(cells: &'a [CellOutcome]) -> Result<Grid<'a>, TableError> {
        let mut grid = Grid {
            attacks: BTreeMap::new(),
            areas: BTreeMap::new(),
        };
        for cell in cells {
            let s = &cell.spec;
            match &cell.data {
                Ok(CellData::Attack(report)) => {
                    grid.attacks.insert(
                        (
                            s.benchmark.clone(),
                            s.scheme_label.clone(),
                            s.n_key,
                            s.n_c,
                            s.round,
                        ),
                        report,
                    );
                }
                Ok(CellData::Area(record)) => {
                    grid.areas.insert(
                        (s.benchmark.clone(), s.scheme_label.clone(), s.n_key, s.n_c),
                        record,
                    );
                }
                Err(msg) => {
                    return Err(TableError::FailedCell(s.file_stem(), msg.clone()));
                }
            }
        }
        Ok(grid)
    }

    fn attack(
        &self,
        benchmark: &str,
        label: &str,
        n_key: usize,
        n_c: usize,
        round: usize,
    ) -> Result<&locklab::AttackReport, TableError> {
        self.attacks
            .get(&(benchmark.to_string(), label.to_string(), n_key, n_c, round))
            .copied()
            .ok_or_else(|| {
                TableError::MissingCell(format!("{benchmark}/{label}/k{n_key}/c{n_c}/r{round}"))
            })
    }
}

/// Render the configured table from the finished cells.
pub fn emit_table(cfg: &ExperimentConfig, cells: &[CellOutcome]) -> Result<String, TableError> {
    let grid = Grid::new(cells)?;
    let benchmarks: Vec<String> = cfg
        .benchmarks
        .iter()
        .map(|p| {
            p.file_stem()
                .map(|s| s.to_string_lossy().into_owned())
                .unwrap_or_else(|| p.display().to_string())
        })
        .collect();
    match cfg.table {
        TableId::T2 => emit_t2(cfg, &benchmarks, &grid),
        TableId::T3 => emit_t3(cfg, &benchmarks, &grid),
        TableId::T4 => emit_t4(cfg, &benchmarks, &grid),
        TableId::Area => emit_area(cfg, &benchmarks, &grid),
    }
}

/// Rounds across the columns, one row per (benchmark, scheme entry).
fn emit_t2(
    cfg: &ExperimentConfig,
    benchmarks: &[String],
    grid: &Grid,
) -> Result<String, TableError> {
    let max_rounds = cfg
        .schemes
        .iter()
        .map(|s| s.attack.seeds.len())
        .max()
        .unwrap_or(1);
    let mut out = String::from("benchmark,scheme");
    for r in 1..=max_rounds {
        out.push_str(&format!(",r{r}"));
    }
    out.push_str(",avg\n");
    for benchmark in benchmarks {
        for scheme in &cfg.schemes {
            let label = scheme.label();
            let n_key = scheme.n_key[0];
            let n_c = scheme.n_c_values()[0];
            out.push_str(&format!("{benchmark},{label}"));
            let rounds = scheme.attack.seeds.len();
            let mut recovered = Vec::new();
            let mut any_failed = false;
            for r in 1..=max_rounds {
                if r > rounds {
                    out.push(',');
                    continue;
                }
                let report = grid.attack(benchmark, &label, n_key, n_c, r)?;
                let v = cell_value(report);
                if v == "x" {
                    any_failed = true;
                } else {
                    recovered.push(report.n_clk);
                }
                out.push_str(&format!(",{v}"));
            }
            if any_failed || recovered.is_empty() {
                out.push_str(",x\n");
            } else {
                out.push_str(&format!(",{}\n", format_mean(&recovered)));
            }
        }
    }
    Ok(out)
}

/// Schemes across the columns, one row per (benchmark, n_key).
fn emit_t3(
    cfg: &ExperimentConfig,
    benchmarks: &[String],
    grid: &Grid,
) -> Result<String, TableError> {
    let mut n_keys: Vec<usize> = cfg
        .schemes
        .iter()
        .flat_map(|s| s.n_key.iter().copied())
        .collect();
    n_keys.sort_unstable();
    n_keys.dedup();
    let mut out = String::from("benchmark,n_key");
    for scheme in &cfg.schemes {
        out.push_str(&format!(",{}", scheme.label()));
    }
    out.push('\n');
    for benchmark in benchmarks {
        for &n_key in &n_keys {
            out.push_str(&format!("{benchmark},{n_key}"));
            for scheme in &cfg.schemes {
                if !scheme.n_key.contains(&n_key) {
                    out.push(',');
                    continue;
                }
                let report =
                    grid.attack(benchmark, &scheme.label(), n_key, scheme.n_c_values()[0], 1)?;
                out.push_str(&format!(",{}", cell_value(report)));
            }
            out.push('\n');
        }
    }
    Ok(out)
}

/// Camouflaged-DFF counts across the columns, one row per benchmark.
fn emit_t4(
    cfg: &ExperimentConfig,
    benchmarks: &[String],
    grid: &Grid,
) -> Result<String, TableError> {
    let mut out = String::from("benchmark");
    for scheme in &cfg.schemes {
        let n_cs = scheme.n_c_values();
        for &n_c in &n_cs {
            if n_cs.len() == 1 {
                out.push_str(&format!(",{}", scheme.label()));
            } else {
                out.push_str(&format!(",{}_nc{}", scheme.label(), n_c));
            }
        }
    }
    out.push('\n');
    for benchmark in benchmarks {
        out.push_str(benchmark);
        for scheme in &cfg.schemes {
            for &n_c in &scheme.n_c_values() {
                let report = grid.attack(benchmark, &scheme.label(), scheme.n_key[0], n_c, 1)?;
                out.push_str(&format!(",{}", cell_value(report)));
            }
        }
        out.push('\n');
    }
    Ok(out)
}

/// Tidy per-cell area deltas.
fn emit_area(
    cfg: &ExperimentConfig,
    benchmarks: &[String],
    grid: &Grid,
) -> Result<String, TableError> {
    let mut out = String::from(
        "benchmark,scheme,n_key,n_c,gates_baseline,gates_locked,gates_delta,jj_baseline,jj_locked,jj_delta\n",
    );
    for benchmark in benchmarks {
        for scheme in &cfg.schemes {
            for &n_key in &scheme.n_key {
                for &n_c in &scheme.n_c_values() {
                    let record = grid
                        .areas
                        .get(&(benchmark.clone(), scheme.label(), n_key, n_c))
                        .ok_or_else(|| {
                            TableError::MissingCell(format!(
                                "{benchmark}/{}/k{n_key}/c{n_c}",
                                scheme.label()
                            ))
                        })?;
                    let o = &record.overhead;
                    out.push_str(&format!(
                        "{benchmark},{},{n_key},{n_c},{},{},{},{},{},{}\n",
                        scheme.label(),
                        o.baseline.total,
                        o.locked.total,
                        o.delta_total,
                        o.baseline.jj_estimate,
                        o.locked.jj_estimate,
                        o.delta_jj,
                    ));
                }
            }
        }
    }
    Ok(out)
}
