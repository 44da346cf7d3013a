//! Experiment grid executor: parse → balance → lock → attack per cell,
//! one persisted JSON report per cell, aggregated into table artifacts.
//! Cells are independent jobs; failures are recorded per cell and the run
//! continues.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use thiserror::Error;

use locklab::attack::bank::Execution;
use locklab::attack::{miter_sat_attack, sweep_attack, MiterAttackOptions, Oracle, SweepMode};
use locklab::locking::{
    derive_key, lock_csar, lock_ll, lock_rsat, lock_sarlock, overhead, LockedNetlist,
    OverheadReport, Scheme,
};
use locklab::netlist::{JjCostModel, Netlist};
use locklab::{parse_bench, AttackReport};

use crate::config::{
    AttackKindConfig, ConfigError, ExperimentConfig, HoldSpec, ModeConfig, TableId,
};
use crate::tables::{emit_table, TableError};

#[derive(Debug, Error)]
pub enum RunError {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("io {path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error(transparent)]
    Table(#[from] TableError),
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> RunError + '_ {
    move |source| RunError::Io {
        path: path.to_path_buf(),
        source,
    }
}

/// Seed/mode/hold overrides from the command line; they apply to every
/// scheme entry.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub mode: Option<ModeConfig>,
    pub hold: Option<HoldSpec>,
}

/// One grid cell: a fully resolved (benchmark, scheme, params, round).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CellSpec {
    pub benchmark: String,
    #[serde(skip)]
    pub benchmark_path: PathBuf,
    pub scheme_label: String,
    pub scheme: Scheme,
    pub n_key: usize,
    pub n_c: usize,
    pub lock_seed: u64,
    pub kind: AttackKindConfig,
    pub mode: ModeConfig,
    pub hold: usize,
    pub round: usize,
    pub seed: u64,
    #[serde(skip_serializing_if = "Option::is_none", default)]
    pub budget: Option<usize>,
}

impl CellSpec {
    pub fn file_stem(&self) -> String {
        let label: String = self
            .scheme_label
            .chars()
            .map(|c| if c.is_ascii_alphanumeric() { c } else { '_' })
            .collect();
        format!(
            "{}__{}__k{}__c{}__r{}",
            self.benchmark, label, self.n_key, self.n_c, self.round
        )
    }
}

/// Area-table cell payload.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct AreaRecord {
    pub benchmark: String,
    pub scheme_label: String,
    pub scheme: Scheme,
    pub n_key: usize,
    pub n_c: usize,
    pub lock_seed: u64,
    pub overhead: OverheadReport,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(tag = "cell_kind", rename_all = "snake_case")]
pub enum CellData {
    Attack(AttackReport),
    Area(AreaRecord),
}

#[derive(Debug, Clone)]
pub struct CellOutcome {
    pub spec: CellSpec,
    pub data: Result<CellData, String>,
    pub report_file: String,
}

pub struct ExperimentOutcome {
    pub cells: Vec<CellOutcome>,
    pub table_csv: String,
    pub table_path: PathBuf,
    pub failures: usize,
}

fn apply_scheme(
    netlist: &Netlist,
    spec: &CellSpec,
) -> Result<LockedNetlist, locklab::locking::LockError> {
    match spec.scheme {
        Scheme::Ll => lock_ll(netlist, spec.n_key, spec.lock_seed),
        Scheme::SarLock => lock_sarlock(netlist, spec.n_key, 0),
        Scheme::Rsat => {
            let key = derive_key(spec.lock_seed, spec.n_key);
            lock_rsat(netlist, spec.n_key, &key, 0)
        }
        Scheme::Csar => {
            let key = derive_key(spec.lock_seed, spec.n_key);
            lock_csar(netlist, spec.n_key, &key, spec.n_c, 0)
        }
    }
}

fn run_cell(
    spec: &CellSpec,
    netlist: &Netlist,
    table: TableId,
    jj: &JjCostModel,
) -> Result<CellData, String> {
    let locked = apply_scheme(netlist, spec).map_err(|e| format!("lock: {e}"))?;
    if table == TableId::Area {
        let report = overhead(netlist, &locked, jj).map_err(|e| format!("overhead: {e}"))?;
        return Ok(CellData::Area(AreaRecord {
            benchmark: spec.benchmark.clone(),
            scheme_label: spec.scheme_label.clone(),
            scheme: spec.scheme,
            n_key: spec.n_key,
            n_c: spec.n_c,
            lock_seed: spec.lock_seed,
            overhead: report,
        }));
    }
    let mut oracle = Oracle::new(&locked).map_err(|e| format!("oracle: {e}"))?;
    let report = match spec.kind {
        AttackKindConfig::Sweep => {
            let mode = match spec.mode {
                ModeConfig::Random => SweepMode::Random(spec.seed),
                ModeConfig::Exhaustive => SweepMode::Exhaustive,
            };
            sweep_attack(
                &locked,
                &mut oracle,
                spec.hold,
                mode,
                spec.budget,
                Execution::Parallel,
            )
            .map_err(|e| format!("sweep: {e}"))?
        }
        AttackKindConfig::Miter => {
            let options = MiterAttackOptions {
                budget: spec.budget,
                dip_schedule: None,
            };
            miter_sat_attack(&locked, &mut oracle, &options).map_err(|e| format!("miter: {e}"))?
        }
    };
    Ok(CellData::Attack(report))
}

/// Expand the config into the fully resolved cell grid, applying command
/// line overrides.
pub fn build_grid(cfg: &ExperimentConfig, overrides: &Overrides) -> Vec<CellSpec> {
    let mut cells = Vec::new();
    for bench_path in &cfg.benchmarks {
        let benchmark = bench_path
            .file_stem()
            .map(|s| s.to_string_lossy().into_owned())
            .unwrap_or_else(|| bench_path.display().to_string());
        for scheme in &cfg.schemes {
            let mode = overrides.mode.unwrap_or(scheme.attack.mode);
            let hold_spec = overrides.hold.unwrap_or(scheme.attack.hold);
            let seeds: Vec<u64> = match overrides.seed {
                Some(s) => vec![s],
                None => scheme.attack.seeds.clone(),
            };
            for &n_key in &scheme.n_key {
                for &n_c in &scheme.n_c_values() {
                    let rounds: Vec<(usize, u64)> = if cfg.table == TableId::Area {
                        vec![(1, seeds[0])]
                    } else {
                        seeds.iter().copied().enumerate().map(|(i, s)| (i + 1, s)).collect()
                    };
                    for (round, seed) in rounds {
                        cells.push(CellSpec {
                            benchmark: benchmark.clone(),
                            benchmark_path: bench_path.clone(),
                            scheme_label: scheme.label(),
                            scheme: scheme.scheme,
                            n_key,
                            n_c,
                            lock_seed: scheme.lock_seed,
                            kind: scheme.attack.kind,
                            mode,
                            hold: hold_spec.resolve(n_c),
                            round,
                            seed,
                            budget: scheme.attack.budget,
                        });
                    }
                }
            }
        }
    }
    cells
}

fn load_jj_costs(cfg: &ExperimentConfig) -> Result<JjCostModel, RunError> {
    match &cfg.jj_costs {
        None => Ok(JjCostModel::default()),
        Some(path) => {
            let text = std::fs::read_to_string(path).map_err(io_err(path))?;
            serde_json::from_str(&text).map_err(|e| RunError::Io {
                path: path.clone(),
                source: std::io::Error::other(e),
            })
        }
    }
}

/// Run every grid cell, persist per-cell reports under `out_dir`, and emit
/// the table CSV. Fully deterministic for a given config.
pub fn run_experiment(
    cfg: &ExperimentConfig,
    out_dir: &Path,
    overrides: &Overrides,
) -> Result<ExperimentOutcome, RunError> {
    cfg.validate()?;
    std::fs::create_dir_all(out_dir).map_err(io_err(out_dir))?;
    let jj = load_jj_costs(cfg)?;

    let mut netlists: HashMap<PathBuf, Netlist> = HashMap::new();
    for path in &cfg.benchmarks {
        let text = std::fs::read_to_string(path).map_err(io_err(path))?;
        let n = parse_bench(&text).map_err(|e| RunError::Io {
            path: path.clone(),
            source: std::io::Error::other(e.to_string()),
        })?;
        netlists.insert(path.clone(), n);
    }

    let specs = build_grid(cfg, overrides);
    let run_one = |spec: &CellSpec| -> CellOutcome {
        let netlist = &netlists[&spec.benchmark_path];
        let data = run_cell(spec, netlist, cfg.table, &jj);
        let report_file = match &data {
            Ok(_) => format!("{}.report.json", spec.file_stem()),
            Err(_) => format!("{}.error.json", spec.file_stem()),
        };
        CellOutcome {
            spec: spec.clone(),
            data,
            report_file,
        }
    };
    let cells: Vec<CellOutcome> = {
        #[cfg(feature = "parallel")]
        {
            use rayon::prelude::*;
            specs.par_iter().map(run_one).collect()
        }
        #[cfg(not(feature = "parallel"))]
        specs.iter().map(run_one).collect()
    };

    let mut failures = 0usize;
    for cell in &cells {
        let path = out_dir.join(&cell.report_file);
        let body = match &cell.data {
            Ok(data) => {
                let mut value = serde_json::to_value(data).expect("reports serialize");
                value["cell"] = serde_json::to_value(&cell.spec).expect("spec serializes");
                serde_json::to_string_pretty(&value).expect("reports serialize")
            }
            Err(msg) => {
                failures += 1;
                serde_json::to_string_pretty(&serde_json::json!({
                    "cell": &cell.spec,
                    "error": msg,
                }))
                .expect("error serializes")
            }
        };
        std::fs::write(&path, body + "\n").map_err(io_err(&path))?;
    }

    let table_csv = emit_table(cfg, &cells)?;
    let table_path = out_dir.join(format!("{}.csv", cfg.table.file_stem()));
    std::fs::write(&table_path, &table_csv).map_err(io_err(&table_path))?;

    Ok(ExperimentOutcome {
        cells,
        table_csv,
        table_path,
        failures,
    })
}

/// Audit a finished run: re-derive the table from the persisted cell
/// reports and compare byte for byte, re-checking each report's internal
/// accounting along the way. Returns the list of problems found.
pub fn audit(cfg: &ExperimentConfig, out_dir: &Path) -> Result<Vec<String>, RunError> {
    let mut problems = Vec::new();
    let specs = build_grid(cfg, &Overrides::default());
    let mut cells = Vec::new();
    for spec in specs {
        let report_path = out_dir.join(format!("{}.report.json", spec.file_stem()));
        let data = match std::fs::read_to_string(&report_path) {
            Ok(text) => match serde_json::from_str::<CellData>(&text) {
                Ok(data) => {
                    if let CellData::Attack(report) = &data {
                        if report.recount_n_clk() != report.n_clk {
                            problems.push(format!(
                                "{}: trace recount {} != n_clk {}",
                                spec.file_stem(),
                                report.recount_n_clk(),
                                report.n_clk
                            ));
                        }
                        if report.status == locklab::AttackStatus::KeyRecovered
                            && report.survivor_count != 1
                        {
                            problems.push(format!(
                                "{}: recovered with {} survivors",
                                spec.file_stem(),
                                report.survivor_count
                            ));
                        }
                    }
                    Ok(data)
                }
                Err(e) => Err(format!("unreadable report: {e}")),
            },
            Err(e) => Err(format!("missing report: {e}")),
        };
        if let Err(msg) = &data {
            problems.push(format!("{}: {msg}", spec.file_stem()));
        }
        cells.push(CellOutcome {
            report_file: format!("{}.report.json", spec.file_stem()),
            spec,
            data,
        });
    }
    if problems.is_empty() {
        let expect = emit_table(cfg, &cells)?;
        let table_path = out_dir.join(format!("{}.csv", cfg.table.file_stem()));
        let actual = std::fs::read_to_string(&table_path).map_err(io_err(&table_path))?;
        if expect != actual {
            problems.push(format!(
                "{}: CSV does not match the persisted reports",
                table_path.display()
            ));
        }
    }
    Ok(problems)
}
