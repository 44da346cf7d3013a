//! `locklab` command line: netlist inspection, locking, clocked
//! simulation, attacks, experiment grids and report auditing.
//!
//! Exit codes: 0 success, 1 cell/audit failures, 2 configuration errors.

use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand};

use locklab::attack::bank::Execution;
use locklab::attack::{miter_sat_attack, sweep_attack, MiterAttackOptions, Oracle, SweepMode};
use locklab::locking::{
    derive_key, lock_csar, lock_ll, lock_rsat, lock_sarlock, overhead, LockedNetlist, Scheme,
    SidecarRecord,
};
use locklab::netlist::{BitVector, JjCostModel, Netlist};
use locklab::pipeline::{
    is_balanced, output_latency, sequential_depths, simulate_clocked, LatencyModel,
};
use locklab::{parse_bench, write_bench};
use locklab_cli::config::{ExperimentConfig, HoldSpec, ModeConfig};
use locklab_cli::runner::{audit, run_experiment, Overrides};

#[derive(Parser)]
#[command(name = "locklab", version, about = "Logic-locking laboratory for gate-level-pipelined netlists")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse and validate a BENCH netlist, reporting structure and depth.
    Parse(ParseArgs),
    /// Lock a netlist with one of the schemes; writes netlist + sidecar.
    Lock(LockArgs),
    /// Clock-accurate simulation under a held stimulus; optional CSV trace.
    Simulate(SimulateArgs),
    /// Attack a locked netlist (sweep or miter) and write the report.
    Attack(AttackArgs),
    /// Run an experiment grid from a config file and emit table CSVs.
    Bench(BenchArgs),
    /// Gate counts and JJ-estimate statistics (optionally vs a baseline).
    Stats(StatsArgs),
    /// Verify that a finished run's CSV matches its persisted reports.
    Audit(AuditArgs),
}

#[derive(Args)]
struct ParseArgs {
    /// Input .bench file.
    file: PathBuf,
    /// Re-emit the canonical BENCH text to this path.
    #[arg(long)]
    emit: Option<PathBuf>,
}

#[derive(Args)]
struct LockArgs {
    /// Host .bench file (combinational, no key inputs).
    file: PathBuf,
    #[arg(long)]
    scheme: Scheme,
    #[arg(long)]
    n_key: usize,
    /// Camouflaged-DFF count (C-SAR only).
    #[arg(long, default_value_t = 1)]
    n_c: usize,
    /// Seed for key-gate placement (ll) or correct-key derivation.
    #[arg(long, default_value_t = 1)]
    seed: u64,
    /// Explicit correct key bits (declaration order); overrides --seed.
    #[arg(long)]
    key: Option<String>,
    #[arg(long, default_value_t = 0)]
    flip_output: usize,
    /// Output path prefix: writes PREFIX.bench and PREFIX.json.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Args)]
struct SimulateArgs {
    /// Netlist to simulate (.bench).
    file: PathBuf,
    /// Input pattern bits, declaration order.
    #[arg(long)]
    inputs: String,
    /// Key pattern bits (required when the netlist has key inputs).
    #[arg(long, default_value = "")]
    keys: String,
    #[arg(long, default_value_t = 16)]
    cycles: usize,
    /// Write the per-cycle trace as CSV.
    #[arg(long)]
    csv: Option<PathBuf>,
}

#[derive(Args)]
struct AttackArgs {
    /// Locked netlist (.bench).
    file: PathBuf,
    /// Sidecar JSON with the scheme metadata and correct key.
    #[arg(long)]
    meta: PathBuf,
    #[arg(long, default_value = "sweep")]
    kind: String,
    #[arg(long, default_value = "exhaustive")]
    mode: String,
    /// Hold cycles per pattern; "auto" resolves to n_c + 1.
    #[arg(long, default_value = "auto")]
    hold: String,
    #[arg(long, default_value_t = 1)]
    seed: u64,
    #[arg(long)]
    budget: Option<usize>,
    /// Report JSON output path.
    #[arg(long)]
    report: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
    /// Worker threads for grid cells (default: all cores).
    #[arg(long)]
    jobs: Option<usize>,
    /// Override every attack seed (single round).
    #[arg(long)]
    seed: Option<u64>,
    /// Override every attack mode.
    #[arg(long)]
    mode: Option<String>,
    /// Override every hold value ("auto" or a cycle count).
    #[arg(long)]
    hold: Option<String>,
}

#[derive(Args)]
struct StatsArgs {
    file: PathBuf,
    /// JJ cost table (JSON map of gate kind to cost); defaults built in.
    #[arg(long)]
    jj_costs: Option<PathBuf>,
    /// Baseline netlist for overhead deltas.
    #[arg(long)]
    baseline: Option<PathBuf>,
    /// Sidecar JSON for the locked netlist (needed with --baseline).
    #[arg(long)]
    meta: Option<PathBuf>,
}

#[derive(Args)]
struct AuditArgs {
    #[arg(long)]
    config: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

fn load_netlist(path: &PathBuf) -> Result<Netlist> {
    let text = std::fs::read_to_string(path).with_context(|| format!("read {}", path.display()))?;
    parse_bench(&text).with_context(|| format!("parse {}", path.display()))
}

fn load_locked(file: &PathBuf, meta: &PathBuf) -> Result<LockedNetlist> {
    let netlist = load_netlist(file)?;
    let record: SidecarRecord = serde_json::from_str(
        &std::fs::read_to_string(meta).with_context(|| format!("read {}", meta.display()))?,
    )
    .with_context(|| format!("parse {}", meta.display()))?;
    LockedNetlist::from_parts(netlist, &record, &LatencyModel)
        .with_context(|| "reassemble locked netlist")
}

fn parse_mode(s: &str) -> Result<ModeConfig> {
    match s {
        "random" => Ok(ModeConfig::Random),
        "exhaustive" => Ok(ModeConfig::Exhaustive),
        other => bail!("unknown mode `{other}` (expected random|exhaustive)"),
    }
}

fn parse_hold(s: &str) -> Result<HoldSpec> {
    if s == "auto" {
        Ok(HoldSpec::default())
    } else {
        Ok(HoldSpec::Fixed(s.parse().context("hold must be a cycle count or `auto`")?))
    }
}

fn cmd_parse(args: &ParseArgs) -> Result<ExitCode> {
    let n = load_netlist(&args.file)?;
    let model = LatencyModel;
    let depths = sequential_depths(&n, &model)?;
    println!(
        "{}: {} inputs, {} key inputs, {} outputs, {} gates",
        args.file.display(),
        n.primary_inputs().len(),
        n.key_inputs().len(),
        n.primary_outputs().len(),
        n.gates().iter().filter(|g| g.kind.counts_as_gate()).count(),
    );
    println!("max depth {}", depths.max_depth());
    if is_balanced(&n, &model)? {
        println!("balanced, output latency {}", output_latency(&n, &model)?);
    } else {
        println!("not balanced (run through path balancing before clocked use)");
    }
    let round = parse_bench(&write_bench(&n)).context("round trip")?;
    anyhow::ensure!(round == n, "round-trip mismatch");
    if let Some(out) = &args.emit {
        std::fs::write(out, write_bench(&n))?;
        println!("wrote {}", out.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_lock(args: &LockArgs) -> Result<ExitCode> {
    let host = load_netlist(&args.file)?;
    let key = match &args.key {
        Some(bits) => BitVector::parse(bits)?,
        None => derive_key(args.seed, args.n_key),
    };
    let locked = match args.scheme {
        Scheme::Ll => lock_ll(&host, args.n_key, args.seed)?,
        Scheme::SarLock => lock_sarlock(&host, args.n_key, args.flip_output)?,
        Scheme::Rsat => lock_rsat(&host, args.n_key, &key, args.flip_output)?,
        Scheme::Csar => lock_csar(&host, args.n_key, &key, args.n_c, args.flip_output)?,
    };
    let bench_path = args.out.with_extension("bench");
    let meta_path = args.out.with_extension("json");
    std::fs::write(&bench_path, write_bench(&locked.netlist))?;
    std::fs::write(
        &meta_path,
        serde_json::to_string_pretty(&locked.sidecar())? + "\n",
    )?;
    println!(
        "locked with {} (n_key={}, latency={}); wrote {} and {}",
        locked.scheme,
        locked.n_key,
        locked.latency,
        bench_path.display(),
        meta_path.display()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let n = load_netlist(&args.file)?;
    let inputs = BitVector::parse(&args.inputs)?;
    let keys = BitVector::parse(&args.keys)?;
    let stimulus = vec![(inputs, keys); args.cycles];
    let trace = simulate_clocked(&n, &stimulus)?;
    let last = trace.outputs.last().context("at least one cycle")?;
    println!(
        "{} cycles simulated ({} warm-up); final outputs {}",
        trace.cycles(),
        trace.warmup_cycles,
        last
    );
    if let Some(path) = &args.csv {
        std::fs::write(path, trace.to_csv())?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_attack(args: &AttackArgs) -> Result<ExitCode> {
    let locked = load_locked(&args.file, &args.meta)?;
    let mut oracle = Oracle::new(&locked)?;
    let report = match args.kind.as_str() {
        "sweep" => {
            let hold = match parse_hold(&args.hold)? {
                HoldSpec::Fixed(h) => h,
                _ => locked.n_c + 1,
            };
            let mode = match parse_mode(&args.mode)? {
                ModeConfig::Random => SweepMode::Random(args.seed),
                ModeConfig::Exhaustive => SweepMode::Exhaustive,
            };
            sweep_attack(&locked, &mut oracle, hold, mode, args.budget, Execution::Parallel)?
        }
        "miter" => miter_sat_attack(
            &locked,
            &mut oracle,
            &MiterAttackOptions {
                budget: args.budget,
                dip_schedule: None,
            },
        )?,
        other => bail!("unknown attack kind `{other}` (expected sweep|miter)"),
    };
    println!(
        "status {:?}; iterations {}; n_clk {}; recovered {}",
        report.status,
        report.iterations,
        report.n_clk,
        report
            .recovered_key
            .as_ref()
            .map(|k| k.to_string())
            .unwrap_or_else(|| "-".into())
    );
    if let Some(path) = &args.report {
        std::fs::write(path, report.to_json() + "\n")?;
        println!("wrote {}", path.display());
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_bench(args: &BenchArgs) -> Result<ExitCode> {
    #[cfg(feature = "parallel")]
    if let Some(jobs) = args.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
            .context("thread pool")?;
    }
    #[cfg(not(feature = "parallel"))]
    let _ = args.jobs;

    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let overrides = Overrides {
        seed: args.seed,
        mode: args.mode.as_deref().map(parse_mode).transpose()?,
        hold: args.hold.as_deref().map(parse_hold).transpose()?,
    };
    let outcome = run_experiment(&cfg, &args.out, &overrides)?;
    println!(
        "{}: {} cells, {} failures; table {}",
        cfg.name,
        outcome.cells.len(),
        outcome.failures,
        outcome.table_path.display()
    );
    print!("{}", outcome.table_csv);
    Ok(if outcome.failures == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

fn cmd_stats(args: &StatsArgs) -> Result<ExitCode> {
    let costs: JjCostModel = match &args.jj_costs {
        None => JjCostModel::default(),
        Some(path) => serde_json::from_str(&std::fs::read_to_string(path)?)?,
    };
    let n = load_netlist(&args.file)?;
    match (&args.baseline, &args.meta) {
        (Some(base), Some(meta)) => {
            let baseline = load_netlist(base)?;
            let locked = load_locked(&args.file, meta)?;
            let report = overhead(&baseline, &locked, &costs)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
        (Some(_), None) => bail!("--baseline requires --meta for the locked netlist"),
        _ => {
            let report = n.area_stats(&costs)?;
            println!("{}", serde_json::to_string_pretty(&report)?);
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn cmd_audit(args: &AuditArgs) -> Result<ExitCode> {
    let cfg = match ExperimentConfig::load(&args.config) {
        Ok(cfg) => cfg,
        Err(e) => {
            eprintln!("config error: {e}");
            return Ok(ExitCode::from(2));
        }
    };
    let problems = audit(&cfg, &args.out)?;
    if problems.is_empty() {
        println!("audit clean: every CSV cell is backed by a consistent report");
        Ok(ExitCode::SUCCESS)
    } else {
        for p in &problems {
            eprintln!("audit: {p}");
        }
        Ok(ExitCode::from(1))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Parse(args) => cmd_parse(args),
        Command::Lock(args) => cmd_lock(args),
        Command::Simulate(args) => cmd_simulate(args),
        Command::Attack(args) => cmd_attack(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Stats(args) => cmd_stats(args),
        Command::Audit(args) => cmd_audit(args),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
