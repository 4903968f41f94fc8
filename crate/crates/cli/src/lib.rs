//! Batch front-end: reads a flat JSON experiment config, runs parameter solving,
//! simulations and sweeps, and writes JSON reports and CSV tables.

use std::fmt::Write as _;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use ntcp_core::analysis::{run_experiment, ExperimentConfig, GateReport};
use ntcp_core::protocol::{Condition, ParamSet, ScheduleDocument};
use ntcp_core::Error;
use rayon::prelude::*;

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CONDITION: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

const DEFAULT_OUT: &str = "ntcp-out";

#[derive(Debug, Parser)]
#[command(name = "ntcp", version, about = "Simulate and check the three-step multi-target controlled-phase gate")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Solve the protocol parameters and print them with their condition tags.
    Solve(RunArgs),
    /// Run one experiment and write a JSON report.
    Simulate(RunArgs),
    /// Run every point of the configured sweep grid and write a CSV table.
    Sweep(RunArgs),
    /// Pretty-print a stored JSON report.
    Report {
        /// Report file written by `simulate`.
        path: PathBuf,
    },
}

#[derive(Debug, Args)]
pub struct RunArgs {
    /// Experiment config (flat JSON, frequencies in Hz).
    #[arg(long)]
    pub config: PathBuf,
    /// Output directory; created when missing.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps and simulations.
    #[arg(long)]
    pub jobs: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Integrator tolerance.
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Failure carrying the process exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: EXIT_USAGE, message: message.into() }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::InconsistentParameters { .. } | Error::WrongDetuningSign(_) => EXIT_CONDITION,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            _ => EXIT_USAGE,
        };
        CliError { code, message: e.to_string() }
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Runs a parsed command, printing to stdout; returns the exit code.
pub fn run(cli: Cli) -> i32 {
    let result = match cli.command {
        Command::Solve(a) => cmd_solve(&a),
        Command::Simulate(a) => cmd_simulate(&a),
        Command::Sweep(a) => cmd_sweep(&a),
        Command::Report { path } => cmd_report(&path),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

pub fn load_config(args: &RunArgs) -> CliResult<ExperimentConfig> {
    let text = fs::read_to_string(&args.config)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", args.config.display())))?;
    let mut config: ExperimentConfig = serde_json::from_str(&text)
        .map_err(|e| CliError::usage(format!("{}: {e}", args.config.display())))?;
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(tol) = args.tol {
        config.tol = tol;
    }
    if let Some(out) = &args.out {
        config.out = Some(out.to_string_lossy().into_owned());
    }
    config.validate()?;
    Ok(config)
}

fn out_dir(config: &ExperimentConfig) -> CliResult<PathBuf> {
    let dir = PathBuf::from(config.out.as_deref().unwrap_or(DEFAULT_OUT));
    fs::create_dir_all(&dir).map_err(|e| CliError::usage(format!("cannot create {}: {e}", dir.display())))?;
    Ok(dir)
}

fn write(path: &Path, contents: &str) -> CliResult<()> {
    fs::write(path, contents).map_err(|e| CliError::usage(format!("cannot write {}: {e}", path.display())))
}

fn to_json<T: serde::Serialize>(v: &T) -> String {
    serde_json::to_string_pretty(v).expect("report types serialize") + "\n"
}

fn pool(jobs: Option<usize>) -> CliResult<rayon::ThreadPool> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(j) = jobs {
        if j == 0 {
            return Err(CliError::usage("--jobs must be at least 1"));
        }
        b = b.num_threads(j);
    }
    b.build().map_err(|e| CliError::usage(e.to_string()))
}

fn mhz(w: f64) -> f64 {
    w / (2.0 * std::f64::consts::PI) / 1e6
}

/// Human-readable parameter table with condition tags.
pub fn parameter_table(p: &ParamSet) -> String {
    let mut s = String::new();
    let rows = [
        ("g", p.g),
        ("g'", p.g_prime),
        ("delta", p.delta),
        ("delta'", p.delta_prime),
        ("Omega", p.omega),
        ("Omega'", p.omega_prime),
        ("Omega1", p.omega1),
        ("Omega_r", p.omega_r),
        ("lambda", p.lambda),
        ("lambda'", p.lambda_prime),
    ];
    let _ = writeln!(s, "{:<10} {:>14}", "parameter", "value/2pi [MHz]");
    for (name, w) in rows {
        let _ = writeln!(s, "{:<10} {:>14.4}", name, mhz(w));
    }
    let _ = writeln!(s, "{:<10} {:>14.4}", "tau [ns]", p.tau * 1e9);
    let _ = writeln!(s, "{:<10} {:>14.4}", "tau' [ns]", p.tau_prime * 1e9);
    let _ = writeln!(s, "{:<10} {:>14.4}", "t_op [ns]", p.t_op() * 1e9);
    let _ = writeln!(s, "n = {}, k = {}", p.n, p.k);
    let _ = writeln!(s, "conditions:");
    for c in &p.consistency {
        let status = if c.satisfied { "ok" } else { "VIOLATED" };
        let kind = if c.condition.is_advisory() { " (advisory)" } else { "" };
        let _ = writeln!(s, "  {:<14} {:<9} residual {:.3e}{}", c.condition.tag(), status, c.residual, kind);
    }
    s
}

pub fn cmd_solve(args: &RunArgs) -> CliResult<i32> {
    let config = load_config(args)?;
    let params = config.solve()?;
    print!("{}", parameter_table(&params));
    let dir = out_dir(&config)?;
    write(&dir.join("params.json"), &to_json(&params))?;
    if params.is_consistent() {
        let schedule = config.schedule(&params)?;
        write(&dir.join("schedule.json"), &to_json(&ScheduleDocument::from(&schedule)))?;
    }
    let violated: Vec<&str> = params.violated().into_iter().map(Condition::tag).collect();
    if violated.is_empty() {
        Ok(EXIT_OK)
    } else {
        println!("violated: {}", violated.join(", "));
        Ok(EXIT_CONDITION)
    }
}

fn summary(r: &GateReport) -> String {
    let mut s = String::new();
    let _ = writeln!(s, "realization: {}", r.realization.tag());
    let _ = writeln!(s, "n = {}, k = {}", r.params.n, r.params.k);
    let _ = writeln!(s, "effective fidelity: {:.12}", r.effective_fidelity);
    for (label, f) in &r.full_fidelity {
        let _ = writeln!(s, "full fidelity [{label}]: {f:.8}");
    }
    if let Some(spread) = r.spread() {
        let _ = writeln!(s, "cavity-state spread: {spread:.3e}");
    }
    if let Some(st) = &r.sensitivity {
        let _ = writeln!(
            s,
            "Rabi deviation {:.3}: mean {:.8}, min {:.8} over {} trials",
            st.fraction, st.mean, st.min, st.trials
        );
    }
    let p3 = r.leakage.p3.map_or("-".to_string(), |p| format!("{p:.4e}"));
    let _ = writeln!(s, "leakage ({}): p2 {:.4e}, p3 {}", r.leakage.kind, r.leakage.p2, p3);
    let t = &r.timing;
    let _ = writeln!(
        s,
        "t_op {:.4e} s, kappa^-1 {:.4e} s, margins T1 {:.3e} T2 {:.3e} kappa {:.3e}",
        t.t_op, t.kappa_inv, t.margin_t1, t.margin_t2, t.margin_kappa
    );
    if let Some(d) = &r.degeneracy {
        let _ = writeln!(s, "degeneracy deviations: {:.3e} {:.3e} {:.3e} {:.3e}", d.eps0, d.eps1, d.eps2, d.eps3);
    }
    for w in &r.warnings {
        let _ = writeln!(s, "warning: {w}");
    }
    s
}

pub fn cmd_simulate(args: &RunArgs) -> CliResult<i32> {
    let config = load_config(args)?;
    let report = pool(args.jobs)?.install(|| run_experiment(&config))?;
    let dir = out_dir(&config)?;
    write(&dir.join("report.json"), &to_json(&report))?;
    write(&dir.join("schedule.json"), &to_json(&report.schedule))?;
    print!("{}", summary(&report));
    Ok(if report.conditions.iter().all(|c| c.satisfied) { EXIT_OK } else { EXIT_CONDITION })
}

/// CSV table of a sweep, one row per grid point in grid order.
pub fn sweep_csv(config: &ExperimentConfig, jobs: Option<usize>) -> CliResult<String> {
    let points = config.sweep_points()?;
    let reports: Vec<GateReport> = pool(jobs)?
        .install(|| points.par_iter().map(|p| run_experiment(&p.config)).collect::<Result<Vec<_>, Error>>())?;

    let labels: Vec<String> = if config.full_dynamics {
        config.cavity_states.iter().map(|s| s.to_string()).collect()
    } else {
        Vec::new()
    };
    let mut w = csv::Writer::from_writer(Vec::new());
    let mut header: Vec<String> = config.sweep.iter().map(|a| a.parameter.clone()).collect();
    header.push("effective_fidelity".into());
    header.extend(labels.iter().map(|l| format!("full_fidelity_{l}")));
    header.extend(["spread", "p2", "p3", "t_op_s"].map(String::from));
    w.write_record(&header).map_err(|e| CliError::usage(e.to_string()))?;
    for (p, r) in points.iter().zip(&reports) {
        let mut row: Vec<String> = p.values.iter().map(|(_, v)| v.to_string()).collect();
        row.push(r.effective_fidelity.to_string());
        row.extend(labels.iter().map(|l| r.full_fidelity.get(l).map_or(String::new(), |f| f.to_string())));
        row.push(r.spread().map_or(String::new(), |s| s.to_string()));
        row.push(r.leakage.p2.to_string());
        row.push(r.leakage.p3.map_or(String::new(), |p| p.to_string()));
        row.push(r.timing.t_op.to_string());
        w.write_record(&row).map_err(|e| CliError::usage(e.to_string()))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::usage(e.to_string()))?;
    Ok(String::from_utf8(bytes).expect("csv output is UTF-8"))
}

pub fn cmd_sweep(args: &RunArgs) -> CliResult<i32> {
    let config = load_config(args)?;
    let table = sweep_csv(&config, args.jobs)?;
    let dir = out_dir(&config)?;
    let path = dir.join("sweep.csv");
    write(&path, &table)?;
    println!("{} rows written to {}", table.lines().count() - 1, path.display());
    Ok(EXIT_OK)
}

pub fn cmd_report(path: &Path) -> CliResult<i32> {
    let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read {}: {e}", path.display())))?;
    let report: GateReport =
        serde_json::from_str(&text).map_err(|e| CliError::usage(format!("{}: {e}", path.display())))?;
    print!("{}", summary(&report));
    print!("{}", parameter_table(&report.params));
    Ok(EXIT_OK)
}
