//! `kgsplit`: runs, benchmarks and calibrates splitting integrators on the
//! disordered Klein-Gordon chain.
//!
//! Exit codes: 0 success, 1 usage error, 2 runtime abort. Errors are reported
//! as a single `error: <kind>: <message>` line on stderr.

// `!(x > 0.0)` also rejects NaN
#![allow(clippy::neg_cmp_op_on_partial_ord)]

mod config;
mod csv;

use std::fs::{self, File};
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use kgsplit::format::fmt_f64;
use kgsplit::harness::{format_table, order_taus, ORDER_HORIZON};
use kgsplit::{
    bench_suite, calibrate_tau, catalog, catalog_scheme, make_lattice, measure_order, CalibrationOptions,
    Error, RunConfig, RunOutput,
};

use config::{parse_f64, parse_runs, parse_u64, parse_usize, Settings};

/// Environment variable capping how many bench runs execute at once.
const THREADS_ENV: &str = "KGSPLIT_BENCH_THREADS";

#[derive(Parser)]
#[command(name = "kgsplit", version, about = "Splitting integrators for the disordered Klein-Gordon chain")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run one experiment and write its observation CSV.
    Run(ExperimentArgs),
    /// Run several schemes on one disorder realization and compare them.
    Bench(BenchArgs),
    /// Find the largest step size meeting an energy-error target.
    Calibrate(CalibrateArgs),
    /// Fit convergence slopes for every catalog scheme.
    OrderCheck(OrderArgs),
    /// Print the coefficient catalog.
    Schemes,
}

#[derive(Args, Default)]
struct ExperimentArgs {
    /// Flat `key = value` file; flags override its values.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    scheme: Option<String>,
    #[arg(long, value_parser = parse_f64)]
    tau: Option<f64>,
    #[arg(long, value_parser = parse_usize)]
    sites: Option<usize>,
    /// Disorder strength W.
    #[arg(long, value_parser = parse_f64)]
    w: Option<f64>,
    #[arg(long, value_parser = parse_u64)]
    seed: Option<u64>,
    /// Initial energy on the central site.
    #[arg(long, value_parser = parse_f64)]
    energy: Option<f64>,
    #[arg(long = "t-end", value_parser = parse_f64)]
    t_end: Option<f64>,
    /// Number of log-spaced observation times.
    #[arg(long, value_parser = parse_usize)]
    samples: Option<usize>,
    /// Output file (`run`) or directory (`bench`).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    /// Shipped suite: fig1, fig2 or fig3.
    #[arg(long)]
    preset: Option<String>,
    /// Comma-separated SCHEME:TAU pairs.
    #[arg(long)]
    runs: Option<String>,
}

#[derive(Args)]
struct CalibrateArgs {
    #[command(flatten)]
    common: ExperimentArgs,
    /// Maximal relative energy error to meet.
    #[arg(long, value_parser = parse_f64, default_value = "1e-5")]
    target: f64,
    /// Integration time of each trial step size.
    #[arg(long, value_parser = parse_f64, default_value = "1e3")]
    horizon: f64,
}

#[derive(Args)]
struct OrderArgs {
    #[arg(long, value_parser = parse_usize, default_value = "32")]
    sites: usize,
    #[arg(long, value_parser = parse_f64, default_value = "4")]
    w: f64,
    #[arg(long, value_parser = parse_u64, default_value = "1")]
    seed: u64,
    #[arg(long, value_parser = parse_f64, default_value_t = ORDER_HORIZON)]
    horizon: f64,
}

enum Failure {
    Usage(String),
    Runtime { kind: &'static str, message: String },
}

impl Failure {
    fn runtime(e: Error) -> Self {
        let kind = match &e {
            Error::BlowUp { .. } => "blow-up",
            Error::Calibration(_) => "calibration",
            Error::ShrinkRange(_) => "shrink-range",
            Error::Io(_) => "io",
            _ => "runtime",
        };
        Failure::Runtime {
            kind,
            message: e.to_string(),
        }
    }
}

impl From<Error> for Failure {
    /// Errors raised while checking inputs, before any integration.
    fn from(e: Error) -> Self {
        match e {
            Error::Io(_) => Failure::runtime(e),
            other => Failure::Usage(other.to_string()),
        }
    }
}

fn io_failure(path: &Path, e: io::Error) -> Failure {
    Failure::Runtime {
        kind: "io",
        message: format!("{}: {e}", path.display()),
    }
}

fn one_line(s: &str) -> String {
    s.split_whitespace().collect::<Vec<_>>().join(" ")
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if !e.use_stderr() => {
            // --help, --version
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
        Err(e) => {
            let text = e.to_string();
            let first = text.lines().next().unwrap_or("invalid arguments");
            eprintln!("error: usage: {}", first.trim_start_matches("error: "));
            return ExitCode::from(1);
        }
    };
    let result = match cli.command {
        Command::Run(a) => cmd_run(a),
        Command::Bench(a) => cmd_bench(a),
        Command::Calibrate(a) => cmd_calibrate(a),
        Command::OrderCheck(a) => cmd_order_check(a),
        Command::Schemes => cmd_schemes(),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: usage: {}", one_line(&m));
            ExitCode::from(1)
        }
        Err(Failure::Runtime { kind, message }) => {
            eprintln!("error: {kind}: {}", one_line(&message));
            ExitCode::from(2)
        }
    }
}

/// File settings (if any) overlaid with the flags.
fn settings(a: &ExperimentArgs, base: Option<&str>) -> Result<Settings, Failure> {
    let mut s = match base {
        Some(text) => Settings::parse(text).map_err(Failure::Usage)?,
        None => Settings::default(),
    };
    if let Some(path) = &a.config {
        let text = fs::read_to_string(path).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        let file = Settings::parse(&text).map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
        s = s.overlay(file);
    }
    Ok(s.overlay(Settings {
        scheme: a.scheme.clone(),
        tau: a.tau,
        sites: a.sites,
        w: a.w,
        seed: a.seed,
        energy: a.energy,
        t_end: a.t_end,
        samples: a.samples,
        out: a.out.clone(),
        runs: None,
    }))
}

fn write_csv(path: Option<&Path>, out: &RunOutput) -> Result<(), Failure> {
    match path {
        Some(p) => {
            let f = File::create(p).map_err(|e| io_failure(p, e))?;
            csv::write_records(BufWriter::new(f), &out.records).map_err(|e| io_failure(p, e))
        }
        None => csv::write_records(io::stdout().lock(), &out.records)
            .map_err(|e| io_failure(Path::new("<stdout>"), e)),
    }
}

fn cmd_run(a: ExperimentArgs) -> Result<(), Failure> {
    let s = settings(&a, None)?;
    let cfg = s.run_config();
    cfg.validate()?;
    let out = kgsplit::run_experiment(&cfg).map_err(Failure::runtime)?;
    write_csv(cfg.output.as_deref(), &out)?;
    let table = format_table(std::slice::from_ref(&out.summary));
    // keep stdout pure CSV when the CSV goes there
    if cfg.output.is_some() {
        print!("{table}");
    } else {
        eprint!("{table}");
    }
    match out.failure {
        Some(reason) => Err(Failure::Runtime {
            kind: "blow-up",
            message: reason,
        }),
        None => Ok(()),
    }
}

fn bench_threads() -> Result<usize, Failure> {
    match std::env::var(THREADS_ENV) {
        Ok(v) => parse_usize(&v)
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| Failure::Usage(format!("{THREADS_ENV} must be a positive integer, got `{v}`"))),
        Err(_) => Ok(std::thread::available_parallelism().map_or(1, |n| n.get())),
    }
}

fn csv_name(scheme: &str, tau: f64) -> String {
    format!("{scheme}_tau{}.csv", fmt_f64(tau))
}

fn cmd_bench(a: BenchArgs) -> Result<(), Failure> {
    let base = match &a.preset {
        Some(name) => Some(config::preset(name).ok_or_else(|| {
            let names: Vec<&str> = config::PRESETS.iter().map(|p| p.0).collect();
            Failure::Usage(format!("unknown preset `{name}`; valid presets: {}", names.join(", ")))
        })?),
        None => None,
    };
    let mut s = settings(&a.common, base)?;
    if let Some(text) = &a.runs {
        s.runs = Some(parse_runs(text).map_err(|e| Failure::Usage(format!("--runs: {e}")))?);
    }
    let runs = s
        .runs
        .clone()
        .ok_or_else(|| Failure::Usage("bench needs --preset, --runs or a config with `runs`".into()))?;
    let template = s.run_config();
    let cfgs: Vec<RunConfig> = runs
        .iter()
        .map(|(name, tau)| RunConfig {
            scheme: name.clone(),
            tau: *tau,
            output: None,
            ..template.clone()
        })
        .collect();
    for c in &cfgs {
        c.validate()?;
    }
    let threads = bench_threads()?;
    let report = bench_suite(&cfgs, threads).map_err(Failure::runtime)?;
    if let Some(dir) = &s.out {
        fs::create_dir_all(dir).map_err(|e| io_failure(dir, e))?;
        for run in &report.runs {
            let path = dir.join(csv_name(&run.config.scheme, run.config.tau));
            write_csv(Some(&path), run)?;
        }
    }
    print!("{}", format_table(&report.rows));
    println!(
        "# {} runs, {} thread(s), exclusive timing: {}",
        report.rows.len(),
        report.threads,
        report.exclusive_timing
    );
    if let Some(run) = report.runs.iter().find(|r| r.failure.is_some()) {
        return Err(Failure::Runtime {
            kind: "blow-up",
            message: format!("{}: {}", run.config.scheme, run.failure.as_deref().unwrap_or("")),
        });
    }
    Ok(())
}

fn cmd_calibrate(a: CalibrateArgs) -> Result<(), Failure> {
    let s = settings(&a.common, None)?;
    let cfg = s.run_config();
    let scheme = catalog_scheme(&cfg.scheme)?;
    if !(a.target > 0.0) || !(a.horizon > 0.0) {
        return Err(Failure::Usage("target and horizon must be positive".into()));
    }
    let lat = make_lattice(cfg.n, cfg.w, cfg.seed)?;
    let opts = CalibrationOptions {
        target_ree: a.target,
        horizon: a.horizon,
        e_total: cfg.e_total,
        ..CalibrationOptions::default()
    };
    let c = calibrate_tau(&scheme, &lat, &opts).map_err(Failure::runtime)?;
    println!(
        "{} tau = {} max_ree = {} (target {}, horizon {})",
        scheme.name(),
        fmt_f64(c.tau),
        fmt_f64(c.max_ree),
        fmt_f64(a.target),
        fmt_f64(a.horizon)
    );
    Ok(())
}

fn cmd_order_check(a: OrderArgs) -> Result<(), Failure> {
    let lat = make_lattice(a.sites, a.w, a.seed)?;
    let mut out = io::stdout().lock();
    let w = |out: &mut io::StdoutLock, line: String| writeln!(out, "{line}").map_err(|e| io_failure(Path::new("<stdout>"), e));
    w(&mut out, format!("{:<9} {:>8} {:>7}  taus", "scheme", "order", "slope"))?;
    for s in catalog() {
        let taus = order_taus(&s);
        let fit = measure_order(&s, &lat, taus, a.horizon).map_err(Failure::runtime)?;
        let list: Vec<String> = taus.iter().map(|t| fmt_f64(*t)).collect();
        w(
            &mut out,
            format!("{:<9} {:>8} {:>7.3}  {}", s.name(), s.order().to_string(), fit.slope, list.join(" ")),
        )?;
    }
    Ok(())
}

fn cmd_schemes() -> Result<(), Failure> {
    let mut out = io::stdout().lock();
    for s in catalog() {
        writeln!(out, "{:<9} {:>8}  {}", s.name(), s.order().to_string(), s.stage_string())
            .map_err(|e| io_failure(Path::new("<stdout>"), e))?;
    }
    Ok(())
}
