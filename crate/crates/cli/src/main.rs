//! `ris-coverage`: coverage sweeps, single-point evaluation and the
//! cross-validation suite.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use ris_coverage::checks::{Status, Suite, ValidationOptions};
use ris_coverage::config::{load_config, RunConfig};
use ris_coverage::{sweep, CliError, THREADS_ENV};
use ris_coverage_core::analytic::coverage_pair;
use ris_coverage_core::mcsim::{estimate_coverage_with, ScenarioMode};

#[derive(Parser)]
#[command(name = "ris-coverage", version, about = "Coverage of RIS-aided NOMA downlinks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct Overrides {
    /// Monte Carlo trials per evaluation.
    #[arg(long)]
    trials: Option<usize>,
    /// Base seed of the random streams.
    #[arg(long)]
    seed: Option<u64>,
}

#[derive(Subcommand)]
enum Command {
    /// Run the configured parameter sweep and write the CSV.
    Sweep {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
        /// Output CSV path.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Also write a gnuplot script next to the CSV.
        #[arg(long)]
        emit_plot: bool,
    },
    /// Run every cross-check and report PASS/FAIL per check.
    Validate {
        #[command(flatten)]
        overrides: Overrides,
    },
    /// Evaluate both engines at the configured parameters.
    Point {
        config: PathBuf,
        #[command(flatten)]
        overrides: Overrides,
    },
}

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var(THREADS_ENV) else { return Ok(()) };
    let n: usize = raw.trim().parse().map_err(|_| CliError::Parse {
        path: THREADS_ENV.into(),
        line: 0,
        msg: format!("expected a worker count, got '{raw}'"),
    })?;
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::Parse { path: THREADS_ENV.into(), line: 0, msg: e.to_string() })?;
    }
    Ok(())
}

fn load(path: &Path, o: &Overrides) -> Result<RunConfig, CliError> {
    let mut cfg = load_config(path)?;
    if let Some(t) = o.trials {
        cfg.trials = t;
    }
    if let Some(s) = o.seed {
        cfg.seed = s;
    }
    Ok(cfg)
}

fn point(cfg: &RunConfig) -> Result<(), CliError> {
    let p = &cfg.params;
    println!("transmit SNR {:.3} dB, r_c = {} m, {} trials, seed {}", p.snr_db(), p.r_c, cfg.trials, cfg.seed);
    if cfg.sweep.engines.analytic && cfg.sweep.modes.contains(&ScenarioMode::RisNoma) {
        let a = coverage_pair(p, &cfg.analytic)?;
        println!(
            "ris_noma analytic ({}): P_t = {:.6}, P_c = {:.6}",
            cfg.analytic.cris_mode.as_str(),
            a.p_typical,
            a.p_connected
        );
    }
    if cfg.sweep.engines.montecarlo {
        for &mode in &cfg.sweep.modes {
            let (t, c) = estimate_coverage_with(p, mode, cfg.trials, cfg.seed, cfg.expectations)?;
            println!(
                "{mode} monte carlo: P_t = {:.6} +- {:.6}, P_c = {:.6} +- {:.6}",
                t.probability, t.ci_halfwidth, c.probability, c.ci_halfwidth
            );
        }
    }
    Ok(())
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    configure_threads()?;
    match cli.command {
        Command::Sweep { config, overrides, out, emit_plot } => {
            let mut cfg = load(&config, &overrides)?;
            if let Some(o) = out {
                cfg.output = o;
            }
            cfg.emit_plot |= emit_plot;
            let rows = sweep::run_sweep(&cfg);
            sweep::write_outputs(&cfg, &rows)?;
            log::info!("wrote {}", cfg.output.display());
            Ok(ExitCode::SUCCESS)
        }
        Command::Point { config, overrides } => {
            point(&load(&config, &overrides)?)?;
            Ok(ExitCode::SUCCESS)
        }
        Command::Validate { overrides } => {
            let mut opts = ValidationOptions::default();
            if let Some(t) = overrides.trials {
                opts.trials = t;
            }
            if let Some(s) = overrides.seed {
                opts.seed = s;
            }
            let results = Suite::new(opts).run_all(|r| println!("{r}"));
            let failed = results.iter().filter(|r| r.status == Status::Fail).count();
            println!("{} checks, {failed} failed", results.len());
            Ok(if failed == 0 { ExitCode::SUCCESS } else { ExitCode::from(3) })
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
