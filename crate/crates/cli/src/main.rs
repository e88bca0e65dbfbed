use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use condgrad::error::Error;
use condgrad_cli::config::ExperimentConfig;
use condgrad_cli::experiments::{self, CATALOG};
use condgrad_cli::output::write_outputs;
use condgrad_cli::selftest;

/// Projection-free optimization benchmark harness.
#[derive(Parser)]
#[command(name = "condgrad", version, about)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a built-in experiment by name, or a config file by path.
    Run {
        /// Experiment name (see `list`) or path to a `key = value` config.
        target: String,
        /// Random seed override.
        #[arg(long)]
        seed: Option<u64>,
        /// Iteration budget override.
        #[arg(long)]
        max_iters: Option<u64>,
        /// Stopping tolerance override.
        #[arg(long)]
        tol: Option<f64>,
        /// Output directory for traces and the summary.
        #[arg(long, default_value = "out")]
        out: PathBuf,
        /// Keep wall-clock timings in trace files (reruns then differ).
        #[arg(long)]
        timing: bool,
    },
    /// List the built-in experiments.
    List {
        /// One name per line, no descriptions.
        #[arg(long)]
        plain: bool,
    },
    /// Run the acceptance battery and print one line per criterion.
    Selftest,
}

fn main() -> ExitCode {
    match run() {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::Config(_) | Error::ContractViolation(_) | Error::Capability(_) => {
                    ExitCode::from(2)
                }
                Error::NumericFailure(_) => ExitCode::from(3),
            }
        }
    }
}

fn run() -> Result<ExitCode, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::List { plain } => {
            for (name, desc) in CATALOG {
                if plain {
                    println!("{name}");
                } else {
                    println!("{name:24} {desc}");
                }
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Run { target, seed, max_iters, tol, out, timing } => {
            let mut cfg = if std::path::Path::new(&target).is_file() {
                let text = std::fs::read_to_string(&target)
                    .map_err(|e| Error::Config(format!("reading {target}: {e}")))?;
                ExperimentConfig::parse(&text)?
            } else {
                ExperimentConfig::named(&target)
            };
            if let Some(s) = seed {
                cfg.set("run.seed", s);
            }
            if let Some(m) = max_iters {
                cfg.set("run.max_iters", m);
            }
            if let Some(t) = tol {
                cfg.set("run.tol", t);
            }
            let result = experiments::run_experiment(&cfg)?;
            let seed = cfg.get_u64("run.seed")?.unwrap_or(0);
            let files = write_outputs(&result, &out, seed, timing)?;
            for f in &files {
                println!("wrote {}", out.join(f).display());
            }
            for (k, v) in &result.summary {
                println!("{k} = {v}");
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Selftest => {
            let mut results = selftest::run_all();
            if let Ok(bin) = std::env::current_exe() {
                results.push(selftest::criterion_18(&bin));
            }
            let mut all_pass = true;
            for r in &results {
                println!("{}", r.line());
                all_pass &= r.passed();
            }
            if all_pass {
                println!("selftest: all {} criteria passed", results.len());
                Ok(ExitCode::SUCCESS)
            } else {
                Err(Error::NumericFailure("selftest criteria failed".into()))
            }
        }
    }
}
