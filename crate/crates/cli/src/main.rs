//! `netsel`: run access-network selection campaigns and analyze their traces.

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Parser, Subcommand};
use netsel_core::harness::{
    export, format_agreement_table, format_five_g_table, oracle_check, read_trace, summarize, ExportFormat,
    Experiment, ExperimentConfig, TraceWriter,
};

#[derive(Debug, Parser)]
#[command(name = "netsel", version, about = "DQN vs MADM access-network selection")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Run a campaign and write its trace.
    Run {
        #[arg(long)]
        config: PathBuf,
        #[arg(long)]
        epochs: Option<usize>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        trace: Option<PathBuf>,
        /// Save the trained agent (networks, epsilon, replay memory, RNG state).
        #[arg(long)]
        checkpoint: Option<PathBuf>,
        #[arg(long)]
        quiet: bool,
    },
    /// Interval statistics of a trace.
    Summarize {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 500)]
        interval: usize,
        #[arg(long, default_value = "csv")]
        format: ExportFormat,
        /// Write to a file instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Agreement of every method with the reward oracle.
    OracleCheck {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 500)]
        interval: usize,
    },
    /// Print the 5G selection matrix (epoch intervals by method).
    Compare {
        #[arg(long)]
        trace: PathBuf,
        #[arg(long, default_value_t = 500)]
        interval: usize,
    },
}

fn load_trace(path: &Path) -> Result<Vec<netsel_core::EpochRecord>> {
    let trace = read_trace(path)?;
    anyhow::ensure!(!trace.is_empty(), "{}: trace is empty", path.display());
    Ok(trace)
}

fn run(
    config: &Path,
    epochs: Option<usize>,
    seed: Option<u64>,
    trace: Option<PathBuf>,
    checkpoint: Option<PathBuf>,
    quiet: bool,
) -> Result<()> {
    let mut cfg = ExperimentConfig::load(config)?;
    if let Some(e) = epochs {
        cfg.epochs = e;
    }
    if let Some(s) = seed {
        cfg.seed = s;
    }
    if trace.is_some() {
        cfg.output.trace = trace;
    }
    cfg.validate()?;

    let mut writer = cfg.output.trace.as_deref().map(TraceWriter::create).transpose()?;
    let mut exp = Experiment::new(cfg.clone())?;
    let records = exp.run(|rec| match writer.as_mut() {
        Some(w) => w.append(rec),
        None => Ok(()),
    })?;

    let summaries = summarize(&records, cfg.interval_width)?;
    if let Some(path) = &cfg.output.summary {
        export(&summaries, cfg.output.format, path)?;
    }
    if let Some(path) = &checkpoint {
        exp.agent().save(path)?;
    }
    if !quiet {
        print!("{}", format_five_g_table(&summaries));
        if let Some(path) = &cfg.output.trace {
            println!("trace: {}", path.display());
        }
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Run {
            config,
            epochs,
            seed,
            trace,
            checkpoint,
            quiet,
        } => run(&config, epochs, seed, trace, checkpoint, quiet),
        Command::Summarize {
            trace,
            interval,
            format,
            out,
        } => {
            let summaries = summarize(&load_trace(&trace)?, interval)?;
            match out {
                Some(path) => export(&summaries, format, &path)?,
                None => {
                    let stdout = std::io::stdout();
                    netsel_core::harness::export::write_summaries(&summaries, format, stdout.lock())?;
                }
            }
            Ok(())
        }
        Command::OracleCheck { trace, interval } => {
            let report = oracle_check(&load_trace(&trace)?, interval)?;
            print!("{}", format_agreement_table(&report.intervals));
            println!(
                "DQN oracle agreement over {}: {:.2}%",
                report.headline_label, report.headline
            );
            Ok(())
        }
        Command::Compare { trace, interval } => {
            let summaries = summarize(&load_trace(&trace)?, interval)?;
            print!("{}", format_five_g_table(&summaries));
            Ok(())
        }
    }
}

fn main() -> ExitCode {
    match dispatch(Cli::parse()).context("netsel") {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {:#}", e);
            ExitCode::FAILURE
        }
    }
}
