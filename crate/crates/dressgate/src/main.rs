use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use dressgate::config::RunConfig;
use dressgate::run::{execute, RunError, RunOptions};

/// Runs a reflection, gate-error, oracle-check or figure-sweep scenario
/// described by a TOML config and writes CSV plus metadata.
#[derive(Debug, Parser)]
#[command(name = "dressgate", version)]
struct Cli {
    /// Scenario config file (TOML).
    #[arg(long)]
    config: PathBuf,
    /// Output directory.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads, all cores when omitted.
    #[arg(long)]
    threads: Option<usize>,
    /// Overwrite existing outputs.
    #[arg(long)]
    force: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let config = match RunConfig::load(&cli.config) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {}: {e}", cli.config.display());
            return ExitCode::from(2);
        }
    };
    let options = RunOptions { out_dir: cli.out, threads: cli.threads, force: cli.force };
    match execute(&config, &options) {
        Ok(report) => {
            let mut out = std::io::stdout().lock();
            let _ = report
                .summary
                .iter()
                .try_for_each(|line| writeln!(out, "{line}"))
                .and_then(|()| report.files.iter().try_for_each(|f| writeln!(out, "wrote {}", f.display())));
            if report.passed {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(3)
            }
        }
        Err(e @ (RunError::Config(_) | RunError::Exists(_))) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
