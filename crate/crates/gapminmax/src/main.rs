use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand};
use gapminmax::config::{ExperimentConfig, Format};
use gapminmax::report::{write_checks, write_rows};
use gapminmax::run::{hardy_reports, pollution_reports, run, verify_all, with_jobs};

/// Gap eigenvalues of block operators by the Schur-complement min-max
/// principle.
#[derive(Parser)]
#[command(name = "gapminmax", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gap levels λ1..λ_kmax with multiplicities and oracle errors.
    Spectrum(Common),
    /// Factorization, extension, inverse, Krein, sandwich and Hardy checks.
    Verify(Common),
    /// Gap levels over the config's grid list.
    Converge(Common),
    /// Hardy surrogate: lowest eigenvalue of the pencil at E = 0 (dirac only).
    Hardy(Common),
    /// Drift of λ1 against drift of dense eigenvalues in (-0.5, 0.5) (dirac only).
    Pollution(Common),
}

#[derive(Args)]
struct Common {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Output file; overrides the config. Defaults to stdout.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Output format; overrides the config.
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Suppress the summary on stderr.
    #[arg(long)]
    quiet: bool,
    /// Worker threads; defaults to one per core.
    #[arg(long)]
    jobs: Option<usize>,
}

fn open_out(path: Option<&Path>) -> anyhow::Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(BufWriter::new(File::create(p).with_context(|| format!("creating {}", p.display()))?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

fn execute(cli: Cli) -> anyhow::Result<bool> {
    let (kind, common) = match &cli.command {
        Command::Spectrum(c) => ("spectrum", c),
        Command::Verify(c) => ("verify", c),
        Command::Converge(c) => ("converge", c),
        Command::Hardy(c) => ("hardy", c),
        Command::Pollution(c) => ("pollution", c),
    };
    if common.jobs == Some(0) {
        bail!("--jobs must be at least 1");
    }
    let mut config = ExperimentConfig::load(&common.config)?;
    if let Some(out) = &common.out {
        config.out = Some(out.clone());
    }
    if let Some(f) = common.format {
        config.format = f;
    }
    let mut out = open_out(config.out.as_deref())?;
    let (total, failed) = match kind {
        "spectrum" | "converge" => {
            if kind == "converge" && config.grids.as_ref().map_or(true, |g| g.len() < 2) {
                bail!("converge needs a grids list with at least two sizes");
            }
            let rows = with_jobs(common.jobs, || run(&config))??;
            write_rows(&mut out, config.format, &config, &rows)?;
            (rows.len(), rows.iter().filter(|r| !r.passed()).count())
        }
        _ => {
            let checks = with_jobs(common.jobs, || match kind {
                "verify" => verify_all(&config),
                "hardy" => hardy_reports(&config),
                _ => pollution_reports(&config),
            })??;
            write_checks(&mut out, config.format, &config, &checks)?;
            (checks.len(), checks.iter().filter(|c| !c.pass).count())
        }
    };
    out.flush()?;
    if !common.quiet {
        eprintln!("{kind}: {total} rows, {failed} failed");
    }
    Ok(failed == 0)
}

fn main() -> ExitCode {
    match execute(Cli::parse()) {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
