//! `jpdprof`: profile the joint distribution of a discrete Bayesian network.
//!
//! Every command writes its artifacts (CSV and JSON) plus `manifest.json`
//! into `--out`. Exit codes: 0 success, 1 internal or I/O failure, 2 input
//! error, 3 enumeration cap exceeded, 4 truncated search.

use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

/// `println!` that tolerates a closed stdout (e.g. piped into `head`), so the
/// artifacts and manifest still get written.
macro_rules! say {
    ($($t:tt)*) => {{
        use std::io::Write as _;
        let _ = writeln!(std::io::stdout(), $($t)*);
    }};
}

mod commands;
mod input;
mod output;

use commands::{AnalyzeArgs, CltArgs, FitArgs, GenerateArgs, SampleArgs, ThresholdArgs, TopkArgs};

#[derive(Debug, Parser)]
#[command(name = "jpdprof", version, about = "Profile the joint probability distribution of a Bayesian network")]
struct Cli {
    /// Worker threads; 0 uses one per core. Results do not depend on it.
    #[arg(long, global = true, default_value_t = 0)]
    threads: usize,
    /// Output directory for artifacts and the run manifest.
    #[arg(long, global = true, default_value = "jpdprof-out")]
    out: PathBuf,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Moments, Liapounov ratio, theoretical curves, exact profile and fits.
    Analyze(AnalyzeArgs),
    /// Draw states uniformly and compare ln p with the theoretical law.
    Sample(SampleArgs),
    /// Fit the normal model of ln p from enumeration or samples.
    Fit(FitArgs),
    /// Solve for the probability below which states carry a given mass.
    Threshold(ThresholdArgs),
    /// List the most probable states best-first.
    Topk(TopkArgs),
    /// Write a generated network in the native format.
    Generate(GenerateArgs),
    /// Report the Liapounov ratio and per-variable log-moments.
    CheckClt(CltArgs),
}

#[derive(Debug)]
pub struct CliError {
    code: u8,
    message: String,
}

impl CliError {
    pub fn failed(msg: impl Into<String>) -> Self {
        Self { code: 1, message: msg.into() }
    }

    pub fn io(msg: impl Into<String>) -> Self {
        Self::failed(msg)
    }

    pub fn input(msg: impl Into<String>) -> Self {
        Self { code: 2, message: msg.into() }
    }

    pub fn cap(msg: impl Into<String>) -> Self {
        Self { code: 3, message: msg.into() }
    }

    pub fn truncated(msg: impl Into<String>) -> Self {
        Self { code: 4, message: msg.into() }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

#[cfg(feature = "parallel")]
fn configure_threads(n: usize) -> Result<(), CliError> {
    if n > 0 {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global()
            .map_err(|e| CliError::failed(format!("cannot start thread pool: {e}")))?;
    }
    Ok(())
}

#[cfg(not(feature = "parallel"))]
fn configure_threads(n: usize) -> Result<(), CliError> {
    if n > 1 {
        eprintln!("note: built without the `parallel` feature; --threads {n} ignored");
    }
    Ok(())
}

pub fn current_threads() -> usize {
    #[cfg(feature = "parallel")]
    {
        rayon::current_num_threads()
    }
    #[cfg(not(feature = "parallel"))]
    {
        1
    }
}

fn run(cli: Cli) -> Result<(), CliError> {
    configure_threads(cli.threads)?;
    let out = &cli.out;
    match &cli.command {
        Command::Analyze(a) => commands::analyze(a, out),
        Command::Sample(a) => commands::sample(a, out),
        Command::Fit(a) => commands::fit(a, out),
        Command::Threshold(a) => commands::threshold(a, out),
        Command::Topk(a) => commands::topk(a, out),
        Command::Generate(a) => commands::generate(a, out),
        Command::CheckClt(a) => commands::check_clt(a, out),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
