//! Command-line front end for `gsh-shrink`.
//!
//! Every command writes its CSV outputs and a `manifest.json` into
//! `--out-dir`. `replay --manifest <file>` re-runs the recorded command line
//! from the recorded working directory and reproduces the data files byte
//! for byte.
//!
//! Exit codes: 0 success, 2 usage or configuration error, 3 numerical
//! failure.

mod commands;
mod manifest;
mod series;

use std::ffi::OsString;
use std::fmt;
use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{bail, Context};
use clap::{Parser, Subcommand};
use gsh_shrink::Execution;

pub use commands::{
    DenoiseArgs, OutputArgs, Padding, PriorArgs, ReplayArgs, RiskArgs, SignalArgs, SimulateArgs,
};
pub use manifest::RunManifest;
pub use series::{nearest_dyadic_lengths, pad_symmetric, read_series};

pub const EXIT_USAGE: u8 = 2;
pub const EXIT_NUMERICAL: u8 = 3;

#[derive(Debug, Parser)]
#[command(name = "gsh-shrink", version, about = "Bayesian wavelet shrinkage under the GSH prior")]
pub struct Cli {
    /// Worker threads for parallel work (default: number of processors).
    #[arg(long, global = true, env = "GSH_SHRINK_JOBS")]
    pub jobs: Option<usize>,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Denoise a series read from CSV.
    Denoise(DenoiseArgs),
    /// Replicated AMSE study over test functions, sample sizes and SNRs.
    Simulate(SimulateArgs),
    /// Bias, variance and risk of one shrinkage rule, plus its Bayes risk.
    Risk(RiskArgs),
    /// GSH density and CDF on a grid, and the kurtosis.
    Prior(PriorArgs),
    /// Write a noisy Donoho-Johnstone test signal.
    Signal(SignalArgs),
    /// Re-run the command recorded in a manifest.
    Replay(ReplayArgs),
}

impl Command {
    fn out_dir_mut(&mut self) -> Option<&mut PathBuf> {
        match self {
            Command::Denoise(a) => Some(&mut a.output.out_dir),
            Command::Simulate(a) => Some(&mut a.output.out_dir),
            Command::Risk(a) => Some(&mut a.output.out_dir),
            Command::Prior(a) => Some(&mut a.output.out_dir),
            Command::Signal(a) => Some(&mut a.output.out_dir),
            Command::Replay(_) => None,
        }
    }
}

/// Marks errors caused by the user's input rather than by the numerics.
#[derive(Debug)]
pub struct UsageError(pub String);

impl fmt::Display for UsageError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

/// Exit code for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> u8 {
    err.chain()
        .find_map(|cause| cause.downcast_ref::<gsh_shrink::Error>())
        .map_or(EXIT_USAGE, library_exit_code)
}

fn library_exit_code(err: &gsh_shrink::Error) -> u8 {
    use gsh_shrink::Error;
    match err {
        Error::NumericalDomain { .. } | Error::DegenerateInput(_) => EXIT_NUMERICAL,
        Error::Cell { source, .. } => library_exit_code(source),
        Error::InvalidArgument(_) | Error::Config(_) => EXIT_USAGE,
    }
}

/// Parses `args` (program name first), runs the command and maps the outcome
/// to an exit code.
pub fn main_with_args<I, T>(args: I) -> ExitCode
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let args: Vec<OsString> = args.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(e.exit_code() as u8);
        }
    };
    let argv = args.iter().skip(1).map(|a| a.to_string_lossy().into_owned()).collect();
    match run(cli, argv) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}

/// Runs a parsed command line. `argv` is recorded in the manifest.
pub fn run(cli: Cli, argv: Vec<String>) -> anyhow::Result<()> {
    let exec = configure_jobs(cli.jobs)?;
    let inv = commands::Invocation {
        argv,
        working_directory: std::env::current_dir().context("reading the working directory")?,
        exec,
        jobs: cli.jobs,
    };
    match cli.command {
        Command::Denoise(a) => commands::denoise(&a, &inv),
        Command::Simulate(a) => commands::simulate(&a, &inv),
        Command::Risk(a) => commands::risk(&a, &inv),
        Command::Prior(a) => commands::prior(&a, &inv),
        Command::Signal(a) => commands::signal(&a, &inv),
        Command::Replay(a) => replay(&a, cli.jobs),
    }
}

fn configure_jobs(jobs: Option<usize>) -> anyhow::Result<Execution> {
    match jobs {
        Some(0) => Err(UsageError("--jobs must be at least 1".into()).into()),
        Some(1) => Ok(Execution::Sequential),
        Some(n) => {
            // a second build in the same process (replay) keeps the first pool
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
            Ok(Execution::Parallel)
        }
        None => Ok(Execution::Parallel),
    }
}

fn replay(args: &ReplayArgs, jobs: Option<usize>) -> anyhow::Result<()> {
    let manifest = RunManifest::load(&args.manifest)?;
    let override_dir = match &args.out_dir {
        Some(d) => Some(std::path::absolute(d).context("resolving --out-dir")?),
        None => None,
    };
    let mut full = vec!["gsh-shrink".to_string()];
    full.extend(manifest.argv.iter().cloned());
    let mut cli = Cli::try_parse_from(&full)
        .map_err(|e| UsageError(format!("manifest command line does not parse: {e}")))?;
    if matches!(cli.command, Command::Replay(_)) {
        bail!(UsageError("a manifest cannot record a replay".into()));
    }
    std::env::set_current_dir(&manifest.working_directory).with_context(|| {
        format!("entering the recorded working directory {}", manifest.working_directory.display())
    })?;
    let mut argv = manifest.argv.clone();
    if let Some(dir) = override_dir {
        if let Some(slot) = cli.command.out_dir_mut() {
            *slot = dir.clone();
        }
        argv = with_out_dir(&argv, &dir);
    }
    cli.jobs = jobs.or(cli.jobs);
    run(cli, argv)
}

/// `argv` with any `--out-dir` replaced by `dir`.
fn with_out_dir(argv: &[String], dir: &std::path::Path) -> Vec<String> {
    let mut out = Vec::with_capacity(argv.len() + 2);
    let mut skip = false;
    for a in argv {
        if skip {
            skip = false;
        } else if a == "--out-dir" {
            skip = true;
        } else if !a.starts_with("--out-dir=") {
            out.push(a.clone());
        }
    }
    out.push("--out-dir".into());
    out.push(dir.display().to_string());
    out
}
