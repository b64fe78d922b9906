use std::collections::BTreeMap;
use std::path::PathBuf;

use anyhow::Context;
use clap::{Args, ValueEnum};
use gsh_shrink::dwt::dyadic_level;
use gsh_shrink::experiments::{denoise_with_report, DenoiseConfig, Method};
use serde::Serialize;

use super::{Invocation, OutputArgs, Outputs};
use crate::series::{nearest_dyadic_lengths, pad_symmetric, read_series};
use crate::UsageError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Padding {
    /// Mirror the end of the series up to the next power of two.
    Symmetric,
}

#[derive(Debug, Clone, Args)]
pub struct DenoiseArgs {
    /// CSV file with a header row.
    #[arg(long)]
    pub input: PathBuf,
    /// Value column, by header name or 0-based index (default: last column).
    #[arg(long)]
    pub column: Option<String>,
    /// gsh, universal_hard, universal_soft or sure.
    #[arg(long, default_value = "gsh")]
    pub method: Method,
    /// TOML file with `wavelet` and an `[elicitation]` table; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Daubechies vanishing moments (1..=10).
    #[arg(long)]
    pub wavelet: Option<usize>,
    /// Coarsest level whose details are estimated.
    #[arg(long)]
    pub primary_level: Option<usize>,
    /// Decay exponent of the level-dependent point mass.
    #[arg(long)]
    pub gamma: Option<f64>,
    /// Elicit `t` separately at each level with enough coefficients.
    #[arg(long)]
    pub per_level_t: bool,
    /// Extend a series whose length is not a power of two.
    #[arg(long, value_enum)]
    pub pad: Option<Padding>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct SeriesRow {
    index: usize,
    y: f64,
    f_hat: f64,
}

#[derive(Serialize)]
struct CoefficientRow {
    level: usize,
    position: usize,
    empirical: f64,
    estimated: f64,
}

#[derive(Serialize)]
struct Summary {
    n: usize,
    padded_length: usize,
    method: Method,
    sigma_hat: f64,
    t: Option<f64>,
    beta_hat: Option<f64>,
    alpha_by_level: BTreeMap<usize, f64>,
    t_by_level: BTreeMap<usize, f64>,
}

fn resolve_config(args: &DenoiseArgs) -> anyhow::Result<DenoiseConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        None => DenoiseConfig::default(),
    };
    if let Some(w) = args.wavelet {
        cfg.wavelet = w;
    }
    if let Some(j0) = args.primary_level {
        cfg.elicitation.primary_level = j0;
    }
    if let Some(g) = args.gamma {
        cfg.elicitation.gamma = g;
    }
    if args.per_level_t {
        cfg.elicitation.pool_levels = false;
    }
    Ok(cfg)
}

pub fn run(args: &DenoiseArgs, inv: &Invocation) -> anyhow::Result<()> {
    let cfg = resolve_config(args)?;
    let y = read_series(&args.input, args.column.as_deref())?;
    let n = y.len();
    let padded = match (dyadic_level(n), args.pad) {
        (Some(_), _) => y.clone(),
        (None, Some(Padding::Symmetric)) => pad_symmetric(&y),
        (None, None) => {
            let (below, above) = nearest_dyadic_lengths(n);
            return Err(UsageError(format!(
                "series length {n} is not a power of two; nearest valid lengths are {below} and {above} \
                 (or pass --pad symmetric)"
            ))
            .into());
        }
    };
    let report = denoise_with_report(&padded, args.method, &cfg)?;

    let mut out = Outputs::create(&args.output.out_dir)?;
    let series = out.csv(
        "denoised.csv",
        y.iter().zip(&report.f_hat).enumerate().map(|(index, (&y, &f_hat))| SeriesRow { index, y, f_hat }),
    )?;
    let mut coefficients = Vec::new();
    for ((&level, emp), est) in report.empirical.details.iter().zip(report.estimated.details.values()) {
        for (position, (&empirical, &estimated)) in emp.iter().zip(est).enumerate() {
            coefficients.push(CoefficientRow { level, position, empirical, estimated });
        }
    }
    let coeffs = out.csv("coefficients.csv", coefficients)?;

    let h = report.hyperparams.as_ref();
    let summary = Summary {
        n,
        padded_length: padded.len(),
        method: args.method,
        sigma_hat: report.sigma_hat,
        t: h.map(|h| h.t_value),
        beta_hat: h.map(|h| h.beta_hat),
        alpha_by_level: h.map(|h| h.alpha_by_level.clone()).unwrap_or_default(),
        t_by_level: h.map(|h| h.t_by_level.clone()).unwrap_or_default(),
    };
    println!("method: {}", args.method);
    println!("n: {n} (transformed length {})", padded.len());
    println!("sigma_hat: {}", report.sigma_hat);
    match h {
        Some(h) => {
            println!("t: {} (sample kurtosis {})", h.t_value, h.beta_hat);
            println!("{:>5}  {:>22}  {:>22}", "level", "alpha", "t");
            for (j, alpha) in &h.alpha_by_level {
                println!("{j:>5}  {alpha:>22}  {:>22}", h.t_by_level[j]);
            }
        }
        None if args.method == Method::Gsh => println!("details carry no signal; shrinkage skipped"),
        None => {}
    }
    println!("wrote {} and {}", series.display(), coeffs.display());
    out.finish(inv, "denoise", cfg, None, &summary)?;
    Ok(())
}
