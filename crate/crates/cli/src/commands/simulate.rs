use std::path::PathBuf;

use anyhow::Context;
use clap::Args;
use gsh_shrink::experiments::{format_amse_table, run_experiment, ExperimentConfig, Method};
use gsh_shrink::signals::TestFunction;

use super::{Invocation, OutputArgs, Outputs};
use crate::UsageError;

#[derive(Debug, Clone, Args)]
pub struct SimulateArgs {
    /// TOML experiment configuration; flags override it.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Comma-separated test functions.
    #[arg(long, value_delimiter = ',')]
    pub functions: Option<Vec<TestFunction>>,
    /// Comma-separated sample sizes (powers of two).
    #[arg(long = "n", value_delimiter = ',')]
    pub sizes: Option<Vec<usize>>,
    /// Comma-separated signal-to-noise ratios.
    #[arg(long = "snr", value_delimiter = ',')]
    pub snrs: Option<Vec<f64>>,
    /// Comma-separated methods.
    #[arg(long, value_delimiter = ',')]
    pub methods: Option<Vec<Method>>,
    /// Replications per cell.
    #[arg(long = "M")]
    pub replications: Option<usize>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Daubechies vanishing moments.
    #[arg(long)]
    pub wavelet: Option<usize>,
    /// Standard deviation of every scaled test signal.
    #[arg(long)]
    pub signal_sd: Option<f64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn resolve_config(args: &SimulateArgs) -> anyhow::Result<ExperimentConfig> {
    let mut cfg = match &args.config {
        Some(path) => {
            let text =
                std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            toml::from_str(&text).map_err(|e| UsageError(format!("{}: {e}", path.display())))?
        }
        None => ExperimentConfig::default(),
    };
    if let Some(v) = &args.functions {
        cfg.functions = v.clone();
    }
    if let Some(v) = &args.sizes {
        cfg.sizes = v.clone();
    }
    if let Some(v) = &args.snrs {
        cfg.snrs = v.clone();
    }
    if let Some(v) = &args.methods {
        cfg.methods = v.clone();
    }
    if let Some(m) = args.replications {
        cfg.replications = m;
    }
    if let Some(s) = args.seed {
        cfg.base_seed = s;
    }
    if let Some(w) = args.wavelet {
        cfg.wavelet = w;
    }
    if let Some(s) = args.signal_sd {
        cfg.signal_sd = s;
    }
    Ok(cfg)
}

pub fn run(args: &SimulateArgs, inv: &Invocation) -> anyhow::Result<()> {
    let cfg = resolve_config(args)?;
    let records = run_experiment(&cfg, inv.exec)?;
    let table = format_amse_table(&records);
    let mut out = Outputs::create(&args.output.out_dir)?;
    let csv = out.csv("amse.csv", &records)?;
    let txt = out.text("amse_table.txt", &table)?;
    print!("{table}");
    println!("wrote {} records to {} and {}", records.len(), csv.display(), txt.display());
    out.finish(inv, "simulate", &cfg, Some(cfg.base_seed), serde_json::json!({ "records": records.len() }))?;
    Ok(())
}
