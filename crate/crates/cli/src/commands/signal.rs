use clap::Args;
use gsh_shrink::numerics::SeededRng;
use gsh_shrink::signals::{make_noisy_sample, TestFunction};
use serde::Serialize;

use super::{Invocation, OutputArgs, Outputs};

#[derive(Debug, Clone, Args)]
pub struct SignalArgs {
    /// bumps, blocks, doppler or heavisine.
    #[arg(long)]
    pub function: TestFunction,
    /// Sample size (power of two).
    #[arg(long, default_value_t = 512)]
    pub n: usize,
    /// Ratio of the signal's standard deviation to `sigma`.
    #[arg(long, default_value_t = 3.0)]
    pub snr: f64,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Serialize)]
struct Row {
    index: usize,
    x: f64,
    f: f64,
    y: f64,
}

pub fn run(args: &SignalArgs, inv: &Invocation) -> anyhow::Result<()> {
    let s = make_noisy_sample(args.function, args.n, args.snr, args.sigma, SeededRng::new(args.seed, 0))?;
    let mut out = Outputs::create(&args.output.out_dir)?;
    let rows = (0..args.n).map(|i| Row { index: i, x: s.x[i], f: s.f[i], y: s.y[i] });
    let path = out.csv("signal.csv", rows)?;
    println!("wrote {}", path.display());
    let config = serde_json::json!({
        "function": args.function,
        "n": args.n,
        "snr": args.snr,
        "sigma": args.sigma,
    });
    out.finish(inv, "signal", config, Some(args.seed), serde_json::Value::Null)?;
    Ok(())
}
