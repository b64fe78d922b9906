use clap::Args;
use gsh_shrink::gsh_prior::{GshCdf, GshParams, ShrinkagePrior};
use gsh_shrink::numerics::SeededRng;
use gsh_shrink::risk_analysis::{
    bayes_risk_with, default_moment_quadrature, risk_curve_with, BayesRiskMethod,
};
use gsh_shrink::shrinkage::ShrinkageRule;
use serde::Serialize;

use super::{linspace, Invocation, OutputArgs, Outputs};
use crate::UsageError;

#[derive(Debug, Clone, Args)]
pub struct RiskArgs {
    /// GSH shape parameter (> -pi).
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    /// Point-mass weight at zero.
    #[arg(long, default_value_t = 0.9)]
    pub alpha: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Noise standard deviation.
    #[arg(long, default_value_t = 1.0)]
    pub sigma: f64,
    #[arg(long, default_value_t = -8.0, allow_negative_numbers = true)]
    pub theta_min: f64,
    #[arg(long, default_value_t = 8.0, allow_negative_numbers = true)]
    pub theta_max: f64,
    /// Grid points, ends included.
    #[arg(long, default_value_t = 321)]
    pub points: usize,
    /// Draws for the Monte Carlo cross-check of the Bayes risk; 0 skips it.
    #[arg(long, default_value_t = 100_000)]
    pub mc_draws: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct PriorArgs {
    /// GSH shape parameter (> -pi).
    #[arg(long, allow_negative_numbers = true)]
    pub t: f64,
    #[arg(long, default_value_t = 1.0)]
    pub tau: f64,
    /// Lower grid end (default: where the tail mass drops below 1e-12).
    #[arg(long, allow_negative_numbers = true)]
    pub theta_min: Option<f64>,
    #[arg(long, allow_negative_numbers = true)]
    pub theta_max: Option<f64>,
    /// Grid points (default: enough to resolve the density's peak).
    #[arg(long)]
    pub points: Option<usize>,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn check_grid(lo: f64, hi: f64, points: usize) -> anyhow::Result<()> {
    if !(lo.is_finite() && hi.is_finite() && lo < hi) {
        return Err(UsageError(format!("grid bounds must satisfy min < max, got [{lo}, {hi}]")).into());
    }
    if points < 2 {
        return Err(UsageError(format!("a grid needs at least 2 points, got {points}")).into());
    }
    Ok(())
}

#[derive(Serialize)]
struct RiskRow {
    theta: f64,
    bias_sq: f64,
    variance: f64,
    risk: f64,
}

#[derive(Serialize)]
struct RuleRow {
    d: f64,
    delta: f64,
}

#[derive(Serialize)]
struct RiskConfig {
    t: f64,
    alpha: f64,
    tau: f64,
    sigma: f64,
    theta_min: f64,
    theta_max: f64,
    points: usize,
    mc_draws: usize,
}

#[derive(Serialize)]
struct RiskSummary {
    bayes_risk_quadrature: f64,
    bayes_risk_monte_carlo: Option<f64>,
    monte_carlo_std_error: Option<f64>,
    max_risk: f64,
    argmax_theta: f64,
}

pub fn risk(args: &RiskArgs, inv: &Invocation) -> anyhow::Result<()> {
    check_grid(args.theta_min, args.theta_max, args.points)?;
    let gsh = GshParams::new(args.tau, args.t)?;
    let rule = ShrinkageRule::new(ShrinkagePrior::new(args.alpha, gsh)?, args.sigma)?;
    let grid = linspace(args.theta_min, args.theta_max, args.points);
    let moments = default_moment_quadrature();
    let curve = risk_curve_with(&grid, &rule, &moments, inv.exec)?;
    let deltas = grid.iter().map(|&d| rule.shrink(d)).collect::<Result<Vec<_>, _>>()?;

    let rng = SeededRng::new(args.seed, 0);
    let quad = bayes_risk_with(&rule, BayesRiskMethod::Quadrature, 0, rng, &moments, 1, inv.exec)?;
    let mc = if args.mc_draws > 0 {
        Some(bayes_risk_with(&rule, BayesRiskMethod::MonteCarlo, args.mc_draws, rng, &moments, 1, inv.exec)?)
    } else {
        None
    };

    let mut out = Outputs::create(&args.output.out_dir)?;
    let risk_path = out.csv(
        "risk.csv",
        (0..grid.len()).map(|i| RiskRow {
            theta: grid[i],
            bias_sq: curve.squared_bias[i],
            variance: curve.variance[i],
            risk: curve.classical_risk[i],
        }),
    )?;
    let rule_path = out.csv("rule.csv", grid.iter().zip(&deltas).map(|(&d, &delta)| RuleRow { d, delta }))?;

    let (argmax, max_risk) = curve
        .theta_grid
        .iter()
        .zip(&curve.classical_risk)
        .fold((f64::NAN, f64::NEG_INFINITY), |acc, (&th, &r)| if r > acc.1 { (th, r) } else { acc });
    println!("t: {}  alpha: {}  tau: {}  sigma: {}", args.t, args.alpha, args.tau, args.sigma);
    println!("kurtosis: {}", gsh.kurtosis());
    println!("max risk on grid: {max_risk} at theta = {argmax}");
    println!("bayes risk (quadrature): {}", quad.value);
    if let Some(mc) = &mc {
        println!("bayes risk (monte carlo, {} draws): {} +- {}", args.mc_draws, mc.value, mc.std_error);
    }
    println!("wrote {} and {}", risk_path.display(), rule_path.display());
    let config = RiskConfig {
        t: args.t,
        alpha: args.alpha,
        tau: args.tau,
        sigma: args.sigma,
        theta_min: args.theta_min,
        theta_max: args.theta_max,
        points: args.points,
        mc_draws: args.mc_draws,
    };
    let summary = RiskSummary {
        bayes_risk_quadrature: quad.value,
        bayes_risk_monte_carlo: mc.map(|m| m.value),
        monte_carlo_std_error: mc.map(|m| m.std_error),
        max_risk,
        argmax_theta: argmax,
    };
    out.finish(inv, "risk", &config, (args.mc_draws > 0).then_some(args.seed), &summary)?;
    Ok(())
}

/// Tail mass left outside the default prior grid, per side.
const PRIOR_GRID_TAIL: f64 = 1e-12;
const MIN_PRIOR_POINTS: usize = 2001;
const MAX_PRIOR_POINTS: usize = 400_001;

/// Symmetric grid holding all but `2e-12` of the mass, with a step of at most
/// a tenth of the pole distance.
fn default_prior_grid(g: &GshParams) -> (f64, f64, usize) {
    let mut half = g.tau();
    while g.upper_tail(half) > PRIOR_GRID_TAIL {
        half *= 2.0;
    }
    let step = g.pole_distance() / 10.0;
    let points = ((2.0 * half / step).ceil() as usize + 1).clamp(MIN_PRIOR_POINTS, MAX_PRIOR_POINTS);
    (-half, half, points)
}

#[derive(Serialize)]
struct DensityRow {
    theta: f64,
    density: f64,
    cdf: f64,
}

pub fn prior(args: &PriorArgs, inv: &Invocation) -> anyhow::Result<()> {
    let g = GshParams::new(args.tau, args.t)?;
    let (auto_lo, auto_hi, auto_points) = default_prior_grid(&g);
    let lo = args.theta_min.unwrap_or(auto_lo);
    let hi = args.theta_max.unwrap_or(auto_hi);
    let points = args.points.unwrap_or(auto_points);
    check_grid(lo, hi, points)?;
    let grid = linspace(lo, hi, points);
    let cdf = GshCdf::new(&g);
    let rows: Vec<DensityRow> = grid
        .iter()
        .map(|&theta| DensityRow { theta, density: g.density(theta), cdf: cdf.cdf(theta) })
        .collect();
    let mass: f64 =
        rows.windows(2).map(|w| 0.5 * (w[1].theta - w[0].theta) * (w[0].density + w[1].density)).sum();

    let mut out = Outputs::create(&args.output.out_dir)?;
    let path = out.csv("density.csv", &rows)?;
    println!("t: {}  tau: {}", args.t, args.tau);
    println!("kurtosis: {}", g.kurtosis());
    println!("constants: a = {}  c1 = {}  c2 = {}", g.a(), g.c1(), g.c2());
    println!("grid: [{lo}, {hi}] with {points} points, trapezoid mass {mass}");
    println!("wrote {}", path.display());
    let config = serde_json::json!({
        "t": args.t,
        "tau": args.tau,
        "theta_min": lo,
        "theta_max": hi,
        "points": points,
    });
    let summary = serde_json::json!({
        "kurtosis": g.kurtosis(),
        "a": g.a(),
        "c1": g.c1(),
        "c2": g.c2(),
        "trapezoid_mass": mass,
    });
    out.finish(inv, "prior", config, None, summary)?;
    Ok(())
}
