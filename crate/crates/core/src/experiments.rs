//! Denoising pipeline, thresholding baselines and the replicated AMSE study.

use std::collections::BTreeMap;
use std::fmt::{self, Write as _};
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::dwt::{daubechies_filter, dyadic_level, forward, inverse, WaveletDecomposition};
use crate::elicitation::{elicit_all, estimate_sigma, ElicitationConfig, ElicitedHyperparams};
use crate::error::{invalid, Error, Result};
use crate::exec::Execution;
use crate::numerics::{mix64, SeededRng};
use crate::shrinkage::{shrink_vector, ShrinkageRule};
use crate::signals::{make_noisy_sample, TestFunction};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Gsh,
    UniversalHard,
    UniversalSoft,
    Sure,
}

impl Method {
    pub const ALL: [Method; 4] = [Method::Gsh, Method::UniversalHard, Method::UniversalSoft, Method::Sure];

    pub fn name(self) -> &'static str {
        match self {
            Method::Gsh => "gsh",
            Method::UniversalHard => "universal_hard",
            Method::UniversalSoft => "universal_soft",
            Method::Sure => "sure",
        }
    }

    /// Row label in AMSE tables.
    pub fn label(self) -> &'static str {
        match self {
            Method::Gsh => "GSH rule",
            Method::UniversalHard => "Univ (hard)",
            Method::UniversalSoft => "Univ (soft)",
            Method::Sure => "SURE",
        }
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Method::ALL.into_iter().find(|m| m.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
            invalid(format!(
                "unknown method {s:?}; expected one of gsh, universal_hard, universal_soft, sure"
            ))
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ThresholdMode {
    Hard,
    Soft,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DenoiseConfig {
    /// Daubechies vanishing moments.
    pub wavelet: usize,
    pub elicitation: ElicitationConfig,
}

impl Default for DenoiseConfig {
    fn default() -> Self {
        Self { wavelet: 10, elicitation: ElicitationConfig::default() }
    }
}

/// Mean squared componentwise difference.
pub fn mse(f_hat: &[f64], f: &[f64]) -> Result<f64> {
    if f_hat.len() != f.len() {
        return Err(invalid(format!("length mismatch: {} estimates for {} values", f_hat.len(), f.len())));
    }
    if f.is_empty() {
        return Err(invalid("mse of empty vectors"));
    }
    Ok(f_hat.iter().zip(f).map(|(a, b)| (a - b).powi(2)).sum::<f64>() / f.len() as f64)
}

fn soft(d: f64, lambda: f64) -> f64 {
    d.signum() * (d.abs() - lambda).max(0.0)
}

/// Thresholds at `sigma * sqrt(2 ln n)`.
pub fn universal_threshold(coeffs: &[f64], sigma: f64, n: usize, mode: ThresholdMode) -> Vec<f64> {
    let lambda = sigma * (2.0 * (n.max(1) as f64).ln()).sqrt();
    coeffs
        .iter()
        .map(|&d| match mode {
            ThresholdMode::Hard => {
                if d.abs() > lambda {
                    d
                } else {
                    0.0
                }
            }
            ThresholdMode::Soft => soft(d, lambda),
        })
        .collect()
}

/// Soft threshold (in units of `sigma`) minimizing Stein's unbiased risk
/// estimate for one level, capped at `sqrt(2 ln n)`.
pub fn sure_lambda(level_coeffs: &[f64], sigma: f64) -> f64 {
    let n = level_coeffs.len();
    if n == 0 || sigma.is_nan() || sigma <= 0.0 {
        return 0.0;
    }
    let mut sq: Vec<f64> = level_coeffs.iter().map(|d| (d / sigma).powi(2)).collect();
    sq.sort_by(f64::total_cmp);
    let nf = n as f64;
    // lambda = 0: every coefficient kept, risk = n - 2 #{x = 0}
    let zeros = sq.iter().take_while(|&&v| v == 0.0).count();
    let mut best = (nf - 2.0 * zeros as f64, 0.0);
    let mut cum = 0.0;
    for (i, &a) in sq.iter().enumerate() {
        cum += a;
        let k = (i + 1) as f64;
        let risk = nf - 2.0 * k + cum + (nf - k) * a;
        if risk < best.0 {
            best = (risk, a.sqrt());
        }
    }
    best.1.min((2.0 * nf.ln()).sqrt())
}

/// Soft thresholding at the SURE-optimal level threshold.
pub fn sure_threshold(level_coeffs: &[f64], sigma: f64) -> Vec<f64> {
    let lambda = sure_lambda(level_coeffs, sigma) * sigma.max(0.0);
    level_coeffs.iter().map(|&d| soft(d, lambda)).collect()
}

#[derive(Debug, Clone)]
pub struct DenoiseReport {
    pub method: Method,
    pub f_hat: Vec<f64>,
    pub empirical: WaveletDecomposition,
    pub estimated: WaveletDecomposition,
    pub sigma_hat: f64,
    /// Present for the GSH rule unless the details were degenerate.
    pub hyperparams: Option<ElicitedHyperparams>,
}

pub fn denoise(y: &[f64], method: Method, cfg: &DenoiseConfig) -> Result<Vec<f64>> {
    denoise_with_report(y, method, cfg).map(|r| r.f_hat)
}

/// Forward transform, detail-level estimation, inverse transform. Scaling
/// coefficients pass through untouched.
pub fn denoise_with_report(y: &[f64], method: Method, cfg: &DenoiseConfig) -> Result<DenoiseReport> {
    cfg.elicitation.validate()?;
    if let Some(bad) = y.iter().find(|v| !v.is_finite()) {
        return Err(invalid(format!("observations must be finite, found {bad}")));
    }
    let filter = daubechies_filter(cfg.wavelet)?;
    let empirical = forward(y, &filter, cfg.elicitation.primary_level)?;
    let finest = empirical.finest_level().ok_or_else(|| invalid("signal too short for the primary level"))?;
    let sigma_hat = estimate_sigma(&empirical.details[&finest])?;
    let (flat, levels) = empirical.flatten_details();

    let mut hyperparams = None;
    let estimated_flat = match method {
        Method::UniversalHard => universal_threshold(&flat, sigma_hat, y.len(), ThresholdMode::Hard),
        Method::UniversalSoft => universal_threshold(&flat, sigma_hat, y.len(), ThresholdMode::Soft),
        Method::Sure => empirical.details.values().flat_map(|d| sure_threshold(d, sigma_hat)).collect(),
        Method::Gsh => match elicit_all(&empirical, &cfg.elicitation) {
            Ok(h) if sigma_hat > 0.0 => {
                let rules = empirical
                    .details
                    .keys()
                    .map(|&j| Ok((j, ShrinkageRule::new(h.prior_for_level(j)?, sigma_hat)?)))
                    .collect::<Result<BTreeMap<_, _>>>()?;
                let out = shrink_vector(&flat, &rules, &levels)?;
                hyperparams = Some(h);
                out
            }
            // no noise at the finest level: nothing to shrink against
            Ok(_) => flat.clone(),
            // details are rounding noise around a constant
            Err(Error::DegenerateInput(_)) => vec![0.0; flat.len()],
            Err(e) => return Err(e),
        },
    };
    let estimated = empirical.with_flat_details(&estimated_flat)?;
    let f_hat = inverse(&estimated)?;
    Ok(DenoiseReport { method, f_hat, empirical, estimated, sigma_hat, hyperparams })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub functions: Vec<TestFunction>,
    pub sizes: Vec<usize>,
    pub snrs: Vec<f64>,
    pub replications: usize,
    pub methods: Vec<Method>,
    pub base_seed: u64,
    pub elicitation: ElicitationConfig,
    pub wavelet: usize,
    /// Standard deviation of every scaled test signal; the noise level of a
    /// cell is `signal_sd / snr`.
    pub signal_sd: f64,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            functions: TestFunction::ALL.to_vec(),
            sizes: vec![512, 1024, 2048],
            snrs: vec![3.0, 5.0, 7.0],
            replications: 20,
            methods: Method::ALL.to_vec(),
            base_seed: 20_240_601,
            elicitation: ElicitationConfig::default(),
            wavelet: 10,
            signal_sd: 7.0,
        }
    }
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        let cfg_err = |field: &str, msg: String| Err(Error::Config(format!("{field}: {msg}")));
        if self.functions.is_empty() {
            return cfg_err("functions", "must name at least one test function".into());
        }
        if self.methods.is_empty() {
            return cfg_err("methods", "must name at least one method".into());
        }
        if self.sizes.is_empty() {
            return cfg_err("sizes", "must list at least one sample size".into());
        }
        for &n in &self.sizes {
            match dyadic_level(n) {
                None => return cfg_err("sizes", format!("{n} is not a power of two")),
                Some(levels) if levels <= self.elicitation.primary_level => {
                    return cfg_err(
                        "sizes",
                        format!(
                            "{n} leaves no detail levels above primary level {}",
                            self.elicitation.primary_level
                        ),
                    )
                }
                _ => {}
            }
        }
        if self.snrs.is_empty() {
            return cfg_err("snrs", "must list at least one SNR".into());
        }
        if let Some(s) = self.snrs.iter().find(|s| !(**s > 0.0 && s.is_finite())) {
            return cfg_err("snrs", format!("{s} is not a positive finite ratio"));
        }
        if self.replications == 0 {
            return cfg_err("replications", "must be at least 1".into());
        }
        if !(1..=10).contains(&self.wavelet) {
            return cfg_err("wavelet", format!("{} is outside 1..=10", self.wavelet));
        }
        if !(self.signal_sd > 0.0 && self.signal_sd.is_finite()) {
            return cfg_err("signal_sd", format!("{} must be positive", self.signal_sd));
        }
        self.elicitation.validate().map_err(|e| Error::Config(format!("elicitation: {e}")))
    }

    fn denoise_config(&self) -> DenoiseConfig {
        DenoiseConfig { wavelet: self.wavelet, elicitation: self.elicitation }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AmseRecord {
    pub function: TestFunction,
    pub n: usize,
    pub snr: f64,
    pub method: Method,
    pub amse: f64,
    #[serde(rename = "std_error")]
    pub amse_std_error: f64,
    #[serde(rename = "M")]
    pub replications: usize,
    pub seed: u64,
}

/// Noise stream of replication `r` in a cell; independent of which other
/// cells or methods are run.
pub fn replication_stream(function: TestFunction, n: usize, snr: f64, r: usize) -> u64 {
    let mut h = mix64(function as u64 + 1);
    h = mix64(h ^ n as u64);
    h = mix64(h ^ snr.to_bits());
    mix64(h ^ r as u64)
}

#[derive(Debug, Clone, Copy)]
struct Cell {
    function: TestFunction,
    n: usize,
    snr: f64,
}

impl fmt::Display for Cell {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} n={} snr={}", self.function, self.n, self.snr)
    }
}

/// Runs every cell for `cfg.replications` paired replications. Records
/// come out in `functions x sizes x snrs x methods` order.
pub fn run_experiment(cfg: &ExperimentConfig, exec: Execution) -> Result<Vec<AmseRecord>> {
    cfg.validate()?;
    let denoise_cfg = cfg.denoise_config();
    let mut cells = Vec::new();
    for &function in &cfg.functions {
        for &n in &cfg.sizes {
            for &snr in &cfg.snrs {
                cells.push(Cell { function, n, snr });
            }
        }
    }
    let jobs: Vec<(usize, usize)> =
        (0..cells.len()).flat_map(|c| (0..cfg.replications).map(move |r| (c, r))).collect();
    let errors = exec.try_map(&jobs, |&(c, r)| {
        let cell = cells[c];
        replicate(cfg, &denoise_cfg, cell, r)
            .map_err(|e| Error::Cell { cell: format!("{cell} replication {r}"), source: Box::new(e) })
    })?;

    let m = cfg.replications;
    let mut records = Vec::with_capacity(cells.len() * cfg.methods.len());
    for (c, cell) in cells.iter().enumerate() {
        let reps = &errors[c * m..(c + 1) * m];
        for (k, &method) in cfg.methods.iter().enumerate() {
            let mut sum = 0.0;
            for rep in reps {
                sum += rep[k];
            }
            let mean = sum / m as f64;
            let std_error = if m > 1 {
                let mut ss = 0.0;
                for rep in reps {
                    ss += (rep[k] - mean).powi(2);
                }
                (ss / (m - 1) as f64 / m as f64).sqrt()
            } else {
                0.0
            };
            records.push(AmseRecord {
                function: cell.function,
                n: cell.n,
                snr: cell.snr,
                method,
                amse: mean,
                amse_std_error: std_error,
                replications: m,
                seed: cfg.base_seed,
            });
        }
    }
    Ok(records)
}

/// MSE of each configured method on one shared noisy sample.
fn replicate(cfg: &ExperimentConfig, denoise_cfg: &DenoiseConfig, cell: Cell, r: usize) -> Result<Vec<f64>> {
    let rng = SeededRng::new(cfg.base_seed, replication_stream(cell.function, cell.n, cell.snr, r));
    let sample = make_noisy_sample(cell.function, cell.n, cell.snr, cfg.signal_sd / cell.snr, rng)?;
    cfg.methods.iter().map(|&method| mse(&denoise(&sample.y, method, denoise_cfg)?, &sample.f)).collect()
}

/// Text table with one row per (function, n, method) and one column per SNR.
pub fn format_amse_table(records: &[AmseRecord]) -> String {
    let mut snrs: Vec<f64> = records.iter().map(|r| r.snr).collect();
    snrs.sort_by(f64::total_cmp);
    snrs.dedup();
    let mut rows: BTreeMap<(TestFunction, usize, Method), BTreeMap<u64, f64>> = BTreeMap::new();
    for r in records {
        rows.entry((r.function, r.n, r.method)).or_default().insert(r.snr.to_bits(), r.amse);
    }
    let mut out = String::new();
    let _ = write!(out, "{:<10} {:>5}  {:<12}", "Signal", "n", "Method");
    for s in &snrs {
        let _ = write!(out, " {:>10}", format!("SNR = {s}"));
    }
    out.push('\n');
    let mut last: Option<(TestFunction, usize)> = None;
    for ((function, n, method), values) in &rows {
        let (fname, nname) = match last {
            Some((f, m)) if f == *function && m == *n => (String::new(), String::new()),
            Some((f, _)) if f == *function => (String::new(), n.to_string()),
            _ => (function.to_string(), n.to_string()),
        };
        last = Some((*function, *n));
        let _ = write!(out, "{fname:<10} {nname:>5}  {:<12}", method.label());
        for s in &snrs {
            match values.get(&s.to_bits()) {
                Some(v) => {
                    let _ = write!(out, " {v:>10.3}");
                }
                None => {
                    let _ = write!(out, " {:>10}", "-");
                }
            }
        }
        out.push('\n');
    }
    out
}
