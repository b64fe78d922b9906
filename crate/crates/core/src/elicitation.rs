//! Data-driven hyperparameters: the noise level from the finest details,
//! a level-dependent point-mass weight, and a kurtosis-matched `t`.

use std::collections::BTreeMap;
use std::f64::consts::PI;

use serde::{Deserialize, Serialize};

use crate::dwt::WaveletDecomposition;
use crate::error::{invalid, Error, Result};
use crate::gsh_prior::{GshParams, ShrinkagePrior};

/// Upper quartile of the standard normal.
pub const NORMAL_QUARTILE: f64 = 0.6745;

/// Kurtosis of the logistic law, where both branches of the `t` map meet.
pub const LOGISTIC_KURTOSIS: f64 = 4.2;

/// Infimum of the GSH kurtosis (uniform limit).
pub const MIN_GSH_KURTOSIS: f64 = 1.8;

/// Levels with fewer coefficients borrow the pooled `t`.
pub const MIN_LEVEL_SIZE: usize = 30;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ElicitationConfig {
    pub gamma: f64,
    pub primary_level: usize,
    pub t_min: f64,
    pub t_max: f64,
    pub pool_levels: bool,
}

impl Default for ElicitationConfig {
    fn default() -> Self {
        Self { gamma: 2.0, primary_level: 3, t_min: -PI + 1e-3, t_max: 50.0, pool_levels: true }
    }
}

impl ElicitationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.gamma > 0.0 && self.gamma.is_finite()) {
            return Err(Error::Config(format!("gamma must be positive, got {}", self.gamma)));
        }
        if !(self.t_min > -PI && self.t_min < self.t_max && self.t_max.is_finite()) {
            return Err(Error::Config(format!(
                "t bounds must satisfy -pi < t_min < t_max, got [{}, {}]",
                self.t_min, self.t_max
            )));
        }
        GshParams::new(1.0, self.t_max).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ElicitedHyperparams {
    pub sigma_hat: f64,
    pub alpha_by_level: BTreeMap<usize, f64>,
    /// Pooled `t` (used at every level when pooling).
    pub t_value: f64,
    /// `t` actually used at each level.
    pub t_by_level: BTreeMap<usize, f64>,
    /// Sample kurtosis behind `t_value`.
    pub beta_hat: f64,
    pub tau: f64,
}

impl ElicitedHyperparams {
    pub fn prior_for_level(&self, level: usize) -> Result<ShrinkagePrior> {
        let alpha = *self
            .alpha_by_level
            .get(&level)
            .ok_or_else(|| Error::Config(format!("no elicited alpha for level {level}")))?;
        let t = self.t_by_level.get(&level).copied().unwrap_or(self.t_value);
        ShrinkagePrior::new(alpha, GshParams::new(self.tau, t)?)
    }
}

/// `median(|d|) / 0.6745`, with the midpoint median for even lengths.
pub fn estimate_sigma(finest_detail: &[f64]) -> Result<f64> {
    if finest_detail.is_empty() {
        return Err(invalid("cannot estimate sigma from an empty vector"));
    }
    if let Some(bad) = finest_detail.iter().find(|v| !v.is_finite()) {
        return Err(invalid(format!("non-finite detail coefficient {bad}")));
    }
    let mut abs: Vec<f64> = finest_detail.iter().map(|v| v.abs()).collect();
    abs.sort_by(f64::total_cmp);
    let n = abs.len();
    let median = if n % 2 == 1 { abs[n / 2] } else { 0.5 * (abs[n / 2 - 1] + abs[n / 2]) };
    Ok(median / NORMAL_QUARTILE)
}

/// `1 - (j - J0 + 1)^(-gamma)`.
pub fn alpha_level(j: usize, cfg: &ElicitationConfig) -> Result<f64> {
    if j < cfg.primary_level {
        return Err(invalid(format!("level {j} is below the primary level {}", cfg.primary_level)));
    }
    if cfg.gamma.is_nan() || cfg.gamma <= 0.0 {
        return Err(invalid(format!("gamma must be positive, got {}", cfg.gamma)));
    }
    let depth = (j - cfg.primary_level + 1) as f64;
    Ok(1.0 - depth.powf(-cfg.gamma))
}

/// Biased moment-ratio kurtosis `m4 / m2^2`.
pub fn sample_kurtosis(coeffs: &[f64]) -> Result<f64> {
    if coeffs.len() < 4 {
        return Err(invalid(format!("kurtosis needs at least 4 values, got {}", coeffs.len())));
    }
    let n = coeffs.len() as f64;
    let mean = coeffs.iter().sum::<f64>() / n;
    let (mut m2, mut m4) = (0.0, 0.0);
    let mut peak: f64 = 0.0;
    for &x in coeffs {
        let c = x - mean;
        let c2 = c * c;
        m2 += c2;
        m4 += c2 * c2;
        peak = peak.max(x.abs());
    }
    m2 /= n;
    m4 /= n;
    // deviations at rounding level of the mean count as constant
    let floor = 64.0 * f64::EPSILON * peak;
    if m2.is_nan() || m2 <= floor * floor {
        return Err(Error::DegenerateInput("coefficients have zero variance".to_string()));
    }
    Ok(m4 / (m2 * m2))
}

/// Inverts the GSH kurtosis map, clamped to `[t_min, t_max]`.
pub fn elicit_t(beta_hat: f64, cfg: &ElicitationConfig) -> f64 {
    if beta_hat.is_nan() || beta_hat <= MIN_GSH_KURTOSIS + 1e-6 {
        return cfg.t_max;
    }
    if beta_hat == LOGISTIC_KURTOSIS {
        return 0.0_f64.clamp(cfg.t_min, cfg.t_max);
    }
    let t = if beta_hat == f64::INFINITY {
        -PI
    } else if beta_hat >= LOGISTIC_KURTOSIS {
        -PI * ((5.0 * beta_hat - 21.0) / (5.0 * beta_hat - 9.0)).sqrt()
    } else {
        PI * ((21.0 - 5.0 * beta_hat) / (5.0 * beta_hat - 9.0)).sqrt()
    };
    t.clamp(cfg.t_min, cfg.t_max)
}

/// All hyperparameters for one decomposition.
pub fn elicit_all(decomp: &WaveletDecomposition, cfg: &ElicitationConfig) -> Result<ElicitedHyperparams> {
    cfg.validate()?;
    if cfg.primary_level != decomp.primary_level {
        return Err(Error::Config(format!(
            "elicitation primary level {} differs from the decomposition's {}",
            cfg.primary_level, decomp.primary_level
        )));
    }
    let finest = decomp.finest_level().ok_or_else(|| invalid("decomposition has no detail levels"))?;
    let sigma_hat = estimate_sigma(&decomp.details[&finest])?;

    let (pooled, _) = decomp.flatten_details();
    check_details_present(decomp, &pooled)?;
    let beta_hat = sample_kurtosis(&pooled)?;
    let t_value = elicit_t(beta_hat, cfg);

    let mut alpha_by_level = BTreeMap::new();
    let mut t_by_level = BTreeMap::new();
    for (&j, d) in &decomp.details {
        alpha_by_level.insert(j, alpha_level(j, cfg)?);
        let t = if cfg.pool_levels || d.len() < MIN_LEVEL_SIZE {
            t_value
        } else {
            match sample_kurtosis(d) {
                Ok(b) => elicit_t(b, cfg),
                Err(Error::DegenerateInput(_)) => t_value,
                Err(e) => return Err(e),
            }
        };
        t_by_level.insert(j, t);
    }
    Ok(ElicitedHyperparams { sigma_hat, alpha_by_level, t_value, t_by_level, beta_hat, tau: 1.0 })
}

/// Detail coefficients that are pure transform round-off (e.g. of a
/// polynomial signal) carry no kurtosis information.
fn check_details_present(decomp: &WaveletDecomposition, details: &[f64]) -> Result<()> {
    let peak = |v: &[f64]| v.iter().fold(0.0_f64, |m, x| m.max(x.abs()));
    let detail_peak = peak(details);
    let scale = detail_peak.max(peak(&decomp.scaling));
    if detail_peak <= 1e-10 * scale || detail_peak == 0.0 {
        return Err(Error::DegenerateInput("all detail coefficients vanish".to_string()));
    }
    Ok(())
}
