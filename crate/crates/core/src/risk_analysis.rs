//! Frequentist risk of a shrinkage rule at fixed `theta`, and its Bayes risk
//! under the rule's own prior.

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Result};
use crate::exec::Execution;
use crate::gsh_prior::gsh_sample;
use crate::numerics::{GaussianQuadrature, QuadratureSpec, SeededRng};
use crate::shrinkage::ShrinkageRule;

/// Half-range of the Bayes-risk integral in units of `tau`.
pub const BAYES_RANGE_IN_TAU: f64 = 60.0;

/// Prior mass beyond the integration range that may be dropped.
const NEGLIGIBLE_TAIL: f64 = 1e-18;

/// Node set for `E[h(d)]`, `d ~ N(theta, sigma^2)`: trapezoid on `+-10 sigma`
/// with step `sigma / 20`.
pub fn default_moment_quadrature() -> QuadratureSpec {
    QuadratureSpec::trapezoid(10.0, 401).expect("valid moment quadrature")
}

/// 321 points on `[-8, 8]`.
pub fn default_risk_grid() -> Vec<f64> {
    (0..321).map(|i| -8.0 + 0.05 * i as f64).collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RuleMoments {
    pub bias_sq: f64,
    pub variance: f64,
    pub risk: f64,
}

/// Squared bias, variance and risk `E[(delta(d) - theta)^2]` at `theta`.
pub fn rule_moments(theta: f64, rule: &ShrinkageRule, spec: &QuadratureSpec) -> Result<RuleMoments> {
    moments_with(theta, rule, &spec.rule()?)
}

fn moments_with(theta: f64, rule: &ShrinkageRule, nodes: &GaussianQuadrature) -> Result<RuleMoments> {
    if !theta.is_finite() {
        return Err(invalid(format!("theta must be finite, got {theta}")));
    }
    let sigma = rule.sigma();
    let (mut m1, mut m2) = (0.0, 0.0);
    for (&u, &w) in nodes.abscissae().iter().zip(nodes.weights()) {
        let v = rule.shrink(theta + sigma * u)?;
        m1 += w * v;
        m2 += w * v * v;
    }
    let bias_sq = (m1 - theta).powi(2);
    let variance = (m2 - m1 * m1).max(0.0);
    Ok(RuleMoments { bias_sq, variance, risk: bias_sq + variance })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RiskCurve {
    pub theta_grid: Vec<f64>,
    pub squared_bias: Vec<f64>,
    pub variance: Vec<f64>,
    pub classical_risk: Vec<f64>,
}

impl RiskCurve {
    pub fn len(&self) -> usize {
        self.theta_grid.len()
    }

    pub fn is_empty(&self) -> bool {
        self.theta_grid.is_empty()
    }
}

pub fn risk_curve(grid: &[f64], rule: &ShrinkageRule) -> Result<RiskCurve> {
    risk_curve_with(grid, rule, &default_moment_quadrature(), Execution::default())
}

pub fn risk_curve_with(
    grid: &[f64],
    rule: &ShrinkageRule,
    spec: &QuadratureSpec,
    exec: Execution,
) -> Result<RiskCurve> {
    let nodes = spec.rule()?;
    let moments = exec.try_map(grid, |&theta| moments_with(theta, rule, &nodes))?;
    Ok(RiskCurve {
        theta_grid: grid.to_vec(),
        squared_bias: moments.iter().map(|m| m.bias_sq).collect(),
        variance: moments.iter().map(|m| m.variance).collect(),
        classical_risk: moments.iter().map(|m| m.risk).collect(),
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BayesRiskMethod {
    Quadrature,
    MonteCarlo,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BayesRiskEstimate {
    pub value: f64,
    pub method: BayesRiskMethod,
    /// Zero for quadrature.
    pub std_error: f64,
}

/// `alpha R(0) + (1 - alpha) E_g[R(theta)]` with default settings.
pub fn bayes_risk(
    rule: &ShrinkageRule,
    method: BayesRiskMethod,
    mc_draws: usize,
    rng: SeededRng,
) -> Result<BayesRiskEstimate> {
    bayes_risk_with(rule, method, mc_draws, rng, &default_moment_quadrature(), 1, Execution::default())
}

/// Bayes risk with an explicit moment rule. For quadrature, `refine`
/// divides the `theta` step (1 = default grid).
pub fn bayes_risk_with(
    rule: &ShrinkageRule,
    method: BayesRiskMethod,
    mc_draws: usize,
    rng: SeededRng,
    moments: &QuadratureSpec,
    refine: usize,
    exec: Execution,
) -> Result<BayesRiskEstimate> {
    let alpha = rule.prior().alpha();
    let nodes = moments.rule()?;
    let risk = |theta: f64| moments_with(theta, rule, &nodes).map(|m| m.risk);
    let at_zero = risk(0.0)?;
    if alpha == 1.0 {
        return Ok(BayesRiskEstimate { value: at_zero, method, std_error: 0.0 });
    }
    let g = rule.prior().gsh();
    let (slab, std_error) = match method {
        BayesRiskMethod::Quadrature => {
            if refine == 0 {
                return Err(invalid("refine must be at least 1"));
            }
            let step = (g.pole_distance() / 5.0).min(rule.sigma() / 8.0) / refine as f64;
            let mut range = BAYES_RANGE_IN_TAU * g.tau();
            while range > step && g.upper_tail(range / 2.0) < NEGLIGIBLE_TAIL {
                range /= 2.0;
            }
            let m = (range / step).ceil() as usize;
            let h = range / m as f64;
            let thetas: Vec<f64> = (0..=m).map(|i| i as f64 * h).collect();
            let values = exec.try_map(&thetas, |&th| risk(th).map(|r| r * g.density(th)))?;
            // even integrand: twice the half-line integral
            let mut acc = 0.0;
            for (i, v) in values.iter().enumerate() {
                acc += if i == 0 || i == m { 0.5 * v } else { *v };
            }
            (2.0 * h * acc, 0.0)
        }
        BayesRiskMethod::MonteCarlo => {
            if mc_draws == 0 {
                return Err(invalid("Monte Carlo Bayes risk needs at least one draw"));
            }
            let thetas = gsh_sample(rng, g, mc_draws);
            let reach = thetas.iter().fold(0.0_f64, |m, t| m.max(t.abs()))
                + rule.sigma() * moments.oracle_halfwidth.max(MAX_GH_ABSCISSA);
            let table = RuleTable::new(rule, reach, exec)?;
            let values = exec.try_map(&thetas, |&th| table.risk(th, &nodes))?;
            let n = values.len() as f64;
            let mean = values.iter().sum::<f64>() / n;
            let se = if values.len() > 1 {
                let var = values.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / (n - 1.0);
                (var / n).sqrt()
            } else {
                0.0
            };
            (mean, se)
        }
    };
    Ok(BayesRiskEstimate {
        value: alpha * at_zero + (1.0 - alpha) * slab,
        method,
        std_error: (1.0 - alpha) * std_error,
    })
}

/// Bound on `|u|` for Gauss-Hermite nodes up to the supported order.
const MAX_GH_ABSCISSA: f64 = 32.0;

/// Table steps per `sigma`.
const TABLE_DENSITY: f64 = 200.0;

/// The rule sampled on `[0, reach]` with step `sigma / 200` and read back by
/// four-point Lagrange interpolation, extended as an odd function.
/// Monte Carlo risk needs the rule at millions of points; the table brings
/// that down to a few thousand direct evaluations with interpolation error
/// far below the sampling error.
struct RuleTable<'a> {
    rule: &'a ShrinkageRule,
    step: f64,
    values: Vec<f64>,
}

impl<'a> RuleTable<'a> {
    fn new(rule: &'a ShrinkageRule, reach: f64, exec: Execution) -> Result<Self> {
        let step = rule.sigma() / TABLE_DENSITY;
        let count = (reach / step).ceil() as usize + 3;
        let points: Vec<f64> = (0..=count).map(|k| k as f64 * step).collect();
        let values = exec.try_map(&points, |&d| rule.shrink(d))?;
        Ok(Self { rule, step, values })
    }

    fn at(&self, k: isize) -> f64 {
        if k < 0 {
            -self.values[(-k) as usize]
        } else {
            self.values[k as usize]
        }
    }

    fn shrink(&self, d: f64) -> Result<f64> {
        let x = d.abs() / self.step;
        let k = x.floor() as usize;
        if k + 2 >= self.values.len() {
            return self.rule.shrink(d);
        }
        let s = x - k as f64;
        let k = k as isize;
        let (y0, y1, y2, y3) = (self.at(k - 1), self.at(k), self.at(k + 1), self.at(k + 2));
        let v = -s * (s - 1.0) * (s - 2.0) / 6.0 * y0 + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * y1
            - (s + 1.0) * s * (s - 2.0) / 2.0 * y2
            + (s + 1.0) * s * (s - 1.0) / 6.0 * y3;
        Ok(d.signum() * v)
    }

    fn risk(&self, theta: f64, nodes: &GaussianQuadrature) -> Result<f64> {
        let sigma = self.rule.sigma();
        let (mut m1, mut m2) = (0.0, 0.0);
        for (&u, &w) in nodes.abscissae().iter().zip(nodes.weights()) {
            let v = self.shrink(theta + sigma * u)?;
            m1 += w * v;
            m2 += w * v * v;
        }
        Ok((m1 - theta).powi(2) + (m2 - m1 * m1).max(0.0))
    }
}
