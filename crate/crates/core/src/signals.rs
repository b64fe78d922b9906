//! The Donoho-Johnstone test functions and noisy samples of them.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};
use crate::numerics::{sample_normal, SeededRng};

// Knots, heights and widths from Donoho & Johnstone (1994), "Ideal spatial
// adaptation by wavelet shrinkage", Table 1.
const KNOTS: [f64; 11] = [0.10, 0.13, 0.15, 0.23, 0.25, 0.40, 0.44, 0.65, 0.76, 0.78, 0.81];
const BLOCK_HEIGHTS: [f64; 11] = [4.0, -5.0, 3.0, -4.0, 5.0, -4.2, 2.1, 4.3, -3.1, 2.1, -4.2];
const BUMP_HEIGHTS: [f64; 11] = [4.0, 5.0, 3.0, 4.0, 5.0, 4.2, 2.1, 4.3, 3.1, 5.1, 4.2];
const BUMP_WIDTHS: [f64; 11] = [0.005, 0.005, 0.006, 0.01, 0.01, 0.03, 0.01, 0.01, 0.005, 0.008, 0.005];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum TestFunction {
    Bumps,
    Blocks,
    Doppler,
    Heavisine,
}

impl TestFunction {
    pub const ALL: [TestFunction; 4] =
        [TestFunction::Bumps, TestFunction::Blocks, TestFunction::Doppler, TestFunction::Heavisine];

    pub fn name(self) -> &'static str {
        match self {
            TestFunction::Bumps => "bumps",
            TestFunction::Blocks => "blocks",
            TestFunction::Doppler => "doppler",
            TestFunction::Heavisine => "heavisine",
        }
    }

    fn value(self, x: f64) -> f64 {
        match self {
            TestFunction::Blocks => {
                KNOTS.iter().zip(BLOCK_HEIGHTS).map(|(&k, h)| h * (1.0 + sgn(x - k)) / 2.0).sum()
            }
            TestFunction::Bumps => KNOTS
                .iter()
                .zip(BUMP_HEIGHTS.iter().zip(BUMP_WIDTHS))
                .map(|(&k, (&h, w))| h * (1.0 + ((x - k) / w).abs()).powi(-4))
                .sum(),
            TestFunction::Doppler => (x * (1.0 - x)).sqrt() * (2.0 * PI * 1.05 / (x + 0.05)).sin(),
            TestFunction::Heavisine => 4.0 * (4.0 * PI * x).sin() - sgn(x - 0.3) - sgn(0.72 - x),
        }
    }
}

/// Sign with `sgn(0) = 0`.
fn sgn(v: f64) -> f64 {
    if v > 0.0 {
        1.0
    } else if v < 0.0 {
        -1.0
    } else {
        0.0
    }
}

impl fmt::Display for TestFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TestFunction {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        TestFunction::ALL.into_iter().find(|f| f.name().eq_ignore_ascii_case(s)).ok_or_else(|| {
            invalid(format!("unknown test function {s:?}; expected one of bumps, blocks, doppler, heavisine"))
        })
    }
}

pub fn evaluate(function: TestFunction, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(invalid(format!("test functions live on [0, 1], got x = {x}")));
    }
    Ok(function.value(x))
}

/// Design points `x_i = i/n`, `i = 1..=n`, and the function values there.
pub fn sample_function(function: TestFunction, n: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    if !n.is_power_of_two() {
        return Err(invalid(format!("sample size must be a power of two, got {n}")));
    }
    let x: Vec<f64> = (1..=n).map(|i| i as f64 / n as f64).collect();
    let f = x.iter().map(|&xi| function.value(xi)).collect();
    Ok((x, f))
}

/// Population (1/n) standard deviation.
pub fn population_sd(v: &[f64]) -> f64 {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    (v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / n).sqrt()
}

/// Rescales `f` so that its (1/n) standard deviation is `snr * sigma`.
pub fn scale_to_snr(f: &[f64], snr: f64, sigma: f64) -> Result<Vec<f64>> {
    if !(snr > 0.0 && snr.is_finite()) {
        return Err(invalid(format!("snr must be positive, got {snr}")));
    }
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(invalid(format!("sigma must be positive, got {sigma}")));
    }
    if f.is_empty() {
        return Err(invalid("cannot scale an empty signal"));
    }
    let sd = population_sd(f);
    if !(sd > 0.0 && sd.is_finite()) {
        return Err(Error::DegenerateInput(format!(
            "signal has standard deviation {sd}; cannot set its SNR"
        )));
    }
    let c = snr * sigma / sd;
    Ok(f.iter().map(|v| c * v).collect())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct NoisySample {
    pub function: TestFunction,
    pub x: Vec<f64>,
    pub f: Vec<f64>,
    pub y: Vec<f64>,
    pub sigma: f64,
    pub snr: f64,
    pub seed: SeededRng,
}

/// `y = f + e`, `f` scaled to `sd(f) = snr * sigma`, `e ~ N(0, sigma^2)` i.i.d.
pub fn make_noisy_sample(
    function: TestFunction,
    n: usize,
    snr: f64,
    sigma: f64,
    rng: SeededRng,
) -> Result<NoisySample> {
    let (x, raw) = sample_function(function, n)?;
    let f = scale_to_snr(&raw, snr, sigma)?;
    let noise = sample_normal(rng, 0.0, sigma, n)?;
    let y = f.iter().zip(&noise).map(|(a, e)| a + e).collect();
    Ok(NoisySample { function, x, f, y, sigma, snr, seed: rng })
}
