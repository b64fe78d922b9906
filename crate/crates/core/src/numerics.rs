//! Gaussian-expectation quadrature and the seeded random-number contract.

use std::f64::consts::PI;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Open01, StandardNormal};
use serde::{Deserialize, Serialize};

use crate::error::{invalid, Error, Result};

/// `ln(sqrt(2 pi))`
pub(crate) const LN_SQRT_2PI: f64 = 0.918_938_533_204_672_8;

pub const MAX_HERMITE_NODES: usize = 256;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum QuadratureMethod {
    GaussHermite,
    /// Composite trapezoid over `mu +- halfwidth * sigma`.
    Trapezoid,
}

/// How to evaluate `E[h(Z)]` for `Z ~ Normal(mu, sigma^2)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct QuadratureSpec {
    pub method: QuadratureMethod,
    pub node_count: usize,
    /// Half-range in standard deviations (trapezoid only).
    pub oracle_halfwidth: f64,
    /// Number of grid points including both ends (trapezoid only).
    pub oracle_points: usize,
}

impl QuadratureSpec {
    pub fn gauss_hermite(node_count: usize) -> Result<Self> {
        if !(1..=MAX_HERMITE_NODES).contains(&node_count) {
            return Err(invalid(format!(
                "Gauss-Hermite node count must be in 1..={MAX_HERMITE_NODES}, got {node_count}"
            )));
        }
        Ok(Self {
            method: QuadratureMethod::GaussHermite,
            node_count,
            oracle_halfwidth: 10.0,
            oracle_points: 20_001,
        })
    }

    pub fn trapezoid(halfwidth: f64, points: usize) -> Result<Self> {
        if !(halfwidth >= 6.0 && halfwidth.is_finite()) {
            return Err(invalid(format!(
                "trapezoid halfwidth must be at least 6 standard deviations, got {halfwidth}"
            )));
        }
        if points < 3 {
            return Err(invalid(format!("trapezoid needs at least 3 points, got {points}")));
        }
        Ok(Self {
            method: QuadratureMethod::Trapezoid,
            node_count: points,
            oracle_halfwidth: halfwidth,
            oracle_points: points,
        })
    }

    /// The independent trapezoid estimator used as a cross-check: 10 sigma, 20001 points.
    pub fn oracle() -> Self {
        Self::trapezoid(10.0, 20_001).expect("valid oracle spec")
    }

    pub fn rule(&self) -> Result<GaussianQuadrature> {
        GaussianQuadrature::new(self)
    }
}

impl Default for QuadratureSpec {
    /// 64-node Gauss-Hermite.
    fn default() -> Self {
        Self::gauss_hermite(64).expect("64 nodes is in range")
    }
}

/// Gauss-Hermite nodes and weights for the weight function `exp(-x^2)`.
///
/// The positive roots of the orthonormal Hermite polynomial are bracketed by
/// a sign scan finer than the smallest root gap, then polished with Newton
/// steps kept inside the bracket. Nodes come back in decreasing order; the
/// rule is exact for polynomials of degree `2n - 1`.
pub fn gauss_hermite_nodes(n: usize) -> Result<Vec<(f64, f64)>> {
    if !(1..=MAX_HERMITE_NODES).contains(&n) {
        return Err(invalid(format!("Gauss-Hermite node count must be in 1..={MAX_HERMITE_NODES}, got {n}")));
    }
    let pim4 = PI.powf(-0.25);
    let nf = n as f64;
    let bound = (2.0 * nf + 1.0).sqrt();
    // gaps between roots exceed pi / sqrt(2n + 1)
    let scan = PI / (8.0 * bound);
    let mut positive = Vec::with_capacity(n / 2);
    let mut lo = if n % 2 == 1 { 0.5 * scan } else { 0.0 };
    let mut f_lo = hermite_orthonormal(n, lo, pim4).0;
    while positive.len() < n / 2 && lo < bound + 1.0 {
        let hi = lo + scan;
        let f_hi = hermite_orthonormal(n, hi, pim4).0;
        if f_lo == 0.0 {
            positive.push(lo);
        } else if f_lo.signum() != f_hi.signum() {
            positive.push(polish_root(n, lo, hi, f_lo, pim4));
        }
        lo = hi;
        f_lo = f_hi;
    }
    if positive.len() != n / 2 {
        return Err(invalid(format!("Gauss-Hermite root scan failed for n = {n}")));
    }
    let weight = |z: f64| {
        let pp = (2.0 * nf).sqrt() * hermite_orthonormal(n, z, pim4).1;
        2.0 / (pp * pp)
    };
    let mut rule: Vec<(f64, f64)> = positive.iter().rev().map(|&z| (z, weight(z))).collect();
    if n % 2 == 1 {
        rule.push((0.0, weight(0.0)));
    }
    rule.extend(positive.iter().map(|&z| (-z, weight(z))));
    Ok(rule)
}

/// Safeguarded Newton for the root of `p_n` in `[lo, hi]`.
fn polish_root(n: usize, mut lo: f64, mut hi: f64, f_lo: f64, pim4: f64) -> f64 {
    let slope_scale = (2.0 * n as f64).sqrt();
    let mut z = 0.5 * (lo + hi);
    for _ in 0..200 {
        let (p1, p2) = hermite_orthonormal(n, z, pim4);
        if p1 == 0.0 {
            return z;
        }
        if p1.signum() == f_lo.signum() {
            lo = z;
        } else {
            hi = z;
        }
        let newton = z - p1 / (slope_scale * p2);
        let next = if newton > lo && newton < hi { newton } else { 0.5 * (lo + hi) };
        if (next - z).abs() <= 1e-15 * z.abs().max(1.0) {
            return next;
        }
        z = next;
    }
    z
}

/// Returns `(p_n(z), p_{n-1}(z))` for the orthonormal Hermite recurrence.
fn hermite_orthonormal(n: usize, z: f64, pim4: f64) -> (f64, f64) {
    let mut p1 = pim4;
    let mut p2 = 0.0;
    for j in 1..=n {
        let jf = j as f64;
        let p3 = p2;
        p2 = p1;
        p1 = z * (2.0 / jf).sqrt() * p2 - ((jf - 1.0) / jf).sqrt() * p3;
    }
    (p1, p2)
}

/// A node set for standard-normal expectations: `E[h(Z)] ~ sum_i w_i h(mu + sigma u_i)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianQuadrature {
    abscissae: Vec<f64>,
    weights: Vec<f64>,
    log_weights: Vec<f64>,
}

impl GaussianQuadrature {
    pub fn new(spec: &QuadratureSpec) -> Result<Self> {
        let (abscissae, log_weights): (Vec<f64>, Vec<f64>) = match spec.method {
            QuadratureMethod::GaussHermite => gauss_hermite_nodes(spec.node_count)?
                .into_iter()
                .map(|(x, w)| (std::f64::consts::SQRT_2 * x, w.ln() - 0.5 * PI.ln()))
                .unzip(),
            QuadratureMethod::Trapezoid => {
                let spec = QuadratureSpec::trapezoid(spec.oracle_halfwidth, spec.oracle_points)?;
                let k = spec.oracle_halfwidth;
                let m = spec.oracle_points;
                let h = 2.0 * k / (m - 1) as f64;
                (0..m)
                    .map(|i| {
                        let u = -k + h * i as f64;
                        let end = if i == 0 || i == m - 1 { 0.5_f64.ln() } else { 0.0 };
                        (u, h.ln() + end - 0.5 * u * u - LN_SQRT_2PI)
                    })
                    .unzip()
            }
        };
        let weights = log_weights.iter().map(|lw| lw.exp()).collect();
        Ok(Self { abscissae, weights, log_weights })
    }

    /// Standard-normal abscissae `u_i`.
    pub fn abscissae(&self) -> &[f64] {
        &self.abscissae
    }

    /// Probability weights (sum to one up to the rule's accuracy).
    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn log_weights(&self) -> &[f64] {
        &self.log_weights
    }

    pub fn len(&self) -> usize {
        self.abscissae.len()
    }

    pub fn is_empty(&self) -> bool {
        self.abscissae.is_empty()
    }

    /// `E[h(Z)]` for `Z ~ Normal(mu, sigma^2)`.
    pub fn expect<H: Fn(f64) -> f64>(&self, h: H, mu: f64, sigma: f64) -> Result<f64> {
        if !(sigma > 0.0 && sigma.is_finite()) || !mu.is_finite() {
            return Err(invalid(format!("need finite mu and sigma > 0, got mu = {mu}, sigma = {sigma}")));
        }
        let mut acc = 0.0;
        for (&u, &w) in self.abscissae.iter().zip(&self.weights) {
            let z = mu + sigma * u;
            let v = h(z);
            if !v.is_finite() {
                return Err(Error::NumericalDomain { abscissa: z });
            }
            acc += w * v;
        }
        Ok(acc)
    }
}

/// `E[h(Z)]`, `Z ~ Normal(mu, sigma^2)`, evaluated with `spec`.
pub fn expect_gaussian<H: Fn(f64) -> f64>(h: H, mu: f64, sigma: f64, spec: &QuadratureSpec) -> Result<f64> {
    GaussianQuadrature::new(spec)?.expect(h, mu, sigma)
}

/// A reproducible random stream identified by `(seed, stream_id)`.
///
/// Backed by ChaCha8: the 64-bit seed fills the low eight key bytes
/// (little-endian, remaining key bytes zero) and `stream_id` selects the
/// ChaCha stream. Equal pairs give identical sequences on every platform.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SeededRng {
    pub seed: u64,
    pub stream_id: u64,
}

impl SeededRng {
    pub const fn new(seed: u64, stream_id: u64) -> Self {
        Self { seed, stream_id }
    }

    /// A child stream, deterministic in `(self, index)`.
    pub fn substream(&self, index: u64) -> Self {
        Self {
            seed: self.seed,
            stream_id: mix64(self.stream_id ^ mix64(index.wrapping_add(0x5851_f42d_4c95_7f2d))),
        }
    }

    pub fn generator(&self) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.seed.to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.stream_id);
        rng
    }
}

/// SplitMix64 finalizer.
pub fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// `count` i.i.d. `Normal(mu, sigma^2)` draws from the stream `rng`.
pub fn sample_normal(rng: SeededRng, mu: f64, sigma: f64, count: usize) -> Result<Vec<f64>> {
    if !(sigma >= 0.0 && sigma.is_finite()) || !mu.is_finite() {
        return Err(invalid(format!("need finite mu and sigma >= 0, got mu = {mu}, sigma = {sigma}")));
    }
    let mut g = rng.generator();
    Ok((0..count)
        .map(|_| {
            let z: f64 = g.sample(StandardNormal);
            mu + sigma * z
        })
        .collect())
}

/// `count` uniform draws on the open interval (0, 1).
pub fn sample_open01(rng: SeededRng, count: usize) -> Vec<f64> {
    let mut g = rng.generator();
    (0..count).map(|_| g.sample(Open01)).collect()
}
