//! Orthogonal periodic discrete wavelet transform, Daubechies family.
//!
//! One analysis step maps a length-`m` vector `x` to
//!
//! ```text
//! a[k] = sum_i h[i] x[(2k + i) mod m]     d[k] = sum_i g[i] x[(2k + i) mod m]
//! ```
//!
//! with `g[i] = (-1)^i h[L-1-i]`. Circular indexing makes every step an
//! orthogonal map, so the synthesis step is the transpose.

mod filters;

use std::collections::BTreeMap;

use crate::error::{invalid, Result};

#[derive(Debug, Clone, PartialEq)]
pub struct WaveletFilter {
    pub vanishing_moments: usize,
    pub lowpass: Vec<f64>,
    /// Quadrature mirror of `lowpass`.
    pub highpass: Vec<f64>,
}

impl WaveletFilter {
    pub fn len(&self) -> usize {
        self.lowpass.len()
    }

    pub fn is_empty(&self) -> bool {
        self.lowpass.is_empty()
    }
}

/// Extremal-phase Daubechies filter with `n` vanishing moments (`2n` taps).
pub fn daubechies_filter(n: usize) -> Result<WaveletFilter> {
    let lowpass = filters::lowpass(n)
        .ok_or_else(|| invalid(format!("Daubechies order must be in 1..=10, got {n}")))?
        .to_vec();
    let len = lowpass.len();
    let highpass = (0..len)
        .map(|i| {
            let v = lowpass[len - 1 - i];
            if i % 2 == 0 {
                v
            } else {
                -v
            }
        })
        .collect();
    Ok(WaveletFilter { vanishing_moments: n, lowpass, highpass })
}

/// Scaling coefficients at the primary level `J0` plus detail vectors for
/// levels `J0..J`, level `j` holding `2^j` coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct WaveletDecomposition {
    pub scaling: Vec<f64>,
    pub details: BTreeMap<usize, Vec<f64>>,
    pub n: usize,
    pub primary_level: usize,
    pub filter: WaveletFilter,
}

impl WaveletDecomposition {
    /// `J` with `n = 2^J`.
    pub fn total_levels(&self) -> usize {
        self.n.trailing_zeros() as usize
    }

    pub fn finest_level(&self) -> Option<usize> {
        self.details.keys().next_back().copied()
    }

    /// All detail coefficients, coarse to fine, with their level indices.
    pub fn flatten_details(&self) -> (Vec<f64>, Vec<usize>) {
        let mut coeffs = Vec::new();
        let mut levels = Vec::new();
        for (&j, d) in &self.details {
            coeffs.extend_from_slice(d);
            levels.extend(std::iter::repeat_n(j, d.len()));
        }
        (coeffs, levels)
    }

    /// Replaces the detail coefficients from a flat coarse-to-fine vector.
    pub fn with_flat_details(&self, flat: &[f64]) -> Result<Self> {
        let total: usize = self.details.values().map(Vec::len).sum();
        if flat.len() != total {
            return Err(invalid(format!("expected {total} detail coefficients, got {}", flat.len())));
        }
        let mut out = self.clone();
        let mut offset = 0;
        for d in out.details.values_mut() {
            let len = d.len();
            d.copy_from_slice(&flat[offset..offset + len]);
            offset += len;
        }
        Ok(out)
    }

    pub fn energy(&self) -> f64 {
        self.scaling.iter().map(|x| x * x).sum::<f64>()
            + self.details.values().flatten().map(|x| x * x).sum::<f64>()
    }
}

/// `Some(J)` if `n = 2^J`.
pub fn dyadic_level(n: usize) -> Option<usize> {
    (n > 0 && n.is_power_of_two()).then(|| n.trailing_zeros() as usize)
}

/// Periodic pyramid transform of `signal` (length `2^J`) down to level `j0 < J`.
pub fn forward(signal: &[f64], filter: &WaveletFilter, j0: usize) -> Result<WaveletDecomposition> {
    let n = signal.len();
    let levels =
        dyadic_level(n).ok_or_else(|| invalid(format!("signal length must be a power of two, got {n}")))?;
    if j0 >= levels {
        return Err(invalid(format!(
            "primary level {j0} must be below the number of levels {levels} (n = {n})"
        )));
    }
    let mut approx = signal.to_vec();
    let mut details = BTreeMap::new();
    for j in (j0..levels).rev() {
        let (a, d) = analysis_step(&approx, filter);
        details.insert(j, d);
        approx = a;
    }
    Ok(WaveletDecomposition { scaling: approx, details, n, primary_level: j0, filter: filter.clone() })
}

fn analysis_step(x: &[f64], filter: &WaveletFilter) -> (Vec<f64>, Vec<f64>) {
    let m = x.len();
    let half = m / 2;
    let mut a = vec![0.0; half];
    let mut d = vec![0.0; half];
    for k in 0..half {
        let (mut sa, mut sd) = (0.0, 0.0);
        for (i, (&h, &g)) in filter.lowpass.iter().zip(&filter.highpass).enumerate() {
            let v = x[(2 * k + i) % m];
            sa += h * v;
            sd += g * v;
        }
        a[k] = sa;
        d[k] = sd;
    }
    (a, d)
}

fn synthesis_step(a: &[f64], d: &[f64], filter: &WaveletFilter) -> Vec<f64> {
    let m = 2 * a.len();
    let mut x = vec![0.0; m];
    for k in 0..a.len() {
        for (i, (&h, &g)) in filter.lowpass.iter().zip(&filter.highpass).enumerate() {
            x[(2 * k + i) % m] += h * a[k] + g * d[k];
        }
    }
    x
}

/// Inverse transform.
pub fn inverse(decomp: &WaveletDecomposition) -> Result<Vec<f64>> {
    let levels = dyadic_level(decomp.n)
        .ok_or_else(|| invalid(format!("decomposition length {} is not a power of two", decomp.n)))?;
    let j0 = decomp.primary_level;
    if decomp.scaling.len() != 1 << j0 {
        return Err(invalid(format!(
            "scaling vector has {} coefficients, expected {} at level {j0}",
            decomp.scaling.len(),
            1usize << j0
        )));
    }
    let expected: Vec<usize> = (j0..levels).collect();
    let present: Vec<usize> = decomp.details.keys().copied().collect();
    if present != expected {
        return Err(invalid(format!("detail levels {present:?} do not cover {j0}..{levels}")));
    }
    let mut approx = decomp.scaling.clone();
    for (&j, d) in &decomp.details {
        if d.len() != 1 << j {
            return Err(invalid(format!(
                "level {j} has {} detail coefficients, expected {}",
                d.len(),
                1usize << j
            )));
        }
        approx = synthesis_step(&approx, d, &decomp.filter);
    }
    Ok(approx)
}
