//! The generalized secant hyperbolic (GSH) distribution, symmetric about zero.
//!
//! With `z = c2 * theta / tau` the density is
//!
//! ```text
//! g(theta; tau, t) = (c1 / tau) * exp(z) / (exp(2z) + 2a exp(z) + 1)
//! ```
//!
//! where `(a, c1, c2)` depend on `t` only (see [`gsh_constants`]). The
//! parameter `t > -pi` controls the kurtosis: `t -> -pi` is arbitrarily
//! heavy-tailed, `t = 0` is the logistic law and `t -> inf` approaches the
//! uniform.

use std::f64::consts::PI;

use serde::Serialize;

use crate::error::{invalid, Result};
use crate::numerics::{sample_open01, SeededRng};

/// Below this `|t|` the logistic-limit constants are used.
pub const LOGISTIC_LIMIT: f64 = 1e-6;

/// `cosh(t)` must stay finite.
pub const T_UPPER: f64 = 700.0;

/// `(a, c1, c2)` for a given `t`.
pub fn gsh_constants(t: f64) -> Result<(f64, f64, f64)> {
    check_t(t)?;
    if t.abs() < LOGISTIC_LIMIT {
        let c = PI / 3f64.sqrt();
        return Ok((1.0, c, c));
    }
    Ok(if t < 0.0 {
        let c2 = ((PI * PI - t * t) / 3.0).sqrt();
        (t.cos(), t.sin() / t * c2, c2)
    } else {
        let c2 = ((PI * PI + t * t) / 3.0).sqrt();
        (t.cosh(), t.sinh() / t * c2, c2)
    })
}

fn check_t(t: f64) -> Result<()> {
    if t.is_nan() || t <= -PI {
        return Err(invalid(format!("GSH parameter t must exceed -pi, got {t}")));
    }
    if t > T_UPPER {
        return Err(invalid(format!("GSH parameter t = {t} overflows cosh(t)")));
    }
    Ok(())
}

/// Coefficient of kurtosis `E[theta^4] / E[theta^2]^2` of the GSH law.
///
/// Strictly decreasing in `t`, from infinity at `t = -pi` through `21/5` at
/// `t = 0` towards `9/5` as `t` grows; always above `9/5`.
pub fn gsh_kurtosis(t: f64) -> Result<f64> {
    check_t(t)?;
    if t == 0.0 {
        return Ok(4.2);
    }
    let (pi2, t2) = (PI * PI, t * t);
    Ok(if t < 0.0 {
        (21.0 * pi2 - 9.0 * t2) / (5.0 * pi2 - 5.0 * t2)
    } else {
        (21.0 * pi2 + 9.0 * t2) / (5.0 * pi2 + 5.0 * t2)
    })
}

/// Scale `tau` and kurtosis parameter `t`, with derived constants.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GshParams {
    tau: f64,
    t: f64,
    a: f64,
    c1: f64,
    c2: f64,
    #[serde(skip)]
    ln_c1_over_tau: f64,
    /// `1 + a` computed without cancellation (only used for `t < 0`).
    #[serde(skip)]
    one_plus_a: f64,
    /// `1 - a^2 = sin^2 t` (only used for `t < 0`).
    #[serde(skip)]
    sin_sq: f64,
}

impl GshParams {
    pub fn new(tau: f64, t: f64) -> Result<Self> {
        if !(tau > 0.0 && tau.is_finite()) {
            return Err(invalid(format!("GSH scale tau must be positive, got {tau}")));
        }
        let (a, c1, c2) = gsh_constants(t)?;
        let negative = t <= -LOGISTIC_LIMIT;
        Ok(Self {
            tau,
            t,
            a,
            c1,
            c2,
            ln_c1_over_tau: c1.ln() - tau.ln(),
            one_plus_a: if negative { 2.0 * (0.5 * t).cos().powi(2) } else { 1.0 + a },
            sin_sq: if negative { t.sin().powi(2) } else { 0.0 },
        })
    }

    pub fn tau(&self) -> f64 {
        self.tau
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn a(&self) -> f64 {
        self.a
    }

    pub fn c1(&self) -> f64 {
        self.c1
    }

    pub fn c2(&self) -> f64 {
        self.c2
    }

    pub fn kurtosis(&self) -> f64 {
        gsh_kurtosis(self.t).expect("t validated at construction")
    }

    /// Splits `log g(theta)` as `exponent - ln(denominator)`, where the
    /// exponent `ln(c1/tau) - |z|` carries all the decay and the denominator
    /// stays within `[sin^2 t, 4a]`. Lets callers do a max-shift on the
    /// exponent alone.
    #[inline]
    pub(crate) fn log_density_parts(&self, theta: f64) -> (f64, f64) {
        let z = self.c2 * theta.abs() / self.tau;
        (self.ln_c1_over_tau - z, self.denominator(z))
    }

    /// `1 + 2a e^{-z} + e^{-2z}` for `z >= 0`.
    #[inline]
    fn denominator(&self, z: f64) -> f64 {
        if self.sin_sq > 0.0 {
            // (e + a)^2 + sin^2 t, with e + a = expm1(-z) + (1 + a)
            let s = (-z).exp_m1() + self.one_plus_a;
            s * s + self.sin_sq
        } else {
            let e = (-z).exp();
            1.0 + e * (2.0 * self.a + e)
        }
    }

    pub fn log_density(&self, theta: f64) -> f64 {
        let (expo, den) = self.log_density_parts(theta);
        expo - den.ln()
    }

    pub fn density(&self, theta: f64) -> f64 {
        self.log_density(theta).exp()
    }

    /// Distance from the real axis to the nearest complex pole of `g`, in
    /// `theta` units. Sets the step a trapezoid rule needs to resolve `g`.
    pub fn pole_distance(&self) -> f64 {
        let zdist = if self.t < 0.0 { PI + self.t } else { PI };
        zdist * self.tau / self.c2
    }

    /// `P(theta > x)` for `x >= 0`, by integrating the exponential tail in
    /// the variable `w = exp(-z)`.
    pub fn upper_tail(&self, x: f64) -> f64 {
        let x = x.max(0.0);
        let w = (-self.c2 * x / self.tau).exp();
        let t = self.t;
        if t.abs() < LOGISTIC_LIMIT {
            w / (1.0 + w)
        } else if t < 0.0 {
            let s = (-t).sin();
            let a = self.a;
            (((w + a) / s).atan() - (a / s).atan()) / (-t)
        } else {
            ((w * t.exp()).ln_1p() - (w * (-t).exp()).ln_1p()) / (2.0 * t)
        }
    }
}

/// Log-density of the GSH law at `theta`.
pub fn gsh_log_density(theta: f64, p: &GshParams) -> f64 {
    p.log_density(theta)
}

/// Spike-and-slab prior: point mass `alpha` at zero plus `(1 - alpha)` GSH.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ShrinkagePrior {
    alpha: f64,
    gsh: GshParams,
}

impl ShrinkagePrior {
    pub fn new(alpha: f64, gsh: GshParams) -> Result<Self> {
        if !(0.0..=1.0).contains(&alpha) {
            return Err(invalid(format!("point-mass weight alpha must lie in [0, 1], got {alpha}")));
        }
        Ok(Self { alpha, gsh })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn gsh(&self) -> &GshParams {
        &self.gsh
    }
}

const CDF_HALF_INTERVALS: usize = 2048;
const CDF_RANGE_IN_TAU: f64 = 60.0;

/// Tabulated GSH distribution function.
///
/// The survival function `S(x) = P(theta > x)` is accumulated from the far
/// end of a 2049-point grid on `[0, 60 tau]` (4097 points over the
/// symmetric range), starting from the exact tail mass beyond the grid.
/// Between nodes it is a cubic Hermite interpolant using the density as the
/// slope, limited so the interpolant stays monotone.
#[derive(Debug, Clone)]
pub struct GshCdf {
    params: GshParams,
    step: f64,
    survival: Vec<f64>,
    slopes: Vec<f64>,
}

impl GshCdf {
    pub fn new(params: &GshParams) -> Self {
        let range = CDF_RANGE_IN_TAU * params.tau();
        let step = range / CDF_HALF_INTERVALS as f64;
        let g = |x: f64| params.density(x);
        let pieces: Vec<f64> = (0..CDF_HALF_INTERVALS)
            .map(|k| adaptive_legendre(&g, k as f64 * step, (k + 1) as f64 * step))
            .collect();
        let mut survival = vec![0.0; CDF_HALF_INTERVALS + 1];
        survival[CDF_HALF_INTERVALS] = params.upper_tail(range);
        for k in (0..CDF_HALF_INTERVALS).rev() {
            survival[k] = survival[k + 1] + pieces[k];
        }
        // pin S(0) = 1/2; the correction is at the level of the quadrature error
        let scale = 0.5 / survival[0];
        survival.iter_mut().for_each(|s| *s *= scale);
        survival[0] = 0.5;
        let slopes = (0..=CDF_HALF_INTERVALS).map(|k| -g(k as f64 * step)).collect();
        Self { params: *params, step, survival, slopes }
    }

    pub fn params(&self) -> &GshParams {
        &self.params
    }

    fn grid_end(&self) -> f64 {
        self.step * CDF_HALF_INTERVALS as f64
    }

    /// `P(theta > x)` for `x >= 0`.
    fn survival_at(&self, x: f64) -> f64 {
        if x >= self.grid_end() {
            return self.params.upper_tail(x);
        }
        let k = ((x / self.step) as usize).min(CDF_HALF_INTERVALS - 1);
        self.hermite(k, x)
    }

    fn hermite(&self, k: usize, x: f64) -> f64 {
        let (y0, y1) = (self.survival[k], self.survival[k + 1]);
        let h = self.step;
        let delta = (y1 - y0) / h;
        let (mut m0, mut m1) = (self.slopes[k], self.slopes[k + 1]);
        if delta == 0.0 {
            m0 = 0.0;
            m1 = 0.0;
        } else {
            // Fritsch-Carlson limiter
            let (al, be) = (m0 / delta, m1 / delta);
            let r = al * al + be * be;
            if r > 9.0 {
                let tau = 3.0 / r.sqrt();
                m0 = tau * al * delta;
                m1 = tau * be * delta;
            }
        }
        let s = (x - k as f64 * h) / h;
        let s2 = s * s;
        let s3 = s2 * s;
        let h00 = 2.0 * s3 - 3.0 * s2 + 1.0;
        let h10 = s3 - 2.0 * s2 + s;
        let h01 = -2.0 * s3 + 3.0 * s2;
        let h11 = s3 - s2;
        h00 * y0 + h10 * h * m0 + h01 * y1 + h11 * h * m1
    }

    pub fn cdf(&self, theta: f64) -> f64 {
        if theta == 0.0 {
            0.5
        } else if theta > 0.0 {
            1.0 - self.survival_at(theta)
        } else {
            self.survival_at(-theta)
        }
    }

    /// Solves `S(x) = s` for `x >= 0`, `0 < s <= 1/2`, by bisection to 1e-12.
    fn upper_quantile(&self, s: f64) -> f64 {
        const TOL: f64 = 1e-12;
        if s >= 0.5 {
            return 0.0;
        }
        let (mut lo, mut hi);
        if s <= self.survival[CDF_HALF_INTERVALS] {
            lo = self.grid_end();
            let mut width = self.params.tau() / self.params.c2();
            hi = lo + width;
            while self.params.upper_tail(hi) > s {
                lo = hi;
                width *= 2.0;
                hi += width;
            }
        } else {
            // survival is decreasing: first node with survival <= s
            let k = self.survival.partition_point(|&v| v > s);
            lo = (k - 1) as f64 * self.step;
            hi = k as f64 * self.step;
        }
        while hi - lo > TOL {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if self.survival_at(mid) > s {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        0.5 * (lo + hi)
    }

    /// Inverse distribution function for `u` in (0, 1).
    pub fn quantile(&self, u: f64) -> f64 {
        if u < 0.5 {
            -self.upper_quantile(u)
        } else {
            self.upper_quantile(1.0 - u)
        }
    }
}

/// `F(theta)` for the GSH law. Builds the table on every call; reuse a
/// [`GshCdf`] for repeated evaluation.
pub fn gsh_cdf(theta: f64, p: &GshParams) -> f64 {
    GshCdf::new(p).cdf(theta)
}

/// `count` i.i.d. GSH draws by numeric inverse CDF.
pub fn gsh_sample(rng: SeededRng, p: &GshParams, count: usize) -> Vec<f64> {
    if count == 0 {
        return Vec::new();
    }
    let table = GshCdf::new(p);
    sample_open01(rng, count).into_iter().map(|u| table.quantile(u)).collect()
}

#[allow(clippy::excessive_precision)]
const GL8: [(f64, f64); 4] = [
    (0.183_434_642_495_649_8, 0.362_683_783_378_362_0),
    (0.525_532_409_916_329_0, 0.313_706_645_877_887_3),
    (0.796_666_477_413_626_7, 0.222_381_034_453_374_5),
    (0.960_289_856_497_536_3, 0.101_228_536_290_376_3),
];

fn legendre8<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    let c = 0.5 * (a + b);
    let r = 0.5 * (b - a);
    r * GL8.iter().map(|&(x, w)| w * (f(c - r * x) + f(c + r * x))).sum::<f64>()
}

fn adaptive_legendre<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> f64 {
    fn recurse<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, whole: f64, depth: u32) -> f64 {
        let m = 0.5 * (a + b);
        let left = legendre8(f, a, m);
        let right = legendre8(f, m, b);
        let split = left + right;
        if depth == 0 || (split - whole).abs() <= 1e-16 + 1e-14 * split.abs() {
            split
        } else {
            recurse(f, a, m, left, depth - 1) + recurse(f, m, b, right, depth - 1)
        }
    }
    recurse(f, a, b, legendre8(f, a, b), 20)
}
