//! Bayesian wavelet shrinkage under the generalized secant hyperbolic (GSH)
//! prior.
//!
//! Noisy observations `y = f + e` are mapped to the wavelet domain by an
//! orthogonal periodic Daubechies transform, each empirical coefficient is
//! replaced by its posterior mean under a point-mass/GSH mixture prior, and
//! the estimate is mapped back with the inverse transform.
//!
//! ## Modules
//!
//! * [`numerics`]: Gaussian-expectation quadrature and seeded random streams
//! * [`gsh_prior`]: GSH density, kurtosis map, CDF and sampler
//! * [`shrinkage`]: the posterior-mean shrinkage rule
//! * [`elicitation`]: data-driven choice of `sigma`, `alpha(j)` and `t`
//! * [`dwt`]: periodic Daubechies transform
//! * [`risk_analysis`]: bias, variance, classical and Bayes risk
//! * [`signals`]: Donoho-Johnstone test functions and noisy samples
//! * [`experiments`]: denoising pipeline, baselines and the AMSE harness
//!
//! ## Example
//!
//! ```
//! use gsh_shrink::experiments::{denoise, DenoiseConfig, Method};
//! use gsh_shrink::numerics::SeededRng;
//! use gsh_shrink::signals::{make_noisy_sample, TestFunction};
//!
//! let sample = make_noisy_sample(TestFunction::Heavisine, 512, 3.0, 7.0 / 3.0, SeededRng::new(1, 0))?;
//! let f_hat = denoise(&sample.y, Method::Gsh, &DenoiseConfig::default())?;
//! assert_eq!(f_hat.len(), 512);
//! # Ok::<(), gsh_shrink::Error>(())
//! ```

pub mod dwt;
pub mod elicitation;
mod error;
mod exec;
pub mod experiments;
pub mod gsh_prior;
pub mod numerics;
pub mod risk_analysis;
pub mod shrinkage;
pub mod signals;

pub use error::{Error, Result};
pub use exec::Execution;
