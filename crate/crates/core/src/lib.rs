//! Residual-based Kolmogorov and omega-square tests for normality of the
//! innovations of a stationary AR(p) model with unknown mean.
//!
//! The crate is `no_std` (it needs `alloc`). It covers:
//!
//! - [`ar_process`]: the data-generating process, innovation laws (Gaussian,
//!   local-alternative mixture, user supplied) and seeded simulation;
//! - [`estimation`]: centering, least-squares coefficients, residuals, the
//!   innovation variance estimate and the autocovariance matrix `K`;
//! - [`gof_tests`]: the residual EDF and the statistics `D̂ₙ` and `ω̂ₙ²`;
//! - [`limit_law`]: the limiting Gaussian process `u(t)`, the drift `δ(t)`
//!   under local alternatives, Monte Carlo limit tables and asymptotic power;
//! - [`power_lab`]: finite-sample size and power experiments.
//!
//! Randomness is always drawn from explicitly derived sub-streams (see
//! [`rng`]), so every result is reproducible from a seed and independent of
//! how replications are scheduled.
#![no_std]
#![forbid(unsafe_code)]
// `!(x > 0.0)` is used on purpose: it also rejects NaN.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

extern crate alloc;

pub mod ar_process;
pub mod error;
pub mod estimation;
pub mod limit_law;
pub mod normal;
pub mod power_lab;
pub mod rng;

pub use ar_process::{
    gamma_coeffs, simulate_ar, ArModel, GaussianLaw, InnovationLaw, LaplaceLaw, LawH,
    SeriesSample, TwoPointLaw, UniformLaw,
};
pub use error::{Error, Result};
pub use estimation::{
    center_series, estimate_k_matrix, fit_series, ols_estimate, residuals, CenteredSeries,
    CoefficientEstimator, KMatrix, Ols, ResidualFit,
};
pub use gof_tests::{
    eval_process, kolmogorov_stat, omega2_stat, residual_edf, EmpiricalProcessEval, GofResult,
    StatKind,
};
pub use limit_law::{
    asymptotic_power, cov_eval, delta_shift, quantile, simulate_limit_functionals, KernelFactor,
    LimitLawTable, ShiftSpec,
};
pub use power_lab::{run_power_experiment, run_size_experiment, ExperimentSpec, PowerReport};
pub use rng::{Executor, Sequential};

/// Largest autoregression order accepted anywhere in the crate.
pub const MAX_ORDER: usize = 20;
