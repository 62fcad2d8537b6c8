//! The AR(p) data-generating process with unknown mean and its innovation laws.
//!
//! The observations follow `v_t = μ + u_t` with
//! `u_t = β₁u_{t−1} + … + β_p u_{t−p} + ε_t`; the intercept form
//! `v_t = β₁v_{t−1} + … + ν + ε_t` is the same model with
//! `ν = (1 − β₁ − … − β_p)μ`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use rand::{Rng, RngCore};
use rand_distr::{Distribution, StandardNormal};

use crate::error::{invalid, Error, Result};
use crate::normal;
use crate::rng::{domain, substream};
use crate::MAX_ORDER;

/// A zero-mean innovation distribution `H` with finite variance.
///
/// `lipschitz_density` is declarative: the library cannot check it, but the
/// local-power limit is only guaranteed when `H` is differentiable with a
/// Lipschitz derivative.
pub trait LawH: fmt::Debug + Send + Sync {
    fn cdf(&self, x: f64) -> f64;
    fn sample(&self, rng: &mut dyn RngCore) -> f64;
    fn variance(&self) -> f64;
    fn lipschitz_density(&self) -> bool;
    /// Short descriptor, e.g. `laplace:4`.
    fn describe(&self) -> String;
}

/// `Φ(x/σ)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct GaussianLaw {
    sigma: f64,
}

impl GaussianLaw {
    pub fn new(sigma: f64) -> Result<Self> {
        positive("sigma", sigma)?;
        Ok(Self { sigma })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
}

impl LawH for GaussianLaw {
    fn cdf(&self, x: f64) -> f64 {
        normal::cdf(x / self.sigma)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let z: f64 = StandardNormal.sample(rng);
        self.sigma * z
    }

    fn variance(&self) -> f64 {
        self.sigma * self.sigma
    }

    fn lipschitz_density(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("gauss:{}", self.sigma)
    }
}

/// Centered Laplace law with the given variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LaplaceLaw {
    variance: f64,
    scale: f64,
}

impl LaplaceLaw {
    pub fn new(variance: f64) -> Result<Self> {
        positive("variance", variance)?;
        Ok(Self {
            variance,
            scale: libm::sqrt(variance / 2.0),
        })
    }
}

impl LawH for LaplaceLaw {
    fn cdf(&self, x: f64) -> f64 {
        let z = x / self.scale;
        if z < 0.0 {
            0.5 * libm::exp(z)
        } else {
            1.0 - 0.5 * libm::exp(-z)
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        // inverse CDF on a uniform in (-1/2, 1/2)
        let u: f64 = rng.random::<f64>() - 0.5;
        let mag = -libm::log1p(-2.0 * u.abs());
        self.scale * mag.copysign(u)
    }

    fn variance(&self) -> f64 {
        self.variance
    }

    // The density has a kink at 0; it is Lipschitz itself but its
    // derivative is not. Condition (ii) concerns the density only.
    fn lipschitz_density(&self) -> bool {
        true
    }

    fn describe(&self) -> String {
        format!("laplace:{}", self.variance)
    }
}

/// Centered uniform law with the given variance.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UniformLaw {
    variance: f64,
    half_width: f64,
}

impl UniformLaw {
    pub fn new(variance: f64) -> Result<Self> {
        positive("variance", variance)?;
        Ok(Self {
            variance,
            half_width: libm::sqrt(3.0 * variance),
        })
    }
}

impl LawH for UniformLaw {
    fn cdf(&self, x: f64) -> f64 {
        ((x + self.half_width) / (2.0 * self.half_width)).clamp(0.0, 1.0)
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        let u: f64 = rng.random();
        self.half_width * (2.0 * u - 1.0)
    }

    fn variance(&self) -> f64 {
        self.variance
    }

    // density jumps at ±half_width
    fn lipschitz_density(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("uniform:{}", self.variance)
    }
}

/// Symmetric two-point law on `±a`. Has no density at all.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoPointLaw {
    a: f64,
}

impl TwoPointLaw {
    pub fn new(a: f64) -> Result<Self> {
        positive("a", a)?;
        Ok(Self { a })
    }
}

impl LawH for TwoPointLaw {
    fn cdf(&self, x: f64) -> f64 {
        if x < -self.a {
            0.0
        } else if x < self.a {
            0.5
        } else {
            1.0
        }
    }

    fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        if rng.random::<bool>() {
            self.a
        } else {
            -self.a
        }
    }

    fn variance(&self) -> f64 {
        self.a * self.a
    }

    fn lipschitz_density(&self) -> bool {
        false
    }

    fn describe(&self) -> String {
        format!("twopoint:{}", self.a)
    }
}

fn positive(name: &str, value: f64) -> Result<()> {
    if value.is_finite() && value > 0.0 {
        Ok(())
    } else {
        Err(Error::InvalidLaw(format!("{name} must be finite and > 0, got {value}")))
    }
}

/// Number of draws used by [`validate_law`].
pub const LAW_CHECK_DRAWS: usize = 100_000;

/// Spot-checks a user law: CDF monotone on a grid with the right limits,
/// sample mean within 5 standard errors of 0 and sample variance within 5
/// standard errors of the declared variance.
pub fn validate_law(h: &dyn LawH, seed: u64) -> Result<()> {
    let var = h.variance();
    positive("variance", var)?;
    let scale = libm::sqrt(var);

    let mut prev = h.cdf(-1e8 * scale);
    if prev > 1e-3 {
        return Err(Error::InvalidLaw(format!("cdf(-inf) ≈ {prev}, expected 0")));
    }
    for k in -400..=400 {
        let value = h.cdf(scale * f64::from(k) / 20.0);
        if !(0.0..=1.0).contains(&value) || value < prev {
            return Err(Error::InvalidLaw(format!(
                "cdf is not a nondecreasing map into [0,1] near x = {}",
                scale * f64::from(k) / 20.0
            )));
        }
        prev = value;
    }
    let top = h.cdf(1e8 * scale);
    if top < prev || top < 1.0 - 1e-3 {
        return Err(Error::InvalidLaw(format!("cdf(+inf) ≈ {top}, expected 1")));
    }

    let mut rng = substream(seed, domain::LAW_CHECK, 0);
    let draws: Vec<f64> = (0..LAW_CHECK_DRAWS).map(|_| h.sample(&mut rng)).collect();
    let n = draws.len() as f64;
    let mean = draws.iter().sum::<f64>() / n;
    let m2 = draws.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / n;
    let m4 = draws.iter().map(|x| libm::pow(x - mean, 4.0)).sum::<f64>() / n;

    let mean_se = libm::sqrt(m2 / n);
    if mean.abs() > 5.0 * mean_se {
        return Err(Error::InvalidLaw(format!(
            "sample mean {mean} is not consistent with 0 (se {mean_se})"
        )));
    }
    let var_se = libm::sqrt(((m4 - m2 * m2) / n).max(0.0));
    if (m2 - var).abs() > 5.0 * var_se + 1e-12 * var {
        return Err(Error::InvalidLaw(format!(
            "sample variance {m2} is not consistent with declared {var} (se {var_se})"
        )));
    }
    Ok(())
}

/// The innovation distribution `G`.
#[derive(Debug, Clone)]
pub enum InnovationLaw {
    /// `Φ(x/σ₀)`: the null hypothesis.
    Gaussian { sigma0: f64 },
    /// `(1 − n^{−1/2})Φ(x/σ₀) + n^{−1/2}H(x)`: the local alternative for
    /// sample size `n`.
    Mixture {
        sigma0: f64,
        h: Arc<dyn LawH>,
        n: usize,
    },
    /// An arbitrary zero-mean law.
    User { h: Arc<dyn LawH> },
}

impl InnovationLaw {
    pub fn gaussian(sigma0: f64) -> Result<Self> {
        positive("sigma0", sigma0)?;
        Ok(Self::Gaussian { sigma0 })
    }

    pub fn mixture(sigma0: f64, h: Arc<dyn LawH>, n: usize) -> Result<Self> {
        positive("sigma0", sigma0)?;
        positive("variance of H", h.variance())?;
        if n < 2 {
            return Err(Error::InvalidLaw(format!(
                "mixture needs n >= 2 so the weight n^(-1/2) is below 1, got {n}"
            )));
        }
        Ok(Self::Mixture { sigma0, h, n })
    }

    pub fn user(h: Arc<dyn LawH>) -> Result<Self> {
        positive("variance of H", h.variance())?;
        Ok(Self::User { h })
    }

    /// Weight `n^{−1/2}` of the `H` component, if this is a mixture.
    pub fn mixture_weight(&self) -> Option<f64> {
        match self {
            Self::Mixture { n, .. } => Some(1.0 / libm::sqrt(*n as f64)),
            _ => None,
        }
    }

    /// One draw. A mixture consumes one uniform for the branch indicator
    /// before the branch variate.
    pub fn sample(&self, rng: &mut dyn RngCore) -> f64 {
        match self {
            Self::Gaussian { sigma0 } => {
                let z: f64 = StandardNormal.sample(rng);
                sigma0 * z
            }
            Self::Mixture { sigma0, h, n } => {
                let weight = 1.0 / libm::sqrt(*n as f64);
                let pick_h = rng.random::<f64>() < weight;
                if pick_h {
                    h.sample(rng)
                } else {
                    let z: f64 = StandardNormal.sample(rng);
                    sigma0 * z
                }
            }
            Self::User { h } => h.sample(rng),
        }
    }

    pub fn cdf(&self, x: f64) -> f64 {
        match self {
            Self::Gaussian { sigma0 } => normal::cdf(x / sigma0),
            Self::Mixture { sigma0, h, n } => {
                let weight = 1.0 / libm::sqrt(*n as f64);
                (1.0 - weight) * normal::cdf(x / sigma0) + weight * h.cdf(x)
            }
            Self::User { h } => h.cdf(x),
        }
    }

    pub fn mean(&self) -> f64 {
        0.0
    }

    pub fn variance(&self) -> f64 {
        match self {
            Self::Gaussian { sigma0 } => sigma0 * sigma0,
            Self::Mixture { sigma0, h, n } => {
                let weight = 1.0 / libm::sqrt(*n as f64);
                (1.0 - weight) * sigma0 * sigma0 + weight * h.variance()
            }
            Self::User { h } => h.variance(),
        }
    }
}

/// A stationary AR(p) model with mean `μ`.
#[derive(Debug, Clone)]
pub struct ArModel {
    coeffs: Vec<f64>,
    mean: f64,
    innovation: InnovationLaw,
}

impl ArModel {
    /// Rejects coefficient vectors whose characteristic polynomial
    /// `z^p − β₁z^{p−1} − … − β_p` has a root of modulus ≥ 1.
    pub fn new(coeffs: Vec<f64>, mean: f64, innovation: InnovationLaw) -> Result<Self> {
        check_stationary(&coeffs)?;
        if !mean.is_finite() {
            return Err(invalid("mean must be finite"));
        }
        Ok(Self {
            coeffs,
            mean,
            innovation,
        })
    }

    pub fn coeffs(&self) -> &[f64] {
        &self.coeffs
    }

    pub fn order(&self) -> usize {
        self.coeffs.len()
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// `ν = (1 − β₁ − … − β_p)μ`.
    pub fn intercept(&self) -> f64 {
        (1.0 - self.coeffs.iter().sum::<f64>()) * self.mean
    }

    pub fn innovation(&self) -> &InnovationLaw {
        &self.innovation
    }

    pub fn with_innovation(&self, innovation: InnovationLaw) -> Self {
        Self {
            coeffs: self.coeffs.clone(),
            mean: self.mean,
            innovation,
        }
    }
}

/// Stationarity test by the step-down (Schur–Cohn) recursion: the roots lie
/// strictly inside the unit disk iff every reflection coefficient has
/// modulus < 1.
pub fn check_stationary(coeffs: &[f64]) -> Result<()> {
    if coeffs.len() > MAX_ORDER {
        return Err(invalid(format!(
            "order p = {} exceeds the maximum of {MAX_ORDER}",
            coeffs.len()
        )));
    }
    if coeffs.iter().any(|c| !c.is_finite()) {
        return Err(invalid("coefficients must be finite"));
    }
    let mut a = coeffs.to_vec();
    for k in (1..=a.len()).rev() {
        let r = a[k - 1];
        if r.abs() >= 1.0 - 1e-12 {
            return Err(Error::NonStationary(format!("{coeffs:?}")));
        }
        let denom = 1.0 - r * r;
        let next: Vec<f64> = (0..k - 1)
            .map(|j| (a[j] + r * a[k - 2 - j]) / denom)
            .collect();
        a = next;
    }
    Ok(())
}

/// `γ₀, …, γ_m` of the moving-average representation
/// `u_t = Σ_{j≥0} γ_j ε_{t−j}`: `γ₀ = 1`, `γ_j = Σ_k β_k γ_{j−k}`, `γ_j = 0`
/// for `j < 0`.
pub fn gamma_coeffs(coeffs: &[f64], m: usize) -> Vec<f64> {
    let mut gamma = vec![0.0; m + 1];
    gamma[0] = 1.0;
    for j in 1..=m {
        gamma[j] = coeffs
            .iter()
            .enumerate()
            .filter(|(k, _)| *k < j)
            .map(|(k, b)| b * gamma[j - k - 1])
            .sum();
    }
    gamma
}

/// Observations `v_{1−p}, …, v_n`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesSample {
    values: Vec<f64>,
    p: usize,
}

impl SeriesSample {
    /// `values` holds `n + p` observations, the first `p` being pre-sample
    /// values.
    pub fn new(values: Vec<f64>, p: usize) -> Result<Self> {
        if p > MAX_ORDER {
            return Err(invalid(format!("order p = {p} exceeds the maximum of {MAX_ORDER}")));
        }
        if values.len() < 2 * p + 1 {
            return Err(invalid(format!(
                "need n >= p + 1 observations after the {p} pre-sample values, got {} values in total",
                values.len()
            )));
        }
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(invalid(format!("non-finite observation {bad}")));
        }
        Ok(Self { values, p })
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.values.len() - self.p
    }

    pub fn into_values(self) -> Vec<f64> {
        self.values
    }
}

/// Burn-in used when none is given: `1000 + 100·p` steps.
pub fn default_burn_in(p: usize) -> usize {
    1000 + 100 * p
}

/// Simulates `v_{1−p}, …, v_n` from stream 0 of the simulation domain for
/// `seed`. See [`simulate_ar_with`].
pub fn simulate_ar(model: &ArModel, n: usize, burn_in: usize, seed: u64) -> Result<SeriesSample> {
    let mut rng = substream(seed, domain::SIMULATE, 0);
    simulate_ar_with(model, n, burn_in, &mut rng)
}

/// Runs the recursion from a zero state for `burn_in` steps, then emits
/// `n + p` further values shifted by the mean.
pub fn simulate_ar_with(
    model: &ArModel,
    n: usize,
    burn_in: usize,
    rng: &mut dyn RngCore,
) -> Result<SeriesSample> {
    let p = model.order();
    if n < p + 1 {
        return Err(invalid(format!("need n >= p + 1, got n = {n}, p = {p}")));
    }
    let total = burn_in + n + p;
    let mut u = Vec::with_capacity(total);
    for t in 0..total {
        let mut value = model.innovation.sample(rng);
        for (k, b) in model.coeffs.iter().enumerate() {
            if t > k {
                value += b * u[t - k - 1];
            }
        }
        u.push(value);
    }
    let values = u[burn_in..].iter().map(|x| model.mean + x).collect();
    SeriesSample::new(values, p)
}
