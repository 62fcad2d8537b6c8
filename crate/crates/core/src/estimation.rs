//! Estimation stage: empirical mean, centered series `û_t`, least-squares
//! coefficients `β̂ₙ`, residuals `ε̂_t`, variance estimate `ŝ²ₙ`, and the
//! autocovariance matrix `K` of the stationary Gaussian AR(p).

use alloc::format;
use alloc::vec::Vec;

use nalgebra::{DMatrix, DVector};

use crate::ar_process::{check_stationary, SeriesSample};
use crate::error::{invalid, Error, Result};

/// `û_{1−p}, …, û_n` together with the mean `μ̄ = n^{−1}Σ_{t=1}^n v_t` that
/// was removed.
#[derive(Debug, Clone, PartialEq)]
pub struct CenteredSeries {
    values: Vec<f64>,
    p: usize,
    mean: f64,
}

impl CenteredSeries {
    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn p(&self) -> usize {
        self.p
    }

    pub fn n(&self) -> usize {
        self.values.len() - self.p
    }

    pub fn mean(&self) -> f64 {
        self.mean
    }
}

/// Subtracts the mean of `v_1, …, v_n` from every observation, pre-sample
/// values included.
pub fn center_series(sample: &SeriesSample) -> CenteredSeries {
    let p = sample.p();
    let values = sample.values();
    let n = sample.n() as f64;
    let rough = values[p..].iter().sum::<f64>() / n;
    // second pass removes the rounding error of the plain sum, which matters
    // when the level is large relative to the spread
    let mean = rough + values[p..].iter().map(|v| v - rough).sum::<f64>() / n;
    CenteredSeries {
        values: values.iter().map(|v| v - mean).collect(),
        p,
        mean,
    }
}

/// Estimator of the autoregression coefficients from the centered series.
///
/// The limit theory only needs a root-n consistent estimate; [`Ols`] is the
/// default.
pub trait CoefficientEstimator {
    fn estimate(&self, centered: &CenteredSeries) -> Result<Vec<f64>>;
}

/// Least squares conditional on the pre-sample values `û_{1−p}, …, û_0`.
#[derive(Debug, Clone, Copy, Default)]
pub struct Ols;

impl CoefficientEstimator for Ols {
    fn estimate(&self, centered: &CenteredSeries) -> Result<Vec<f64>> {
        ols_estimate(centered.values(), centered.p())
    }
}

/// Minimizes `Σ_{t=1}^n (û_t − Σ_k b_k û_{t−k})²` by solving the `p × p`
/// normal equations. `centered` holds `û_{1−p}, …, û_n`.
pub fn ols_estimate(centered: &[f64], p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Ok(Vec::new());
    }
    if centered.len() < 2 * p + 1 {
        return Err(invalid(format!(
            "need n >= p + 1 observations after the pre-sample, got {} values for p = {p}",
            centered.len()
        )));
    }
    let mut gram = DMatrix::<f64>::zeros(p, p);
    let mut rhs = DVector::<f64>::zeros(p);
    for t in p..centered.len() {
        let lags = &centered[t - p..t];
        for j in 0..p {
            let xj = lags[p - 1 - j];
            rhs[j] += xj * centered[t];
            for k in 0..=j {
                gram[(j, k)] += xj * lags[p - 1 - k];
            }
        }
    }
    for j in 0..p {
        for k in 0..j {
            gram[(k, j)] = gram[(j, k)];
        }
    }
    let scale = (0..p).map(|j| gram[(j, j)]).fold(0.0, f64::max);
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(Error::EstimationFailed(
            "normal equations are singular (the centered series is identically zero)".into(),
        ));
    }
    let chol = gram.clone().cholesky().ok_or_else(|| {
        Error::EstimationFailed("normal equations are singular or not positive definite".into())
    })?;
    // Reject numerically singular systems that still factorize.
    let min_pivot = chol.l_dirty().diagonal().iter().fold(f64::INFINITY, |a, &b| a.min(b));
    if min_pivot * min_pivot < 1e-13 * scale {
        return Err(Error::EstimationFailed(
            "normal equations are numerically singular".into(),
        ));
    }
    let beta = chol.solve(&rhs);
    Ok(beta.iter().copied().collect())
}

/// Residuals and the variance estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct ResidualFit {
    beta_hat: Vec<f64>,
    residuals: Vec<f64>,
    s2_hat: f64,
    mean_hat: f64,
}

impl ResidualFit {
    /// Builds a fit directly from residuals, computing `ŝ²ₙ = n^{−1}Σ ε̂_t²`.
    pub fn from_residuals(residuals: Vec<f64>, beta_hat: Vec<f64>, mean_hat: f64) -> Result<Self> {
        if residuals.is_empty() {
            return Err(invalid("no residuals"));
        }
        if let Some(bad) = residuals.iter().find(|r| !r.is_finite()) {
            return Err(invalid(format!("non-finite residual {bad}")));
        }
        let s2_hat = residuals.iter().map(|e| e * e).sum::<f64>() / residuals.len() as f64;
        Ok(Self {
            beta_hat,
            residuals,
            s2_hat,
            mean_hat,
        })
    }

    pub fn beta_hat(&self) -> &[f64] {
        &self.beta_hat
    }

    pub fn residuals(&self) -> &[f64] {
        &self.residuals
    }

    pub fn s2_hat(&self) -> f64 {
        self.s2_hat
    }

    pub fn s_hat(&self) -> f64 {
        libm::sqrt(self.s2_hat)
    }

    pub fn mean_hat(&self) -> f64 {
        self.mean_hat
    }

    pub fn n(&self) -> usize {
        self.residuals.len()
    }
}

/// `ε̂_t = û_t − β̂₁û_{t−1} − … − β̂_pû_{t−p}` for `t = 1, …, n`.
pub fn residuals(centered: &CenteredSeries, beta_hat: &[f64]) -> Result<ResidualFit> {
    let p = centered.p();
    if beta_hat.len() != p {
        return Err(invalid(format!(
            "coefficient vector has length {}, expected p = {p}",
            beta_hat.len()
        )));
    }
    let u = centered.values();
    let eps = (p..u.len())
        .map(|t| {
            beta_hat
                .iter()
                .enumerate()
                .fold(u[t], |acc, (k, b)| acc - b * u[t - k - 1])
        })
        .collect();
    ResidualFit::from_residuals(eps, beta_hat.to_vec(), centered.mean())
}

/// Center, estimate and take residuals in one go.
pub fn fit_series(sample: &SeriesSample, estimator: &dyn CoefficientEstimator) -> Result<ResidualFit> {
    let centered = center_series(sample);
    let beta_hat = estimator.estimate(&centered)?;
    residuals(&centered, &beta_hat)
}

/// The `p × p` Toeplitz matrix `k_{i,j} = E u₀⁰u⁰_{i−j}` of autocovariances
/// of the stationary AR(p) driven by `N(0, σ₀²)` innovations.
#[derive(Debug, Clone, PartialEq)]
pub struct KMatrix {
    /// `autocov[h]` for lags `h = 0..p`.
    autocov: Vec<f64>,
}

impl KMatrix {
    pub fn order(&self) -> usize {
        self.autocov.len()
    }

    pub fn autocovariances(&self) -> &[f64] {
        &self.autocov
    }

    pub fn entry(&self, i: usize, j: usize) -> f64 {
        self.autocov[i.abs_diff(j)]
    }

    pub fn to_matrix(&self) -> DMatrix<f64> {
        let p = self.order();
        DMatrix::from_fn(p, p, |i, j| self.entry(i, j))
    }

    pub fn min_eigenvalue(&self) -> f64 {
        if self.order() == 0 {
            return f64::INFINITY;
        }
        self.to_matrix()
            .symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(f64::INFINITY, |a, &b| a.min(b))
    }
}

/// Tail bound at which the `γ` series is truncated.
pub const K_SERIES_TOL: f64 = 1e-12;

const K_SERIES_MAX_TERMS: usize = 10_000_000;

/// `k(h) = σ₀² Σ_m γ_m γ_{m+h}`, summed until the geometric tail bound drops
/// below [`K_SERIES_TOL`].
pub fn estimate_k_matrix(beta: &[f64], sigma0: f64) -> Result<KMatrix> {
    check_stationary(beta)?;
    if !(sigma0.is_finite() && sigma0 > 0.0) {
        return Err(invalid(format!("sigma0 must be finite and > 0, got {sigma0}")));
    }
    let p = beta.len();
    if p == 0 {
        return Ok(KMatrix { autocov: Vec::new() });
    }
    // Decay rate: halfway between the spectral radius and 1 dominates the
    // polynomial factors of repeated roots.
    let rho = companion_spectral_radius(beta);
    let rate = 0.5 * (1.0 + rho);
    let tail_factor = 1.0 / (1.0 - rate * rate);

    let mut gamma: Vec<f64> = Vec::with_capacity(1024);
    gamma.push(1.0);
    let mut m = 0usize;
    loop {
        m += 1;
        let next: f64 = beta
            .iter()
            .enumerate()
            .filter(|(k, _)| *k < m)
            .map(|(k, b)| b * gamma[m - k - 1])
            .sum();
        gamma.push(next);
        if m >= p {
            let window = gamma[m + 1 - p..=m].iter().fold(0.0f64, |a, g| a.max(g.abs()));
            if window * window * tail_factor < K_SERIES_TOL {
                break;
            }
        }
        if m >= K_SERIES_MAX_TERMS {
            return Err(Error::Internal("gamma series did not converge".into()));
        }
    }

    let s2 = sigma0 * sigma0;
    let autocov = (0..p)
        .map(|h| {
            let sum: f64 = gamma.iter().zip(&gamma[h..]).map(|(a, b)| a * b).sum();
            s2 * sum
        })
        .collect();
    Ok(KMatrix { autocov })
}

fn companion_spectral_radius(beta: &[f64]) -> f64 {
    let p = beta.len();
    let companion = DMatrix::from_fn(p, p, |i, j| {
        if i == 0 {
            beta[j]
        } else if i == j + 1 {
            1.0
        } else {
            0.0
        }
    });
    companion
        .complex_eigenvalues()
        .iter()
        .fold(0.0f64, |a, z| a.max(libm::hypot(z.re, z.im)))
}
