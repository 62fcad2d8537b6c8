//! Finite-sample size and power of the tests, compared with the asymptotic
//! power of the limit law.
//!
//! Replication `r` of an experiment draws its whole series from stream `r`
//! of `(seed, EXPERIMENT)`. Critical values always come from the null limit
//! table, i.e. the experiments evaluate the asymptotic test.

use alloc::format;
use alloc::vec::Vec;

use crate::ar_process::{default_burn_in, simulate_ar_with, ArModel, InnovationLaw};
use crate::error::{invalid, Result};
use crate::estimation::{fit_series, Ols};
use crate::gof_tests::{both_statistics, StatKind};
use crate::limit_law::{power_from_tables, quantile, shifted_seed, KernelFactor, LimitLawTable, ShiftSpec};
use crate::rng::{domain, substream, Executor};

#[derive(Debug, Clone)]
pub struct ExperimentSpec {
    /// Gaussian innovations for a size experiment, `Mixture` with the same
    /// `n` for a power experiment.
    pub model: ArModel,
    pub n: usize,
    pub n_reps: usize,
    pub alpha: f64,
    pub kind: StatKind,
    pub seed: u64,
    pub grid_size: usize,
    pub limit_reps: usize,
    /// `None` means [`default_burn_in`].
    pub burn_in: Option<usize>,
}

impl ExperimentSpec {
    pub fn burn_in(&self) -> usize {
        self.burn_in.unwrap_or_else(|| default_burn_in(self.model.order()))
    }

    fn validate(&self) -> Result<()> {
        if !(self.alpha > 0.0 && self.alpha < 1.0) {
            return Err(invalid(format!("alpha must lie in (0, 1), got {}", self.alpha)));
        }
        if self.n_reps == 0 {
            return Err(invalid("n_reps must be >= 1"));
        }
        if self.limit_reps == 0 {
            return Err(invalid("limit_reps must be >= 1"));
        }
        if self.n < self.model.order() + 1 {
            return Err(invalid(format!(
                "need n >= p + 1, got n = {}, p = {}",
                self.n,
                self.model.order()
            )));
        }
        Ok(())
    }

    /// The drift of the local alternative, or `None` under the null.
    pub fn shift(&self) -> Result<Option<ShiftSpec>> {
        match self.model.innovation() {
            InnovationLaw::Gaussian { .. } => Ok(None),
            InnovationLaw::Mixture { sigma0, h, n } => {
                if *n != self.n {
                    return Err(invalid(format!(
                        "mixture weight is tied to n = {n} but the experiment uses n = {}",
                        self.n
                    )));
                }
                Ok(Some(ShiftSpec::new(h.clone(), *sigma0)?))
            }
            InnovationLaw::User { .. } => Err(invalid(
                "experiments need Gaussian (size) or Mixture (power) innovations",
            )),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PowerReport {
    pub kind: StatKind,
    pub n: usize,
    pub n_reps: usize,
    pub alpha: f64,
    pub empirical_rejection_rate: f64,
    /// `√(r(1−r)/n_reps)`.
    pub mc_stderr: f64,
    pub asymptotic_power: f64,
    /// Binomial standard error of `asymptotic_power` from the limit table
    /// size; 0 for size experiments.
    pub asymptotic_stderr: f64,
    pub critical_value: f64,
    pub statistics: Option<Vec<f64>>,
}

impl PowerReport {
    /// `√(mc_stderr² + asymptotic_stderr²)`.
    pub fn combined_stderr(&self) -> f64 {
        libm::sqrt(self.mc_stderr * self.mc_stderr + self.asymptotic_stderr * self.asymptotic_stderr)
    }
}

pub fn binomial_stderr(rate: f64, reps: usize) -> f64 {
    libm::sqrt(rate * (1.0 - rate) / reps as f64)
}

/// `(D̂ₙ, ω̂ₙ²)` for every replication, in replication order.
pub fn experiment_statistics<E: Executor>(spec: &ExperimentSpec, exec: &E) -> Result<Vec<(f64, f64)>> {
    spec.validate()?;
    spec.shift()?;
    let burn_in = spec.burn_in();
    let results = exec.map_indexed(spec.n_reps, |rep| {
        let mut rng = substream(spec.seed, domain::EXPERIMENT, rep as u64);
        let sample = simulate_ar_with(&spec.model, spec.n, burn_in, &mut rng)?;
        let fit = fit_series(&sample, &Ols)?;
        both_statistics(&fit)
    });
    results.into_iter().collect()
}

/// Rejection rate of `statistics` at the critical value of `null`.
pub fn report_from(
    kind: StatKind,
    n: usize,
    statistics: Vec<f64>,
    null: &LimitLawTable,
    alpha: f64,
    asymptotic_power: f64,
    asymptotic_reps: Option<usize>,
) -> Result<PowerReport> {
    if statistics.is_empty() {
        return Err(invalid("no replications"));
    }
    let critical_value = quantile(null, alpha)?;
    let reps = statistics.len();
    let rejected = statistics.iter().filter(|&&s| s > critical_value).count();
    let rate = rejected as f64 / reps as f64;
    Ok(PowerReport {
        kind,
        n,
        n_reps: reps,
        alpha,
        empirical_rejection_rate: rate,
        mc_stderr: binomial_stderr(rate, reps),
        asymptotic_power,
        asymptotic_stderr: asymptotic_reps.map_or(0.0, |r| binomial_stderr(asymptotic_power, r)),
        critical_value,
        statistics: Some(statistics),
    })
}

fn select(stats: &[(f64, f64)], kind: StatKind) -> Vec<f64> {
    stats
        .iter()
        .map(|&(d, w)| match kind {
            StatKind::Kolmogorov => d,
            StatKind::OmegaSquare => w,
        })
        .collect()
}

/// Null rejection rate; the asymptotic power of the null is `alpha` itself.
pub fn run_size_experiment<E: Executor>(
    spec: &ExperimentSpec,
    factor: &KernelFactor,
    exec: &E,
) -> Result<PowerReport> {
    if !matches!(spec.model.innovation(), InnovationLaw::Gaussian { .. }) {
        return Err(invalid("a size experiment needs Gaussian innovations"));
    }
    check_grid(spec, factor)?;
    let stats = experiment_statistics(spec, exec)?;
    let null = factor.simulate(spec.kind, None, spec.limit_reps, spec.seed, exec)?;
    report_from(spec.kind, spec.n, select(&stats, spec.kind), &null, spec.alpha, spec.alpha, None)
}

/// Rejection rate under the local alternative next to the asymptotic power
/// for the same `H`, `σ₀` and `alpha`.
pub fn run_power_experiment<E: Executor>(
    spec: &ExperimentSpec,
    factor: &KernelFactor,
    exec: &E,
) -> Result<PowerReport> {
    let shift = spec
        .shift()?
        .ok_or_else(|| invalid("a power experiment needs Mixture innovations"))?;
    check_grid(spec, factor)?;
    let stats = experiment_statistics(spec, exec)?;
    let null = factor.simulate(spec.kind, None, spec.limit_reps, spec.seed, exec)?;
    let shifted = factor.simulate(spec.kind, Some(&shift), spec.limit_reps, shifted_seed(spec.seed), exec)?;
    let asymptotic = power_from_tables(&null, &shifted, spec.alpha)?;
    report_from(
        spec.kind,
        spec.n,
        select(&stats, spec.kind),
        &null,
        spec.alpha,
        asymptotic,
        Some(spec.limit_reps),
    )
}

fn check_grid(spec: &ExperimentSpec, factor: &KernelFactor) -> Result<()> {
    if factor.grid_size() != spec.grid_size {
        return Err(invalid(format!(
            "kernel factor is for grid {}, experiment asks for {}",
            factor.grid_size(),
            spec.grid_size
        )));
    }
    Ok(())
}
