//! The limiting Gaussian process of the residual empirical process, its
//! drift under local alternatives, and Monte Carlo limit distributions.
//!
//! Under the null, `n^{1/2}[Ĝₙ(ŝₙΦ⁻¹(t)) − t]` converges to a centered
//! Gaussian process `u(t)` on `[0, 1]` with covariance
//!
//! ```text
//! c(s, t) = min(s, t) − st − φ(Φ⁻¹(s))φ(Φ⁻¹(t)) − ½ Φ⁻¹(s)φ(Φ⁻¹(s)) Φ⁻¹(t)φ(Φ⁻¹(t)).
//! ```
//!
//! The two subtracted rank-one terms come from estimating the mean and the
//! scale. Under the local mixture alternative the limit is `u(t) + δ(t)`.
//!
//! Functionals of `u` are simulated on the interior grid `t_i = i/G`,
//! `i = 1..G−1`; the process vanishes at both endpoints, so the sup is taken
//! over the interior points and the integral is `G^{−1} Σ u(t_i)²`.

use alloc::format;
use alloc::string::String;
use alloc::sync::Arc;
use alloc::vec::Vec;

use nalgebra::DMatrix;
use rand_distr::{Distribution, StandardNormal};

use crate::ar_process::LawH;
use crate::error::{invalid, Error, Result};
use crate::gof_tests::StatKind;
use crate::normal;
use crate::rng::{derive_seed, domain, substream, Executor, Sequential};

/// Eigenvalues of the kernel Gram matrix down to this value are clipped to 0.
pub const PSD_TOLERANCE: f64 = 1e-8;

/// Default number of grid intervals.
pub const DEFAULT_GRID: usize = 512;

/// Replications per scheduling unit. Chunk boundaries depend only on the
/// replication index, never on the executor.
const CHUNK: usize = 64;

/// `c(s, t)` for `s, t ∈ [0, 1]`.
pub fn cov_eval(s: f64, t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&s) || !(0.0..=1.0).contains(&t) {
        return Err(invalid(format!("kernel arguments must lie in [0, 1], got ({s}, {t})")));
    }
    Ok(kernel(s, t))
}

fn kernel(s: f64, t: f64) -> f64 {
    if s <= 0.0 || t <= 0.0 || s >= 1.0 || t >= 1.0 {
        return 0.0;
    }
    let (a, b) = (normal::quantile(s), normal::quantile(t));
    let (pa, pb) = (normal::pdf(a), normal::pdf(b));
    let (ga, gb) = (a * pa, b * pb);
    s.min(t) - s * t - pa * pb - 0.5 * (ga * gb)
}

/// An alternative `H` with the null scale `σ₀`, defining the drift `δ(t)`.
#[derive(Debug, Clone)]
pub struct ShiftSpec {
    h: Arc<dyn LawH>,
    sigma0: f64,
}

impl ShiftSpec {
    pub fn new(h: Arc<dyn LawH>, sigma0: f64) -> Result<Self> {
        if !(sigma0.is_finite() && sigma0 > 0.0) {
            return Err(invalid(format!("sigma0 must be finite and > 0, got {sigma0}")));
        }
        let var = h.variance();
        if !(var.is_finite() && var > 0.0) {
            return Err(Error::InvalidLaw(format!("variance of H must be finite and > 0, got {var}")));
        }
        Ok(Self { h, sigma0 })
    }

    pub fn h(&self) -> &Arc<dyn LawH> {
        &self.h
    }

    pub fn sigma0(&self) -> f64 {
        self.sigma0
    }

    /// `<H descriptor>@sigma0=<σ₀>`, as recorded in table headers.
    pub fn describe(&self) -> String {
        format!("{}@sigma0={}", self.h.describe(), self.sigma0)
    }
}

/// `δ(t) = H(σ₀Φ⁻¹(t)) − t + ½Φ⁻¹(t)φ(Φ⁻¹(t))(σ_H²/σ₀² − 1)`, and 0 at the
/// endpoints.
pub fn delta_shift(spec: &ShiftSpec, t: f64) -> f64 {
    if !(t > 0.0 && t < 1.0) {
        return 0.0;
    }
    let x = normal::quantile(t);
    let ratio = spec.h.variance() / (spec.sigma0 * spec.sigma0);
    spec.h.cdf(spec.sigma0 * x) - t + 0.5 * x * normal::pdf(x) * (ratio - 1.0)
}

/// Monte Carlo sample of `sup_t|u(t) + δ(t)|` or `∫(u(t) + δ(t))²dt`.
#[derive(Debug, Clone, PartialEq)]
pub struct LimitLawTable {
    kind: StatKind,
    shift: Option<String>,
    samples: Vec<f64>,
    grid_size: usize,
    seed: u64,
}

impl LimitLawTable {
    /// Reassembles a table, e.g. after deserialization. Samples are sorted.
    pub fn from_parts(
        kind: StatKind,
        shift: Option<String>,
        mut samples: Vec<f64>,
        grid_size: usize,
        seed: u64,
    ) -> Result<Self> {
        if grid_size < 2 {
            return Err(invalid(format!("grid_size must be >= 2, got {grid_size}")));
        }
        if samples.iter().any(|s| !s.is_finite()) {
            return Err(invalid("table samples must be finite"));
        }
        samples.sort_by(f64::total_cmp);
        Ok(Self {
            kind,
            shift,
            samples,
            grid_size,
            seed,
        })
    }

    pub fn kind(&self) -> StatKind {
        self.kind
    }

    /// Description of the drift, `None` for the null law.
    pub fn shift(&self) -> Option<&str> {
        self.shift.as_deref()
    }

    pub fn samples(&self) -> &[f64] {
        &self.samples
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    pub fn n_reps(&self) -> usize {
        self.samples.len()
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// Fraction of samples strictly above `threshold`.
    pub fn exceedance(&self, threshold: f64) -> f64 {
        let above = self.samples.len() - self.samples.partition_point(|&s| s <= threshold);
        above as f64 / self.samples.len() as f64
    }
}

/// Upper `alpha` critical value: the nearest-rank `(1 − alpha)` quantile,
/// i.e. the `⌈(1 − alpha)·N⌉`-th smallest sample.
pub fn quantile(table: &LimitLawTable, alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(invalid(format!("alpha must lie in (0, 1), got {alpha}")));
    }
    let n = table.samples.len();
    if n == 0 {
        return Err(invalid("quantile of an empty table"));
    }
    let pos = (1.0 - alpha) * n as f64;
    // (1 − 0.05)·10⁵ is 95000.00000000001 in floating point
    let rank = if (pos - libm::round(pos)).abs() < 1e-9 * n as f64 {
        libm::round(pos)
    } else {
        libm::ceil(pos)
    } as usize;
    Ok(table.samples[rank.clamp(1, n) - 1])
}

/// Symmetric square root of the kernel Gram matrix on the interior grid.
#[derive(Debug, Clone)]
pub struct KernelFactor {
    grid_size: usize,
    t: Vec<f64>,
    factor: DMatrix<f64>,
    min_eigenvalue: f64,
}

impl KernelFactor {
    pub fn new(grid_size: usize) -> Result<Self> {
        if grid_size < 2 {
            return Err(invalid(format!("grid_size must be >= 2, got {grid_size}")));
        }
        let m = grid_size - 1;
        let t: Vec<f64> = (1..grid_size).map(|i| i as f64 / grid_size as f64).collect();
        let gram = DMatrix::from_fn(m, m, |i, j| {
            if i <= j {
                kernel(t[i], t[j])
            } else {
                kernel(t[j], t[i])
            }
        });
        let eigen = gram.symmetric_eigen();
        let min_eigenvalue = eigen.eigenvalues.iter().fold(f64::INFINITY, |a, &b| a.min(b));
        if min_eigenvalue < -PSD_TOLERANCE {
            return Err(Error::Internal(format!(
                "kernel Gram matrix has eigenvalue {min_eigenvalue} below -{PSD_TOLERANCE}"
            )));
        }
        let mut factor = eigen.eigenvectors;
        for (j, &lambda) in eigen.eigenvalues.iter().enumerate() {
            let root = libm::sqrt(lambda.max(0.0));
            factor.column_mut(j).scale_mut(root);
        }
        Ok(Self {
            grid_size,
            t,
            factor,
            min_eigenvalue,
        })
    }

    pub fn grid_size(&self) -> usize {
        self.grid_size
    }

    /// Interior grid points `i/G`.
    pub fn grid(&self) -> &[f64] {
        &self.t
    }

    /// Smallest eigenvalue of the Gram matrix before clipping.
    pub fn min_eigenvalue(&self) -> f64 {
        self.min_eigenvalue
    }

    /// One path of `u` on the interior grid, from stream `rep` of `seed`.
    pub fn sample_path(&self, seed: u64, rep: u64) -> Vec<f64> {
        let m = self.t.len();
        let mut rng = substream(seed, domain::LIMIT_LAW, rep);
        let z: Vec<f64> = (0..m).map(|_| StandardNormal.sample(&mut rng)).collect();
        let z = nalgebra::DVector::from_vec(z);
        (&self.factor * z).iter().copied().collect()
    }

    /// Both functionals from the same paths: `[Kolmogorov, OmegaSquare]`.
    ///
    /// Replication `r` uses stream `r` of `(seed, LIMIT_LAW)` whether or not a
    /// shift is given, so a zero drift reproduces the null samples.
    pub fn simulate_both<E: Executor>(
        &self,
        shift: Option<&ShiftSpec>,
        n_reps: usize,
        seed: u64,
        exec: &E,
    ) -> Result<[LimitLawTable; 2]> {
        if n_reps == 0 {
            return Err(invalid("n_reps must be >= 1"));
        }
        let m = self.t.len();
        let drift: Option<Vec<f64>> =
            shift.map(|spec| self.t.iter().map(|&t| delta_shift(spec, t)).collect());
        let chunks = n_reps.div_ceil(CHUNK);
        let per_chunk: Vec<Vec<(f64, f64)>> = exec.map_indexed(chunks, |c| {
            let start = c * CHUNK;
            let len = CHUNK.min(n_reps - start);
            let mut z = DMatrix::<f64>::zeros(m, len);
            for col in 0..len {
                let mut rng = substream(seed, domain::LIMIT_LAW, (start + col) as u64);
                for row in 0..m {
                    z[(row, col)] = StandardNormal.sample(&mut rng);
                }
            }
            let paths = &self.factor * z;
            paths
                .column_iter()
                .map(|path| {
                    let mut sup = 0.0f64;
                    let mut sq = 0.0f64;
                    for (i, &u) in path.iter().enumerate() {
                        let v = match &drift {
                            Some(d) => u + d[i],
                            None => u,
                        };
                        sup = sup.max(v.abs());
                        sq += v * v;
                    }
                    (sup, sq / self.grid_size as f64)
                })
                .collect()
        });
        let (sups, integrals): (Vec<f64>, Vec<f64>) = per_chunk.into_iter().flatten().unzip();
        let desc = shift.map(ShiftSpec::describe);
        Ok([
            LimitLawTable::from_parts(StatKind::Kolmogorov, desc.clone(), sups, self.grid_size, seed)?,
            LimitLawTable::from_parts(StatKind::OmegaSquare, desc, integrals, self.grid_size, seed)?,
        ])
    }

    pub fn simulate<E: Executor>(
        &self,
        kind: StatKind,
        shift: Option<&ShiftSpec>,
        n_reps: usize,
        seed: u64,
        exec: &E,
    ) -> Result<LimitLawTable> {
        let [sup, integral] = self.simulate_both(shift, n_reps, seed, exec)?;
        Ok(match kind {
            StatKind::Kolmogorov => sup,
            StatKind::OmegaSquare => integral,
        })
    }
}

/// Builds the kernel factor and simulates one table on the calling thread.
pub fn simulate_limit_functionals(
    kind: StatKind,
    shift: Option<&ShiftSpec>,
    grid_size: usize,
    n_reps: usize,
    seed: u64,
) -> Result<LimitLawTable> {
    KernelFactor::new(grid_size)?.simulate(kind, shift, n_reps, seed, &Sequential)
}

/// Seed of the shifted table paired with a null table built from `seed`.
pub fn shifted_seed(seed: u64) -> u64 {
    derive_seed(seed, domain::SHIFTED_SEED)
}

/// `P(functional of u + δ > null critical value at alpha)`.
pub fn power_from_tables(null: &LimitLawTable, shifted: &LimitLawTable, alpha: f64) -> Result<f64> {
    if null.kind() != shifted.kind() {
        return Err(invalid("null and shifted tables are for different statistics"));
    }
    Ok(shifted.exceedance(quantile(null, alpha)?))
}

/// Asymptotic power of the level-`alpha` test against the local alternative
/// `H`. The null table uses `seed`, the shifted one [`shifted_seed`].
pub fn asymptotic_power(
    kind: StatKind,
    shift: &ShiftSpec,
    alpha: f64,
    grid_size: usize,
    n_reps: usize,
    seed: u64,
) -> Result<f64> {
    let factor = KernelFactor::new(grid_size)?;
    let null = factor.simulate(kind, None, n_reps, seed, &Sequential)?;
    let shifted = factor.simulate(kind, Some(shift), n_reps, shifted_seed(seed), &Sequential)?;
    power_from_tables(&null, &shifted, alpha)
}
