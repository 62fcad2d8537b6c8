//! Subcommands. Each returns the text it produces; the binary decides
//! whether it goes to a file or stdout.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use arnorm_core::ar_process::{default_burn_in, simulate_ar_with};
use arnorm_core::limit_law::{power_from_tables, shifted_seed, DEFAULT_GRID};
use arnorm_core::power_lab::{experiment_statistics, report_from};
use arnorm_core::rng::{domain, substream};
use arnorm_core::{
    fit_series, kolmogorov_stat, omega2_stat, ArModel, ExperimentSpec, GofResult, InnovationLaw,
    KernelFactor, LawH, LimitLawTable, Ols, SeriesSample, ShiftSpec, StatKind,
};
use clap::{Args, Parser, Subcommand};

use crate::config::PowerConfig;
use crate::descriptor::parse_law;
use crate::error::{CliError, Result};
use crate::exec::RayonExecutor;
use crate::report::{format_csv, PowerRow};
use crate::series_file::{format_series, read_series};
use crate::table_file::{format_table, read_table};
use crate::VERSION;

const DEFAULT_TABLE_REPS: usize = 100_000;

#[derive(Debug, Parser)]
#[command(name = "arnorm", version, about = "Residual-based normality tests for AR(p) innovations")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Test a series for normal innovations.
    Test(TestArgs),
    /// Simulate a limit-law table and write it with a quantile summary.
    Quantiles(QuantilesArgs),
    /// Run size/power experiments from a TOML config, emit CSV.
    Power(PowerArgs),
    /// Dump a simulated AR(p) series.
    Simulate(SimulateArgs),
}

impl Command {
    pub fn out(&self) -> Option<&Path> {
        match self {
            Command::Test(a) => a.out.as_deref(),
            Command::Quantiles(a) => a.out.as_deref(),
            Command::Power(a) => a.out.as_deref(),
            Command::Simulate(a) => a.out.as_deref(),
        }
    }
}

#[derive(Debug, Args)]
pub struct TestArgs {
    /// Series file: one value per line, `#` comments allowed.
    pub series: PathBuf,
    /// Autoregression order.
    #[arg(long, default_value_t = 0)]
    pub p: usize,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Grid for freshly simulated tables (default 512).
    #[arg(long)]
    pub grid: Option<usize>,
    /// Replications for freshly simulated tables (default 100000).
    #[arg(long)]
    pub reps: Option<usize>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Cached Kolmogorov table from `arnorm quantiles`.
    #[arg(long)]
    pub ks_table: Option<PathBuf>,
    /// Cached omega-square table from `arnorm quantiles`.
    #[arg(long)]
    pub omega2_table: Option<PathBuf>,
    /// Worker threads (0 = all cores). Never changes the output.
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct QuantilesArgs {
    /// `kolmogorov` or `omega2`.
    #[arg(long, default_value = "kolmogorov")]
    pub kind: String,
    #[arg(long, default_value_t = DEFAULT_GRID)]
    pub grid: usize,
    #[arg(long, default_value_t = DEFAULT_TABLE_REPS)]
    pub reps: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PowerArgs {
    /// TOML experiment config.
    pub config: PathBuf,
    /// Overrides `seed` from the config.
    #[arg(long)]
    pub seed: Option<u64>,
    /// Overrides `reps` from the config.
    #[arg(long)]
    pub reps: Option<usize>,
    /// Overrides `grid` from the config.
    #[arg(long)]
    pub grid: Option<usize>,
    /// Overrides `alpha` from the config.
    #[arg(long)]
    pub alpha: Option<f64>,
    #[arg(long, default_value_t = 0)]
    pub workers: usize,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    /// Comma-separated coefficients β₁,…,β_p (empty for i.i.d.).
    #[arg(long, default_value = "", allow_hyphen_values = true)]
    pub coeffs: String,
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub mean: f64,
    #[arg(long, default_value_t = 1.0)]
    pub sigma0: f64,
    #[arg(long)]
    pub n: usize,
    /// Defaults to 1000 + 100·p.
    #[arg(long)]
    pub burn_in: Option<usize>,
    /// Local alternative: innovations from the mixture with this H and
    /// weight n^(-1/2).
    #[arg(long, conflicts_with = "law")]
    pub h: Option<String>,
    /// Innovations drawn from this law outright.
    #[arg(long)]
    pub law: Option<String>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

pub fn run(cli: &Cli) -> Result<String> {
    match &cli.command {
        Command::Test(a) => cmd_test(a),
        Command::Quantiles(a) => cmd_quantiles(a),
        Command::Power(a) => cmd_power(a),
        Command::Simulate(a) => cmd_simulate(a),
    }
}

fn check_alpha(alpha: f64) -> Result<()> {
    if alpha > 0.0 && alpha < 1.0 {
        Ok(())
    } else {
        Err(CliError::Usage(format!("--alpha must lie in (0, 1), got {alpha}")))
    }
}

fn check_reps(reps: usize) -> Result<()> {
    if reps == 0 {
        Err(CliError::Usage("--reps must be at least 1".into()))
    } else {
        Ok(())
    }
}

fn check_grid(grid: usize) -> Result<()> {
    if grid < 2 {
        Err(CliError::Usage(format!("--grid must be at least 2, got {grid}")))
    } else {
        Ok(())
    }
}

fn load_cached(
    path: &Path,
    kind: StatKind,
    grid: Option<usize>,
    reps: Option<usize>,
) -> Result<LimitLawTable> {
    let table = read_table(path)?;
    let mismatch = |what: String| {
        CliError::Usage(format!("cached table {} does not fit: {what}", path.display()))
    };
    if table.kind() != kind {
        return Err(mismatch(format!("kind is {}, expected {kind}", table.kind())));
    }
    if let Some(shift) = table.shift() {
        return Err(mismatch(format!("it is a shifted table ({shift})")));
    }
    if let Some(g) = grid.filter(|&g| g != table.grid_size()) {
        return Err(mismatch(format!("grid_size is {}, requested {g}", table.grid_size())));
    }
    if let Some(r) = reps.filter(|&r| r != table.n_reps()) {
        return Err(mismatch(format!("n_reps is {}, requested {r}", table.n_reps())));
    }
    Ok(table)
}

fn describe_result(out: &mut String, r: &GofResult) {
    let verdict = match r.rejected() {
        Some(true) => "rejected",
        Some(false) => "not rejected",
        None => "n/a",
    };
    let _ = writeln!(
        out,
        "{}: value={} critical_value={} p_value={} verdict={verdict}",
        r.kind,
        r.value,
        r.critical_value.map_or("n/a".into(), |c| c.to_string()),
        r.p_value.map_or("n/a".into(), |p| p.to_string()),
    );
}

pub fn cmd_test(args: &TestArgs) -> Result<String> {
    check_alpha(args.alpha)?;
    if let Some(g) = args.grid {
        check_grid(g)?;
    }
    if let Some(r) = args.reps {
        check_reps(r)?;
    }
    let values = read_series(&args.series)?;
    let count = values.len();
    let sample = SeriesSample::new(values, args.p).map_err(|_| {
        CliError::Usage(format!(
            "{} holds {count} values; with p = {} the test needs n >= p + 1 observations after {} pre-sample values, i.e. at least {} values",
            args.series.display(),
            args.p,
            args.p,
            2 * args.p + 1
        ))
    })?;
    let fit = fit_series(&sample, &Ols)?;
    let ks = kolmogorov_stat(&fit)?;
    let w2 = omega2_stat(&fit)?;

    let grid = args.grid.unwrap_or(DEFAULT_GRID);
    let reps = args.reps.unwrap_or(DEFAULT_TABLE_REPS);
    let cached_ks = args
        .ks_table
        .as_deref()
        .map(|p| load_cached(p, StatKind::Kolmogorov, args.grid, args.reps))
        .transpose()?;
    let cached_w2 = args
        .omega2_table
        .as_deref()
        .map(|p| load_cached(p, StatKind::OmegaSquare, args.grid, args.reps))
        .transpose()?;
    let (ks_table, w2_table) = match (cached_ks, cached_w2) {
        (Some(a), Some(b)) => (a, b),
        (a, b) => {
            let exec = RayonExecutor::new(args.workers)?;
            let [sup, integral] = KernelFactor::new(grid)?.simulate_both(None, reps, args.seed, &exec)?;
            (a.unwrap_or(sup), b.unwrap_or(integral))
        }
    };
    let ks = ks.with_table(&ks_table, args.alpha)?;
    let w2 = w2.with_table(&w2_table, args.alpha)?;

    let mut out = String::new();
    let _ = writeln!(out, "# arnorm {VERSION} test");
    let _ = writeln!(
        out,
        "# config: series={} p={} alpha={} seed={} kolmogorov_table=grid_size:{},n_reps:{},seed:{} omega2_table=grid_size:{},n_reps:{},seed:{}",
        args.series.display(),
        args.p,
        args.alpha,
        args.seed,
        ks_table.grid_size(),
        ks_table.n_reps(),
        ks_table.seed(),
        w2_table.grid_size(),
        w2_table.n_reps(),
        w2_table.seed(),
    );
    let _ = writeln!(out, "n={}", fit.n());
    let _ = writeln!(out, "p={}", args.p);
    let _ = writeln!(out, "mean_hat={}", fit.mean_hat());
    let beta: Vec<String> = fit.beta_hat().iter().map(f64::to_string).collect();
    let _ = writeln!(out, "beta_hat={}", beta.join(","));
    let _ = writeln!(out, "s2_hat={}", fit.s2_hat());
    describe_result(&mut out, &ks);
    describe_result(&mut out, &w2);
    Ok(out)
}

pub fn cmd_quantiles(args: &QuantilesArgs) -> Result<String> {
    let kind = StatKind::from_name(&args.kind)
        .ok_or_else(|| CliError::Usage(format!("unknown --kind {:?} (kolmogorov, omega2)", args.kind)))?;
    check_reps(args.reps)?;
    check_grid(args.grid)?;
    let exec = RayonExecutor::new(args.workers)?;
    let table = KernelFactor::new(args.grid)?.simulate(kind, None, args.reps, args.seed, &exec)?;
    format_table(&table)
}

fn parse_coeffs(text: &str) -> Result<Vec<f64>> {
    text.split(',')
        .map(str::trim)
        .filter(|s| !s.is_empty())
        .map(|s| {
            s.parse::<f64>()
                .map_err(|_| CliError::Usage(format!("bad coefficient {s:?}")))
        })
        .collect()
}

pub fn cmd_simulate(args: &SimulateArgs) -> Result<String> {
    let coeffs = parse_coeffs(&args.coeffs)?;
    let innovation = match (&args.h, &args.law) {
        (Some(h), _) => InnovationLaw::mixture(args.sigma0, parse_law(h, args.sigma0)?, args.n)?,
        (None, Some(law)) => InnovationLaw::user(parse_law(law, args.sigma0)?)?,
        (None, None) => InnovationLaw::gaussian(args.sigma0)?,
    };
    let model = ArModel::new(coeffs, args.mean, innovation)?;
    let burn_in = args.burn_in.unwrap_or_else(|| default_burn_in(model.order()));
    let mut rng = substream(args.seed, domain::SIMULATE, 0);
    let sample = simulate_ar_with(&model, args.n, burn_in, &mut rng)?;

    let mut command = format!(
        "arnorm simulate --coeffs={} --mean={} --sigma0={} --n={} --burn-in={} --seed={}",
        args.coeffs, args.mean, args.sigma0, args.n, burn_in, args.seed
    );
    if let Some(h) = &args.h {
        command.push_str(&format!(" --h={h}"));
    }
    if let Some(law) = &args.law {
        command.push_str(&format!(" --law={law}"));
    }
    let header = vec![
        format!("arnorm {VERSION} simulate"),
        format!("command: {command}"),
        format!("p={} n={}", model.order(), args.n),
    ];
    Ok(format_series(&header, sample.values()))
}

struct Alternative {
    descriptor: String,
    law: Option<Arc<dyn LawH>>,
}

pub fn cmd_power(args: &PowerArgs) -> Result<String> {
    let mut cfg = PowerConfig::read(&args.config)?;
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    if let Some(reps) = args.reps {
        cfg.reps = reps;
    }
    if let Some(grid) = args.grid {
        cfg.grid = grid;
    }
    if let Some(alpha) = args.alpha {
        cfg.alpha = crate::config::OneOrMany::One(alpha);
    }
    power_rows(&cfg, args.workers).and_then(|rows| {
        let mut header = vec![format!("arnorm {VERSION} power"), "resolved config:".into()];
        header.extend(cfg.to_toml().lines().map(|l| format!("  {l}")));
        format_csv(&header, &rows)
    })
}

/// All CSV rows for a resolved config.
pub fn power_rows(cfg: &PowerConfig, workers: usize) -> Result<Vec<PowerRow>> {
    check_reps(cfg.reps)?;
    check_grid(cfg.grid)?;
    if cfg.limit_reps == 0 {
        return Err(CliError::Usage("limit_reps must be at least 1".into()));
    }
    let alphas = cfg.alpha.to_vec();
    for &a in &alphas {
        check_alpha(a)?;
    }
    let kinds = cfg
        .statistics
        .iter()
        .map(|s| StatKind::from_name(s).ok_or_else(|| CliError::Usage(format!("unknown statistic {s:?}"))))
        .collect::<Result<Vec<_>>>()?;
    let alternatives = cfg
        .h
        .to_vec()
        .into_iter()
        .map(|d| {
            let law = if d.trim() == "none" {
                None
            } else {
                Some(parse_law(&d, cfg.sigma0)?)
            };
            Ok(Alternative { descriptor: d, law })
        })
        .collect::<Result<Vec<_>>>()?;
    let null_model = ArModel::new(cfg.coeffs.clone(), cfg.mean, InnovationLaw::gaussian(cfg.sigma0)?)?;

    let exec = RayonExecutor::new(workers)?;
    let factor = KernelFactor::new(cfg.grid)?;
    let null_tables = factor.simulate_both(None, cfg.limit_reps, cfg.seed, &exec)?;

    let mut rows = Vec::new();
    for alt in &alternatives {
        let shifted_tables = match &alt.law {
            Some(h) => {
                let shift = ShiftSpec::new(h.clone(), cfg.sigma0)?;
                Some(factor.simulate_both(Some(&shift), cfg.limit_reps, shifted_seed(cfg.seed), &exec)?)
            }
            None => None,
        };
        for n in cfg.n.to_vec() {
            let innovation = match &alt.law {
                Some(h) => InnovationLaw::mixture(cfg.sigma0, h.clone(), n)?,
                None => InnovationLaw::gaussian(cfg.sigma0)?,
            };
            let spec = ExperimentSpec {
                model: null_model.with_innovation(innovation),
                n,
                n_reps: cfg.reps,
                alpha: alphas[0],
                kind: StatKind::Kolmogorov,
                seed: cfg.seed,
                grid_size: cfg.grid,
                limit_reps: cfg.limit_reps,
                burn_in: cfg.burn_in,
            };
            let stats = experiment_statistics(&spec, &exec)?;
            for &kind in &kinds {
                let idx = kind_index(kind);
                let values: Vec<f64> = stats.iter().map(|s| if idx == 0 { s.0 } else { s.1 }).collect();
                for &alpha in &alphas {
                    let (asymptotic, asym_reps) = match &shifted_tables {
                        Some(t) => (power_from_tables(&null_tables[idx], &t[idx], alpha)?, Some(cfg.limit_reps)),
                        None => (alpha, None),
                    };
                    let report = report_from(kind, n, values.clone(), &null_tables[idx], alpha, asymptotic, asym_reps)?;
                    rows.push(PowerRow {
                        n,
                        h: alt.descriptor.clone(),
                        statistic: kind.name().into(),
                        alpha,
                        empirical_power: report.empirical_rejection_rate,
                        stderr: report.mc_stderr,
                        asymptotic_power: report.asymptotic_power,
                        asymptotic_stderr: report.asymptotic_stderr,
                        critical_value: report.critical_value,
                        n_reps: report.n_reps,
                        seed: cfg.seed,
                        lipschitz_density: alt.law.as_ref().is_none_or(|h| h.lipschitz_density()),
                    });
                }
            }
        }
    }
    Ok(rows)
}

fn kind_index(kind: StatKind) -> usize {
    match kind {
        StatKind::Kolmogorov => 0,
        StatKind::OmegaSquare => 1,
    }
}
