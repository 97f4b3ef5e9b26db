//! Monte-Carlo rejection rates and power curves.

use std::time::Instant;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::asymptotic_test;
use crate::bootstrap::{bootstrap_test, BootstrapConfig, SHatForm};
use crate::config::EstimationConfig;
use crate::data_gen::{gen_innovations, SimScenario};
use crate::error::{Error, Result};
use crate::rng::{derive_seed, tag};

pub const MIN_RUNS: usize = 50;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind")]
pub enum Method {
    Asymptotic,
    Bootstrap { block_len: usize, replicates: usize },
}

impl std::fmt::Display for Method {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Method::Asymptotic => f.write_str("asymptotic"),
            Method::Bootstrap { block_len, replicates } => {
                write!(f, "bootstrap(K={block_len}, B={replicates})")
            }
        }
    }
}

/// Settings shared by every run of an experiment.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HarnessOptions {
    pub alpha: f64,
    pub estimation: EstimationConfig,
    pub s_hat: SHatForm,
}

impl Default for HarnessOptions {
    fn default() -> Self {
        Self {
            alpha: 0.05,
            estimation: EstimationConfig::default(),
            s_hat: SHatForm::Squared,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentResult {
    /// Scenario with `seed` set to the experiment seed.
    pub scenario: SimScenario,
    pub method: Method,
    pub alpha: f64,
    pub runs: usize,
    pub rejections: usize,
    pub rejection_rate: f64,
    /// Binomial standard error `√(p̂(1−p̂)/runs)`.
    pub mc_stderr: f64,
    /// Pooled sample variance of the innovations of the first run.
    pub innovation_variance: f64,
    pub wall_time: f64,
}

/// Seed of simulation run `run`.
pub fn run_seed(seed: u64, run: u64) -> u64 {
    derive_seed(seed, &[tag::RUN, run])
}

/// Whether the test rejects on run `run` of the experiment.
pub fn single_run(
    scenario: &SimScenario,
    method: Method,
    seed: u64,
    run: u64,
    opts: &HarnessOptions,
) -> Result<bool> {
    let s = run_seed(seed, run);
    let panel = scenario.generate(s)?;
    match method {
        Method::Asymptotic => {
            Ok(asymptotic_test(&panel, &scenario.deltas, opts.alpha, &opts.estimation)?.reject)
        }
        Method::Bootstrap { block_len, replicates } => {
            let cfg = BootstrapConfig {
                block_len,
                replicates,
                seed: derive_seed(s, &[tag::MULTIPLIER]),
                s_hat: opts.s_hat,
            };
            Ok(bootstrap_test(&panel, &scenario.deltas, opts.alpha, &opts.estimation, &cfg)?
                .test
                .reject)
        }
    }
}

fn check_setup(scenario: &SimScenario, method: Method, runs: usize, opts: &HarnessOptions) -> Result<()> {
    if runs < MIN_RUNS {
        return Err(Error::config(format!("{runs} runs requested, need at least {MIN_RUNS}")));
    }
    opts.estimation.validate()?;
    scenario.validate(opts.estimation.t_min)?;
    if let Method::Bootstrap { block_len, replicates } = method {
        BootstrapConfig::new(block_len, replicates, 0).validate(scenario.n)?;
    }
    Ok(())
}

pub fn rejection_rate(scenario: &SimScenario, method: Method, runs: usize, seed: u64) -> Result<ExperimentResult> {
    rejection_rate_with(scenario, method, runs, seed, &HarnessOptions::default())
}

pub fn rejection_rate_with(
    scenario: &SimScenario,
    method: Method,
    runs: usize,
    seed: u64,
    opts: &HarnessOptions,
) -> Result<ExperimentResult> {
    check_setup(scenario, method, runs, opts)?;
    let start = Instant::now();
    let outcomes: Vec<Result<bool>> = (0..runs as u64)
        .into_par_iter()
        .map(|r| single_run(scenario, method, seed, r, opts))
        .collect();
    let mut rejections = 0;
    for o in outcomes {
        rejections += usize::from(o?);
    }
    let p = rejections as f64 / runs as f64;

    let x = gen_innovations(scenario.model, scenario.n, scenario.d, run_seed(seed, 0))?;
    let all = x.as_column_major();
    let mean = all.iter().sum::<f64>() / all.len() as f64;
    let innovation_variance = all.iter().map(|v| (v - mean).powi(2)).sum::<f64>() / all.len() as f64;

    let result = ExperimentResult {
        scenario: SimScenario { seed, ..scenario.clone() },
        method,
        alpha: opts.alpha,
        runs,
        rejections,
        rejection_rate: p,
        mc_stderr: (p * (1.0 - p) / runs as f64).sqrt(),
        innovation_variance,
        wall_time: start.elapsed().as_secs_f64(),
    };
    log::info!(
        "model {} n={} d={} mu={} {}: {}/{} rejections",
        scenario.model,
        scenario.n,
        scenario.d,
        scenario.mu,
        method,
        rejections,
        runs
    );
    Ok(result)
}

/// Rejection rates along a grid of mean shifts. Every grid point reuses the
/// same run seeds, so neighbouring points share their innovations.
pub fn power_curve(
    scenario: &SimScenario,
    mu_grid: &[f64],
    method: Method,
    runs: usize,
    seed: u64,
) -> Result<Vec<ExperimentResult>> {
    power_curve_with(scenario, mu_grid, method, runs, seed, &HarnessOptions::default())
}

pub fn power_curve_with(
    scenario: &SimScenario,
    mu_grid: &[f64],
    method: Method,
    runs: usize,
    seed: u64,
    opts: &HarnessOptions,
) -> Result<Vec<ExperimentResult>> {
    if mu_grid.is_empty() {
        return Err(Error::config("empty grid of mean shifts"));
    }
    mu_grid
        .iter()
        .map(|&mu| rejection_rate_with(&scenario.with_mu(mu), method, runs, seed, opts))
        .collect()
}
