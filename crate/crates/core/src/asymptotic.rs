//! Component statistics, the maximum statistic, and its Gumbel calibration.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::changepoint::{estimate_changepoint, ChangePointEstimate};
use crate::config::{Calibration, EstimationConfig};
use crate::cusum::{cusum_path, m_hat_squared, tau};
use crate::error::{Error, Result};
use crate::panel::{ComponentSeries, PanelSeries};
use crate::variance::{sigma_hat, VarianceEstimate};

/// Largest level for which the limiting theory guarantees level control.
pub const ALPHA_MAX_GUARANTEED: f64 = 1.0 - 0.367_879_441_171_442_3; // 1 − e⁻¹

/// Positive per-component thresholds `Δ_h` below which a jump is not relevant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "Vec<f64>", into = "Vec<f64>")]
pub struct ThresholdVec(Vec<f64>);

impl ThresholdVec {
    pub fn new(deltas: Vec<f64>) -> Result<Self> {
        if deltas.is_empty() {
            return Err(Error::invalid("threshold vector is empty"));
        }
        if let Some(h) = deltas.iter().position(|&x| !(x > 0.0 && x.is_finite())) {
            return Err(Error::invalid(format!(
                "threshold Δ_{} = {} must be positive and finite",
                h + 1,
                deltas[h]
            )));
        }
        Ok(Self(deltas))
    }

    /// The same threshold for all `d` components.
    pub fn broadcast(delta: f64, d: usize) -> Result<Self> {
        Self::new(vec![delta; d])
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl TryFrom<Vec<f64>> for ThresholdVec {
    type Error = Error;
    fn try_from(v: Vec<f64>) -> Result<Self> {
        Self::new(v)
    }
}

impl From<ThresholdVec> for Vec<f64> {
    fn from(t: ThresholdVec) -> Self {
        t.0
    }
}

/// Centring and scaling `(a_d, b_d)` for the maximum of `d` standardised statistics.
pub fn scaling_sequences(d: usize) -> Result<(f64, f64)> {
    if d < 2 {
        return Err(Error::invalid(format!("dimension d = {d} must be at least 2")));
    }
    let log_d = (d as f64).ln();
    let a = (2.0 * log_d).sqrt();
    let b = a - (4.0 * std::f64::consts::PI * log_d).ln() / (2.0 * a);
    Ok((a, b))
}

/// `g_{1−α} = −log(−log(1−α))`, the upper-α point of the standard Gumbel law.
pub fn gumbel_quantile(alpha: f64) -> Result<f64> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    // written as a difference so the α = 1 − e⁻¹ case gives +0 rather than −0
    Ok(0.0 - (-(-alpha).ln_1p()).ln())
}

/// Standard Gumbel distribution function `exp(−exp(−x))`.
pub fn gumbel_cdf(x: f64) -> f64 {
    (-(-x).exp()).exp()
}

/// Everything estimated from one component before a threshold is applied.
#[derive(Debug, Clone)]
pub(crate) struct ComponentFit {
    pub changepoint: ChangePointEstimate,
    pub variance: VarianceEstimate,
    pub m_hat_sq: f64,
    pub tau_hat: f64,
}

pub(crate) fn fit_component(z: &ComponentSeries<'_>, cfg: &EstimationConfig) -> Result<ComponentFit> {
    let changepoint = estimate_changepoint(z, cfg.t_min)?;
    let variance = sigma_hat(z, changepoint.t_hat, cfg)?;
    let path = cusum_path(z);
    let m_hat_sq = m_hat_squared(&path, changepoint.t_hat)?;
    let tau_hat = tau(changepoint.t_hat)?;
    Ok(ComponentFit {
        changepoint,
        variance,
        m_hat_sq,
        tau_hat,
    })
}

/// Fit every column; the first failing column (by index) aborts.
pub(crate) fn fit_panel(panel: &PanelSeries, cfg: &EstimationConfig) -> Result<Vec<ComponentFit>> {
    cfg.validate()?;
    let fits: Vec<Result<ComponentFit>> = (0..panel.d())
        .into_par_iter()
        .map(|h| {
            panel
                .component(h)
                .and_then(|z| fit_component(&z, cfg))
                .map_err(|e| e.in_component(h, panel.label(h)))
        })
        .collect();
    fits.into_iter().collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComponentStat {
    /// `T̂_h = √n (M̂_h² − Δ_h²) / (τ̂_h σ̂_h Δ_h) − bias_correction`.
    pub t_stat: f64,
    pub m_hat_sq: f64,
    pub t_hat: f64,
    pub k_hat: usize,
    pub sigma_hat: f64,
    pub tau_hat: f64,
    pub delta: f64,
    /// Subtracted finite-sample bias term; zero when disabled.
    pub bias_correction: f64,
    pub variance_truncated: bool,
}

impl ComponentStat {
    /// Recompute `t_stat` from the stored fields.
    pub fn recompute(&self, n: usize) -> f64 {
        raw_t_stat(n, self.m_hat_sq, self.tau_hat, self.sigma_hat, self.delta) - self.bias_correction
    }
}

fn raw_t_stat(n: usize, m_hat_sq: f64, tau_hat: f64, sigma: f64, delta: f64) -> f64 {
    (n as f64).sqrt() / (tau_hat * sigma * delta) * (m_hat_sq - delta * delta)
}

/// `σ̂ / (2√n (t̂(1−t̂))² τ̂ Δ)`: estimated mean of the nonnegative squared
/// remainder in the decomposition of `T̂_h`.
pub fn bias_term(n: usize, t_hat: f64, tau_hat: f64, sigma: f64, delta: f64) -> f64 {
    let w = t_hat * (1.0 - t_hat);
    sigma / (2.0 * (n as f64).sqrt() * w * w * tau_hat * delta)
}

pub(crate) fn stat_from_fit(fit: &ComponentFit, n: usize, delta: f64, bias: bool) -> ComponentStat {
    let sigma = fit.variance.sigma_hat;
    let t_hat = fit.changepoint.t_hat;
    let bias_correction = if bias {
        bias_term(n, t_hat, fit.tau_hat, sigma, delta)
    } else {
        0.0
    };
    ComponentStat {
        t_stat: raw_t_stat(n, fit.m_hat_sq, fit.tau_hat, sigma, delta) - bias_correction,
        m_hat_sq: fit.m_hat_sq,
        t_hat,
        k_hat: fit.changepoint.k_hat,
        sigma_hat: sigma,
        tau_hat: fit.tau_hat,
        delta,
        bias_correction,
        variance_truncated: fit.variance.truncated,
    }
}

/// Standardised statistic of one component against threshold `delta`.
pub fn component_statistic(
    z: &ComponentSeries<'_>,
    delta: f64,
    cfg: &EstimationConfig,
) -> Result<ComponentStat> {
    if !(delta > 0.0 && delta.is_finite()) {
        return Err(Error::invalid(format!("threshold Δ = {delta} must be positive")));
    }
    cfg.validate()?;
    let fit = fit_component(z, cfg)?;
    Ok(stat_from_fit(&fit, z.len(), delta, cfg.bias_correction))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MaxStatistic {
    /// `a_d (max_h T̂_h − b_d)`.
    pub statistic: f64,
    pub a_d: f64,
    pub b_d: f64,
    pub per_component: Vec<ComponentStat>,
}

pub(crate) fn check_panel_thresholds(panel: &PanelSeries, deltas: &ThresholdVec) -> Result<()> {
    if panel.d() < 2 {
        return Err(Error::invalid(format!(
            "panel has d = {} components, need at least 2",
            panel.d()
        )));
    }
    if deltas.len() != panel.d() {
        return Err(Error::config(format!(
            "{} thresholds given for {} components",
            deltas.len(),
            panel.d()
        )));
    }
    Ok(())
}

pub(crate) fn assemble_max(
    fits: &[ComponentFit],
    n: usize,
    deltas: &ThresholdVec,
    bias: bool,
) -> Result<MaxStatistic> {
    let (a_d, b_d) = scaling_sequences(fits.len())?;
    let per_component: Vec<ComponentStat> = fits
        .iter()
        .zip(deltas.as_slice())
        .map(|(fit, &delta)| stat_from_fit(fit, n, delta, bias))
        .collect();
    let max = per_component
        .iter()
        .map(|s| s.t_stat)
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(MaxStatistic {
        statistic: a_d * (max - b_d),
        a_d,
        b_d,
        per_component,
    })
}

pub fn max_statistic(
    panel: &PanelSeries,
    deltas: &ThresholdVec,
    cfg: &EstimationConfig,
) -> Result<MaxStatistic> {
    check_panel_thresholds(panel, deltas)?;
    let fits = fit_panel(panel, cfg)?;
    assemble_max(&fits, panel.n(), deltas, cfg.bias_correction)
}

/// Components whose statistic exceeds `critical / a_d + b_d`.
pub fn relevant_set(per_component: &[ComponentStat], critical: f64, a_d: f64, b_d: f64) -> Vec<usize> {
    let cut = critical / a_d + b_d;
    per_component
        .iter()
        .enumerate()
        .filter(|(_, s)| s.t_stat > cut)
        .map(|(h, _)| h)
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TestReport {
    pub statistic: f64,
    pub critical_value: f64,
    pub alpha: f64,
    pub method: Calibration,
    pub reject: bool,
    /// Zero-based indices of components flagged as relevant changes.
    pub relevant_set: Vec<usize>,
    pub per_component: Vec<ComponentStat>,
    pub a_d: f64,
    pub b_d: f64,
    pub n: usize,
    pub d: usize,
    pub warnings: Vec<String>,
    pub notes: Vec<String>,
}

pub(crate) fn alpha_warnings(alpha: f64) -> Result<Vec<String>> {
    if !(alpha > 0.0 && alpha < 1.0) {
        return Err(Error::invalid(format!("alpha = {alpha} must lie in (0, 1)")));
    }
    let mut warnings = Vec::new();
    if alpha > ALPHA_MAX_GUARANTEED {
        let msg = format!(
            "alpha = {alpha} exceeds 1 − e⁻¹ ≈ {ALPHA_MAX_GUARANTEED:.4}; level control is not guaranteed"
        );
        log::warn!("{msg}");
        warnings.push(msg);
    }
    Ok(warnings)
}

pub(crate) fn decision_notes(reject: bool) -> Vec<String> {
    if reject {
        Vec::new()
    } else {
        vec!["non-rejection does not certify that all changes are below their thresholds; \
              that claim needs the hypotheses interchanged, which this test does not provide"
            .to_string()]
    }
}

/// Reject "no relevant change in any component" when `𝒯 > g_{1−α}`.
pub fn asymptotic_test(
    panel: &PanelSeries,
    deltas: &ThresholdVec,
    alpha: f64,
    cfg: &EstimationConfig,
) -> Result<TestReport> {
    let warnings = alpha_warnings(alpha)?;
    let max = max_statistic(panel, deltas, cfg)?;
    let critical_value = gumbel_quantile(alpha)?;
    let reject = max.statistic > critical_value;
    Ok(TestReport {
        statistic: max.statistic,
        critical_value,
        alpha,
        method: Calibration::Asymptotic,
        reject,
        relevant_set: relevant_set(&max.per_component, critical_value, max.a_d, max.b_d),
        per_component: max.per_component,
        a_d: max.a_d,
        b_d: max.b_d,
        n: panel.n(),
        d: panel.d(),
        warnings,
        notes: decision_notes(reject),
    })
}
