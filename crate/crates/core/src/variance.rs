//! Long-run variance from the two split samples around the estimated break.

use serde::{Deserialize, Serialize};

use crate::config::{EstimationConfig, VarianceCombine};
use crate::error::{Error, Result};
use crate::numeric::{compensated_sum, floor_index};
use crate::panel::ComponentSeries;

/// Index ranges (1-based, inclusive) of the two split samples.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SplitSpec {
    /// Last index of the sample before the break: `⌊n·max(S t̂, 𝐭)⌋`.
    pub end_before: usize,
    /// First index of the sample after the break: `n − ⌊n·max(S(1−t̂), 𝐭)⌋ + 1`.
    pub start_after: usize,
    pub separation: f64,
}

impl SplitSpec {
    /// Zero-based slice bounds of the sample before the break.
    pub fn before(&self) -> std::ops::Range<usize> {
        0..self.end_before
    }

    /// Zero-based slice bounds of the sample after the break, for length `n`.
    pub fn after(&self, n: usize) -> std::ops::Range<usize> {
        self.start_after - 1..n
    }
}

pub fn split_samples(n: usize, t_hat: f64, separation: f64, t_min: f64) -> Result<SplitSpec> {
    if !(separation > 0.0 && separation < 1.0) {
        return Err(Error::config(format!("separation S = {separation} must lie in (0, 1)")));
    }
    if !(t_min > 0.0 && t_min < 0.5) {
        return Err(Error::config(format!("t_min = {t_min} must lie in (0, 1/2)")));
    }
    let nf = n as f64;
    let before_len = floor_index(nf * (separation * t_hat).max(t_min));
    let after_len = floor_index(nf * (separation * (1.0 - t_hat)).max(t_min));
    if before_len < 1 || after_len < 1 || before_len > n as i64 || after_len > n as i64 {
        return Err(Error::degenerate(format!(
            "empty variance split for n = {n}, t̂ = {t_hat}"
        )));
    }
    Ok(SplitSpec {
        end_before: before_len as usize,
        start_after: n - after_len as usize + 1,
        separation,
    })
}

/// Bartlett-weighted long-run variance `φ̂(0) + 2 Σ_{j=1}^{β} (1 − j/β) φ̂(j)`
/// with centred autocovariances normalised by `1/m`. With `β ≤ 1` only
/// `φ̂(0)` carries weight.
pub fn bartlett_lrv(x: &[f64], bandwidth: usize) -> f64 {
    let m = x.len();
    if m == 0 {
        return 0.0;
    }
    let mean = compensated_sum(x) / m as f64;
    let centred: Vec<f64> = x.iter().map(|v| v - mean).collect();
    let autocov = |lag: usize| -> f64 {
        centred[lag..]
            .iter()
            .zip(&centred[..m - lag])
            .map(|(a, b)| a * b)
            .sum::<f64>()
            / m as f64
    };
    let beta = bandwidth.min(m - 1);
    let mut lrv = autocov(0);
    for lag in 1..beta {
        let w = 1.0 - lag as f64 / beta as f64;
        lrv += 2.0 * w * autocov(lag);
    }
    lrv
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VarianceEstimate {
    /// Long-run standard deviation `σ̂_h`.
    pub sigma_hat: f64,
    pub sigma1_sq: f64,
    pub sigma2_sq: f64,
    /// Whether the clamp `[s_−², s_+²]` changed the combined value.
    pub truncated: bool,
}

/// Combine the two split-sample long-run variances and clamp the result.
pub fn combine_and_clamp(
    sigma1_sq: f64,
    sigma2_sq: f64,
    combine: VarianceCombine,
    s_minus_sq: f64,
    s_plus_sq: f64,
) -> VarianceEstimate {
    let raw = match combine {
        VarianceCombine::Average => 0.5 * (sigma1_sq + sigma2_sq),
        VarianceCombine::Max => sigma1_sq.max(sigma2_sq),
    };
    let clamped = raw.clamp(s_minus_sq, s_plus_sq);
    VarianceEstimate {
        sigma_hat: clamped.sqrt(),
        sigma1_sq,
        sigma2_sq,
        truncated: clamped != raw,
    }
}

pub fn sigma_hat(z: &ComponentSeries<'_>, t_hat: f64, cfg: &EstimationConfig) -> Result<VarianceEstimate> {
    let n = z.len();
    let split = split_samples(n, t_hat, cfg.separation, cfg.t_min)?;
    let x = z.values();
    let before = &x[split.before()];
    let after = &x[split.after(n)];
    if before.len() < 2 || after.len() < 2 {
        return Err(Error::degenerate(format!(
            "variance split samples of length {} and {} are too short",
            before.len(),
            after.len()
        )));
    }
    let lrv = |s: &[f64]| bartlett_lrv(s, cfg.bandwidth.lags(s.len()));
    Ok(combine_and_clamp(
        lrv(before),
        lrv(after),
        cfg.combine,
        cfg.s_minus_sq,
        cfg.s_plus_sq,
    ))
}
