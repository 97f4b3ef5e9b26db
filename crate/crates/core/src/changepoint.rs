//! Change-point location by argmax |CUSUM| and block-aligned jump estimates.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::numeric::{anchored_prefix_sums, ceil_index, compensated_sum, floor_index};
use crate::panel::ComponentSeries;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChangePointEstimate {
    /// Relative location `t̂ = k̂ / n`.
    pub t_hat: f64,
    /// Number of observations before the estimated break.
    pub k_hat: usize,
    /// `|Σ_{j≤k̂} Z_j − (k̂/n) Σ_j Z_j|` at the maximiser.
    pub abs_cusum: f64,
}

/// Admissible break indices `⌈n𝐭⌉ ..= ⌊n(1−𝐭)⌋` (closed grid).
pub fn search_window(n: usize, t_min: f64) -> Result<(usize, usize)> {
    if !(t_min > 0.0 && t_min < 0.5) {
        return Err(Error::invalid(format!("t_min = {t_min} must lie in (0, 1/2)")));
    }
    let nf = n as f64;
    let lo = ceil_index(nf * t_min).max(1);
    let hi = floor_index(nf * (1.0 - t_min)).min(n as i64 - 1);
    if lo > hi {
        return Err(Error::invalid(format!(
            "empty change-point window for n = {n}, t_min = {t_min}"
        )));
    }
    Ok((lo as usize, hi as usize))
}

/// Argmax of the unnormalised CUSUM magnitude over the search window.
/// Ties resolve to the smallest index.
pub fn estimate_changepoint(z: &ComponentSeries<'_>, t_min: f64) -> Result<ChangePointEstimate> {
    let n = z.len();
    let (lo, hi) = search_window(n, t_min)?;
    if (n as f64) * t_min < 1.0 - 1e-9 {
        return Err(Error::invalid(format!("n·t_min = {} < 1", n as f64 * t_min)));
    }
    let prefix = anchored_prefix_sums(z.values());
    let nf = n as f64;
    let total = prefix[n];
    // |n·S_k − k·S_n| is n times the CUSUM magnitude and exactly zero on constant data
    let mut best_k = lo;
    let mut best = f64::NEG_INFINITY;
    for (k, &s) in prefix.iter().enumerate().take(hi + 1).skip(lo) {
        let v = (nf * s - k as f64 * total).abs();
        if v > best {
            best = v;
            best_k = k;
        }
    }
    Ok(ChangePointEstimate {
        t_hat: best_k as f64 / nf,
        k_hat: best_k,
        abs_cusum: best / nf,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct JumpEstimate {
    /// `Z̄⁻ − Z̄⁺`: mean before minus mean after.
    pub delta_mu_hat: f64,
    /// Last full block that ends at least half a block before the break.
    pub l_minus: usize,
    /// First block whose end lies at least half a block after the break.
    pub l_plus: usize,
    pub mean_before: f64,
    pub mean_after: f64,
}

/// `L̂⁻ = sup{ℓ : ℓK + K/2 ≤ k̂}` and `L̂⁺ = inf{ℓ : ℓK − K/2 ≥ k̂}`, evaluated
/// as `2ℓK + K ≤ 2k̂` and `2ℓK − K ≥ 2k̂` in integers. Requires at least one
/// full block on each side.
pub fn block_limits(k_hat: usize, n: usize, block_len: usize) -> Result<(usize, usize)> {
    if block_len == 0 || !n.is_multiple_of(block_len) {
        return Err(Error::config(format!(
            "block length K = {block_len} must divide n = {n}"
        )));
    }
    let blocks = n / block_len;
    let two_k = 2 * k_hat;
    // largest ℓ with (2ℓ+1)K ≤ 2k̂
    let l_minus = if two_k >= block_len {
        (two_k - block_len) / (2 * block_len)
    } else {
        0
    };
    // smallest ℓ with (2ℓ−1)K ≥ 2k̂
    let l_plus = (two_k + block_len).div_ceil(2 * block_len);
    if l_minus < 1 {
        return Err(Error::degenerate(format!(
            "no full block of length {block_len} before break index {k_hat}"
        )));
    }
    if l_plus >= blocks {
        return Err(Error::degenerate(format!(
            "no full block of length {block_len} after break index {k_hat} (n = {n})"
        )));
    }
    Ok((l_minus, l_plus))
}

/// Jump size from the block means on either side of the excluded window.
pub fn estimate_jump(z: &ComponentSeries<'_>, k_hat: usize, block_len: usize) -> Result<JumpEstimate> {
    let n = z.len();
    let (l_minus, l_plus) = block_limits(k_hat, n, block_len)?;
    let x = z.values();
    let before = &x[..block_len * l_minus];
    let after = &x[block_len * l_plus..];
    let mean_before = compensated_sum(before) / before.len() as f64;
    let mean_after = compensated_sum(after) / after.len() as f64;
    Ok(JumpEstimate {
        delta_mu_hat: mean_before - mean_after,
        l_minus,
        l_plus,
        mean_before,
        mean_after,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn series(v: &[f64]) -> ComponentSeries<'_> {
        ComponentSeries::new(v).unwrap()
    }

    #[test]
    fn finds_hand_computed_break() {
        let z = [0.0, 0.0, 0.0, 1.0, 1.0, 1.0];
        let cp = estimate_changepoint(&series(&z), 1.0 / 6.0).unwrap();
        assert_eq!(cp.k_hat, 3);
        assert_eq!(cp.t_hat, 0.5);
        assert_eq!(cp.abs_cusum, 1.5);
    }

    #[test]
    fn constant_series_ties_to_window_start() {
        let z = vec![4.2; 100];
        let cp = estimate_changepoint(&series(&z), 0.05).unwrap();
        assert_eq!(cp.abs_cusum, 0.0);
        assert_eq!(cp.k_hat, 5);
        let z = vec![-1.0; 37];
        let cp = estimate_changepoint(&series(&z), 0.1).unwrap();
        assert_eq!(cp.k_hat, 4); // ⌈3.7⌉
    }

    #[test]
    fn window_errors() {
        let z = [0.0; 4];
        assert!(estimate_changepoint(&series(&z), 0.2).is_err()); // n·t_min < 1
        assert!(estimate_changepoint(&series(&z), 0.5).is_err());
        assert_eq!(search_window(100, 0.05).unwrap(), (5, 95));
    }

    #[test]
    fn noiseless_steps_are_located_exactly() {
        for k in [5usize, 17, 50, 95] {
            let z: Vec<f64> = (0..100).map(|j| if j < k { 1.0 } else { -0.5 }).collect();
            assert_eq!(estimate_changepoint(&series(&z), 0.05).unwrap().k_hat, k);
        }
    }

    #[test]
    fn block_limit_example() {
        assert_eq!(block_limits(47, 100, 10).unwrap(), (4, 6));
        assert_eq!(block_limits(50, 100, 10).unwrap(), (4, 6));
        // K = 1 excludes exactly observations k̂ and k̂+1
        assert_eq!(block_limits(50, 100, 1).unwrap(), (49, 51));
        // odd K: 2·ℓ·3 + 3 ≤ 2·10 → ℓ ≤ 2
        assert_eq!(block_limits(10, 30, 3).unwrap(), (2, 4));
    }

    #[test]
    fn block_limits_defining_inequalities() {
        for k in 15..=85 {
            for block_len in [1usize, 2, 4, 5, 10] {
                let (lm, lp) = block_limits(k, 100, block_len).unwrap();
                let (kk, bl) = (2 * k, block_len);
                assert!(2 * lm * bl + bl <= kk);
                assert!(2 * (lm + 1) * bl + bl > kk);
                assert!(2 * lp * bl >= kk + bl);
                assert!(2 * (lp - 1) * bl < kk + bl);
            }
        }
    }

    #[test]
    fn block_limit_errors() {
        assert!(matches!(block_limits(50, 100, 7), Err(Error::Config(_))));
        assert!(matches!(block_limits(12, 100, 10), Err(Error::DegenerateSplit(_))));
        assert!(matches!(block_limits(90, 100, 10), Err(Error::DegenerateSplit(_))));
    }

    #[test]
    fn exact_jump_on_noiseless_step() {
        let z: Vec<f64> = (0..100).map(|j| if j < 50 { 0.0 } else { -1.0 }).collect();
        let j = estimate_jump(&series(&z), 50, 10).unwrap();
        assert_eq!(j.delta_mu_hat, 1.0);
        assert_eq!((j.l_minus, j.l_plus), (4, 6));
        assert_eq!(j.delta_mu_hat, j.mean_before - j.mean_after);
    }
}
