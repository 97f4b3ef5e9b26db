//! Multiplier block bootstrap for the maximum statistic.
//!
//! Per component the data are estimated once: break location, long-run
//! variance and the jump from block means on either side of the break. The
//! mean-corrected sample is cut into `L` blocks of length `K` (blocks around
//! the break are zeroed), and every replicate multiplies whole blocks by one
//! shared vector of i.i.d. standard Gaussian multipliers. Replicates differ
//! only through the multipliers.

use rand_distr::{Distribution, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::{
    alpha_warnings, assemble_max, check_panel_thresholds, decision_notes, fit_panel, relevant_set,
    scaling_sequences, ComponentFit, TestReport, ThresholdVec,
};
use crate::changepoint::{estimate_jump, JumpEstimate};
use crate::config::{Calibration, EstimationConfig};
use crate::cusum::{cusum_of, integral_cusum_kernel, integral_squared, kernel_cell_weights, CusumPath};
use crate::error::{Error, Result};
use crate::numeric::quantile_sorted;
use crate::panel::{ComponentSeries, PanelSeries};
use crate::rng::{stream, tag};

pub const MIN_REPLICATES: usize = 100;

/// Exponent of the jump-size cut `|Δμ̂_h| > n^{-1/4}` that activates a component.
pub const JUMP_THRESHOLD_EXPONENT: f64 = -0.25;

/// Form of the bootstrap scale `ŝ_h`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(rename_all = "kebab-case")]
pub enum SHatForm {
    /// `ŝ_h² = (L⁻¹ Σ ξ_ℓ²) · σ̂_h²`, so that `ŝ_h → σ̂_h`.
    #[default]
    Squared,
    /// `ŝ_h² = (L⁻¹ Σ ξ_ℓ²) · σ̂_h`, the unsquared variant kept for comparison.
    Unsquared,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BootstrapConfig {
    /// Block length `K`; must divide `n`.
    pub block_len: usize,
    pub replicates: usize,
    pub seed: u64,
    pub s_hat: SHatForm,
}

impl BootstrapConfig {
    pub fn new(block_len: usize, replicates: usize, seed: u64) -> Self {
        Self {
            block_len,
            replicates,
            seed,
            s_hat: SHatForm::Squared,
        }
    }

    /// Number of blocks `L = n / K`.
    pub fn block_count(&self, n: usize) -> Result<usize> {
        if self.block_len == 0 || !n.is_multiple_of(self.block_len) {
            return Err(Error::config(format!(
                "block length K = {} must divide n = {n}",
                self.block_len
            )));
        }
        let blocks = n / self.block_len;
        if blocks < 2 {
            return Err(Error::config(format!(
                "K = {} leaves L = {blocks} blocks, need at least 2",
                self.block_len
            )));
        }
        Ok(blocks)
    }

    pub fn validate(&self, n: usize) -> Result<usize> {
        if self.replicates < MIN_REPLICATES {
            return Err(Error::config(format!(
                "{} bootstrap replicates requested, need at least {MIN_REPLICATES}",
                self.replicates
            )));
        }
        self.block_count(n)
    }
}

/// One vector of block multipliers `ξ_1, …, ξ_L`.
#[derive(Debug, Clone, PartialEq)]
pub struct MultiplierDraw {
    xi: Vec<f64>,
}

impl MultiplierDraw {
    /// Multipliers of replicate `replicate`, reproducible in isolation.
    pub fn draw(seed: u64, replicate: u64, blocks: usize) -> Self {
        let mut rng = stream(seed, &[tag::MULTIPLIER, replicate]);
        Self {
            xi: (0..blocks).map(|_| StandardNormal.sample(&mut rng)).collect(),
        }
    }

    pub fn from_values(xi: Vec<f64>) -> Self {
        Self { xi }
    }

    pub fn values(&self) -> &[f64] {
        &self.xi
    }

    pub fn len(&self) -> usize {
        self.xi.len()
    }

    pub fn is_empty(&self) -> bool {
        self.xi.is_empty()
    }

    /// `L⁻¹ Σ ξ_ℓ²`.
    pub fn mean_square(&self) -> f64 {
        self.xi.iter().map(|x| x * x).sum::<f64>() / self.xi.len() as f64
    }
}

/// Mean-corrected sample: centred by `Z̄⁻` up to block `L̂⁻`, zero through
/// block `L̂⁺`, centred by `Z̄⁺` afterwards.
pub fn mean_corrected(
    z: &ComponentSeries<'_>,
    k_hat: usize,
    block_len: usize,
) -> Result<(Vec<f64>, JumpEstimate)> {
    let jump = estimate_jump(z, k_hat, block_len)?;
    let lo = block_len * jump.l_minus;
    let hi = block_len * jump.l_plus;
    let corrected = z
        .values()
        .iter()
        .enumerate()
        .map(|(j, &v)| {
            if j < lo {
                v - jump.mean_before
            } else if j < hi {
                0.0
            } else {
                v - jump.mean_after
            }
        })
        .collect();
    Ok((corrected, jump))
}

/// Blocking variables `V̂_ℓ(k) = Σ_{j ∈ block ℓ, j ≤ k} Ẑ_j`.
#[derive(Debug, Clone, PartialEq)]
pub struct BlockSums {
    z_hat: Vec<f64>,
    block_len: usize,
}

pub fn block_sums(z_hat: Vec<f64>, block_len: usize) -> Result<BlockSums> {
    let n = z_hat.len();
    if block_len == 0 || n == 0 || !n.is_multiple_of(block_len) {
        return Err(Error::config(format!(
            "block length K = {block_len} must divide n = {n}"
        )));
    }
    Ok(BlockSums { z_hat, block_len })
}

impl BlockSums {
    pub fn n(&self) -> usize {
        self.z_hat.len()
    }

    pub fn block_len(&self) -> usize {
        self.block_len
    }

    pub fn block_count(&self) -> usize {
        self.z_hat.len() / self.block_len
    }

    pub fn corrected(&self) -> &[f64] {
        &self.z_hat
    }

    /// Full block sums `V̂_1, …, V̂_L`.
    pub fn sums(&self) -> Vec<f64> {
        self.z_hat.chunks_exact(self.block_len).map(|c| c.iter().sum()).collect()
    }

    /// `V̂_ℓ(k)` for 1-based block `ℓ` and 1-based cut-off `k`.
    pub fn partial(&self, block: usize, k: usize) -> f64 {
        let start = (block - 1) * self.block_len;
        let end = (block * self.block_len).min(k);
        if end <= start {
            0.0
        } else {
            self.z_hat[start..end].iter().sum()
        }
    }
}

/// Multiplier CUSUM path `𝕌⁽ᴸ⁾` on the `n`-point grid.
pub fn bootstrap_cusum(blocks: &BlockSums, xi: &MultiplierDraw) -> Result<CusumPath> {
    if xi.len() != blocks.block_count() {
        return Err(Error::invalid(format!(
            "{} multipliers for {} blocks",
            xi.len(),
            blocks.block_count()
        )));
    }
    // Σ_ℓ ξ_ℓ V̂_ℓ(k) is the partial sum of the block-weighted series
    let weighted: Vec<f64> = blocks
        .z_hat
        .iter()
        .enumerate()
        .map(|(j, &v)| xi.xi[j / blocks.block_len] * v)
        .collect();
    Ok(cusum_of(&weighted))
}

/// Read-only per-component snapshot shared by all replicates.
#[derive(Debug, Clone)]
pub struct BootstrapComponent {
    pub t_hat: f64,
    pub sigma_hat: f64,
    pub tau_hat: f64,
    /// Threshold `Δ_h`, used by the squared-path bias term.
    pub delta: f64,
    /// `None` when the block limits around the break do not exist.
    pub jump: Option<JumpEstimate>,
    /// Present iff the jump indicator `|Δμ̂_h| > n^{-1/4}` fired.
    blocks: Option<BlockSums>,
    cell_weights: Vec<f64>,
    block_totals: Vec<f64>,
}

impl BootstrapComponent {
    pub fn is_active(&self) -> bool {
        self.blocks.is_some()
    }

    pub fn blocks(&self) -> Option<&BlockSums> {
        self.blocks.as_ref()
    }
}

/// Build the bootstrap snapshot of one component from its data and estimates.
pub fn prepare_component(
    z: &ComponentSeries<'_>,
    k_hat: usize,
    sigma_hat: f64,
    delta: f64,
    block_len: usize,
) -> Result<BootstrapComponent> {
    let n = z.len();
    let t_hat = k_hat as f64 / n as f64;
    let tau_hat = crate::cusum::tau(t_hat)?;
    let mut comp = BootstrapComponent {
        t_hat,
        sigma_hat,
        tau_hat,
        delta,
        jump: None,
        blocks: None,
        cell_weights: Vec::new(),
        block_totals: Vec::new(),
    };
    let (z_hat, jump) = match mean_corrected(z, k_hat, block_len) {
        Ok(v) => v,
        Err(Error::DegenerateSplit(_)) => return Ok(comp),
        Err(e) => return Err(e),
    };
    comp.jump = Some(jump);
    if jump.delta_mu_hat.abs() > (n as f64).powf(JUMP_THRESHOLD_EXPONENT) {
        let blocks = block_sums(z_hat, block_len)?;
        comp.block_totals = blocks.sums();
        comp.cell_weights = kernel_cell_weights(n, t_hat);
        comp.blocks = Some(blocks);
    }
    Ok(comp)
}

fn s_hat(sigma: f64, xi: &MultiplierDraw, form: SHatForm) -> Result<f64> {
    let ms = xi.mean_square();
    let s = match form {
        SHatForm::Squared => ms.sqrt() * sigma,
        SHatForm::Unsquared => (ms * sigma).sqrt(),
    };
    if s > 0.0 && s.is_finite() {
        Ok(s)
    } else {
        Err(Error::DegenerateMultiplier(format!(
            "bootstrap scale ŝ = {s} from L⁻¹Σξ² = {ms}"
        )))
    }
}

/// Bootstrap statistic `B_{n,h}` via the explicit multiplier path.
///
/// Inactive components return `b_d`. With `bias_correction` the
/// squared-path term `3√n ∫(𝕌⁽ᴸ⁾)² / (ŝ τ̂ (t̂(1−t̂))² Δ_h)` is added.
pub fn bootstrap_statistic(
    comp: &BootstrapComponent,
    xi: &MultiplierDraw,
    b_d: f64,
    form: SHatForm,
    bias_correction: bool,
) -> Result<f64> {
    let Some(blocks) = comp.blocks.as_ref() else {
        return Ok(b_d);
    };
    let path = bootstrap_cusum(blocks, xi)?;
    let s = s_hat(comp.sigma_hat, xi, form)?;
    let linear = integral_cusum_kernel(&path, comp.t_hat);
    let squared = if bias_correction { integral_squared(&path) } else { 0.0 };
    Ok(combine(comp, blocks.n(), s, linear, squared, bias_correction))
}

fn combine(comp: &BootstrapComponent, n: usize, s: f64, linear: f64, squared: f64, bias: bool) -> f64 {
    let w = comp.t_hat * (1.0 - comp.t_hat);
    let scale = (n as f64).sqrt() / (s * comp.tau_hat * w * w);
    let mut b = 6.0 * scale * linear;
    if bias {
        b += 3.0 * scale * squared / comp.delta;
    }
    b
}

/// Single-pass evaluation of `B_{n,h}` for the replicate loop.
fn fused_statistic(
    comp: &BootstrapComponent,
    blocks: &BlockSums,
    xi: &[f64],
    s: f64,
    bias: bool,
) -> f64 {
    let n = blocks.n();
    let nf = n as f64;
    let n2 = nf * nf;
    let total: f64 = comp.block_totals.iter().zip(xi).map(|(v, x)| v * x).sum();
    let mut partial = 0.0;
    let mut linear = 0.0;
    let mut squared = 0.0;
    let k = blocks.block_len;
    for (j, (&zj, &g)) in blocks.z_hat.iter().zip(&comp.cell_weights).enumerate() {
        let u = (nf * partial - j as f64 * total) / n2;
        linear += g * u;
        squared += u * u;
        partial += xi[j / k] * zj;
    }
    combine(comp, n, s, linear, squared / nf, bias)
}

/// Normalised bootstrap maximum `a_d (max_h B_{n,h} − b_d)`.
pub fn bootstrap_max(
    components: &[BootstrapComponent],
    xi: &MultiplierDraw,
    a_d: f64,
    b_d: f64,
    form: SHatForm,
    bias_correction: bool,
) -> Result<f64> {
    let mut max = f64::NEG_INFINITY;
    let mut scale_cache: Option<f64> = None;
    for comp in components {
        let b = match comp.blocks.as_ref() {
            None => b_d,
            Some(blocks) => {
                if xi.len() != blocks.block_count() {
                    return Err(Error::invalid(format!(
                        "{} multipliers for {} blocks",
                        xi.len(),
                        blocks.block_count()
                    )));
                }
                let ms = *scale_cache.get_or_insert_with(|| xi.mean_square());
                if ms <= 0.0 {
                    return Err(Error::DegenerateMultiplier("all multipliers are zero".into()));
                }
                let s = s_hat(comp.sigma_hat, xi, form)?;
                fused_statistic(comp, blocks, &xi.xi, s, bias_correction)
            }
        };
        max = max.max(b);
    }
    Ok(a_d * (max - b_d))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapReport {
    /// Decision fields; `critical_value` is the bootstrap quantile `g*`.
    pub test: TestReport,
    pub g_star: f64,
    pub replicate_stats: Vec<f64>,
    pub config: BootstrapConfig,
    /// Components whose jump indicator fired.
    pub active_components: Vec<usize>,
    /// Components without a full block on one side of the break; they enter
    /// the bootstrap maximum as `b_d`.
    pub degenerate_components: Vec<usize>,
}

pub(crate) fn prepare_panel(
    panel: &PanelSeries,
    fits: &[ComponentFit],
    deltas: &ThresholdVec,
    block_len: usize,
) -> Result<Vec<BootstrapComponent>> {
    let prepared: Vec<Result<BootstrapComponent>> = (0..panel.d())
        .into_par_iter()
        .map(|h| {
            panel
                .component(h)
                .and_then(|z| {
                    prepare_component(
                        &z,
                        fits[h].changepoint.k_hat,
                        fits[h].variance.sigma_hat,
                        deltas.as_slice()[h],
                        block_len,
                    )
                })
                .map_err(|e| e.in_component(h, panel.label(h)))
        })
        .collect();
    prepared.into_iter().collect()
}

/// Replicate values `ℬ_{d,n}` in replicate order.
pub fn bootstrap_replicates(
    components: &[BootstrapComponent],
    blocks: usize,
    a_d: f64,
    b_d: f64,
    cfg: &BootstrapConfig,
    bias_correction: bool,
) -> Result<Vec<f64>> {
    (0..cfg.replicates as u64)
        .into_par_iter()
        .map(|r| {
            let xi = MultiplierDraw::draw(cfg.seed, r, blocks);
            bootstrap_max(components, &xi, a_d, b_d, cfg.s_hat, bias_correction)
        })
        .collect::<Vec<_>>()
        .into_iter()
        .collect()
}

/// Bootstrap-calibrated test: reject when `𝒯 > g*`, the empirical `(1−α)`
/// quantile of the replicate maxima.
pub fn bootstrap_test(
    panel: &PanelSeries,
    deltas: &ThresholdVec,
    alpha: f64,
    est: &EstimationConfig,
    cfg: &BootstrapConfig,
) -> Result<BootstrapReport> {
    let mut warnings = alpha_warnings(alpha)?;
    check_panel_thresholds(panel, deltas)?;
    let blocks = cfg.validate(panel.n())?;
    let fits = fit_panel(panel, est)?;
    // the observed statistic stays uncorrected; the bias term enters the replicates
    let max = assemble_max(&fits, panel.n(), deltas, false)?;
    let components = prepare_panel(panel, &fits, deltas, cfg.block_len)?;
    let (a_d, b_d) = scaling_sequences(panel.d())?;

    let mut replicate_stats = bootstrap_replicates(&components, blocks, a_d, b_d, cfg, est.bias_correction)?;
    let mut sorted = replicate_stats.clone();
    sorted.sort_by(f64::total_cmp);
    let g_star = quantile_sorted(&sorted, 1.0 - alpha);
    replicate_stats.shrink_to_fit();

    let active_components: Vec<usize> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.is_active())
        .map(|(h, _)| h)
        .collect();
    let degenerate_components: Vec<usize> = components
        .iter()
        .enumerate()
        .filter(|(_, c)| c.jump.is_none())
        .map(|(h, _)| h)
        .collect();
    if !degenerate_components.is_empty() {
        warnings.push(format!(
            "{} component(s) have no full block of length {} on one side of the estimated break \
             and were treated as unchanged in the bootstrap",
            degenerate_components.len(),
            cfg.block_len
        ));
    }

    let reject = max.statistic > g_star;
    let test = TestReport {
        statistic: max.statistic,
        critical_value: g_star,
        alpha,
        method: Calibration::Bootstrap,
        reject,
        relevant_set: relevant_set(&max.per_component, g_star, a_d, b_d),
        per_component: max.per_component,
        a_d,
        b_d,
        n: panel.n(),
        d: panel.d(),
        warnings,
        notes: decision_notes(reject),
    };
    Ok(BootstrapReport {
        test,
        g_star,
        replicate_stats,
        config: *cfg,
        active_components,
        degenerate_components,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn series(v: &[f64]) -> ComponentSeries<'_> {
        ComponentSeries::new(v).unwrap()
    }

    fn step(n: usize, k: usize, before: f64, after: f64) -> Vec<f64> {
        (0..n).map(|j| if j < k { before } else { after }).collect()
    }

    #[test]
    fn noiseless_step_is_fully_corrected() {
        let z = step(100, 50, 0.0, -1.0);
        let (z_hat, jump) = mean_corrected(&series(&z), 50, 10).unwrap();
        assert_eq!(jump.delta_mu_hat, 1.0);
        assert!(z_hat.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn corrected_segments_sum_to_zero_and_window_is_zeroed() {
        let z: Vec<f64> = (0..100).map(|j| ((j * 31) % 17) as f64 * 0.25 + if j >= 47 { 2.0 } else { 0.0 }).collect();
        let (z_hat, jump) = mean_corrected(&series(&z), 47, 10).unwrap();
        assert_eq!((jump.l_minus, jump.l_plus), (4, 6));
        assert_abs_diff_eq!(z_hat[..40].iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(z_hat[60..].iter().sum::<f64>(), 0.0, epsilon = 1e-12);
        // 1-based indices 41..=60 are zeroed
        assert!(z_hat[40..60].iter().all(|&v| v == 0.0));
        assert!(z_hat[39] != 0.0 && z_hat[60] != 0.0);

        let blocks = block_sums(z_hat, 10).unwrap();
        let v = blocks.sums();
        assert_eq!(v.len(), 10);
        assert_eq!(v[4], 0.0);
        assert_eq!(v[5], 0.0);
        for l in 1..=10 {
            assert_eq!(blocks.partial(l, 100), v[l - 1]);
        }
        assert_eq!(blocks.partial(3, 20), 0.0);
    }

    #[test]
    fn zero_inputs_give_zero_paths() {
        let blocks = block_sums(vec![0.0; 20], 4).unwrap();
        assert!(blocks.sums().iter().all(|&v| v == 0.0));
        let xi = MultiplierDraw::from_values(vec![1.3, -0.2, 0.7, 2.0, -1.0]);
        assert!(bootstrap_cusum(&blocks, &xi).unwrap().values().iter().all(|&u| u == 0.0));
        let blocks = block_sums((0..20).map(f64::from).collect(), 4).unwrap();
        let xi = MultiplierDraw::from_values(vec![0.0; 5]);
        assert!(bootstrap_cusum(&blocks, &xi).unwrap().values().iter().all(|&u| u == 0.0));
        assert!(bootstrap_cusum(&blocks, &MultiplierDraw::from_values(vec![1.0; 4])).is_err());
    }

    #[test]
    fn single_block_path() {
        let (k, l) = (5usize, 4usize);
        let n = k * l;
        let mut z_hat = vec![0.0; n];
        z_hat[..k].fill(1.0); // V̂₁ = K
        let blocks = block_sums(z_hat, k).unwrap();
        let mut xi = vec![0.0; l];
        xi[0] = 1.0;
        let path = bootstrap_cusum(&blocks, &MultiplierDraw::from_values(xi)).unwrap();
        let nf = n as f64;
        for (j, &u) in path.values().iter().enumerate() {
            let expected = j.min(k) as f64 / nf - (j * k) as f64 / (nf * nf);
            assert_abs_diff_eq!(u, expected, epsilon = 1e-15);
        }
    }

    fn noisy_component(n: usize, k: usize, jump: f64) -> Vec<f64> {
        (0..n)
            .map(|j| ((j * 7919 + 13) % 101) as f64 / 50.0 - 1.0 + if j >= k { jump } else { 0.0 })
            .collect()
    }

    #[test]
    fn unit_multipliers_reproduce_deterministic_cusum() {
        let z = noisy_component(120, 60, 1.5);
        let comp = prepare_component(&series(&z), 60, 1.0, 1.0, 4).unwrap();
        let blocks = comp.blocks().unwrap();
        let ones = MultiplierDraw::from_values(vec![1.0; 30]);
        let path = bootstrap_cusum(blocks, &ones).unwrap();
        let direct = crate::cusum::cusum_path(&series(blocks.corrected()));
        for (a, b) in path.values().iter().zip(direct.values()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-15);
        }
        let b = bootstrap_statistic(&comp, &ones, 0.0, SHatForm::Squared, false).unwrap();
        let w = 0.25;
        let expected = 6.0 * (120f64).sqrt() / (comp.tau_hat * w * w)
            * integral_cusum_kernel(&direct, 0.5);
        assert_abs_diff_eq!(b, expected, epsilon = 1e-12 * expected.abs().max(1.0));
    }

    #[test]
    fn fused_route_matches_explicit_path() {
        let z = noisy_component(200, 83, -2.0);
        for block_len in [1usize, 2, 5, 10] {
            let comp = prepare_component(&series(&z), 83, 0.7, 1.3, block_len).unwrap();
            assert!(comp.is_active());
            for r in 0..5 {
                let xi = MultiplierDraw::draw(11, r, 200 / block_len);
                for (form, bias) in [(SHatForm::Squared, true), (SHatForm::Unsquared, false)] {
                    let generic = bootstrap_statistic(&comp, &xi, 2.0, form, bias).unwrap();
                    let fused = bootstrap_max(std::slice::from_ref(&comp), &xi, 1.0, 0.0, form, bias).unwrap();
                    assert_abs_diff_eq!(generic, fused, epsilon = 1e-11 * generic.abs().max(1.0));
                }
            }
        }
    }

    #[test]
    fn small_jump_falls_back_to_b_d() {
        let z = noisy_component(100, 50, 0.0);
        let comp = prepare_component(&series(&z), 50, 1.0, 1.0, 1).unwrap();
        assert!(comp.jump.unwrap().delta_mu_hat.abs() <= 100f64.powf(-0.25));
        assert!(!comp.is_active());
        let xi = MultiplierDraw::draw(1, 0, 100);
        assert_eq!(bootstrap_statistic(&comp, &xi, 2.366, SHatForm::Squared, true).unwrap(), 2.366);
        let (a, b) = scaling_sequences(100).unwrap();
        assert_eq!(bootstrap_max(&[comp.clone(), comp], &xi, a, b, SHatForm::Squared, true).unwrap(), 0.0);
    }

    #[test]
    fn degenerate_block_limits_leave_component_inactive() {
        let z = noisy_component(100, 8, 3.0);
        let comp = prepare_component(&series(&z), 8, 1.0, 1.0, 10).unwrap();
        assert!(comp.jump.is_none());
        assert!(!comp.is_active());
    }

    #[test]
    fn zero_multipliers_are_rejected() {
        let z = noisy_component(100, 50, 2.0);
        let comp = prepare_component(&series(&z), 50, 1.0, 1.0, 1).unwrap();
        let xi = MultiplierDraw::from_values(vec![0.0; 100]);
        assert!(matches!(
            bootstrap_statistic(&comp, &xi, 0.0, SHatForm::Squared, false),
            Err(Error::DegenerateMultiplier(_))
        ));
        assert!(bootstrap_max(&[comp], &xi, 1.0, 0.0, SHatForm::Squared, false).is_err());
    }

    #[test]
    fn config_validation() {
        let cfg = BootstrapConfig::new(3, 200, 0);
        assert!(cfg.validate(100).is_err());
        assert_eq!(BootstrapConfig::new(4, 200, 0).validate(100).unwrap(), 25);
        assert!(BootstrapConfig::new(1, 99, 0).validate(100).is_err());
        assert!(BootstrapConfig::new(100, 200, 0).validate(100).is_err());
    }

    #[test]
    fn multiplier_draws_are_reproducible() {
        let a = MultiplierDraw::draw(5, 17, 50);
        let b = MultiplierDraw::draw(5, 17, 50);
        let c = MultiplierDraw::draw(5, 18, 50);
        assert_eq!(a, b);
        assert_ne!(a, c);
    }
}
