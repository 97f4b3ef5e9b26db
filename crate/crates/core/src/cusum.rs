//! The CUSUM process of one component and exact integrals against it.
//!
//! `𝕌(s) = n⁻¹ Σ_{j ≤ ⌊ns⌋} Z_j − ⌊ns⌋ n⁻² Σ_{j ≤ n} Z_j` is a step function,
//! constant on each cell `[j/n, (j+1)/n)`. It is stored by its `n` left-end
//! values `u_0 = 0, u_1, …, u_{n-1}` and every integral below is evaluated in
//! closed form cell by cell, so no discretisation error enters.

use crate::error::{Error, Result};
use crate::numeric::{anchored_prefix_sums, gauss_legendre, CompensatedSum};
use crate::panel::ComponentSeries;

/// Left-end values of the CUSUM step path on the grid `j/n`, `j = 0..n-1`.
#[derive(Debug, Clone, PartialEq)]
pub struct CusumPath {
    u: Vec<f64>,
}

impl CusumPath {
    /// Wrap arbitrary step values without checking that they come from data.
    pub fn from_values(u: Vec<f64>) -> Self {
        Self { u }
    }

    pub fn values(&self) -> &[f64] {
        &self.u
    }

    pub fn n(&self) -> usize {
        self.u.len()
    }

    pub fn into_values(self) -> Vec<f64> {
        self.u
    }
}

/// CUSUM path of a validated series in one compensated prefix-sum pass,
/// with partial sums taken relative to the first observation.
pub fn cusum_path(z: &ComponentSeries<'_>) -> CusumPath {
    cusum_of(z.values())
}

/// CUSUM path of a raw slice. Callers guarantee `xs` is nonempty and finite.
pub(crate) fn cusum_of(xs: &[f64]) -> CusumPath {
    let n = xs.len();
    let nf = n as f64;
    let mut u = Vec::with_capacity(n);
    let prefix = anchored_prefix_sums(xs);
    let total = prefix[n];
    let n2 = nf * nf;
    for (j, &s) in prefix[..n].iter().enumerate() {
        u.push(cusum_value(s, total, j, nf, n2));
    }
    CusumPath { u }
}

/// `u_j = (n·S_j − j·S_n) / n²` from anchored partial sums.
#[inline]
pub(crate) fn cusum_value(partial: f64, total: f64, j: usize, nf: f64, n2: f64) -> f64 {
    (nf * partial - j as f64 * total) / n2
}

/// `∫₀¹ 𝕌²(s) ds = n⁻¹ Σ_j u_j²`.
pub fn integral_squared(path: &CusumPath) -> f64 {
    let mut acc = CompensatedSum::default();
    for &u in &path.u {
        acc.add(u * u);
    }
    acc.value() / path.n() as f64
}

/// `M̂² = 3 / (t̂(1−t̂))² · ∫𝕌²`, an estimate of the squared jump.
pub fn m_hat_squared(path: &CusumPath, t_hat: f64) -> Result<f64> {
    check_open_unit("t_hat", t_hat)?;
    let w = t_hat * (1.0 - t_hat);
    Ok(3.0 / (w * w) * integral_squared(path))
}

/// Normalising function `τ(t) = 2√(1 + 2t(1−t)) / (√5 · t(1−t))`.
pub fn tau(t: f64) -> Result<f64> {
    check_open_unit("t", t)?;
    let w = t * (1.0 - t);
    Ok(2.0 * (1.0 + 2.0 * w).sqrt() / (5f64.sqrt() * w))
}

/// Covariance kernel of the standard Brownian bridge, `min(s,t) − st`.
#[inline]
pub fn bridge_kernel(s: f64, t: f64) -> f64 {
    s.min(t) - s * t
}

/// `∫_a^b k(s, t) ds` for `0 ≤ a ≤ b ≤ 1`.
pub fn kernel_integral(a: f64, b: f64, t: f64) -> f64 {
    // k(s,t) = s(1−t) left of t and t(1−s) right of t
    let left = |a: f64, b: f64| (1.0 - t) * (b - a) * (b + a) * 0.5;
    let right = |a: f64, b: f64| t * (b - a) * (1.0 - 0.5 * (a + b));
    if b <= t {
        left(a, b)
    } else if a >= t {
        right(a, b)
    } else {
        left(a, t) + right(t, b)
    }
}

/// Weights `g_j = ∫_{j/n}^{(j+1)/n} k(s,t) ds` so that
/// `∫ 𝕌(s) k(s,t) ds = Σ_j g_j u_j` for any step path on the `n`-grid.
pub fn kernel_cell_weights(n: usize, t: f64) -> Vec<f64> {
    let nf = n as f64;
    (0..n)
        .map(|j| kernel_integral(j as f64 / nf, (j + 1) as f64 / nf, t))
        .collect()
}

/// `∫₀¹ 𝕌(s) k(s,t) ds`, exact for the step path (cells containing `t` are
/// split at `t`).
pub fn integral_cusum_kernel(path: &CusumPath, t: f64) -> f64 {
    let nf = path.n() as f64;
    let mut acc = CompensatedSum::default();
    for (j, &u) in path.u.iter().enumerate() {
        if u != 0.0 {
            acc.add(u * kernel_integral(j as f64 / nf, (j + 1) as f64 / nf, t));
        }
    }
    acc.value()
}

/// `τ̃(t, t′) = 36 / (t(1−t)t′(1−t′))² · ∬ k(s₁,t) k(s₂,t′) k(s₁,s₂) ds₁ ds₂`.
///
/// The integrand is a polynomial of low degree on every cell cut by the
/// kinks `s₁ ∈ {t, t′}` and `s₂ ∈ {t′, s₁}`, so Gauss–Legendre on those
/// cells is exact up to rounding. Each cell is further split into a fixed
/// number of panels.
pub fn tau_tilde(t: f64, t2: f64) -> Result<f64> {
    check_open_unit("t", t)?;
    check_open_unit("t2", t2)?;
    let w = t * (1.0 - t) * t2 * (1.0 - t2);
    Ok(36.0 / (w * w) * triple_kernel_integral(t, t2))
}

const TAU_TILDE_PANELS: usize = 4;
const TAU_TILDE_NODES: usize = 8;

fn triple_kernel_integral(t: f64, t2: f64) -> f64 {
    let (x, w) = gauss_legendre(TAU_TILDE_NODES);
    let outer = breakpoints(&[t, t2]);
    let mut total = CompensatedSum::default();
    for_each_node(&outer, &x, &w, |s1, w1| {
        let inner = breakpoints(&[t2, s1]);
        let mut acc = 0.0;
        for_each_node(&inner, &x, &w, |s2, w2| {
            acc += w2 * bridge_kernel(s2, t2) * bridge_kernel(s1, s2);
        });
        total.add(w1 * bridge_kernel(s1, t) * acc);
    });
    total.value()
}

fn breakpoints(interior: &[f64]) -> Vec<f64> {
    let mut pts = vec![0.0, 1.0];
    pts.extend(interior.iter().copied().filter(|&p| p > 0.0 && p < 1.0));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts
}

fn for_each_node(pts: &[f64], x: &[f64], w: &[f64], mut f: impl FnMut(f64, f64)) {
    for seg in pts.windows(2) {
        let panel = (seg[1] - seg[0]) / TAU_TILDE_PANELS as f64;
        if panel <= 0.0 {
            continue;
        }
        for p in 0..TAU_TILDE_PANELS {
            let a = seg[0] + p as f64 * panel;
            let half = 0.5 * panel;
            let mid = a + half;
            for (xi, wi) in x.iter().zip(w) {
                f(mid + half * xi, half * wi);
            }
        }
    }
}

fn check_open_unit(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v < 1.0 {
        Ok(())
    } else {
        Err(Error::invalid(format!("{name} = {v} must lie in (0, 1)")))
    }
}
