//! Small numerical helpers shared by the statistics modules.

/// Slack used when flooring products like `n · t` that should be integers
/// but carry representation error (`100 · 0.45 = 45.000000000000007`).
const INDEX_SLACK: f64 = 1e-9;

/// Neumaier compensated accumulator.
#[derive(Debug, Clone, Copy, Default)]
pub struct CompensatedSum {
    sum: f64,
    comp: f64,
}

impl CompensatedSum {
    #[inline]
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.comp += (self.sum - t) + x;
        } else {
            self.comp += (x - t) + self.sum;
        }
        self.sum = t;
    }

    #[inline]
    pub fn value(&self) -> f64 {
        self.sum + self.comp
    }
}

pub fn compensated_sum(xs: &[f64]) -> f64 {
    let mut acc = CompensatedSum::default();
    for &x in xs {
        acc.add(x);
    }
    acc.value()
}

/// Prefix sums `S_0 = 0, S_1, …, S_n` with compensated accumulation.
pub fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(0.0);
    let mut acc = CompensatedSum::default();
    for &x in xs {
        acc.add(x);
        out.push(acc.value());
    }
    out
}

/// Prefix sums of `x_j − x_0`. The CUSUM is invariant to this shift, and
/// constant data then give exactly zero partial sums.
pub fn anchored_prefix_sums(xs: &[f64]) -> Vec<f64> {
    let mut out = Vec::with_capacity(xs.len() + 1);
    out.push(0.0);
    let anchor = xs.first().copied().unwrap_or(0.0);
    let mut acc = CompensatedSum::default();
    for &x in xs {
        acc.add(x - anchor);
        out.push(acc.value());
    }
    out
}

/// `⌊x⌋`, treating values within `1e-9` below an integer as that integer.
#[inline]
pub fn floor_index(x: f64) -> i64 {
    (x + INDEX_SLACK).floor() as i64
}

/// `⌈x⌉`, treating values within `1e-9` above an integer as that integer.
#[inline]
pub fn ceil_index(x: f64) -> i64 {
    (x - INDEX_SLACK).ceil() as i64
}

/// Gauss–Legendre nodes and weights on `[-1, 1]` (Newton iteration on `P_m`).
pub fn gauss_legendre(m: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(m >= 1);
    let mut nodes = vec![0.0; m];
    let mut weights = vec![0.0; m];
    let mf = m as f64;
    for i in 0..m.div_ceil(2) {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (mf + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=m {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            let pm = if m == 1 { x } else { p1 };
            let pm1 = if m == 1 { 1.0 } else { p0 };
            dp = mf * (x * pm - pm1) / (x * x - 1.0);
            let dx = pm / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        nodes[i] = -x;
        nodes[m - 1 - i] = x;
        weights[i] = w;
        weights[m - 1 - i] = w;
    }
    (nodes, weights)
}

/// Type-7 (linear interpolation) sample quantile of already sorted data.
pub fn quantile_sorted(sorted: &[f64], p: f64) -> f64 {
    assert!(!sorted.is_empty());
    let h = (sorted.len() - 1) as f64 * p.clamp(0.0, 1.0);
    let lo = h.floor() as usize;
    let hi = (lo + 1).min(sorted.len() - 1);
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}
