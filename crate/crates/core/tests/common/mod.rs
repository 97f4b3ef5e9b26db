//! Reference implementations shared by the integration tests. They follow
//! the definitions directly and share no code with the library.
#![allow(dead_code)]

use relchange::CusumPath;

pub fn neumaier(xs: impl Iterator<Item = f64>) -> f64 {
    let (mut s, mut c) = (0.0f64, 0.0f64);
    for x in xs {
        let t = s + x;
        c += if s.abs() >= x.abs() { (s - t) + x } else { (x - t) + s };
        s = t;
    }
    s + c
}

/// Each partial sum re-summed from scratch, relative to the first value.
pub fn naive_cusum(z: &[f64]) -> Vec<f64> {
    let n = z.len();
    let nf = n as f64;
    let total = neumaier(z.iter().map(|v| v - z[0]));
    (0..n)
        .map(|j| {
            let partial = neumaier(z[..j].iter().map(|v| v - z[0]));
            (nf * partial - j as f64 * total) / (nf * nf)
        })
        .collect()
}

/// Midpoint Riemann sum of `𝕌(s)k(s,t)` on `grid` points.
pub fn grid_kernel_integral(path: &CusumPath, t: f64, grid: usize) -> f64 {
    let n = path.n();
    let h = 1.0 / grid as f64;
    let u = path.values();
    let mut acc = 0.0;
    for i in 0..grid {
        let s = (i as f64 + 0.5) * h;
        let j = ((s * n as f64).floor() as usize).min(n - 1);
        acc += u[j] * (s.min(t) - s * t);
    }
    acc * h
}

fn simpson(f: impl Fn(f64) -> f64, a: f64, b: f64, panels: usize) -> f64 {
    let h = (b - a) / panels as f64;
    let mut acc = 0.0;
    for i in 0..panels {
        let x0 = a + i as f64 * h;
        acc += h / 6.0 * (f(x0) + 4.0 * f(x0 + 0.5 * h) + f(x0 + h));
    }
    acc
}

pub fn kernel(s: f64, t: f64) -> f64 {
    s.min(t) - s * t
}

fn pieces(cuts: &[f64]) -> Vec<(f64, f64)> {
    let mut pts = vec![0.0, 1.0];
    pts.extend(cuts.iter().copied().filter(|c| *c > 0.0 && *c < 1.0));
    pts.sort_by(f64::total_cmp);
    pts.dedup();
    pts.windows(2).map(|w| (w[0], w[1])).collect()
}

/// `∬ k(s₁,t)k(s₂,t2)k(s₁,s₂)`: the inner integrand is quadratic between
/// kinks so one Simpson panel per piece is exact; the outer is a low-degree
/// piecewise polynomial handled by composite Simpson.
pub fn triple_kernel_oracle(t: f64, t2: f64) -> f64 {
    let inner = |s1: f64| -> f64 {
        pieces(&[t2, s1])
            .into_iter()
            .map(|(a, b)| simpson(|s2| kernel(s2, t2) * kernel(s1, s2), a, b, 1))
            .sum()
    };
    pieces(&[t, t2])
        .into_iter()
        .map(|(a, b)| simpson(|s1| kernel(s1, t) * inner(s1), a, b, 400))
        .sum()
}

/// Kolmogorov–Smirnov distance between a sample and a continuous CDF.
pub fn ks_distance(mut sample: Vec<f64>, cdf: impl Fn(f64) -> f64) -> f64 {
    sample.sort_by(f64::total_cmp);
    let m = sample.len() as f64;
    sample
        .iter()
        .enumerate()
        .map(|(i, &x)| {
            let f = cdf(x);
            ((i + 1) as f64 / m - f).abs().max((f - i as f64 / m).abs())
        })
        .fold(0.0, f64::max)
}

/// Standard normal CDF through the Abramowitz–Stegun erfc bound (|error| < 1.5e-7).
pub fn std_normal_cdf(x: f64) -> f64 {
    let z = x.abs() / std::f64::consts::SQRT_2;
    let t = 1.0 / (1.0 + 0.3275911 * z);
    let poly = t * (0.254829592 + t * (-0.284496736 + t * (1.421413741 + t * (-1.453152027 + t * 1.061405429))));
    let erfc = poly * (-z * z).exp();
    if x >= 0.0 { 1.0 - 0.5 * erfc } else { 0.5 * erfc }
}
