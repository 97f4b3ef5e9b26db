//! Seeded innovation models and mean-shift injection for simulations.

use std::fmt;
use std::str::FromStr;

use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, Exp1, StandardNormal};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::asymptotic::ThresholdVec;
use crate::error::{Error, Result};
use crate::numeric::floor_index;
use crate::panel::PanelSeries;
use crate::rng::{stream, tag};

/// Discarded start-up samples of the dependent models.
pub const BURN_IN: usize = 200;

/// Memory of the moving average driving the ARMA model.
pub const ARMA_NOISE_LAGS: usize = 19;
/// Memory of the pure moving-average model.
pub const MA_LAGS: usize = 29;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum InnovationModel {
    /// i.i.d. standard normal.
    I,
    /// i.i.d. `Exp(1) − 1`.
    II,
    /// `X_j = 0.2X_{j−1} − 0.3X_{j−2} − 0.4Y_j + 0.8Y_{j−1}` with
    /// `Y_k = ε_k + Σ_{i=1}^{19} i^{−3} ε_{k−i}`.
    III,
    /// `X_j = ε_j + 0.1 Σ_{k=1}^{29} k^{−3} ε_{j−k}`.
    IV,
}

impl InnovationModel {
    pub const ALL: [InnovationModel; 4] = [Self::I, Self::II, Self::III, Self::IV];

    /// Stationary marginal variance where it has a simple closed form.
    pub fn marginal_variance(self) -> Option<f64> {
        match self {
            Self::I | Self::II => Some(1.0),
            Self::IV => Some(1.0 + 0.01 * (1..=MA_LAGS).map(|k| (k as f64).powi(-6)).sum::<f64>()),
            Self::III => None,
        }
    }
}

impl fmt::Display for InnovationModel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Self::I => "I",
            Self::II => "II",
            Self::III => "III",
            Self::IV => "IV",
        })
    }
}

impl FromStr for InnovationModel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "I" | "1" => Ok(Self::I),
            "II" | "2" => Ok(Self::II),
            "III" | "3" => Ok(Self::III),
            "IV" | "4" => Ok(Self::IV),
            other => Err(Error::config(format!("unknown innovation model {other:?}"))),
        }
    }
}

fn normals(rng: &mut ChaCha8Rng, len: usize) -> Vec<f64> {
    (0..len).map(|_| StandardNormal.sample(rng)).collect()
}

/// Moving average `out_j = e_{j+lags} + scale Σ_{k=1}^{lags} k^{−3} e_{j+lags−k}`.
fn cubic_ma(eps: &[f64], lags: usize, scale: f64) -> Vec<f64> {
    let weights: Vec<f64> = (1..=lags).map(|k| scale * (k as f64).powi(-3)).collect();
    (lags..eps.len())
        .map(|j| {
            eps[j] + weights.iter().enumerate().map(|(i, w)| w * eps[j - 1 - i]).sum::<f64>()
        })
        .collect()
}

/// Retained ARMA sample together with its driving noise `Y`.
#[derive(Debug, Clone, PartialEq)]
pub struct ArmaSample {
    pub x: Vec<f64>,
    /// `y[j]` pairs with `x[j]`; `y_prev` is the value preceding `y[0]`.
    pub y: Vec<f64>,
    pub y_prev: f64,
    /// The two retained-window predecessors `(X_{−1}, X_0)` of `x[0]`.
    pub x_prev: (f64, f64),
}

pub fn arma_column(rng: &mut ChaCha8Rng, n: usize) -> ArmaSample {
    let total = n + BURN_IN;
    let eps = normals(rng, total + ARMA_NOISE_LAGS);
    let y = cubic_ma(&eps, ARMA_NOISE_LAGS, 1.0);
    let mut x = vec![0.0; total];
    for j in 0..total {
        let x1 = if j >= 1 { x[j - 1] } else { 0.0 };
        let x2 = if j >= 2 { x[j - 2] } else { 0.0 };
        let y1 = if j >= 1 { y[j - 1] } else { 0.0 };
        x[j] = 0.2 * x1 - 0.3 * x2 - 0.4 * y[j] + 0.8 * y1;
    }
    ArmaSample {
        x_prev: (x[BURN_IN - 2], x[BURN_IN - 1]),
        y_prev: y[BURN_IN - 1],
        x: x.split_off(BURN_IN),
        y: y[BURN_IN..].to_vec(),
    }
}

/// One column of innovations from its own random stream.
pub fn gen_column(model: InnovationModel, n: usize, rng: &mut ChaCha8Rng) -> Vec<f64> {
    match model {
        InnovationModel::I => normals(rng, n),
        InnovationModel::II => (0..n).map(|_| {
            let e: f64 = Exp1.sample(rng);
            e - 1.0
        }).collect(),
        InnovationModel::III => arma_column(rng, n).x,
        InnovationModel::IV => {
            let eps = normals(rng, n + BURN_IN + MA_LAGS);
            let mut x = cubic_ma(&eps, MA_LAGS, 0.1);
            x.split_off(BURN_IN)
        }
    }
}

/// Centred `n × d` innovation panel; column `h` uses the substream `(seed, h)`.
pub fn gen_innovations(model: InnovationModel, n: usize, d: usize, seed: u64) -> Result<PanelSeries> {
    if n < 2 || d < 1 {
        return Err(Error::invalid(format!("cannot generate an {n} × {d} panel")));
    }
    let columns: Vec<Vec<f64>> = (0..d as u64)
        .into_par_iter()
        .map(|h| gen_column(model, n, &mut stream(seed, &[tag::COLUMN, h])))
        .collect();
    PanelSeries::from_columns(columns)
}

/// Add `mu` to observations `j > ⌊n t_h⌋` (1-based) of every column `h`.
pub fn inject_shifts(mut x: PanelSeries, mu: f64, t: &[f64]) -> Result<PanelSeries> {
    if t.len() != x.d() {
        return Err(Error::invalid(format!(
            "{} change locations for {} components",
            t.len(),
            x.d()
        )));
    }
    let n = x.n();
    for (h, &th) in t.iter().enumerate() {
        if !(th > 0.0 && th < 1.0) {
            return Err(Error::invalid(format!("change location t = {th} must lie in (0, 1)")));
        }
        let start = floor_index(n as f64 * th) as usize;
        for v in &mut x.column_mut(h)[start..] {
            *v += mu;
        }
    }
    Ok(x)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimScenario {
    pub model: InnovationModel,
    pub n: usize,
    pub d: usize,
    /// Common post-break mean shift.
    pub mu: f64,
    /// Change locations, one per component.
    pub t: Vec<f64>,
    pub deltas: ThresholdVec,
    pub seed: u64,
}

impl SimScenario {
    /// Break at `t = 0.5` and threshold `Δ = 1` in every component.
    pub fn new(model: InnovationModel, n: usize, d: usize, mu: f64, seed: u64) -> Result<Self> {
        Ok(Self {
            model,
            n,
            d,
            mu,
            t: vec![0.5; d],
            deltas: ThresholdVec::broadcast(1.0, d)?,
            seed,
        })
    }

    pub fn with_mu(&self, mu: f64) -> Self {
        Self { mu, ..self.clone() }
    }

    pub fn validate(&self, t_min: f64) -> Result<()> {
        if self.n < 2 || self.d < 2 {
            return Err(Error::config(format!("scenario needs n, d ≥ 2, got {} × {}", self.n, self.d)));
        }
        if self.t.len() != self.d || self.deltas.len() != self.d {
            return Err(Error::config(format!(
                "scenario has {} locations and {} thresholds for d = {}",
                self.t.len(),
                self.deltas.len(),
                self.d
            )));
        }
        if let Some(t) = self.t.iter().find(|&&t| !(t >= t_min && t <= 1.0 - t_min)) {
            return Err(Error::config(format!("change location {t} outside [{t_min}, {}]", 1.0 - t_min)));
        }
        if !self.mu.is_finite() {
            return Err(Error::config("mean shift must be finite"));
        }
        Ok(())
    }

    /// Panel of one simulation run drawn from `seed`.
    pub fn generate(&self, seed: u64) -> Result<PanelSeries> {
        let x = gen_innovations(self.model, self.n, self.d, seed)?;
        inject_shifts(x, self.mu, &self.t)
    }
}
