use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Bandwidth rule for the Bartlett long-run variance.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bandwidth {
    /// `β = ⌊m^{1/3}⌋` for a split sample of length `m`.
    CubeRoot,
    Fixed(usize),
}

impl Bandwidth {
    pub fn lags(self, m: usize) -> usize {
        let beta = match self {
            Bandwidth::CubeRoot => {
                let mut b = (m as f64).cbrt().floor() as usize;
                // cbrt can land one ulp under an exact cube
                while (b + 1).pow(3) <= m {
                    b += 1;
                }
                b
            }
            Bandwidth::Fixed(b) => b,
        };
        beta.min(m.saturating_sub(1))
    }
}

/// How the two split-sample variances are combined into `σ̂_h²`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VarianceCombine {
    Average,
    Max,
}

/// Which critical value the max statistic is compared against.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Calibration {
    Asymptotic,
    Bootstrap,
}

/// Tuning of the per-component estimators shared by both calibrations.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct EstimationConfig {
    /// Boundary trimming `𝐭` of the change-point search window `[𝐭, 1−𝐭]`.
    pub t_min: f64,
    /// Separation constant `S` of the variance split samples.
    pub separation: f64,
    pub bandwidth: Bandwidth,
    /// Lower clamp `s_−²` on the long-run variance.
    pub s_minus_sq: f64,
    /// Upper clamp `s_+²` on the long-run variance.
    pub s_plus_sq: f64,
    pub combine: VarianceCombine,
    /// Finite-sample bias correction. The asymptotic test subtracts it from
    /// each `T̂_h`; the bootstrap test adds the squared-path term to each
    /// replicate statistic and leaves `T̂_h` untouched.
    pub bias_correction: bool,
}

impl Default for EstimationConfig {
    fn default() -> Self {
        Self {
            t_min: 0.05,
            separation: 0.9,
            bandwidth: Bandwidth::CubeRoot,
            s_minus_sq: 1e-4,
            s_plus_sq: 1e4,
            combine: VarianceCombine::Max,
            bias_correction: true,
        }
    }
}

impl EstimationConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.t_min > 0.0 && self.t_min < 0.5) {
            return Err(Error::config(format!("t_min = {} must lie in (0, 1/2)", self.t_min)));
        }
        if !(self.separation > 0.0 && self.separation < 1.0) {
            return Err(Error::config(format!(
                "separation S = {} must lie in (0, 1)",
                self.separation
            )));
        }
        if !(self.s_minus_sq > 0.0 && self.s_minus_sq <= self.s_plus_sq && self.s_plus_sq.is_finite())
        {
            return Err(Error::config(format!(
                "variance clamps must satisfy 0 < s_-² ≤ s_+² < ∞, got [{}, {}]",
                self.s_minus_sq, self.s_plus_sq
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn cube_root_bandwidth_is_exact_on_cubes() {
        assert_eq!(Bandwidth::CubeRoot.lags(27), 3);
        assert_eq!(Bandwidth::CubeRoot.lags(64), 4);
        assert_eq!(Bandwidth::CubeRoot.lags(63), 3);
        assert_eq!(Bandwidth::CubeRoot.lags(100_000), 46);
        assert_eq!(Bandwidth::Fixed(10).lags(5), 4);
    }

    #[test]
    fn default_is_valid() {
        EstimationConfig::default().validate().unwrap();
        let bad = EstimationConfig { t_min: 0.5, ..Default::default() };
        assert!(bad.validate().is_err());
        let bad = EstimationConfig { s_minus_sq: 2.0, s_plus_sq: 1.0, ..Default::default() };
        assert!(bad.validate().is_err());
    }
}
