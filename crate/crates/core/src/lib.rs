//! Detection of *relevant* mean changes in high-dimensional time series.
//!
//! Each component of an `n × d` panel is summarised by an integrated squared
//! CUSUM statistic, standardised against a user threshold `Δ_h`, and the
//! maximum over components is calibrated either by its Gumbel limit or by a
//! multiplier block bootstrap. A component is flagged only when its estimated
//! jump exceeds its threshold; small shifts are tolerated by construction.
//!
//! Module map:
//!
//! - [`cusum`]: CUSUM path, exact integrals of the step path, `τ` and `τ̃`.
//! - [`changepoint`]: argmax change-point location and block-aligned jump size.
//! - [`variance`]: split-sample Bartlett long-run variance with truncation.
//! - [`asymptotic`]: component statistics, the max statistic, Gumbel calibration.
//! - [`bootstrap`]: multiplier block bootstrap calibration.
//! - [`data_gen`]: the four innovation models used in simulation studies.
//! - [`harness`]: Monte-Carlo rejection rates and power curves.
//! - [`io`]: CSV panels, JSON reports, plot data, and the `detect` workflow.

pub mod asymptotic;
pub mod bootstrap;
pub mod changepoint;
pub mod config;
pub mod cusum;
pub mod data_gen;
pub mod error;
pub mod harness;
pub mod io;
pub mod numeric;
pub mod panel;
pub mod rng;
pub mod variance;

pub use asymptotic::{
    asymptotic_test, component_statistic, gumbel_quantile, max_statistic, relevant_set,
    scaling_sequences, ComponentStat, TestReport, ThresholdVec,
};
pub use bootstrap::{bootstrap_test, BootstrapConfig, BootstrapReport, SHatForm};
pub use changepoint::{estimate_changepoint, estimate_jump, ChangePointEstimate, JumpEstimate};
pub use config::{Bandwidth, Calibration, EstimationConfig, VarianceCombine};
pub use cusum::{cusum_path, CusumPath};
pub use data_gen::{gen_innovations, inject_shifts, InnovationModel, SimScenario};
pub use error::{Error, Result};
pub use harness::{power_curve, rejection_rate, ExperimentResult, Method};
pub use panel::{ComponentSeries, PanelSeries};
