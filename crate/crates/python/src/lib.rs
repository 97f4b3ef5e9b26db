//! Python bindings: panels, both calibrations, data generation and the
//! Monte-Carlo harness.

use pyo3::create_exception;
use pyo3::exceptions::PyValueError;
use pyo3::prelude::*;

use relchange::asymptotic::ComponentStat;
use relchange::harness::{rejection_rate_with, HarnessOptions, Method};
use relchange::{
    Bandwidth, BootstrapConfig, EstimationConfig, InnovationModel, PanelSeries, SHatForm,
    SimScenario, TestReport, ThresholdVec, VarianceCombine,
};

create_exception!(relchange, RelchangeError, PyValueError);

fn to_py(e: relchange::Error) -> PyErr {
    RelchangeError::new_err(e.to_string())
}

/// An `n × d` panel stored by column.
#[pyclass(name = "Panel", module = "relchange", frozen)]
pub struct PyPanel {
    inner: PanelSeries,
}

#[pymethods]
impl PyPanel {
    #[new]
    #[pyo3(signature = (columns, labels = None))]
    fn new(columns: Vec<Vec<f64>>, labels: Option<Vec<String>>) -> PyResult<Self> {
        let mut inner = PanelSeries::from_columns(columns).map_err(to_py)?;
        if let Some(l) = labels {
            inner.set_labels(l).map_err(to_py)?;
        }
        Ok(Self { inner })
    }

    #[staticmethod]
    fn from_csv(path: std::path::PathBuf) -> PyResult<Self> {
        Ok(Self {
            inner: relchange::io::load_panel_csv(path).map_err(to_py)?,
        })
    }

    fn to_csv(&self, path: std::path::PathBuf) -> PyResult<()> {
        relchange::io::write_panel_csv(&self.inner, path).map_err(to_py)
    }

    #[getter]
    fn n(&self) -> usize {
        self.inner.n()
    }

    #[getter]
    fn d(&self) -> usize {
        self.inner.d()
    }

    #[getter]
    fn labels(&self) -> Vec<String> {
        self.inner.labels().to_vec()
    }

    fn column(&self, h: usize) -> PyResult<Vec<f64>> {
        if h >= self.inner.d() {
            return Err(RelchangeError::new_err(format!("column {h} out of range")));
        }
        Ok(self.inner.column(h).to_vec())
    }

    fn __repr__(&self) -> String {
        format!("Panel(n={}, d={})", self.inner.n(), self.inner.d())
    }
}

/// Outcome of either calibration.
#[pyclass(name = "TestReport", module = "relchange", frozen)]
pub struct PyReport {
    inner: TestReport,
    labels: Vec<String>,
    #[pyo3(get)]
    g_star: Option<f64>,
    #[pyo3(get)]
    replicate_stats: Option<Vec<f64>>,
}

impl PyReport {
    fn per<T>(&self, f: impl Fn(&ComponentStat) -> T) -> Vec<T> {
        self.inner.per_component.iter().map(f).collect()
    }
}

#[pymethods]
impl PyReport {
    #[getter]
    fn statistic(&self) -> f64 {
        self.inner.statistic
    }

    #[getter]
    fn critical_value(&self) -> f64 {
        self.inner.critical_value
    }

    #[getter]
    fn reject(&self) -> bool {
        self.inner.reject
    }

    #[getter]
    fn relevant_set(&self) -> Vec<usize> {
        self.inner.relevant_set.clone()
    }

    #[getter]
    fn relevant_labels(&self) -> Vec<String> {
        self.inner.relevant_set.iter().map(|&h| self.labels[h].clone()).collect()
    }

    #[getter]
    fn t_stats(&self) -> Vec<f64> {
        self.per(|s| s.t_stat)
    }

    #[getter]
    fn t_hats(&self) -> Vec<f64> {
        self.per(|s| s.t_hat)
    }

    #[getter]
    fn break_indices(&self) -> Vec<usize> {
        self.per(|s| s.k_hat)
    }

    #[getter]
    fn sigma_hats(&self) -> Vec<f64> {
        self.per(|s| s.sigma_hat)
    }

    #[getter]
    fn m_hat_sq(&self) -> Vec<f64> {
        self.per(|s| s.m_hat_sq)
    }

    #[getter]
    fn a_d(&self) -> f64 {
        self.inner.a_d
    }

    #[getter]
    fn b_d(&self) -> f64 {
        self.inner.b_d
    }

    #[getter]
    fn warnings(&self) -> Vec<String> {
        self.inner.warnings.clone()
    }

    fn to_json(&self) -> PyResult<String> {
        serde_json::to_string(&self.inner).map_err(|e| RelchangeError::new_err(e.to_string()))
    }

    fn __repr__(&self) -> String {
        format!(
            "TestReport(statistic={}, critical_value={}, reject={}, relevant_set={:?})",
            self.inner.statistic, self.inner.critical_value, self.inner.reject, self.inner.relevant_set
        )
    }
}

fn thresholds(deltas: &Bound<'_, PyAny>, d: usize) -> PyResult<ThresholdVec> {
    if let Ok(v) = deltas.extract::<f64>() {
        return ThresholdVec::broadcast(v, d).map_err(to_py);
    }
    let v: Vec<f64> = deltas.extract()?;
    if v.len() != d {
        return Err(RelchangeError::new_err(format!("{} thresholds for {d} columns", v.len())));
    }
    ThresholdVec::new(v).map_err(to_py)
}

fn estimation(
    t_min: f64,
    separation: f64,
    bandwidth: Option<usize>,
    combine: &str,
    bias_correction: bool,
) -> PyResult<EstimationConfig> {
    let combine = match combine {
        "max" => VarianceCombine::Max,
        "average" => VarianceCombine::Average,
        other => return Err(RelchangeError::new_err(format!("unknown combine rule {other:?}"))),
    };
    Ok(EstimationConfig {
        t_min,
        separation,
        bandwidth: bandwidth.map_or(Bandwidth::CubeRoot, Bandwidth::Fixed),
        combine,
        bias_correction,
        ..EstimationConfig::default()
    })
}

#[pyfunction]
#[pyo3(signature = (panel, deltas, alpha = 0.05, t_min = 0.05, separation = 0.9, bandwidth = None, combine = "max", bias_correction = true))]
#[allow(clippy::too_many_arguments)]
fn asymptotic_test(
    py: Python<'_>,
    panel: &PyPanel,
    deltas: &Bound<'_, PyAny>,
    alpha: f64,
    t_min: f64,
    separation: f64,
    bandwidth: Option<usize>,
    combine: &str,
    bias_correction: bool,
) -> PyResult<PyReport> {
    let deltas = thresholds(deltas, panel.inner.d())?;
    let cfg = estimation(t_min, separation, bandwidth, combine, bias_correction)?;
    let inner = py
        .detach(|| relchange::asymptotic_test(&panel.inner, &deltas, alpha, &cfg))
        .map_err(to_py)?;
    Ok(PyReport {
        inner,
        labels: panel.inner.labels().to_vec(),
        g_star: None,
        replicate_stats: None,
    })
}

#[pyfunction]
#[pyo3(signature = (panel, deltas, block_len, replicates = 500, seed = 0, alpha = 0.05, t_min = 0.05, separation = 0.9, bandwidth = None, combine = "max", bias_correction = true))]
#[allow(clippy::too_many_arguments)]
fn bootstrap_test(
    py: Python<'_>,
    panel: &PyPanel,
    deltas: &Bound<'_, PyAny>,
    block_len: usize,
    replicates: usize,
    seed: u64,
    alpha: f64,
    t_min: f64,
    separation: f64,
    bandwidth: Option<usize>,
    combine: &str,
    bias_correction: bool,
) -> PyResult<PyReport> {
    let deltas = thresholds(deltas, panel.inner.d())?;
    let cfg = estimation(t_min, separation, bandwidth, combine, bias_correction)?;
    let boot = BootstrapConfig {
        block_len,
        replicates,
        seed,
        s_hat: SHatForm::Squared,
    };
    let report = py
        .detach(|| relchange::bootstrap_test(&panel.inner, &deltas, alpha, &cfg, &boot))
        .map_err(to_py)?;
    Ok(PyReport {
        inner: report.test,
        labels: panel.inner.labels().to_vec(),
        g_star: Some(report.g_star),
        replicate_stats: Some(report.replicate_stats),
    })
}

fn model(name: &str) -> PyResult<InnovationModel> {
    name.parse().map_err(to_py)
}

/// Centred innovations of model "I", "II", "III" or "IV".
#[pyfunction]
fn gen_innovations(model_name: &str, n: usize, d: usize, seed: u64) -> PyResult<PyPanel> {
    let inner = relchange::gen_innovations(model(model_name)?, n, d, seed).map_err(to_py)?;
    Ok(PyPanel { inner })
}

/// Add `mu` after the break `⌊n t_h⌋` of every column.
#[pyfunction]
fn inject_shifts(panel: &PyPanel, mu: f64, t: &Bound<'_, PyAny>) -> PyResult<PyPanel> {
    let d = panel.inner.d();
    let t: Vec<f64> = match t.extract::<f64>() {
        Ok(v) => vec![v; d],
        Err(_) => t.extract()?,
    };
    let inner = relchange::inject_shifts(panel.inner.clone(), mu, &t).map_err(to_py)?;
    Ok(PyPanel { inner })
}

#[pyfunction]
fn cusum_path(values: Vec<f64>) -> PyResult<Vec<f64>> {
    let z = relchange::ComponentSeries::new(&values).map_err(to_py)?;
    Ok(relchange::cusum_path(&z).into_values())
}

#[pyfunction]
fn tau(t: f64) -> PyResult<f64> {
    relchange::cusum::tau(t).map_err(to_py)
}

#[pyfunction]
fn gumbel_quantile(alpha: f64) -> PyResult<f64> {
    relchange::gumbel_quantile(alpha).map_err(to_py)
}

#[pyfunction]
fn scaling_sequences(d: usize) -> PyResult<(f64, f64)> {
    relchange::scaling_sequences(d).map_err(to_py)
}

/// Monte-Carlo rejection rate; returns the result as a dict.
#[pyfunction]
#[pyo3(signature = (model_name, n, d, mu, runs, seed = 0, delta = 1.0, block_len = None, replicates = 200, alpha = 0.05))]
#[allow(clippy::too_many_arguments)]
fn rejection_rate(
    py: Python<'_>,
    model_name: &str,
    n: usize,
    d: usize,
    mu: f64,
    runs: usize,
    seed: u64,
    delta: f64,
    block_len: Option<usize>,
    replicates: usize,
    alpha: f64,
) -> PyResult<Py<PyAny>> {
    let mut scenario = SimScenario::new(model(model_name)?, n, d, mu, seed).map_err(to_py)?;
    scenario.deltas = ThresholdVec::broadcast(delta, d).map_err(to_py)?;
    let method = match block_len {
        None => Method::Asymptotic,
        Some(block_len) => Method::Bootstrap { block_len, replicates },
    };
    let opts = HarnessOptions {
        alpha,
        ..HarnessOptions::default()
    };
    let result = py
        .detach(|| rejection_rate_with(&scenario, method, runs, seed, &opts))
        .map_err(to_py)?;
    let text = serde_json::to_string(&result).map_err(|e| RelchangeError::new_err(e.to_string()))?;
    let json = py.import("json")?;
    Ok(json.call_method1("loads", (text,))?.unbind())
}

#[pymodule]
#[pyo3(name = "relchange")]
fn relchange_module(m: &Bound<'_, PyModule>) -> PyResult<()> {
    m.add("RelchangeError", m.py().get_type::<RelchangeError>())?;
    m.add("__version__", env!("CARGO_PKG_VERSION"))?;
    m.add_class::<PyPanel>()?;
    m.add_class::<PyReport>()?;
    m.add_function(wrap_pyfunction!(asymptotic_test, m)?)?;
    m.add_function(wrap_pyfunction!(bootstrap_test, m)?)?;
    m.add_function(wrap_pyfunction!(gen_innovations, m)?)?;
    m.add_function(wrap_pyfunction!(inject_shifts, m)?)?;
    m.add_function(wrap_pyfunction!(cusum_path, m)?)?;
    m.add_function(wrap_pyfunction!(tau, m)?)?;
    m.add_function(wrap_pyfunction!(gumbel_quantile, m)?)?;
    m.add_function(wrap_pyfunction!(scaling_sequences, m)?)?;
    m.add_function(wrap_pyfunction!(rejection_rate, m)?)?;
    Ok(())
}
