//! CSV panels, JSON reports, plot data, and the `detect` workflow.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::{Deserialize, Serialize};

use crate::asymptotic::{asymptotic_test, TestReport, ThresholdVec};
use crate::bootstrap::{bootstrap_test, BootstrapConfig, SHatForm};
use crate::config::{Calibration, EstimationConfig};
use crate::error::{Error, Result};
use crate::harness::ExperimentResult;
use crate::panel::PanelSeries;

pub const SCHEMA_VERSION: u32 = 1;

/// Write `contents` next to `path` and move it into place, so a failed run
/// never leaves a truncated file behind.
pub fn write_atomic(path: &Path, contents: &[u8]) -> Result<()> {
    let dir = path.parent().filter(|p| !p.as_os_str().is_empty()).unwrap_or(Path::new("."));
    let name = path
        .file_name()
        .ok_or_else(|| Error::io(path, "not a file path"))?
        .to_string_lossy();
    let tmp = dir.join(format!(".{name}.{}.tmp", std::process::id()));
    let result = fs::File::create(&tmp)
        .and_then(|mut f| f.write_all(contents).and_then(|_| f.sync_all()))
        .and_then(|_| fs::rename(&tmp, path));
    if let Err(e) = result {
        let _ = fs::remove_file(&tmp);
        return Err(Error::io(path, e));
    }
    Ok(())
}

/// Read a panel whose header row names the components and whose rows are
/// time-ordered observations.
pub fn load_panel_csv(path: impl AsRef<Path>) -> Result<PanelSeries> {
    let path = path.as_ref();
    let file = fs::File::open(path).map_err(|e| Error::io(path, e))?;
    read_panel(file, path)
}

fn read_panel<R: std::io::Read>(reader: R, path: &Path) -> Result<PanelSeries> {
    let mut rdr = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(reader);
    let labels: Vec<String> = rdr
        .headers()
        .map_err(|e| Error::Parse(format!("{}: header: {e}", path.display())))?
        .iter()
        .map(str::to_string)
        .collect();
    let d = labels.len();
    let mut rows: Vec<Vec<f64>> = Vec::new();
    for (i, record) in rdr.records().enumerate() {
        let row = i + 1;
        let record = record.map_err(|e| Error::Parse(format!("{}: data row {row}: {e}", path.display())))?;
        if record.len() != d {
            return Err(Error::Parse(format!(
                "{}: data row {row} has {} fields, header has {d}",
                path.display(),
                record.len()
            )));
        }
        let values = record
            .iter()
            .enumerate()
            .map(|(h, cell)| {
                cell.parse::<f64>()
                    .ok()
                    .filter(|v| v.is_finite())
                    .ok_or_else(|| {
                        Error::Parse(format!(
                            "{}: data row {row}, column {} ({:?}): cannot read {cell:?} as a finite number",
                            path.display(),
                            h + 1,
                            labels[h]
                        ))
                    })
            })
            .collect::<Result<Vec<f64>>>()?;
        rows.push(values);
    }
    let n = rows.len();
    if n < crate::panel::MIN_SAMPLE_SIZE || d < 2 {
        return Err(Error::invalid(format!(
            "{}: panel is {n} × {d}; need at least {} rows and 2 columns",
            path.display(),
            crate::panel::MIN_SAMPLE_SIZE
        )));
    }
    let mut data = vec![0.0; n * d];
    for (j, row) in rows.iter().enumerate() {
        for (h, &v) in row.iter().enumerate() {
            data[h * n + j] = v;
        }
    }
    PanelSeries::with_labels(n, d, data, labels)
}

pub fn write_panel_csv(panel: &PanelSeries, path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::io(path, e);
    w.write_record(panel.labels()).map_err(to_err)?;
    for j in 0..panel.n() {
        w.write_record((0..panel.d()).map(|h| panel.get(j, h).to_string()))
            .map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e))?;
    write_atomic(path, &bytes)
}

/// Thresholds as one value for every column or one value per column.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DeltaSpec {
    Scalar(f64),
    File(PathBuf),
}

impl DeltaSpec {
    pub fn resolve(&self, d: usize) -> Result<ThresholdVec> {
        match self {
            DeltaSpec::Scalar(v) => ThresholdVec::broadcast(*v, d).map_err(|e| Error::config(e.to_string())),
            DeltaSpec::File(path) => {
                let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
                let values = parse_deltas(&text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                if values.len() != d {
                    return Err(Error::config(format!(
                        "{}: {} thresholds for {d} columns",
                        path.display(),
                        values.len()
                    )));
                }
                ThresholdVec::new(values).map_err(|e| Error::config(e.to_string()))
            }
        }
    }
}

/// Numbers separated by commas, whitespace or newlines; a non-numeric first
/// line is taken as a header and skipped.
fn parse_deltas(text: &str) -> std::result::Result<Vec<f64>, String> {
    let mut lines = text.lines().peekable();
    if let Some(first) = lines.peek() {
        let numeric = first
            .split(|c: char| c == ',' || c.is_whitespace())
            .filter(|t| !t.is_empty())
            .all(|t| t.parse::<f64>().is_ok());
        if !numeric {
            lines.next();
        }
    }
    lines
        .flat_map(|l| l.split(|c: char| c == ',' || c.is_whitespace()))
        .filter(|t| !t.is_empty())
        .map(|t| t.parse::<f64>().map_err(|_| format!("cannot read threshold {t:?}")))
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DetectRequest {
    pub input: PathBuf,
    pub deltas: DeltaSpec,
    pub alpha: f64,
    pub method: Calibration,
    /// Block length `K`; required for the bootstrap.
    pub block_len: Option<usize>,
    pub replicates: usize,
    pub seed: u64,
    pub s_hat: SHatForm,
    pub estimation: EstimationConfig,
    pub output: Option<PathBuf>,
}

impl DetectRequest {
    pub fn new(input: impl Into<PathBuf>, deltas: DeltaSpec) -> Self {
        Self {
            input: input.into(),
            deltas,
            alpha: 0.05,
            method: Calibration::Asymptotic,
            block_len: None,
            replicates: 500,
            seed: 0,
            s_hat: SHatForm::Squared,
            estimation: EstimationConfig::default(),
            output: None,
        }
    }
}

/// Configuration as actually applied, sufficient to repeat the run.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConfigEcho {
    pub input: PathBuf,
    pub alpha: f64,
    pub method: Calibration,
    pub deltas: Vec<f64>,
    pub estimation: EstimationConfig,
    pub bootstrap: Option<BootstrapConfig>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ComponentRow {
    pub label: String,
    /// Absolute break index `n·t̂`.
    pub break_index: usize,
    pub t_hat: f64,
    pub t_stat: f64,
    pub m_hat_sq: f64,
    pub sigma_hat: f64,
    pub delta: f64,
    pub relevant: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BootstrapSummary {
    pub g_star: f64,
    pub replicate_stats: Vec<f64>,
    pub active_components: Vec<String>,
    pub degenerate_components: Vec<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportDocument {
    pub schema_version: u32,
    pub version: String,
    pub config: ConfigEcho,
    pub seed: u64,
    pub elapsed_seconds: f64,
    pub relevant_labels: Vec<String>,
    pub components: Vec<ComponentRow>,
    pub report: TestReport,
    pub bootstrap: Option<BootstrapSummary>,
}

impl ReportDocument {
    pub fn to_json(&self) -> Result<String> {
        serde_json::to_string_pretty(self).map_err(|e| Error::Parse(format!("report serialisation: {e}")))
    }

    pub fn from_json(s: &str) -> Result<Self> {
        serde_json::from_str(s).map_err(|e| Error::Parse(format!("report: {e}")))
    }
}

pub fn run_detect(req: &DetectRequest) -> Result<ReportDocument> {
    let start = Instant::now();
    req.estimation.validate()?;
    let panel = load_panel_csv(&req.input)?;
    let deltas = req.deltas.resolve(panel.d())?;
    let labels = panel.labels().to_vec();
    let names = |idx: &[usize]| idx.iter().map(|&h| labels[h].clone()).collect::<Vec<_>>();

    let (report, bootstrap_cfg, summary) = match req.method {
        Calibration::Asymptotic => (asymptotic_test(&panel, &deltas, req.alpha, &req.estimation)?, None, None),
        Calibration::Bootstrap => {
            let block_len = req
                .block_len
                .ok_or_else(|| Error::config("the bootstrap needs an explicit block length K"))?;
            let cfg = BootstrapConfig {
                block_len,
                replicates: req.replicates,
                seed: req.seed,
                s_hat: req.s_hat,
            };
            let b = bootstrap_test(&panel, &deltas, req.alpha, &req.estimation, &cfg)?;
            let summary = BootstrapSummary {
                g_star: b.g_star,
                replicate_stats: b.replicate_stats,
                active_components: names(&b.active_components),
                degenerate_components: names(&b.degenerate_components),
            };
            (b.test, Some(cfg), Some(summary))
        }
    };

    let components = report
        .per_component
        .iter()
        .enumerate()
        .map(|(h, s)| ComponentRow {
            label: labels[h].clone(),
            break_index: s.k_hat,
            t_hat: s.t_hat,
            t_stat: s.t_stat,
            m_hat_sq: s.m_hat_sq,
            sigma_hat: s.sigma_hat,
            delta: s.delta,
            relevant: report.relevant_set.contains(&h),
        })
        .collect();
    let doc = ReportDocument {
        schema_version: SCHEMA_VERSION,
        version: env!("CARGO_PKG_VERSION").to_string(),
        config: ConfigEcho {
            input: req.input.clone(),
            alpha: req.alpha,
            method: req.method,
            deltas: deltas.as_slice().to_vec(),
            estimation: req.estimation,
            bootstrap: bootstrap_cfg,
        },
        seed: req.seed,
        elapsed_seconds: start.elapsed().as_secs_f64(),
        relevant_labels: names(&report.relevant_set),
        components,
        report,
        bootstrap: summary,
    };
    if let Some(out) = &req.output {
        write_atomic(out, doc.to_json()?.as_bytes())?;
    }
    Ok(doc)
}

/// Plot data of a power curve: `mu, rejection_rate, mc_stderr, runs`.
pub fn emit_plot_data(curve: &[ExperimentResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    if curve.is_empty() {
        return Err(Error::invalid("empty power curve"));
    }
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::io(path, e);
    w.write_record(["mu", "rejection_rate", "mc_stderr", "runs"]).map_err(to_err)?;
    for r in curve {
        w.write_record([
            r.scenario.mu.to_string(),
            r.rejection_rate.to_string(),
            r.mc_stderr.to_string(),
            r.runs.to_string(),
        ])
        .map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e))?;
    write_atomic(path, &bytes)
}

/// One row per experiment, flattening scenario and method.
pub fn write_results_csv(results: &[ExperimentResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let mut w = csv::Writer::from_writer(Vec::new());
    let to_err = |e: csv::Error| Error::io(path, e);
    w.write_record([
        "model", "n", "d", "mu", "method", "block_len", "replicates", "alpha", "runs", "rejections",
        "rejection_rate", "mc_stderr", "innovation_variance", "seed", "wall_time",
    ])
    .map_err(to_err)?;
    for r in results {
        let (method, k, b) = match r.method {
            crate::harness::Method::Asymptotic => ("asymptotic", String::new(), String::new()),
            crate::harness::Method::Bootstrap { block_len, replicates } => {
                ("bootstrap", block_len.to_string(), replicates.to_string())
            }
        };
        w.write_record([
            r.scenario.model.to_string(),
            r.scenario.n.to_string(),
            r.scenario.d.to_string(),
            r.scenario.mu.to_string(),
            method.to_string(),
            k,
            b,
            r.alpha.to_string(),
            r.runs.to_string(),
            r.rejections.to_string(),
            r.rejection_rate.to_string(),
            r.mc_stderr.to_string(),
            r.innovation_variance.to_string(),
            r.scenario.seed.to_string(),
            r.wall_time.to_string(),
        ])
        .map_err(to_err)?;
    }
    let bytes = w.into_inner().map_err(|e| Error::io(path, e))?;
    write_atomic(path, &bytes)
}

pub fn write_results_json(results: &[ExperimentResult], path: impl AsRef<Path>) -> Result<()> {
    let path = path.as_ref();
    let doc = serde_json::json!({ "schema_version": SCHEMA_VERSION, "results": results });
    let text = serde_json::to_string_pretty(&doc).map_err(|e| Error::io(path, e))?;
    write_atomic(path, text.as_bytes())
}
