use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use relchange::harness::{power_curve_with, rejection_rate_with, HarnessOptions, Method};
use relchange::io::{emit_plot_data, run_detect, write_results_csv, write_results_json, DeltaSpec, DetectRequest};
use relchange::{Bandwidth, Calibration, EstimationConfig, Error, InnovationModel, SHatForm, SimScenario, ThresholdVec, VarianceCombine};

/// Detect relevant mean changes in high-dimensional panels.
#[derive(Parser)]
#[command(name = "relchange", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Test a CSV panel for a relevant change and write a JSON report.
    Detect(DetectArgs),
    /// Monte-Carlo rejection rate of one scenario.
    Simulate(SimulateArgs),
    /// Rejection rates along a grid of mean shifts.
    Power(PowerArgs),
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodArg {
    Asymptotic,
    Bootstrap,
}

#[derive(Clone, Copy, ValueEnum)]
enum CombineArg {
    Max,
    Average,
}

#[derive(Clone, Copy, ValueEnum)]
enum SHatArg {
    Squared,
    Unsquared,
}

#[derive(Args)]
struct Estimation {
    /// Boundary trimming of the change-point search window.
    #[arg(long, default_value_t = 0.05)]
    t_min: f64,
    /// Separation constant of the variance split samples.
    #[arg(long = "separation", default_value_t = 0.9)]
    separation: f64,
    /// Fixed Bartlett bandwidth; the cube root of the split length if omitted.
    #[arg(long)]
    bandwidth: Option<usize>,
    /// Lower clamp on the long-run variance.
    #[arg(long, default_value_t = 1e-4)]
    s_minus_sq: f64,
    /// Upper clamp on the long-run variance.
    #[arg(long, default_value_t = 1e4)]
    s_plus_sq: f64,
    #[arg(long, value_enum, default_value_t = CombineArg::Max)]
    combine: CombineArg,
    /// Disable the finite-sample bias correction.
    #[arg(long)]
    no_bias_correction: bool,
}

impl Estimation {
    fn config(&self) -> EstimationConfig {
        EstimationConfig {
            t_min: self.t_min,
            separation: self.separation,
            bandwidth: self.bandwidth.map_or(Bandwidth::CubeRoot, Bandwidth::Fixed),
            s_minus_sq: self.s_minus_sq,
            s_plus_sq: self.s_plus_sq,
            combine: match self.combine {
                CombineArg::Max => VarianceCombine::Max,
                CombineArg::Average => VarianceCombine::Average,
            },
            bias_correction: !self.no_bias_correction,
        }
    }
}

#[derive(Args)]
struct Calib {
    #[arg(long, value_enum, default_value_t = MethodArg::Asymptotic)]
    method: MethodArg,
    /// Bootstrap block length K (must divide n).
    #[arg(long = "block-len", short = 'K')]
    block_len: Option<usize>,
    /// Bootstrap replicates.
    #[arg(long, default_value_t = 500)]
    replicates: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, value_enum, default_value_t = SHatArg::Squared)]
    s_hat: SHatArg,
    #[arg(long, default_value_t = 0.05)]
    alpha: f64,
}

impl Calib {
    fn s_hat(&self) -> SHatForm {
        match self.s_hat {
            SHatArg::Squared => SHatForm::Squared,
            SHatArg::Unsquared => SHatForm::Unsquared,
        }
    }

    fn method(&self) -> Result<Method, Error> {
        match self.method {
            MethodArg::Asymptotic => Ok(Method::Asymptotic),
            MethodArg::Bootstrap => Ok(Method::Bootstrap {
                block_len: self
                    .block_len
                    .ok_or_else(|| Error::Config("the bootstrap needs --block-len".into()))?,
                replicates: self.replicates,
            }),
        }
    }
}

#[derive(Args)]
struct DetectArgs {
    /// CSV panel: header row of column names, one row per time point.
    input: PathBuf,
    /// Threshold applied to every column.
    #[arg(long, conflicts_with = "deltas_file", required_unless_present = "deltas_file")]
    delta: Option<f64>,
    /// File with one threshold per column.
    #[arg(long)]
    deltas_file: Option<PathBuf>,
    /// JSON report path; printed to stdout if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    calib: Calib,
    #[command(flatten)]
    estimation: Estimation,
}

#[derive(Args)]
struct ScenarioArgs {
    /// Innovation model: I, II, III or IV.
    #[arg(long, default_value = "I")]
    model: InnovationModel,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    d: usize,
    /// Threshold applied to every column.
    #[arg(long, default_value_t = 1.0)]
    delta: f64,
    /// Relative break location in every column.
    #[arg(long, default_value_t = 0.5)]
    t: f64,
    /// Monte-Carlo runs.
    #[arg(long, default_value_t = 1000)]
    runs: usize,
    #[command(flatten)]
    calib: Calib,
    #[command(flatten)]
    estimation: Estimation,
}

impl ScenarioArgs {
    fn scenario(&self, mu: f64) -> Result<SimScenario, Error> {
        Ok(SimScenario {
            model: self.model,
            n: self.n,
            d: self.d,
            mu,
            t: vec![self.t; self.d],
            deltas: ThresholdVec::broadcast(self.delta, self.d)?,
            seed: self.calib.seed,
        })
    }

    fn options(&self) -> HarnessOptions {
        HarnessOptions {
            alpha: self.calib.alpha,
            estimation: self.estimation.config(),
            s_hat: self.calib.s_hat(),
        }
    }
}

#[derive(Args)]
struct SimulateArgs {
    /// Common post-break mean shift.
    #[arg(long)]
    mu: f64,
    /// Results file; CSV if it ends in `.csv`, JSON otherwise. Stdout if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

#[derive(Args)]
struct PowerArgs {
    /// Comma-separated mean shifts.
    #[arg(long, value_delimiter = ',', required = true)]
    mu_grid: Vec<f64>,
    /// CSV with mu, rejection_rate, mc_stderr, runs.
    #[arg(long)]
    plot_data: Option<PathBuf>,
    /// Full results; CSV if it ends in `.csv`, JSON otherwise. Stdout if omitted.
    #[arg(long, short)]
    output: Option<PathBuf>,
    #[command(flatten)]
    scenario: ScenarioArgs,
}

fn write_results(results: &[relchange::ExperimentResult], output: Option<&PathBuf>) -> Result<(), Error> {
    match output {
        Some(p) if p.extension().is_some_and(|e| e == "csv") => write_results_csv(results, p),
        Some(p) => write_results_json(results, p),
        None => {
            let text = serde_json::to_string_pretty(results).map_err(|e| Error::Parse(e.to_string()))?;
            println!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<(), Error> {
    match cli.command {
        Command::Detect(a) => {
            let deltas = match (a.delta, a.deltas_file) {
                (Some(v), _) => DeltaSpec::Scalar(v),
                (None, Some(p)) => DeltaSpec::File(p),
                (None, None) => return Err(Error::Config("either --delta or --deltas-file is required".into())),
            };
            let req = DetectRequest {
                input: a.input,
                deltas,
                alpha: a.calib.alpha,
                method: match a.calib.method {
                    MethodArg::Asymptotic => Calibration::Asymptotic,
                    MethodArg::Bootstrap => Calibration::Bootstrap,
                },
                block_len: a.calib.block_len,
                replicates: a.calib.replicates,
                seed: a.calib.seed,
                s_hat: a.calib.s_hat(),
                estimation: a.estimation.config(),
                output: a.output.clone(),
            };
            let doc = run_detect(&req)?;
            if a.output.is_none() {
                println!("{}", doc.to_json()?);
            }
            for w in &doc.report.warnings {
                eprintln!("warning: {w}");
            }
            Ok(())
        }
        Command::Simulate(a) => {
            let s = &a.scenario;
            let result = rejection_rate_with(&s.scenario(a.mu)?, s.calib.method()?, s.runs, s.calib.seed, &s.options())?;
            write_results(&[result], a.output.as_ref())
        }
        Command::Power(a) => {
            let s = &a.scenario;
            let curve = power_curve_with(&s.scenario(a.mu_grid[0])?, &a.mu_grid, s.calib.method()?, s.runs, s.calib.seed, &s.options())?;
            if let Some(p) = &a.plot_data {
                emit_plot_data(&curve, p)?;
            }
            write_results(&curve, a.output.as_ref())
        }
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            let body = serde_json::json!({ "error": e.kind(), "message": e.to_string() });
            eprintln!("{body}");
            ExitCode::FAILURE
        }
    }
}
