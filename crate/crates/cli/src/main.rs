use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, bail, Context};
use clap::{Args, Parser, Subcommand};
use gm_mmse::config::RunConfig;
use gm_mmse::oracle::{compare_with_quadrature, observation_grid, QuadratureSpec};
use gm_mmse::report::{write_csv, write_svg};
use gm_mmse::{run_sweep, EstimatorKind, LinearModel, PrecomputedEstimator, Vector};

/// Tolerance on the analytic vs quadrature posterior mean.
const ORACLE_TOLERANCE: f64 = 1e-6;
const ORACLE_OBSERVATIONS: usize = 101;
const ORACLE_SPAN_SIGMAS: f64 = 6.0;

#[derive(Parser)]
#[command(name = "gm-mmse", version, about = "MMSE estimation for linear models with Gaussian mixture priors")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a configuration and print model dimensions and moments.
    Validate(ConfigArg),
    /// Estimate x from a single observation.
    Estimate(EstimateArgs),
    /// Run the Monte Carlo SNR sweep and write CSV (and optionally SVG).
    Sweep(SweepArgs),
    /// Compare the analytic posterior mean of a 1-D model with quadrature.
    OracleCheck(OracleArgs),
}

#[derive(Args)]
struct ConfigArg {
    #[arg(long)]
    config: PathBuf,
}

#[derive(Args)]
struct EstimateArgs {
    #[arg(long)]
    config: PathBuf,
    /// Observation as comma or whitespace separated numbers.
    #[arg(long, allow_hyphen_values = true, conflicts_with = "y_file", required_unless_present = "y_file")]
    y: Option<String>,
    /// File holding the observation in the same format.
    #[arg(long)]
    y_file: Option<PathBuf>,
}

#[derive(Args)]
struct SweepArgs {
    #[arg(long)]
    config: PathBuf,
    /// CSV destination; defaults to `output.csv` from the config.
    #[arg(long)]
    out: Option<PathBuf>,
    /// SVG destination; defaults to `output.svg` from the config.
    #[arg(long)]
    svg: Option<PathBuf>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Comma separated list, e.g. `mmse,lmmse`.
    #[arg(long, value_delimiter = ',')]
    estimators: Option<Vec<String>>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    config: PathBuf,
    /// Skip the quadrature MSE and bounds comparison.
    #[arg(long)]
    skip_mse: bool,
    /// Multiplies the gain of the first component pair (negative control).
    #[arg(long, hide = true)]
    corrupt_gain: Option<f64>,
}

enum Failure {
    /// Bad input or a failed check.
    Validation(anyhow::Error),
    /// Anything that went wrong while doing the work.
    Runtime(anyhow::Error),
}

impl Failure {
    fn exit_code(&self) -> ExitCode {
        match self {
            Failure::Validation(_) => ExitCode::from(1),
            Failure::Runtime(_) => ExitCode::from(2),
        }
    }
}

fn invalid<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Validation(e.into())
}

fn runtime<E: Into<anyhow::Error>>(e: E) -> Failure {
    Failure::Runtime(e.into())
}

fn load(path: &Path) -> Result<(RunConfig, LinearModel), Failure> {
    let config = RunConfig::load(path)
        .with_context(|| format!("reading {}", path.display()))
        .map_err(invalid)?;
    let model = config
        .model()
        .with_context(|| format!("invalid model in {}", path.display()))
        .map_err(invalid)?;
    Ok((config, model))
}

fn fmt_vector(v: &Vector) -> String {
    let parts: Vec<String> = v.iter().map(|x| format!("{x:.12}")).collect();
    format!("[{}]", parts.join(", "))
}

fn validate(args: ConfigArg) -> Result<(), Failure> {
    let (config, model) = load(&args.config)?;
    if config.sweep.is_some() {
        config.sweep_config().context("invalid [sweep] section").map_err(invalid)?;
    }
    let x = model.x_prior();
    let n = model.noise();
    let snr = model.snr().map_err(invalid)?;
    println!("valid: {}", args.config.display());
    println!("d = {}", model.x_dim());
    println!("m = {}", model.y_dim());
    println!("|K| = {}", x.len());
    println!("|L| = {}", n.len());
    println!("E[x] = {}", fmt_vector(&x.mean()));
    println!("Tr(C_xx) = {:.12}", x.covariance().trace());
    println!("E[n] = {}", fmt_vector(&n.mean()));
    println!("Tr(C_nn) = {:.12}", n.covariance().trace());
    println!("E|x|^2 = {:.12}", x.second_moment());
    println!("E|n|^2 = {:.12}", n.second_moment());
    println!("prior SNR = {:.6} dB", gm_mmse::to_db(snr));
    Ok(())
}

fn parse_vector(text: &str) -> anyhow::Result<Vector> {
    let values = text
        .split(|c: char| c == ',' || c.is_whitespace() || c == '[' || c == ']')
        .filter(|s| !s.is_empty())
        .map(|s| s.parse::<f64>().with_context(|| format!("bad number {s:?}")))
        .collect::<anyhow::Result<Vec<f64>>>()?;
    if values.is_empty() {
        bail!("empty observation");
    }
    Ok(Vector::from_vec(values))
}

fn estimate(args: EstimateArgs) -> Result<(), Failure> {
    let (_, model) = load(&args.config)?;
    let text = match (&args.y, &args.y_file) {
        (Some(inline), _) => inline.clone(),
        (None, Some(path)) => std::fs::read_to_string(path)
            .with_context(|| format!("reading {}", path.display()))
            .map_err(invalid)?,
        (None, None) => return Err(invalid(anyhow!("no observation given"))),
    };
    let y = parse_vector(&text).context("observation").map_err(invalid)?;
    if y.len() != model.y_dim() {
        return Err(invalid(anyhow!(
            "observation has {} entries but the model has m = {}",
            y.len(),
            model.y_dim()
        )));
    }
    let pre = PrecomputedEstimator::new(&model).map_err(runtime)?;
    let posterior = pre.posterior(&y).map_err(runtime)?;
    let alpha = posterior.responsibilities();
    println!("x_hat = {}", fmt_vector(&posterior.mean()));
    println!("k\tl\talpha");
    for (pair, a) in pre.pairs().iter().zip(alpha) {
        println!("{}\t{}\t{:.12e}", pair.k, pair.l, a);
    }
    println!("sum(alpha) = {:.12}", alpha.iter().sum::<f64>());
    println!("Tr(C_x|y) = {:.12}", posterior.covariance().trace());
    Ok(())
}

fn resolve_output(flag: Option<PathBuf>, configured: Option<&String>) -> Option<PathBuf> {
    flag.or_else(|| configured.map(PathBuf::from))
}

fn sweep(args: SweepArgs) -> Result<(), Failure> {
    let (config, _) = load(&args.config)?;
    let mut sweep = config.sweep_config().map_err(invalid)?;
    if let Some(trials) = args.trials {
        sweep.trials = trials;
    }
    if let Some(seed) = args.seed {
        sweep.seed = seed;
    }
    if let Some(names) = &args.estimators {
        sweep.estimators = names
            .iter()
            .map(|n| n.trim().parse::<EstimatorKind>())
            .collect::<gm_mmse::Result<_>>()
            .map_err(invalid)?;
    }
    sweep.validate().map_err(invalid)?;
    let output = config.output.clone().unwrap_or_default();
    let csv_path = resolve_output(args.out, output.csv.as_ref())
        .ok_or_else(|| invalid(anyhow!("no CSV destination: pass --out or set output.csv")))?;
    let svg_path = resolve_output(args.svg, output.svg.as_ref());

    let points = run_sweep(&sweep).map_err(runtime)?;
    std::fs::write(&csv_path, write_csv(&points))
        .with_context(|| format!("writing {}", csv_path.display()))
        .map_err(runtime)?;
    if let Some(path) = &svg_path {
        std::fs::write(path, write_svg(&points))
            .with_context(|| format!("writing {}", path.display()))
            .map_err(runtime)?;
    }
    let failed = points.iter().filter(|p| p.failure.is_some()).count();
    println!(
        "{} points, {} trials each, {} failed -> {}",
        points.len(),
        sweep.trials,
        failed,
        csv_path.display()
    );
    if let Some(path) = svg_path {
        println!("chart -> {}", path.display());
    }
    Ok(())
}

fn oracle_check(args: OracleArgs) -> Result<(), Failure> {
    let (_, model) = load(&args.config)?;
    if model.x_dim() != 1 || model.y_dim() != 1 {
        return Err(invalid(anyhow!(
            "oracle-check needs a 1-D model, got d = {}, m = {}",
            model.x_dim(),
            model.y_dim()
        )));
    }
    let mut pre = PrecomputedEstimator::new(&model).map_err(runtime)?;
    if let Some(factor) = args.corrupt_gain {
        pre.corrupt_gain(0, factor);
    }
    let ys = observation_grid(&model, ORACLE_SPAN_SIGMAS, ORACLE_OBSERVATIONS).map_err(runtime)?;
    let report = compare_with_quadrature(&model, &pre, &ys, &QuadratureSpec::default(), !args.skip_mse)
        .map_err(runtime)?;
    println!("observations = {}", report.observations);
    println!("max |deviation| = {:.3e} at y = {}", report.max_mean_deviation, report.worst_y);
    println!("tolerance = {ORACLE_TOLERANCE:.0e}");
    println!("lower bound = {:.12}", report.lower_bound);
    println!("upper bound = {:.12}", report.upper_bound);
    if let Some(mse) = report.quad_mse {
        println!("quadrature MSE = {mse:.12}");
    }
    if report.passed(ORACLE_TOLERANCE) {
        println!("PASS");
        Ok(())
    } else {
        println!("FAIL");
        Err(invalid(anyhow!(
            "oracle check failed: max deviation {:.3e}",
            report.max_mean_deviation
        )))
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Validate(a) => validate(a),
        Command::Estimate(a) => estimate(a),
        Command::Sweep(a) => sweep(a),
        Command::OracleCheck(a) => oracle_check(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(failure) => {
            let (Failure::Validation(e) | Failure::Runtime(e)) = &failure;
            eprintln!("error: {e:#}");
            failure.exit_code()
        }
    }
}
