use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use lipcert::estimator::{
    decade_radii, LipschitzCertificate, RadialProfile, DEFAULT_ALPHA_GRID, DEFAULT_DELTA,
    DEFAULT_GROWTH_THRESHOLD, DEFAULT_PLATEAU_TOL,
};
use lipcert::geometry::{Ball, CoverKind, Vector};
use lipcert::zoo::{parse_function_spec, FunctionSpec};
use serde_json::Value;

use crate::commands::*;
use crate::report::RunReport;
use crate::{CliError, CliResult};

#[derive(Debug, Parser)]
#[command(name = "lipcert", version, about = "Certified Lipschitz constants for convex black-box functions")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,

    /// Write the report here instead of stdout
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for every random draw of the run
    #[arg(long, global = true)]
    pub seed: Option<u64>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    /// Profiles (modulus, classify) and certificate sequences (certseq) only
    Csv,
}

#[derive(Debug, Args)]
pub struct BallArgs {
    /// Function spec (JSON)
    #[arg(long = "fn")]
    pub function: PathBuf,
    /// Comma-separated center x₀
    #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
    pub center: NumList,
    #[arg(long)]
    pub radius: f64,
    /// cross, simplex or shell
    #[arg(long, default_value = "cross", value_parser = parse_cover)]
    pub cover: CoverKind,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Certificate on one ball
    Ball {
        #[command(flatten)]
        common: BallArgs,
        #[arg(long, default_value_t = 2.0)]
        alpha: f64,
        /// Defaults to (1-delta)·alpha/(alpha+1)
        #[arg(long)]
        lambda: Option<f64>,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
    /// Grid search over alpha with lambda tied to alpha
    Tune {
        #[command(flatten)]
        common: BallArgs,
        #[arg(long, value_parser = parse_list)]
        alphas: Option<NumList>,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
    },
    /// Radial growth profile and global-modulus verdict
    Modulus {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, default_value_t = 10.0)]
        rmin: f64,
        #[arg(long, default_value_t = 1e6)]
        rmax: f64,
        /// Random directions in addition to ±eᵢ and the function's hints
        #[arg(long, default_value_t = 512)]
        dirs: usize,
        #[arg(long, default_value_t = DEFAULT_GROWTH_THRESHOLD)]
        growth_threshold: f64,
        #[arg(long, default_value_t = DEFAULT_PLATEAU_TOL)]
        plateau_tol: f64,
    },
    /// Classify a stored profile
    Classify {
        /// A modulus report or a bare profile
        #[arg(long)]
        profile: PathBuf,
        #[arg(long, default_value_t = DEFAULT_GROWTH_THRESHOLD)]
        growth_threshold: f64,
        #[arg(long, default_value_t = DEFAULT_PLATEAU_TOL)]
        plateau_tol: f64,
    },
    /// Falsification test of a stored certificate (exit 3 on violation)
    Verify {
        #[arg(long = "fn")]
        function: PathBuf,
        /// A ball or tune report, or a bare certificate
        #[arg(long)]
        cert: PathBuf,
        #[arg(long, default_value_t = 10_000)]
        pairs: usize,
    },
    /// Certificates L(r) over growing radii with shell covers
    Certseq {
        #[arg(long = "fn")]
        function: PathBuf,
        #[arg(long, allow_hyphen_values = true, value_parser = parse_list)]
        center: NumList,
        #[arg(long, default_value_t = 10.0)]
        alpha: f64,
        #[arg(long, default_value_t = DEFAULT_DELTA)]
        delta: f64,
        #[arg(long, value_parser = parse_list, default_value = "10,100,1000,10000")]
        radii: NumList,
        /// Reference modulus; defaults to the analytic value when known
        #[arg(long)]
        ell: Option<f64>,
    },
    /// List the built-in function kinds with their moduli
    Zoo,
    /// Re-run a report from its recorded inputs and compare outputs
    Replay {
        #[arg(long)]
        report: PathBuf,
    },
}

/// Comma-separated numbers such as `0,-1.5,2e3`.
#[derive(Debug, Clone, PartialEq)]
pub struct NumList(pub Vec<f64>);

fn parse_list(s: &str) -> Result<NumList, String> {
    s.split(',')
        .map(|t| {
            let t = t.trim();
            t.parse::<f64>().map_err(|_| format!("`{t}` is not a number"))
        })
        .collect::<Result<_, _>>()
        .map(NumList)
}

fn parse_cover(s: &str) -> Result<CoverKind, String> {
    s.parse::<CoverKind>().map_err(|e| e.to_string())
}

fn read(path: &Path) -> CliResult<String> {
    fs::read_to_string(path).map_err(|e| CliError::Runtime(format!("cannot read {}: {e}", path.display())))
}

pub fn load_function(path: &Path) -> CliResult<FunctionSpec> {
    parse_function_spec(&read(path)?).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

pub fn load_report(path: &Path) -> CliResult<RunReport> {
    RunReport::from_json(&read(path)?).map_err(|e| CliError::Validation(format!("{}: {e}", path.display())))
}

/// Reads `path` as a report whose outputs hold `field` (first match wins), or as a bare `T`.
fn load_embedded<T: serde::de::DeserializeOwned>(path: &Path, fields: &[&str]) -> CliResult<T> {
    let text = read(path)?;
    let invalid = |e: String| CliError::Validation(format!("{}: {e}", path.display()));
    let value: Value = serde_json::from_str(&text).map_err(|e| invalid(e.to_string()))?;
    let inner = if value.get("schema_version").is_some() {
        let report = RunReport::from_json(&text).map_err(|e| invalid(e.to_string()))?;
        fields
            .iter()
            .find_map(|f| report.outputs.get(*f).cloned())
            .ok_or_else(|| invalid(format!("`{}` report has no {}", report.command, fields.join(" or "))))?
    } else {
        value
    };
    serde_json::from_value(inner).map_err(|e| invalid(e.to_string()))
}

fn ball_of(common: &BallArgs) -> CliResult<Ball> {
    let center = Vector::new(common.center.0.clone())?;
    Ok(Ball::new(center, common.radius)?)
}

/// What a parsed command line asks for.
pub enum Request {
    Run(CommandInputs),
    Replay(RunReport),
}

pub fn resolve(cli: &Cli) -> CliResult<Request> {
    let seed = cli.seed.unwrap_or(0);
    let inputs = match &cli.command {
        Command::Ball { common, alpha, lambda, delta } => CommandInputs::Ball(BallInputs {
            function: load_function(&common.function)?,
            ball: ball_of(common)?,
            alpha: *alpha,
            lambda: lambda.map_or(LambdaChoice::FromDelta(*delta), LambdaChoice::Fixed),
            cover: common.cover,
        }),
        Command::Tune { common, alphas, delta } => CommandInputs::Tune(TuneInputs {
            function: load_function(&common.function)?,
            ball: ball_of(common)?,
            alphas: alphas.as_ref().map_or_else(|| DEFAULT_ALPHA_GRID.to_vec(), |a| a.0.clone()),
            delta: *delta,
            cover: common.cover,
        }),
        Command::Modulus { function, rmin, rmax, dirs, growth_threshold, plateau_tol } => {
            CommandInputs::Modulus(ModulusInputs {
                function: load_function(function)?,
                radii: decade_radii(*rmin, *rmax)?,
                directions: *dirs,
                seed,
                growth_threshold: *growth_threshold,
                plateau_tol: *plateau_tol,
            })
        }
        Command::Classify { profile, growth_threshold, plateau_tol } => {
            CommandInputs::Classify(ClassifyInputs {
                profile: load_embedded::<RadialProfile>(profile, &["profile"])?,
                growth_threshold: *growth_threshold,
                plateau_tol: *plateau_tol,
            })
        }
        Command::Verify { function, cert, pairs } => CommandInputs::Verify(VerifyInputs {
            function: load_function(function)?,
            certificate: load_embedded::<LipschitzCertificate>(cert, &["certificate", "best"])?,
            pairs: *pairs,
            seed,
        }),
        Command::Certseq { function, center, alpha, delta, radii, ell } => {
            let function = load_function(function)?;
            let reference_modulus = ell.or_else(|| function.analytic_global_modulus().and_then(|m| m.finite()));
            CommandInputs::Certseq(CertseqInputs {
                function,
                center: Vector::new(center.0.clone())?,
                alpha: *alpha,
                delta: *delta,
                radii: radii.0.clone(),
                reference_modulus,
            })
        }
        Command::Zoo => CommandInputs::Zoo {},
        Command::Replay { report } => return Ok(Request::Replay(load_report(report)?)),
    };
    if cli.format == Format::Csv
        && !matches!(inputs, CommandInputs::Modulus(_) | CommandInputs::Classify(_) | CommandInputs::Certseq(_))
    {
        return Err(CliError::Validation(format!(
            "--format csv is available for modulus, classify and certseq, not {}",
            inputs.name()
        )));
    }
    Ok(Request::Run(inputs))
}
