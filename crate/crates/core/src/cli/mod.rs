//! Command-line front end. Every experiment is a subcommand that writes
//! plot-ready files into `--output` plus a flat `report.json`, and exits with
//! 0 (all checks pass), 1 (a check failed), 2 (usage error) or 3 (runtime error).

mod commands;
pub mod identity;

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{Map, Value};

use crate::distributions::GridCurve;
use crate::error::Error;
use crate::stats::{write_comparison_csv, write_comparison_json};

pub const EXIT_PASS: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_RUNTIME: i32 = 3;

/// Environment variable overriding the default seed.
pub const SEED_ENV: &str = "GUMBEL_EXIT_SEED";

#[derive(Debug, Parser)]
#[command(name = "gumbel-exit", version, about = "Gumbel limits for exit times, maxima and residual life times")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct GlobalArgs {
    /// Seed for every random stream.
    #[arg(long, global = true, env = SEED_ENV, default_value_t = 42)]
    pub seed: u64,
    /// Worker threads; outputs are identical for any value.
    #[arg(long, global = true)]
    pub workers: Option<usize>,
    /// Directory receiving curves, samples and report.json.
    #[arg(long, global = true, default_value = "gumbel-exit-out")]
    pub output: PathBuf,
    /// Format of curve files and of the stdout summary.
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Conditioned exit times vs the small-noise limit law.
    ExitExperiment(ExitArgs),
    /// Shifted conditional density p_r(x + ln r) vs the Gumbel density.
    DensityConvergence(DensityArgs),
    /// Gaussian maxima: normalizers, tail criterion, Fⁿ, sampled maxima.
    Evt(EvtArgs),
    /// Residual life scaling and its log transform.
    Residual(ResidualArgs),
    /// Deterministic identities and invariants, as a pass/fail table.
    IdentitySuite(IdentityArgs),
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::ExitExperiment(_) => "exit-experiment",
            Command::DensityConvergence(_) => "density-convergence",
            Command::Evt(_) => "evt",
            Command::Residual(_) => "residual",
            Command::IdentitySuite(_) => "identity-suite",
        }
    }
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ExitArgs {
    #[arg(long, default_value_t = 1.0)]
    pub beta: f64,
    #[arg(long, default_value_t = 0.01)]
    pub epsilon: f64,
    #[arg(long, default_value_t = 1.0)]
    pub a: f64,
    /// Accepted (right-exit) samples to collect.
    #[arg(long, default_value_t = 10_000)]
    pub n_samples: usize,
    #[arg(long, default_value_t = 1e-3)]
    pub step: f64,
    #[arg(long, default_value_t = 0.03)]
    pub ks_threshold: f64,
    #[arg(long, default_value_t = 1_000_000_000)]
    pub max_attempts: u64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct DensityArgs {
    #[arg(long, value_delimiter = ',', default_value = "5,10,20,40")]
    pub r: Vec<f64>,
    #[arg(long, default_value_t = -1.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 5.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct EvtArgs {
    /// Sample sizes for the deterministic curves.
    #[arg(long, value_delimiter = ',', default_value = "1000,1000000,1000000000")]
    pub n: Vec<u64>,
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 4.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Block size for the Monte Carlo maxima.
    #[arg(long, default_value_t = 10_000)]
    pub mc_n: u64,
    /// Number of simulated maxima; 0 skips the Monte Carlo part.
    #[arg(long, default_value_t = 100_000)]
    pub replicas: usize,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct ResidualArgs {
    #[arg(long, value_delimiter = ',', default_value = "10,30")]
    pub r: Vec<f64>,
    /// Grid for the scaled residual tail.
    #[arg(long, default_value_t = 0.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 3.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 0.01)]
    pub grid_step: f64,
    /// Grid for the log-transformed CDF.
    #[arg(long, default_value_t = -2.0, allow_negative_numbers = true)]
    pub log_grid_min: f64,
    #[arg(long, default_value_t = 6.0, allow_negative_numbers = true)]
    pub log_grid_max: f64,
}

#[derive(Debug, Clone, Args, Serialize)]
pub struct IdentityArgs {
    #[arg(long, default_value_t = -5.0, allow_negative_numbers = true)]
    pub grid_min: f64,
    #[arg(long, default_value_t = 10.0, allow_negative_numbers = true)]
    pub grid_max: f64,
    #[arg(long, default_value_t = 1e-3)]
    pub grid_step: f64,
    /// Adds this offset to the Gumbel identity residual (test hook).
    #[arg(long, hide = true, default_value_t = 0.0, allow_negative_numbers = true)]
    pub perturb: f64,
}

/// Failure of a subcommand, mapped onto an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Runtime(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidParameter { .. } => CliError::Usage(e.to_string()),
            other => CliError::Runtime(other),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Runtime(e.into())
    }
}

pub(crate) type CliResult<T> = std::result::Result<T, CliError>;

/// Flat JSON report: the resolved configuration followed by results.
pub(crate) struct Report {
    fields: Map<String, Value>,
    summary: Vec<String>,
}

impl Report {
    fn new(subcommand: &str, global: &GlobalArgs, params: &impl Serialize) -> Self {
        let mut fields = Map::new();
        fields.insert("subcommand".into(), subcommand.into());
        for source in [serde_json::to_value(global), serde_json::to_value(params)] {
            if let Ok(Value::Object(map)) = source {
                fields.extend(map);
            }
        }
        Report {
            fields,
            summary: Vec::new(),
        }
    }

    /// Line for the human-readable stdout summary.
    pub(crate) fn line(&mut self, text: impl Into<String>) {
        self.summary.push(text.into());
    }

    pub(crate) fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).unwrap_or(Value::Null);
        self.fields.insert(key.to_string(), v);
    }

    fn pass(&self) -> bool {
        self.fields.get("pass").and_then(Value::as_bool).unwrap_or(false)
    }

    fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.fields).expect("report is valid JSON")
    }
}

pub(crate) struct Context<'a> {
    pub global: &'a GlobalArgs,
}

impl Context<'_> {
    pub(crate) fn output_file(&self, name: &str) -> PathBuf {
        self.global.output.join(name)
    }

    /// Writes an `x,exact,limit,abs_error` table in the configured format.
    pub(crate) fn write_curve(&self, stem: &str, exact: &GridCurve, limit: &GridCurve) -> CliResult<()> {
        let ext = match self.global.format {
            Format::Csv => "csv",
            Format::Json => "json",
        };
        let file = fs::File::create(self.output_file(&format!("{stem}.{ext}")))?;
        let out = std::io::BufWriter::new(file);
        match self.global.format {
            Format::Csv => write_comparison_csv(out, exact, limit)?,
            Format::Json => write_comparison_json(out, exact, limit)?,
        }
        Ok(())
    }
}

pub(crate) fn check_grid(min: f64, max: f64, step: f64) -> CliResult<Vec<f64>> {
    if !min.is_finite() || !max.is_finite() || !step.is_finite() {
        return Err(CliError::Usage("grid bounds and step must be finite".into()));
    }
    if !(step > 0.0) || !(max > min) {
        return Err(CliError::Usage(format!(
            "need grid_min < grid_max and grid_step > 0 (got {min}, {max}, {step})"
        )));
    }
    Ok(crate::numeric::linspace_step(min, max, step))
}

fn error_json(kind: &str, message: &str) -> String {
    serde_json::json!({ "error": kind, "message": message }).to_string()
}

fn ensure_dir(path: &Path) -> CliResult<()> {
    fs::create_dir_all(path)?;
    Ok(())
}

/// Parses `args`, runs the subcommand and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let mut cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_PASS };
            let _ = e.print();
            return code;
        }
    };
    let workers = cli
        .global
        .workers
        .unwrap_or_else(|| std::thread::available_parallelism().map_or(1, |n| n.get()));
    if workers == 0 {
        println!("{}", error_json("usage", "--workers must be at least 1"));
        return EXIT_USAGE;
    }
    let pool = match rayon::ThreadPoolBuilder::new().num_threads(workers).build() {
        Ok(pool) => pool,
        Err(e) => {
            println!("{}", error_json("runtime", &e.to_string()));
            return EXIT_RUNTIME;
        }
    };
    cli.global.workers = Some(workers);
    let outcome = pool.install(|| dispatch(&cli));
    match outcome {
        Ok(report) => {
            let pass = report.pass();
            let code = if pass { EXIT_PASS } else { EXIT_CHECK_FAILED };
            let written = fs::write(cli.global.output.join("report.json"), report.to_json() + "\n");
            if let Err(e) = written {
                println!("{}", error_json("io", &e.to_string()));
                return EXIT_RUNTIME;
            }
            match cli.global.format {
                Format::Json => println!("{}", report.to_json()),
                Format::Csv => {
                    for line in &report.summary {
                        println!("{line}");
                    }
                    println!("{}", if pass { "PASS" } else { "FAIL" });
                }
            }
            code
        }
        Err(CliError::Usage(msg)) => {
            println!("{}", error_json("usage", &msg));
            EXIT_USAGE
        }
        Err(CliError::Runtime(e)) => {
            println!("{}", error_json(e.kind(), &e.to_string()));
            EXIT_RUNTIME
        }
    }
}

fn dispatch(cli: &Cli) -> CliResult<Report> {
    let ctx = Context { global: &cli.global };
    let (global, name) = (&cli.global, cli.command.name());
    match &cli.command {
        Command::ExitExperiment(args) => {
            commands::validate_exit(args)?;
            ensure_dir(&global.output)?;
            commands::exit_experiment(&ctx, args, Report::new(name, global, args))
        }
        Command::DensityConvergence(args) => {
            ensure_dir(&global.output)?;
            commands::density_convergence(&ctx, args, Report::new(name, global, args))
        }
        Command::Evt(args) => {
            ensure_dir(&global.output)?;
            commands::evt(&ctx, args, Report::new(name, global, args))
        }
        Command::Residual(args) => {
            ensure_dir(&global.output)?;
            commands::residual(&ctx, args, Report::new(name, global, args))
        }
        Command::IdentitySuite(args) => {
            ensure_dir(&global.output)?;
            commands::identity_suite(&ctx, args, Report::new(name, global, args))
        }
    }
}
