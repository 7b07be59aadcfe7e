//! Experiment driver: instance generation, single solves, and one-axis
//! parameter sweeps over LVGGMS instances.
//!
//! Settings come from an optional TOML file and are overridden by flags:
//!
//! ```toml
//! [instance]
//! n = 100            # or: path = "inst.txt"
//! density = 0.01
//! seed = 7
//!
//! [params]
//! sigma = [0.178, 0.178, 0.178]
//! s = 10.0
//! gamma = 1.8
//!
//! [stopping]
//! tol1 = 1e-8
//! max_iters = 1000
//! reference_iters = 1000
//!
//! [start]
//! x = 1.0
//! s = 4.0
//! l = 3.0
//! lambda = 0.0
//!
//! [output]
//! trace = "trace.csv"
//!
//! [sweep]
//! axis = "sigma1"
//! values = [0.178, 1.0, 5.0, 10.0]
//! ```
//!
//! Relative paths inside a config file are resolved against its directory.

use std::fmt;
use std::fs;
use std::io::{self, Write};
use std::path::{Path, PathBuf};
use std::str::FromStr;

use clap::{Args, Parser, Subcommand};
use nalgebra::SymmetricEigen;
use rayon::prelude::*;
use serde::Deserialize;
use thiserror::Error;

use crate::engine::{Engine, EngineError};
use crate::lvggms::{
    generate, read_instance, read_reference, reference_path, write_instance, write_reference,
    GeneratorSpec, IdentityStart, InstanceFileError, LvggmsError, LvggmsInstance, ReferenceRecord,
};
use crate::metrics::{ConvergenceTrace, SolveStatus, StoppingRule};
use crate::params::{ParamError, SolverParams};

pub const DEFAULT_N: usize = 100;
pub const DEFAULT_DENSITY: f64 = 0.01;
pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_MAX_ITERS: usize = 1000;
pub const DEFAULT_REFERENCE_ITERS: usize = 1000;

pub const EXIT_CONVERGED: u8 = 0;
pub const EXIT_ERROR: u8 = 1;
pub const EXIT_NOT_CONVERGED: u8 = 2;

pub const SWEEP_HEADER: &str = "value,IT,CPU,IER,OER,CER";

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("{path}: {message}")]
    Config { path: PathBuf, message: String },
    #[error("invalid parameters:\n{}", indent_violations(.0))]
    Params(ParamError),
    #[error(transparent)]
    InstanceFile(#[from] InstanceFileError),
    #[error(transparent)]
    Instance(#[from] LvggmsError),
    #[error(transparent)]
    Engine(EngineError),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: io::Error },
    #[error("reference run ended outside the objective's domain")]
    Reference,
}

fn indent_violations(err: &ParamError) -> String {
    match err {
        ParamError::Invalid(v) => {
            v.0.iter().map(|v| format!("  {v}")).collect::<Vec<_>>().join("\n")
        }
        other => format!("  {other}"),
    }
}

impl From<EngineError> for CliError {
    fn from(err: EngineError) -> Self {
        match err {
            EngineError::Params(p) => CliError::Params(p),
            other => CliError::Engine(other),
        }
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

fn io_error(path: &Path) -> impl FnOnce(io::Error) -> CliError + '_ {
    move |source| CliError::Io { path: path.to_path_buf(), source }
}

#[derive(Debug, Parser)]
#[command(name = "grppa", version, about = "Relaxed parameterized proximal point solver for LVGGMS")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write a seeded synthetic instance file.
    Generate(GenerateArgs),
    /// Solve one instance and export the convergence trace.
    Solve(RunArgs),
    /// Solve once per value of one parameter and export a results table.
    Sweep(SweepArgs),
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long)]
    pub n: usize,
    #[arg(long, default_value_t = DEFAULT_DENSITY)]
    pub density: f64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    #[arg(long)]
    pub nu: Option<f64>,
    #[arg(long)]
    pub mu: Option<f64>,
}

#[derive(Debug, Args, Default, Clone)]
pub struct RunArgs {
    /// TOML experiment file.
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Instance file; replaces any instance source in the config.
    #[arg(long)]
    pub instance: Option<PathBuf>,
    /// Output CSV. Without it the CSV goes to stdout and the summary to stderr.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Generator seed (generated instances only).
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub tol1: Option<f64>,
    #[arg(long)]
    pub tol2: Option<f64>,
    #[arg(long)]
    pub tol3: Option<f64>,
    #[arg(long)]
    pub max_iters: Option<usize>,
    /// NAME=VALUE with NAME one of sigma1..sigma3, s, tau, epsilon, gamma, beta.
    #[arg(long = "param", value_name = "NAME=VALUE")]
    pub params: Vec<String>,
    #[arg(long)]
    pub threads: Option<usize>,
}

#[derive(Debug, Args, Default, Clone)]
pub struct SweepArgs {
    #[command(flatten)]
    pub run: RunArgs,
    /// sigma1..sigma3 or s.
    #[arg(long)]
    pub axis: Option<String>,
    #[arg(long, value_delimiter = ',')]
    pub values: Option<Vec<f64>>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    #[serde(default)]
    pub instance: InstanceConfig,
    #[serde(default)]
    pub params: ParamsConfig,
    #[serde(default)]
    pub stopping: StoppingConfig,
    pub start: Option<IdentityStart>,
    #[serde(default)]
    pub output: OutputConfig,
    #[serde(default)]
    pub sweep: SweepConfig,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InstanceConfig {
    pub path: Option<PathBuf>,
    pub n: Option<usize>,
    pub density: Option<f64>,
    pub seed: Option<u64>,
    pub nu: Option<f64>,
    pub mu: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ParamsConfig {
    pub sigma: Option<Vec<f64>>,
    pub s: Option<f64>,
    pub tau: Option<f64>,
    pub epsilon: Option<f64>,
    pub gamma: Option<f64>,
    pub beta: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct StoppingConfig {
    pub tol1: Option<f64>,
    pub tol2: Option<f64>,
    pub tol3: Option<f64>,
    pub max_iters: Option<usize>,
    pub reference_iters: Option<usize>,
    /// Skips the reference run when set.
    pub reference_objective: Option<f64>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct OutputConfig {
    pub trace: Option<PathBuf>,
    pub table: Option<PathBuf>,
}

#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub axis: Option<String>,
    pub values: Option<Vec<f64>>,
}

impl ExperimentConfig {
    pub fn parse(text: &str, path: &Path) -> Result<Self, CliError> {
        let mut config: Self = toml::from_str(text)
            .map_err(|e| CliError::Config { path: path.to_path_buf(), message: e.to_string() })?;
        let base = path.parent().unwrap_or(Path::new(""));
        let rebase = |p: &mut Option<PathBuf>| {
            if let Some(rel) = p.as_mut().filter(|p| p.is_relative()) {
                *rel = base.join(&*rel);
            }
        };
        rebase(&mut config.instance.path);
        rebase(&mut config.output.trace);
        rebase(&mut config.output.table);
        Ok(config)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(io_error(path))?;
        Self::parse(&text, path)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum InstanceSource {
    File(PathBuf),
    Generate(GeneratorSpec),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Reference {
    Fixed(f64),
    Run { iterations: usize },
}

/// Fully resolved settings for a solve or sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct Experiment {
    pub source: InstanceSource,
    pub params: SolverParams,
    pub beta: Option<f64>,
    /// Tolerances and iteration cap; the reference objective is filled in at run time.
    pub rule: StoppingRule,
    pub reference: Reference,
    pub start: IdentityStart,
    pub trace_out: Option<PathBuf>,
    pub table_out: Option<PathBuf>,
    pub threads: Option<usize>,
}

/// Swept coordinate. Blocks are numbered from 1 on the command line.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Axis {
    Sigma(usize),
    S,
}

impl FromStr for Axis {
    type Err = CliError;

    fn from_str(name: &str) -> Result<Self, CliError> {
        if name == "s" {
            return Ok(Axis::S);
        }
        match name.strip_prefix("sigma").map(str::parse::<usize>) {
            Some(Ok(k)) if (1..=3).contains(&k) => Ok(Axis::Sigma(k - 1)),
            _ => Err(usage(format!("unknown axis `{name}` (expected sigma1, sigma2, sigma3 or s)"))),
        }
    }
}

impl fmt::Display for Axis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Axis::Sigma(i) => write!(f, "sigma{}", i + 1),
            Axis::S => write!(f, "s"),
        }
    }
}

impl Axis {
    pub fn apply(self, params: &mut SolverParams, value: f64) {
        match self {
            Axis::Sigma(i) => params.sigma[i] = value,
            Axis::S => params.s = value,
        }
    }
}

/// Applies one `NAME=VALUE` override.
pub fn apply_param(params: &mut SolverParams, beta: &mut Option<f64>, spec: &str) -> Result<(), CliError> {
    let (name, raw) = spec
        .split_once('=')
        .ok_or_else(|| usage(format!("--param expects NAME=VALUE, got `{spec}`")))?;
    let value: f64 = raw
        .trim()
        .parse()
        .map_err(|_| usage(format!("--param {name}: cannot parse `{raw}`")))?;
    match name.trim() {
        "tau" => params.tau = value,
        "epsilon" | "eps" => params.epsilon = value,
        "gamma" => params.gamma = value,
        "beta" => *beta = Some(value),
        other => Axis::from_str(other)
            .map_err(|_| usage(format!("--param: unknown parameter `{other}`")))?
            .apply(params, value),
    }
    Ok(())
}

/// Merges config file and flags. Parameters are not validated here.
pub fn resolve(args: &RunArgs) -> Result<(Experiment, SweepConfig), CliError> {
    let config = match &args.config {
        Some(path) => ExperimentConfig::load(path)?,
        None => ExperimentConfig::default(),
    };
    resolve_with(config, args)
}

pub fn resolve_with(config: ExperimentConfig, args: &RunArgs) -> Result<(Experiment, SweepConfig), CliError> {
    let inst = &config.instance;
    let generator_fields = inst.n.is_some() || inst.density.is_some() || inst.seed.is_some();
    let source = match (&args.instance, &inst.path) {
        (Some(path), _) => InstanceSource::File(path.clone()),
        (None, Some(_)) if generator_fields => {
            return Err(usage("[instance] sets both `path` and generator fields"));
        }
        (None, Some(path)) => InstanceSource::File(path.clone()),
        (None, None) => {
            let mut spec = GeneratorSpec::new(
                inst.n.unwrap_or(DEFAULT_N),
                inst.density.unwrap_or(DEFAULT_DENSITY),
                inst.seed.unwrap_or(0),
            );
            if let Some(nu) = inst.nu {
                spec.nu = nu;
            }
            if let Some(mu) = inst.mu {
                spec.mu = mu;
            }
            InstanceSource::Generate(spec)
        }
    };
    let source = match (source, args.seed) {
        (InstanceSource::Generate(mut spec), Some(seed)) => {
            spec.seed = seed;
            InstanceSource::Generate(spec)
        }
        (InstanceSource::File(_), Some(_)) => {
            return Err(usage("--seed only applies to generated instances"));
        }
        (source, None) => source,
    };

    let mut params = SolverParams::tuned_three_block();
    let pc = &config.params;
    if let Some(sigma) = &pc.sigma {
        if sigma.len() != 3 {
            return Err(usage(format!("[params] sigma needs 3 entries, got {}", sigma.len())));
        }
        params.sigma = sigma.clone();
    }
    params.s = pc.s.unwrap_or(params.s);
    params.tau = pc.tau.unwrap_or(params.tau);
    params.epsilon = pc.epsilon.unwrap_or(params.epsilon);
    params.gamma = pc.gamma.unwrap_or(params.gamma);
    let mut beta = pc.beta;
    for spec in &args.params {
        apply_param(&mut params, &mut beta, spec)?;
    }

    let st = &config.stopping;
    let rule = StoppingRule::new(
        args.tol1.or(st.tol1).unwrap_or(DEFAULT_TOL),
        args.tol2.or(st.tol2).unwrap_or(DEFAULT_TOL),
        args.tol3.or(st.tol3).unwrap_or(DEFAULT_TOL),
        args.max_iters.or(st.max_iters).unwrap_or(DEFAULT_MAX_ITERS),
    );
    rule.check().map_err(|e| usage(e.to_string()))?;
    let reference = match st.reference_objective {
        Some(f) => Reference::Fixed(f),
        None => Reference::Run { iterations: st.reference_iters.unwrap_or(DEFAULT_REFERENCE_ITERS) },
    };
    if args.threads == Some(0) {
        return Err(usage("--threads must be at least 1"));
    }

    let experiment = Experiment {
        source,
        params,
        beta,
        rule,
        reference,
        start: config.start.unwrap_or_default(),
        trace_out: args.out.clone().or(config.output.trace),
        table_out: args.out.clone().or(config.output.table),
        threads: args.threads,
    };
    Ok((experiment, config.sweep))
}

pub fn load_instance(source: &InstanceSource) -> Result<LvggmsInstance, CliError> {
    Ok(match source {
        InstanceSource::File(path) => read_instance(path)?,
        InstanceSource::Generate(spec) => generate(spec)?,
    })
}

/// Objective after `iterations` steps with the tuned default parameters from
/// the default start.
pub fn reference_objective(instance: &LvggmsInstance, iterations: usize) -> Result<f64, CliError> {
    let problem = instance.problem();
    let params = SolverParams::tuned_three_block();
    let engine = Engine::new(&problem, &params)?;
    let (x0, l0) = IdentityStart::default().vectors(instance.n());
    let mut state = engine.init(x0, l0)?;
    for _ in 0..iterations {
        state = engine.step(&state)?.1;
    }
    let f = problem.objective(&state.x).map_err(|_| CliError::Reference)?;
    if f.is_finite() {
        Ok(f)
    } else {
        Err(CliError::Reference)
    }
}

/// Resolves `F*`, reusing or refreshing the `.fstar` sidecar of file instances.
pub fn resolve_reference(
    experiment: &Experiment,
    instance: &LvggmsInstance,
) -> Result<f64, CliError> {
    let iterations = match experiment.reference {
        Reference::Fixed(f) => return Ok(f),
        Reference::Run { iterations } => iterations,
    };
    let sidecar = match &experiment.source {
        InstanceSource::File(path) => Some(reference_path(path)),
        InstanceSource::Generate(_) => None,
    };
    if let Some(cached) = sidecar.as_deref().and_then(|p| read_reference(p).ok()) {
        if cached.iterations == iterations {
            return Ok(cached.objective);
        }
    }
    let objective = reference_objective(instance, iterations)?;
    if let Some(path) = sidecar {
        if let Err(e) = write_reference(&ReferenceRecord { objective, iterations }, &path) {
            eprintln!("warning: could not cache reference objective: {e}");
        }
    }
    Ok(objective)
}

fn warn_beta(beta: Option<f64>) {
    if let Some(b) = beta {
        eprintln!("warning: beta = {b} has no role in this method and is ignored");
    }
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> Result<T, CliError> {
    match threads {
        None => Ok(job()),
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| usage(format!("thread pool: {e}")))?;
            Ok(pool.install(job))
        }
    }
}

/// Solves once; the returned trace carries OER against the resolved `F*`.
pub fn run_solve(experiment: &Experiment) -> Result<ConvergenceTrace, CliError> {
    experiment.params.check().map_err(CliError::Params)?;
    let instance = load_instance(&experiment.source)?;
    let fstar = resolve_reference(experiment, &instance)?;
    let problem = instance.problem();
    let engine = Engine::new(&problem, &experiment.params)?;
    let rule = experiment.rule.clone().with_reference(fstar);
    let (x0, l0) = experiment.start.vectors(instance.n());
    let outcome = with_pool(experiment.threads, || engine.solve(x0, l0, &rule, |_| {}))??;
    Ok(outcome.trace)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepResult {
    pub iterations: usize,
    pub cpu: f64,
    pub ier: f64,
    pub oer: f64,
    pub cer: f64,
    pub converged: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SweepRow {
    pub value: f64,
    /// `Err` holds the reason a value was skipped.
    pub result: Result<SweepResult, String>,
}

/// One solve per value, all from the same instance, start and `F*`. Rows
/// come back in input order.
pub fn run_sweep(experiment: &Experiment, axis: Axis, values: &[f64]) -> Result<Vec<SweepRow>, CliError> {
    if values.is_empty() {
        return Err(usage("sweep needs at least one value"));
    }
    let instance = load_instance(&experiment.source)?;
    let fstar = resolve_reference(experiment, &instance)?;
    let problem = instance.problem();
    let rule = experiment.rule.clone().with_reference(fstar);
    let (x0, l0) = experiment.start.vectors(instance.n());

    let solve_one = |value: f64| -> SweepRow {
        let mut params = experiment.params.clone();
        axis.apply(&mut params, value);
        let result = Engine::new(&problem, &params)
            .and_then(|engine| {
                engine.with_parallel(false).solve(x0.clone(), l0.clone(), &rule, |_| {})
            })
            .map_err(|e| e.to_string())
            .and_then(|outcome| {
                let last = outcome.trace.last().copied().ok_or("no iterations run")?;
                Ok(SweepResult {
                    iterations: last.k,
                    cpu: last.elapsed_s,
                    ier: last.ier,
                    oer: last.oer,
                    cer: last.cer,
                    converged: outcome.converged(),
                })
            });
        SweepRow { value, result }
    };
    with_pool(experiment.threads, || values.par_iter().map(|&v| solve_one(v)).collect())
}

fn fmt_residual(v: f64) -> String {
    if v.is_nan() {
        "NA".into()
    } else {
        format!("{v:.2e}")
    }
}

pub fn write_sweep_csv<W: Write>(rows: &[SweepRow], mut out: W) -> io::Result<()> {
    writeln!(out, "{SWEEP_HEADER}")?;
    for row in rows {
        match &row.result {
            Ok(r) => writeln!(
                out,
                "{},{},{:.2},{},{},{}",
                row.value,
                r.iterations,
                r.cpu,
                fmt_residual(r.ier),
                fmt_residual(r.oer),
                fmt_residual(r.cer)
            )?,
            Err(_) => writeln!(out, "{},skipped,,,,", row.value)?,
        }
    }
    Ok(())
}

/// Two-line `IT CPU IER OER CER` table for a finished solve.
pub fn format_summary(trace: &ConvergenceTrace) -> String {
    let header = format!("{:>6} {:>8} {:>10} {:>10} {:>10}", "IT", "CPU", "IER", "OER", "CER");
    match trace.last() {
        Some(r) => format!(
            "{header}\n{:>6} {:>8.2} {:>10} {:>10} {:>10}",
            r.k,
            r.elapsed_s,
            fmt_residual(r.ier),
            fmt_residual(r.oer),
            fmt_residual(r.cer)
        ),
        None => format!("{header}\n{:>6}", 0),
    }
}

/// Writes to `path`, or to stdout when absent.
fn emit(path: Option<&Path>, write: impl FnOnce(&mut dyn Write) -> io::Result<()>) -> Result<(), CliError> {
    match path {
        Some(p) => {
            let mut file = io::BufWriter::new(fs::File::create(p).map_err(io_error(p))?);
            write(&mut file).and_then(|_| file.flush()).map_err(io_error(p))
        }
        None => {
            let stdout = io::stdout();
            let mut lock = stdout.lock();
            write(&mut lock).map_err(io_error(Path::new("<stdout>")))
        }
    }
}

pub fn cmd_generate(args: &GenerateArgs) -> Result<u8, CliError> {
    let mut spec = GeneratorSpec::new(args.n, args.density, args.seed);
    spec.nu = args.nu.unwrap_or(spec.nu);
    spec.mu = args.mu.unwrap_or(spec.mu);
    let instance = generate(&spec)?;
    write_instance(&instance, &args.out)?;
    let min_eig = SymmetricEigen::new(instance.covariance().clone()).eigenvalues.min();
    println!(
        "wrote {}: n = {}, nu = {}, mu = {}, seed = {}, min eig(C) = {:.6e}",
        args.out.display(),
        instance.n(),
        instance.nu(),
        instance.mu(),
        args.seed,
        min_eig
    );
    Ok(EXIT_CONVERGED)
}

pub fn cmd_solve(args: &RunArgs) -> Result<u8, CliError> {
    let (experiment, _) = resolve(args)?;
    warn_beta(experiment.beta);
    let trace = run_solve(&experiment)?;
    let out = experiment.trace_out.as_deref();
    emit(out, |w| trace.write_csv(w))?;
    let summary = format_summary(&trace);
    if out.is_some() {
        println!("{summary}");
    } else {
        eprintln!("{summary}");
    }
    Ok(match trace.status {
        Some(SolveStatus::Converged) => EXIT_CONVERGED,
        _ => {
            eprintln!("warning: stopped at the iteration limit before meeting all tolerances");
            EXIT_NOT_CONVERGED
        }
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> Result<u8, CliError> {
    let (experiment, sweep) = resolve(&args.run)?;
    warn_beta(experiment.beta);
    let axis: Axis = args
        .axis
        .as_deref()
        .or(sweep.axis.as_deref())
        .ok_or_else(|| usage("sweep needs --axis"))?
        .parse()?;
    let values = args.values.clone().or(sweep.values).unwrap_or_default();
    let rows = run_sweep(&experiment, axis, &values)?;
    for row in &rows {
        if let Err(reason) = &row.result {
            eprintln!("skipped {axis} = {}: {reason}", row.value);
        }
    }
    emit(experiment.table_out.as_deref(), |w| write_sweep_csv(&rows, w))?;
    let ran: Vec<&SweepResult> = rows.iter().filter_map(|r| r.result.as_ref().ok()).collect();
    Ok(if ran.is_empty() {
        EXIT_ERROR
    } else if ran.iter().all(|r| r.converged) {
        EXIT_CONVERGED
    } else {
        EXIT_NOT_CONVERGED
    })
}

pub fn execute(cli: &Cli) -> Result<u8, CliError> {
    match &cli.command {
        Command::Generate(args) => cmd_generate(args),
        Command::Solve(args) => cmd_solve(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Parses `args` and runs; returns the process exit code. Argument errors
/// map to 1 so that 2 keeps meaning "did not converge".
pub fn run_from_args<I, T>(args: I) -> u8
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_CONVERGED };
        }
    };
    match execute(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    }
}
