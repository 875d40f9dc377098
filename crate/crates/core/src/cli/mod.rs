//! The `crn` command line.
//!
//! Exit codes: 0 success; 1 usage, parse or precondition error; 2 simulation
//! jump cap exceeded; 3 data not realizable by mass-action reactions
//! (negative coefficient or product off the lattice); 4 missing coverage
//! (rates or visits); 5 singular interpolation matrix.
//!
//! Results go to stdout, diagnostics to stderr.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::error::{Error, EstimateError, InferError, SimError};
use crate::estimate::{
    collect_visits, confidence_epsilon, distance_intensity, distance_tv, infer_from_trajectories, infer_from_visits,
    write_estimated_rates_file, CollectOptions, DistanceResult, TrajectoryInference, DEFAULT_MIN_VISITS,
};
use crate::infer::{
    check_identifiability, fit_rate_table, infer_on_simplex, polynomial_to_network, read_rate_table_file,
    InferenceMode, InferenceReport, StateSpace,
};
use crate::network::{
    enumerate_hyperplane, enumerate_simplex, read_network_file, write_network, write_network_file,
    ConservationVector, ReactionSystem, StateVector,
};
use crate::sim::{read_trajectory_file, simulate_ensemble, write_trajectory_file, SimOptions, DEFAULT_MAX_JUMPS};

#[derive(Debug, Parser)]
#[command(name = "crn", version, about = "Simulate stochastic mass-action systems and infer them from data")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Simulate an ensemble with the Gillespie direct method and write a .traj.csv file.
    Simulate(SimulateArgs),
    /// Reconstruct a network from a rate table or from trajectories.
    Infer(InferArgs),
    /// Decide whether a network is identifiable from its rates on a state space.
    Check(CheckArgs),
    /// Distance between two networks over a finite state set.
    Compare(CompareArgs),
    /// Fit falling-factorial polynomials to a rate table and read off a network.
    FitPoly(FitPolyArgs),
    /// Simulate until S_N is covered, infer, and compare with the generating network.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// Initial counts, either positional (`4,0`) or by name (`X1=4,X2=0`).
    #[arg(long)]
    pub init: String,
    #[arg(long)]
    pub t_end: Option<f64>,
    /// Stop each realization after this many jumps.
    #[arg(long)]
    pub jumps: Option<u64>,
    #[arg(long, default_value_t = 1)]
    pub realizations: u64,
    #[arg(long)]
    pub seed: u64,
    #[arg(long)]
    pub out: PathBuf,
    /// Abort when a realization exceeds this many jumps.
    #[arg(long, default_value_t = DEFAULT_MAX_JUMPS)]
    pub max_jumps: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Source {
    Rates,
    Trajectories,
}

#[derive(Debug, Args)]
pub struct InferArgs {
    #[arg(long, value_enum)]
    pub from: Source,
    /// Rate table (`--from rates`).
    #[arg(long)]
    pub rates: Option<PathBuf>,
    /// Trajectory file (`--from trajectories`).
    #[arg(long)]
    pub traj: Option<PathBuf>,
    #[arg(long)]
    pub order: u64,
    /// Clamp threshold relative to the total rate at a state. Rates default
    /// to 0 (strict); trajectories default to 1e-3.
    #[arg(long)]
    pub threshold: Option<f64>,
    #[arg(long, default_value_t = DEFAULT_MIN_VISITS)]
    pub min_visits: u64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    /// Output .crn file; stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Write the estimated rates (trajectory mode) as an extended .rates.csv.
    #[arg(long)]
    pub estimates_out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CheckArgs {
    #[arg(long)]
    pub network: PathBuf,
    /// `full`, `simplex:N` or `hyperplane:v1,...,vd:N`.
    #[arg(long)]
    pub space: String,
    /// Where to write the witness network when one exists.
    #[arg(long)]
    pub witness_out: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum MetricArg {
    Tv,
    Intensity,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    #[arg(long)]
    pub a: PathBuf,
    #[arg(long)]
    pub b: PathBuf,
    #[arg(long, value_enum)]
    pub metric: MetricArg,
    /// `simplex:N` or `hyperplane:v1,...,vd:N`.
    #[arg(long)]
    pub set: String,
    #[arg(long)]
    pub t: Option<f64>,
    #[arg(long)]
    pub realizations: Option<u64>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub init_a: Option<String>,
    #[arg(long)]
    pub init_b: Option<String>,
}

#[derive(Debug, Args)]
pub struct FitPolyArgs {
    #[arg(long)]
    pub rates: PathBuf,
    /// Largest polynomial degree; each transition's degree follows from its state count.
    #[arg(long)]
    pub order: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct PipelineArgs {
    #[arg(long)]
    pub network: PathBuf,
    #[arg(long)]
    pub init: String,
    #[arg(long)]
    pub order: u64,
    #[arg(long, default_value_t = DEFAULT_MIN_VISITS)]
    pub min_visits: u64,
    #[arg(long, default_value_t = 10_000)]
    pub jumps_per_trajectory: u64,
    #[arg(long, default_value_t = 1e-3)]
    pub threshold: f64,
    #[arg(long, default_value_t = 0.05)]
    pub alpha: f64,
    #[arg(long)]
    pub seed: u64,
    /// Also report the total-variation distance at this time.
    #[arg(long)]
    pub tv_t: Option<f64>,
    #[arg(long, default_value_t = 10_000)]
    pub tv_realizations: u64,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

/// A failure with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn usage(message: impl Into<String>) -> Self {
        CliError { code: 1, message: message.into() }
    }

    fn from_error(context: Option<&Path>, e: Error) -> Self {
        let message = match context {
            Some(path) => format!("{}: {e}", path.display()),
            None => e.to_string(),
        };
        CliError { code: exit_code(&e), message }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::from_error(None, e)
    }
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Sim(SimError::JumpCapExceeded { .. }) => 2,
        Error::Infer(
            InferError::NonRealizable { .. }
            | InferError::InvalidProduct { .. }
            | InferError::NegativeCoefficient { .. },
        ) => 3,
        Error::Infer(InferError::MissingRate { .. }) | Error::Estimate(EstimateError::InsufficientVisits { .. }) => 4,
        Error::Infer(InferError::SingularMatrix { .. }) => 5,
        _ => 1,
    }
}

/// Parses `args` (including the program name) and runs the command; returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 1 } else { 0 };
        }
    };
    match execute(&cli.command) {
        Ok(out) => {
            print!("{out}");
            0
        }
        Err(e) => {
            eprintln!("error: {}", e.message);
            e.code
        }
    }
}

/// Runs a parsed command, returning its stdout text.
pub fn execute(command: &Command) -> Result<String, CliError> {
    match command {
        Command::Simulate(a) => cmd_simulate(a),
        Command::Infer(a) => cmd_infer(a),
        Command::Check(a) => cmd_check(a),
        Command::Compare(a) => cmd_compare(a),
        Command::FitPoly(a) => cmd_fit_poly(a),
        Command::Pipeline(a) => cmd_pipeline(a),
    }
}

fn load_network(path: &Path) -> Result<ReactionSystem, CliError> {
    read_network_file(path).map_err(|e| CliError::from_error(Some(path), e))
}

fn with_path<T>(path: &Path, r: crate::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::from_error(Some(path), e))
}

/// Initial state from `4,0` or `X1=4,X2=0`.
pub fn parse_init(text: &str, species: &[String]) -> Result<StateVector, CliError> {
    let parts: Vec<&str> = text.split(',').map(str::trim).filter(|s| !s.is_empty()).collect();
    let count = |s: &str| s.parse::<u64>().map_err(|_| CliError::usage(format!("--init: '{s}' is not a count")));
    if parts.iter().any(|p| p.contains('=')) {
        let mut values = vec![None; species.len()];
        for part in &parts {
            let (name, value) = part
                .split_once('=')
                .ok_or_else(|| CliError::usage(format!("--init: mix of named and positional values in '{text}'")))?;
            let i = species
                .iter()
                .position(|s| s == name.trim())
                .ok_or_else(|| CliError::usage(format!("--init: unknown species {}", name.trim())))?;
            values[i] = Some(count(value.trim())?);
        }
        let missing: Vec<&str> =
            species.iter().zip(&values).filter(|(_, v)| v.is_none()).map(|(s, _)| s.as_str()).collect();
        if !missing.is_empty() {
            return Err(CliError::usage(format!("--init: missing species {}", missing.join(" "))));
        }
        Ok(StateVector::new(values.into_iter().map(Option::unwrap).collect()))
    } else {
        if parts.len() != species.len() {
            return Err(CliError::usage(format!(
                "--init: expected {} values for species {}, got {}",
                species.len(),
                species.join(" "),
                parts.len()
            )));
        }
        Ok(StateVector::new(parts.into_iter().map(count).collect::<Result<_, _>>()?))
    }
}

/// `full`, `simplex:N` or `hyperplane:v1,...,vd:N`.
pub fn parse_space(text: &str, dim: usize) -> Result<StateSpace, CliError> {
    let bad = || CliError::usage(format!("invalid state space '{text}'; use full, simplex:N or hyperplane:v1,...,vd:N"));
    let level = |s: &str| s.trim().parse::<u64>().map_err(|_| bad());
    let fields: Vec<&str> = text.split(':').collect();
    match fields.as_slice() {
        ["full"] => Ok(StateSpace::FullLattice),
        ["simplex", n] => Ok(StateSpace::Simplex(level(n)?)),
        ["hyperplane", v, n] => {
            let weights = v.split(',').map(|w| w.trim().parse::<u64>()).collect::<Result<Vec<_>, _>>().map_err(|_| bad())?;
            if weights.len() != dim {
                return Err(CliError::usage(format!("hyperplane vector has {} entries, expected {dim}", weights.len())));
            }
            let v = ConservationVector::new(weights)
                .map_err(|e| CliError::usage(format!("invalid conservation vector: {e}")))?;
            Ok(StateSpace::Hyperplane(v, level(n)?))
        }
        _ => Err(bad()),
    }
}

fn finite_states(space: &StateSpace, dim: usize, text: &str) -> Result<Vec<StateVector>, CliError> {
    match space {
        StateSpace::Simplex(n) => Ok(enumerate_simplex(dim, *n)?),
        StateSpace::Hyperplane(v, n) => Ok(enumerate_hyperplane(v, *n)?),
        StateSpace::States(list) => Ok(list.clone()),
        StateSpace::FullLattice => Err(CliError::usage(format!("--set must be finite, got '{text}'"))),
    }
}

fn cmd_simulate(a: &SimulateArgs) -> Result<String, CliError> {
    let sys = load_network(&a.network)?;
    let x0 = parse_init(&a.init, sys.species())?;
    if a.t_end.is_none() && a.jumps.is_none() {
        return Err(CliError::usage("give --t-end, --jumps or both"));
    }
    if a.realizations == 0 {
        return Err(CliError::usage("--realizations must be at least 1"));
    }
    let opts = SimOptions { t_end: a.t_end.unwrap_or(f64::INFINITY), stop_after_jumps: a.jumps, max_jumps: a.max_jumps };
    let started = Instant::now();
    let trajs = simulate_ensemble(&sys, &x0, &opts, a.realizations, a.seed)?;
    write_trajectory_file(&a.out, &trajs).map_err(|e| CliError::from_error(Some(&a.out), e))?;
    let jumps: usize = trajs.iter().map(|t| t.n_jumps()).sum();
    let mut out = String::new();
    writeln!(out, "realizations: {}", trajs.len()).unwrap();
    writeln!(out, "total_jumps: {jumps}").unwrap();
    eprintln!("wall time: {:.3} s", started.elapsed().as_secs_f64());
    Ok(out)
}

fn report_lines(report: &InferenceReport, species: &[String]) -> String {
    let mut out = String::new();
    writeln!(out, "# reactions: {}", report.system.len()).unwrap();
    for c in &report.coefficients {
        let r = report
            .system
            .reactions()
            .iter()
            .find(|r| r.source().coeffs() == c.state.counts() && r.transition() == &c.z)
            .expect("every coefficient is a reaction");
        writeln!(
            out,
            "#   {}  kappa={} z={} state_index={}",
            crate::network::format::format_reaction(r, species),
            c.value,
            c.z,
            c.state_index
        )
        .unwrap();
    }
    writeln!(out, "# residual_max: {}", report.residual_max).unwrap();
    writeln!(out, "# threshold: {}", report.threshold_used).unwrap();
    if report.rejected.is_empty() {
        writeln!(out, "# rejected: none").unwrap();
    } else {
        writeln!(out, "# rejected: {}", report.rejected.len()).unwrap();
        for r in &report.rejected {
            writeln!(out, "#   z={} state={} c={}", r.z, r.state, r.value).unwrap();
        }
    }
    out
}

fn emit_network(sys: &ReactionSystem, out_path: Option<&Path>, report: String) -> Result<String, CliError> {
    match out_path {
        Some(path) => {
            write_network_file(path, sys).map_err(|e| CliError::from_error(Some(path), e))?;
            Ok(report)
        }
        None => Ok(format!("{}{report}", write_network(sys))),
    }
}

fn cmd_infer(a: &InferArgs) -> Result<String, CliError> {
    match a.from {
        Source::Rates => {
            let path = a.rates.as_deref().ok_or_else(|| CliError::usage("--from rates needs --rates"))?;
            let table = with_path(path, read_rate_table_file(path))?;
            let threshold = a.threshold.unwrap_or(0.0);
            let mode = if threshold > 0.0 { InferenceMode::Clamp { threshold } } else { InferenceMode::Strict };
            let report = infer_on_simplex(&table, a.order, mode)?;
            let species = crate::network::default_species_names(table.dim());
            let system = report.system.clone().with_species(species.clone())?;
            emit_network(&system, a.out.as_deref(), report_lines(&report, &species))
        }
        Source::Trajectories => {
            let path = a.traj.as_deref().ok_or_else(|| CliError::usage("--from trajectories needs --traj"))?;
            let trajs = with_path(path, read_trajectory_file(path))?;
            let threshold = a.threshold.unwrap_or(1e-3);
            let inference = infer_from_trajectories(&trajs, a.order, threshold, a.min_visits)?;
            trajectory_report(&inference, a.alpha, a.out.as_deref(), a.estimates_out.as_deref())
        }
    }
}

fn trajectory_report(
    inference: &TrajectoryInference,
    alpha: f64,
    out_path: Option<&Path>,
    estimates_out: Option<&Path>,
) -> Result<String, CliError> {
    let eps = confidence_epsilon(&inference.estimates, alpha)?;
    if let Some(path) = estimates_out {
        write_estimated_rates_file(path, &inference.estimates).map_err(|e| CliError::from_error(Some(path), e))?;
    }
    let species = crate::network::default_species_names(inference.report.system.dim());
    let mut report = report_lines(&inference.report, &species);
    let min_visits = inference.estimates.visits.values().min().copied().unwrap_or(0);
    writeln!(report, "# min_visits_observed: {min_visits}").unwrap();
    writeln!(report, "# epsilon(alpha={alpha}): {eps}").unwrap();
    let system = inference.report.system.clone().with_species(species)?;
    emit_network(&system, out_path, report)
}

fn cmd_check(a: &CheckArgs) -> Result<String, CliError> {
    let sys = load_network(&a.network)?;
    let space = parse_space(&a.space, sys.dim())?;
    let verdict = check_identifiability(&sys, &space)?;
    let mut out = String::new();
    writeln!(out, "verdict: {}", if verdict.identifiable { "identifiable" } else { "not-identifiable" }).unwrap();
    writeln!(out, "reason: {}", verdict.reason).unwrap();
    if let Some(witness) = &verdict.witness {
        if let Some(path) = &a.witness_out {
            write_network_file(path, witness).map_err(|e| CliError::from_error(Some(path), e))?;
        }
        writeln!(out, "witness:").unwrap();
        out.push_str(&write_network(witness));
    }
    Ok(out)
}

fn distance_lines(d: &DistanceResult) -> String {
    let mut out = String::new();
    writeln!(out, "metric: {}", d.metric).unwrap();
    writeln!(out, "set: {}", d.set_u).unwrap();
    writeln!(out, "value: {}", d.value).unwrap();
    if let Some(t) = d.t {
        writeln!(out, "t: {t}").unwrap();
    }
    if let Some(n) = d.n_realizations {
        writeln!(out, "realizations: {n}").unwrap();
    }
    if let (Some(a), Some(b)) = (d.escaped_a, d.escaped_b) {
        writeln!(out, "escaped_a: {a}").unwrap();
        writeln!(out, "escaped_b: {b}").unwrap();
    }
    out
}

fn cmd_compare(a: &CompareArgs) -> Result<String, CliError> {
    let sa = load_network(&a.a)?;
    let sb = load_network(&a.b)?;
    if sa.dim() != sb.dim() {
        return Err(CliError::usage(format!(
            "dimension mismatch: {} has {} species, {} has {}",
            a.a.display(),
            sa.dim(),
            a.b.display(),
            sb.dim()
        )));
    }
    let space = parse_space(&a.set, sa.dim())?;
    let u = finite_states(&space, sa.dim(), &a.set)?;
    let result = match a.metric {
        MetricArg::Intensity => distance_intensity(&sa, &sb, &u)?,
        MetricArg::Tv => {
            let need = |what: &str| CliError::usage(format!("--metric tv needs {what}"));
            let t = a.t.ok_or_else(|| need("--t"))?;
            let n = a.realizations.ok_or_else(|| need("--realizations"))?;
            let seed = a.seed.ok_or_else(|| need("--seed"))?;
            let x0a = parse_init(a.init_a.as_deref().ok_or_else(|| need("--init-a"))?, sa.species())?;
            let x0b = parse_init(a.init_b.as_deref().ok_or_else(|| need("--init-b"))?, sb.species())?;
            if !(t > 0.0 && t.is_finite()) || n == 0 {
                return Err(CliError::usage("--t must be positive and --realizations at least 1"));
            }
            distance_tv(&sa, &sb, &x0a, &x0b, t, &u, n, seed)?
        }
    };
    Ok(distance_lines(&result.with_label(&a.set)))
}

fn cmd_fit_poly(a: &FitPolyArgs) -> Result<String, CliError> {
    let table = with_path(&a.rates, read_rate_table_file(&a.rates))?;
    let fits = fit_rate_table(&table, a.order).map_err(|e| match e {
        Error::Infer(InferError::WrongCount { z, expected, found }) => CliError::usage(format!(
            "{}: transition {z} has {found} states; the fit needs exactly {expected}",
            a.rates.display()
        )),
        other => CliError::from_error(Some(&a.rates), other),
    })?;
    let mut report = String::new();
    for (z, fit) in &fits {
        let coeffs: Vec<String> = fit.coefficients.iter().map(|c| c.to_string()).collect();
        let pivots: Vec<String> = fit.pivots.iter().map(|p| p.to_string()).collect();
        writeln!(
            report,
            "# z={z} order={} coefficients=[{}] pivots=[{}] residual_max={}",
            fit.order,
            coeffs.join(", "),
            pivots.join(", "),
            fit.residual_max
        )
        .unwrap();
    }
    let coefficients = fits.into_iter().map(|(z, f)| (z, f.coefficients)).collect();
    let sys = polynomial_to_network(&coefficients, table.dim())?;
    emit_network(&sys, a.out.as_deref(), report)
}

fn cmd_pipeline(a: &PipelineArgs) -> Result<String, CliError> {
    let sys = load_network(&a.network)?;
    let x0 = parse_init(&a.init, sys.species())?;
    let states = enumerate_simplex(sys.dim(), a.order)?;
    let opts = CollectOptions { jumps_per_trajectory: a.jumps_per_trajectory, ..CollectOptions::default() };
    let started = Instant::now();
    let (index, n_traj) = collect_visits(&sys, &x0, &states, a.min_visits.max(1), &opts, a.seed)?;
    eprintln!("simulated {n_traj} trajectories in {:.3} s", started.elapsed().as_secs_f64());
    let inference = infer_from_visits(&index, a.order, a.threshold, a.min_visits)?;
    let mut out = trajectory_report(&inference, a.alpha, a.out.as_deref(), None)?;
    let inferred = &inference.report.system;
    let di = distance_intensity(&sys, inferred, &states)?.with_label(format!("simplex:{}", a.order));
    for line in distance_lines(&di).lines() {
        writeln!(out, "# {line}").unwrap();
    }
    if let Some(t) = a.tv_t {
        if inferred.is_empty() {
            return Err(CliError::usage("inferred network is empty; cannot simulate it"));
        }
        let tv = distance_tv(&sys, inferred, &x0, &x0, t, &states, a.tv_realizations, a.seed)?
            .with_label(format!("simplex:{}", a.order));
        for line in distance_lines(&tv).lines() {
            writeln!(out, "# {line}").unwrap();
        }
    }
    Ok(out)
}
