//! Argument definitions and subcommand runners.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;
use sre_purity::bench::{
    complexity_row, sweep_point, theta_grid, ComplexityMethod, ComplexityRow, SweepConfig,
    SweepResult,
};
use sre_purity::oracle::sre;
use sre_purity::pauli::{PauliIndex, PauliString};
use sre_purity::{
    run_estimation, EstimateReport, EstimationRequest, Marginal, PreparationMethod, ShotMode,
};

use crate::error::{CliError, CliResult};
use crate::output::{emit, to_csv, to_json, Format, Meta};
use crate::state_spec::StateSpec;
use crate::verify::{run_suite, Fault, Suite, VerifyRow};

#[derive(Debug, Parser)]
#[command(
    name = "sre-purity",
    version,
    about = "Stabilizer Rényi entropy through purity estimation"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Exact A_alpha and M_alpha of a state.
    Oracle(OracleArgs),
    /// One swap-test estimate of A_alpha and M_alpha.
    Estimate(EstimateArgs),
    /// Estimates across a grid of single-qubit angles.
    Sweep(SweepArgs),
    /// Exact identity checks; exits 4 if any fails.
    Verify(VerifyArgs),
    /// Empirical error of each estimator at its prescribed copy budget.
    Complexity(ComplexityArgs),
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Output file; stdout when omitted.
    #[arg(long)]
    pub out: Option<PathBuf>,
    #[arg(long, value_enum)]
    pub format: Option<Format>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodArg {
    Exact,
    Coherent,
    Incoherent,
}

impl From<MethodArg> for PreparationMethod {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Exact => PreparationMethod::ExactMixture,
            MethodArg::Coherent => PreparationMethod::Coherent,
            MethodArg::Incoherent => PreparationMethod::Incoherent,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MarginalArg {
    Register,
    Ancilla,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Sampled,
    Exact,
    FullCircuit,
}

fn parse_state(s: &str) -> Result<StateSpec, String> {
    s.parse().map_err(|e: CliError| e.to_string())
}

fn parse_unit(s: &str) -> Result<f64, String> {
    let v: f64 = s.parse().map_err(|_| format!("'{s}' is not a number"))?;
    if v > 0.0 && v <= 1.0 {
        Ok(v)
    } else {
        Err(format!("{v} is outside (0, 1]"))
    }
}

fn parse_alpha(s: &str) -> Result<usize, String> {
    let v: usize = s
        .parse()
        .map_err(|_| format!("'{s}' is not a positive integer"))?;
    if v == 0 {
        return Err("alpha must be at least 1".into());
    }
    Ok(v)
}

fn parse_complexity_method(s: &str) -> Result<ComplexityMethod, String> {
    s.parse().map_err(|e: sre_purity::Error| e.to_string())
}

/// `start:stop:count` in radians.
#[derive(Clone, Copy, Debug, PartialEq, Serialize)]
pub struct ThetaGrid {
    pub start: f64,
    pub stop: f64,
    pub count: usize,
}

impl std::str::FromStr for ThetaGrid {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        let parts: Vec<&str> = s.split(':').collect();
        if parts.len() != 3 {
            return Err(format!("theta grid '{s}' must be start:stop:count"));
        }
        let num = |p: &str| -> Result<f64, String> {
            p.trim()
                .parse::<f64>()
                .ok()
                .filter(|v| v.is_finite())
                .ok_or_else(|| format!("'{p}' is not a finite angle in radians"))
        };
        let count: usize = parts[2]
            .trim()
            .parse()
            .map_err(|_| format!("'{}' is not a point count", parts[2]))?;
        if count == 0 {
            return Err("theta grid needs at least one point".into());
        }
        Ok(ThetaGrid {
            start: num(parts[0])?,
            stop: num(parts[1])?,
            count,
        })
    }
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[arg(long, value_parser = parse_state)]
    pub state: StateSpec,
    #[arg(long, default_value_t = 2, value_parser = parse_alpha)]
    pub alpha: usize,
    /// Include every Pauli string's probability d⁻¹⟨P⟩², in canonical index order.
    #[arg(long)]
    pub distribution: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct EstimateArgs {
    #[arg(long, value_parser = parse_state)]
    pub state: StateSpec,
    #[arg(long, default_value_t = 2, value_parser = parse_alpha)]
    pub alpha: usize,
    #[arg(long, default_value_t = 0.05, value_parser = parse_unit)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_unit)]
    pub delta: f64,
    #[arg(long, value_enum, default_value_t = MethodArg::Coherent)]
    pub method: MethodArg,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Which part of the coherent preparation feeds the swap test.
    #[arg(long, value_enum, default_value_t = MarginalArg::Register)]
    pub marginal: MarginalArg,
    #[arg(long, value_enum, default_value_t = ModeArg::Sampled)]
    pub mode: ModeArg,
    /// Override the budgeted number of swap-test shots.
    #[arg(long)]
    pub shots: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, alias = "alpha", value_delimiter = ',', default_values_t = vec![2, 3, 5, 7], value_parser = parse_alpha)]
    pub alphas: Vec<usize>,
    #[arg(long, default_value = "0:1.5707963267948966:9")]
    pub theta_grid: ThetaGrid,
    #[arg(long, default_value_t = 0.05, value_parser = parse_unit)]
    pub eps: f64,
    #[arg(long, default_value_t = 0.1, value_parser = parse_unit)]
    pub delta: f64,
    /// First seed; seeds run from here upward.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Number of seeds per grid point.
    #[arg(long, default_value_t = 10)]
    pub seeds: u64,
    #[arg(long, value_enum, default_value_t = MethodArg::Coherent)]
    pub method: MethodArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    #[arg(long, value_enum, default_value_t = Suite::All)]
    pub suite: Suite,
    /// Haar-random states per qubit count.
    #[arg(long, default_value_t = 10)]
    pub states: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, value_enum, hide = true)]
    pub inject_fault: Option<Fault>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct ComplexityArgs {
    #[arg(long, value_parser = parse_state, default_value = "haar:2:0")]
    pub state: StateSpec,
    #[arg(long, alias = "alpha", value_delimiter = ',', default_values_t = vec![2], value_parser = parse_alpha)]
    pub alphas: Vec<usize>,
    #[arg(long, value_delimiter = ',', default_values_t = vec![0.1, 0.05], value_parser = parse_unit)]
    pub eps: Vec<f64>,
    #[arg(long, default_value_t = 0.1, value_parser = parse_unit)]
    pub delta: f64,
    #[arg(
        long,
        value_delimiter = ',',
        default_values_t = ComplexityMethod::ALL.to_vec(),
        value_parser = parse_complexity_method
    )]
    pub methods: Vec<ComplexityMethod>,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Repetitions per row for the RMSE.
    #[arg(long, default_value_t = 50)]
    pub seeds: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// What a command produced: its rendered text and whether every check passed.
pub struct Rendered {
    pub text: String,
    pub summary: Option<String>,
    pub verified: bool,
}

impl Rendered {
    fn plain(text: String) -> Self {
        Rendered {
            text,
            summary: None,
            verified: true,
        }
    }
}

#[derive(Serialize)]
struct OracleConfig<'a> {
    state: String,
    alpha: usize,
    distribution: bool,
    format: &'a Format,
}

#[derive(Serialize)]
struct DistributionEntry {
    index: u64,
    label: String,
    probability: f64,
}

#[derive(Serialize)]
struct OracleRecord {
    state: String,
    num_qubits: usize,
    alpha: usize,
    a_alpha: f64,
    m_alpha: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    characteristic_distribution: Option<Vec<DistributionEntry>>,
}

#[derive(Serialize)]
struct OracleRow {
    state: String,
    alpha: usize,
    a_alpha: f64,
    m_alpha: Option<f64>,
}

pub fn cmd_oracle(args: &OracleArgs) -> CliResult<Rendered> {
    let format = args.output.format.unwrap_or(Format::Json);
    let psi = args.state.resolve()?;
    let value = sre(&psi, args.alpha)?;
    let distribution = if args.distribution {
        let dist = sre_purity::oracle::characteristic_distribution(&psi)?;
        let n = psi.num_qubits();
        Some(
            dist.probs()
                .iter()
                .enumerate()
                .map(|(j, &p)| {
                    let label = PauliString::from_index(n, PauliIndex::new(n, j as u64)?)?.label();
                    Ok(DistributionEntry {
                        index: j as u64,
                        label,
                        probability: p,
                    })
                })
                .collect::<Result<Vec<_>, sre_purity::Error>>()?,
        )
    } else {
        None
    };
    let config = OracleConfig {
        state: args.state.to_string(),
        alpha: args.alpha,
        distribution: args.distribution,
        format: &format,
    };
    let meta = Meta::new("oracle", 0, &config)?;
    let text = match format {
        Format::Json => to_json(
            &meta,
            &config,
            &OracleRecord {
                state: args.state.to_string(),
                num_qubits: psi.num_qubits(),
                alpha: args.alpha,
                a_alpha: value.a_alpha,
                m_alpha: value.m_alpha,
                characteristic_distribution: distribution,
            },
        )?,
        Format::Csv => to_csv(
            &meta,
            &[],
            &[OracleRow {
                state: args.state.to_string(),
                alpha: args.alpha,
                a_alpha: value.a_alpha,
                m_alpha: value.m_alpha,
            }],
        )?,
    };
    Ok(Rendered::plain(text))
}

#[derive(Serialize)]
struct EstimateConfig<'a> {
    state: String,
    alpha: usize,
    epsilon: f64,
    delta: f64,
    method: PreparationMethod,
    seed: u64,
    marginal: Marginal,
    mode: ShotMode,
    shots: Option<u64>,
    format: &'a Format,
}

#[derive(Serialize)]
struct EstimateRow {
    state: String,
    alpha: usize,
    method: PreparationMethod,
    marginal: Marginal,
    mode: ShotMode,
    gamma_hat: f64,
    gamma_stderr: f64,
    a_hat: f64,
    a_stderr: f64,
    m_hat: Option<f64>,
    shots_used: u64,
    copies_used: u64,
    budget_copies: u64,
    budget_shots: u64,
    seed: u64,
}

impl EstimateRow {
    fn new(state: String, r: &EstimateReport) -> Self {
        EstimateRow {
            state,
            alpha: r.alpha,
            method: r.method,
            marginal: r.marginal,
            mode: r.mode,
            gamma_hat: r.gamma_hat,
            gamma_stderr: r.gamma_stderr,
            a_hat: r.a_hat,
            a_stderr: r.a_stderr,
            m_hat: r.m_hat,
            shots_used: r.shots_used,
            copies_used: r.copies_used,
            budget_copies: r.budget.copies_of_psi,
            budget_shots: r.budget.swap_shots,
            seed: r.seed,
        }
    }
}

pub fn cmd_estimate(args: &EstimateArgs) -> CliResult<Rendered> {
    let format = args.output.format.unwrap_or(Format::Json);
    let psi = args.state.resolve()?;
    let marginal = match args.marginal {
        MarginalArg::Register => Marginal::Register,
        MarginalArg::Ancilla => Marginal::Ancilla,
    };
    let mode = match args.mode {
        ModeArg::Sampled => ShotMode::Sampled,
        ModeArg::Exact => ShotMode::Exact,
        ModeArg::FullCircuit => ShotMode::FullCircuit,
    };
    let mut req = EstimationRequest::new(psi, args.alpha, args.eps, args.delta)
        .method(args.method.into())
        .seed(args.seed)
        .marginal(marginal)
        .mode(mode);
    if let Some(shots) = args.shots {
        req = req.shots(shots);
    }
    let report = run_estimation(&req)?;
    let config = EstimateConfig {
        state: args.state.to_string(),
        alpha: args.alpha,
        epsilon: args.eps,
        delta: args.delta,
        method: req.method,
        seed: args.seed,
        marginal,
        mode,
        shots: args.shots,
        format: &format,
    };
    let meta = Meta::new("estimate", args.seed, &config)?;
    let text = match format {
        Format::Json => to_json(&meta, &config, &report)?,
        Format::Csv => to_csv(
            &meta,
            &[],
            &[EstimateRow::new(args.state.to_string(), &report)],
        )?,
    };
    Ok(Rendered::plain(text))
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Rendered> {
    let format = args.output.format.unwrap_or(Format::Csv);
    let cfg = SweepConfig {
        alphas: args.alphas.clone(),
        thetas: theta_grid(
            args.theta_grid.start,
            args.theta_grid.stop,
            args.theta_grid.count,
        ),
        epsilon: args.eps,
        delta: args.delta,
        seeds: (0..args.seeds).map(|k| args.seed + k).collect(),
        method: args.method.into(),
    };
    // rayon's indexed collect keeps the point order
    let rows = cfg
        .points()
        .par_iter()
        .map(|p| sweep_point(&cfg, p))
        .collect::<Result<Vec<_>, _>>()?;
    let result = SweepResult {
        epsilon: cfg.epsilon,
        delta: cfg.delta,
        rows,
    };
    let within = result.rows.iter().filter(|r| r.within_eps).count();
    let summary = format!(
        "sweep: {within}/{} rows within eps = {}",
        result.rows.len(),
        cfg.epsilon
    );
    let meta = Meta::new("sweep", args.seed, &cfg)?;
    let text = match format {
        Format::Json => to_json(&meta, &cfg, &result)?,
        Format::Csv => to_csv(
            &meta,
            &[
                ("epsilon", cfg.epsilon.to_string()),
                ("delta", cfg.delta.to_string()),
                ("method", cfg.method.to_string()),
                ("state", "theta".into()),
            ],
            &result.rows,
        )?,
    };
    Ok(Rendered {
        text,
        summary: Some(summary),
        verified: true,
    })
}

#[derive(Serialize)]
struct VerifyConfig {
    suite: Suite,
    states: usize,
    seed: u64,
    inject_fault: Option<Fault>,
}

#[derive(Serialize)]
struct VerifyResult<'a> {
    passed: usize,
    failed: usize,
    checks: &'a [VerifyRow],
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Rendered> {
    let format = args.output.format.unwrap_or(Format::Csv);
    let rows = run_suite(args.suite, args.states, args.seed, args.inject_fault)?;
    let failed = rows.iter().filter(|r| !r.pass).count();
    let passed = rows.len() - failed;
    let config = VerifyConfig {
        suite: args.suite,
        states: args.states,
        seed: args.seed,
        inject_fault: args.inject_fault,
    };
    let meta = Meta::new("verify", args.seed, &config)?;
    let text = match format {
        Format::Json => to_json(
            &meta,
            &config,
            &VerifyResult {
                passed,
                failed,
                checks: &rows,
            },
        )?,
        Format::Csv => to_csv(&meta, &[], &rows)?,
    };
    Ok(Rendered {
        text,
        summary: Some(format!("verify: {passed} passed, {failed} failed")),
        verified: failed == 0,
    })
}

#[derive(Serialize)]
struct ComplexityConfig {
    state: String,
    alphas: Vec<usize>,
    epsilons: Vec<f64>,
    delta: f64,
    methods: Vec<ComplexityMethod>,
    seed: u64,
    seeds: u64,
}

const TOMOGRAPHY_NOTE: &str =
    "full state tomography to trace distance omega needs Theta(d/omega^2) copies; not simulated";

pub fn cmd_complexity(args: &ComplexityArgs) -> CliResult<Rendered> {
    let format = args.output.format.unwrap_or(Format::Csv);
    let psi = args.state.resolve()?;
    if psi.num_qubits() > 2 {
        return Err(CliError::Guard(sre_purity::Error::SizeGuard {
            what: "complexity table qubits",
            requested: psi.num_qubits(),
            limit: 2,
        }));
    }
    let seeds: Vec<u64> = (0..args.seeds).map(|k| args.seed + k).collect();
    let mut jobs = Vec::new();
    for &m in &args.methods {
        for &a in &args.alphas {
            for &e in &args.eps {
                jobs.push((m, a, e));
            }
        }
    }
    let rows: Vec<ComplexityRow> = jobs
        .par_iter()
        .map(|&(m, a, e)| complexity_row(m, &psi, a, e, args.delta, &seeds))
        .collect::<Result<_, _>>()?;
    let config = ComplexityConfig {
        state: args.state.to_string(),
        alphas: args.alphas.clone(),
        epsilons: args.eps.clone(),
        delta: args.delta,
        methods: args.methods.clone(),
        seed: args.seed,
        seeds: args.seeds,
    };
    let meta = Meta::new("complexity", args.seed, &config)?;
    let text = match format {
        Format::Json => {
            #[derive(Serialize)]
            struct Table<'a> {
                rows: &'a [ComplexityRow],
                note: &'static str,
            }
            to_json(
                &meta,
                &config,
                &Table {
                    rows: &rows,
                    note: TOMOGRAPHY_NOTE,
                },
            )?
        }
        Format::Csv => to_csv(
            &meta,
            &[
                ("state", args.state.to_string()),
                ("note", TOMOGRAPHY_NOTE.into()),
            ],
            &rows,
        )?,
    };
    Ok(Rendered::plain(text))
}

/// Runs a parsed command and writes its output.
pub fn execute(cli: &Cli) -> CliResult<Rendered> {
    let (rendered, out) = match &cli.command {
        Command::Oracle(a) => (cmd_oracle(a)?, &a.output.out),
        Command::Estimate(a) => (cmd_estimate(a)?, &a.output.out),
        Command::Sweep(a) => (cmd_sweep(a)?, &a.output.out),
        Command::Verify(a) => (cmd_verify(a)?, &a.output.out),
        Command::Complexity(a) => (cmd_complexity(a)?, &a.output.out),
    };
    emit(&rendered.text, out.as_deref())?;
    Ok(rendered)
}
