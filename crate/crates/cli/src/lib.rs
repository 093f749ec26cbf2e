//! The `marbles` command-line front end.
//!
//! [`run`] takes the argument list and output streams and returns the
//! process exit code: 0 on success, 1 when a validation or golden check
//! fails, 2 for parse and usage errors.

pub mod input;
pub mod output;

use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use marbles::deutsch::{run_deutsch, BinaryFunction};
use marbles::experiments::{run_scenario, scenario, ScenarioName, ScenarioReport};
use marbles::measurement::{sample_counts, BasisDistribution, SeededSource};
use marbles::{
    evolve, validate, DenseMatrix, MarbleState, MatrixClass, Mode, ProbabilityState, QuantumState,
    Regime, RegimeSystem, State, StateVector, DEFAULT_TOL,
};
use serde::Serialize;
use thiserror::Error;

use crate::input::{parse_graph, parse_state, ParseError};
use crate::output::{complex, number, reals, to_json, vector, StateJson};

#[derive(Debug, Parser)]
#[command(
    name = "marbles",
    version,
    about = "Evolve states over weighted digraphs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Check that a graph's matrix belongs to a regime.
    Validate {
        graph: PathBuf,
        #[arg(long, value_enum)]
        regime: ClassArg,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Evolve a state for a number of clicks and print the result.
    Evolve {
        graph: PathBuf,
        /// State file, or a bitstring such as `01`.
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long, value_enum)]
        regime: RegimeArg,
        /// Print the normalized probability table instead of the state.
        #[arg(long)]
        probabilities: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Skip matrix validation.
        #[arg(long)]
        unchecked: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
    /// Run one of the built-in worked examples against its golden values.
    Scenario {
        #[arg(required_unless_present = "list")]
        name: Option<String>,
        /// List the scenario names.
        #[arg(long, conflicts_with = "name")]
        list: bool,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run Deutsch's algorithm on one of the four oracles.
    Deutsch {
        #[arg(long, value_enum)]
        oracle: OracleArg,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Evolve a state, then measure it repeatedly.
    Sample {
        graph: PathBuf,
        #[arg(long)]
        state: String,
        #[arg(long, default_value_t = 1)]
        steps: usize,
        #[arg(long)]
        shots: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = RegimeArg::Quantum)]
        regime: RegimeArg,
        #[arg(long)]
        unchecked: bool,
        #[arg(long, default_value_t = DEFAULT_TOL)]
        tol: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum ClassArg {
    Det,
    Stoch,
    Quantum,
    Hermitian,
}

impl ClassArg {
    fn class(self) -> MatrixClass {
        match self {
            ClassArg::Det => MatrixClass::Deterministic,
            ClassArg::Stoch => MatrixClass::Stochastic,
            ClassArg::Quantum => MatrixClass::Quantum,
            ClassArg::Hermitian => MatrixClass::Hermitian,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum RegimeArg {
    Det,
    Stoch,
    Quantum,
}

impl RegimeArg {
    fn regime(self) -> Regime {
        match self {
            RegimeArg::Det => Regime::Deterministic,
            RegimeArg::Stoch => Regime::Stochastic,
            RegimeArg::Quantum => Regime::Quantum,
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum OracleArg {
    Const0,
    Const1,
    Id,
    Not,
}

impl OracleArg {
    fn function(self) -> BinaryFunction {
        match self {
            OracleArg::Const0 => BinaryFunction::CONST0,
            OracleArg::Const1 => BinaryFunction::CONST1,
            OracleArg::Id => BinaryFunction::IDENTITY,
            OracleArg::Not => BinaryFunction::NOT,
        }
    }
}

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },
    #[error("{path}: {source}")]
    Parse { path: String, source: ParseError },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Library(#[from] marbles::Error),
    /// Reported already; only the exit code remains.
    #[error("check failed")]
    Failed,
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Failed | CliError::Library(marbles::Error::Validation { .. }) => 1,
            _ => 2,
        }
    }
}

type CliResult<T = ()> = Result<T, CliError>;

/// Runs the command line `args` (program name first) and returns the exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            if e.use_stderr() {
                let _ = write!(err, "{text}");
                return 2;
            }
            let _ = write!(out, "{text}");
            return 0;
        }
    };
    let mut buf = Vec::new();
    let result = dispatch(cli.command, &mut buf, err);
    let _ = out.write_all(&buf);
    match result {
        Ok(()) => 0,
        Err(e) => {
            if !matches!(e, CliError::Failed) {
                let _ = writeln!(err, "error: {e}");
            }
            e.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut Vec<u8>, err: &mut dyn Write) -> CliResult {
    match command {
        Command::Validate { graph, regime, tol } => cmd_validate(&graph, regime.class(), tol, out),
        Command::Evolve {
            graph,
            state,
            steps,
            regime,
            probabilities,
            format,
            unchecked,
            tol,
        } => {
            let (sys, initial) = load(&graph, &state, regime.regime(), unchecked, tol, err)?;
            let last = evolve(&sys, &initial, steps)?;
            let probs = probabilities_of(&last);
            match format {
                Format::Json => {
                    let json = StateJson::new(&last.to_vector(), probs);
                    writeln!(out, "{}", json.to_json()).expect("write to buffer");
                }
                Format::Text if probabilities => {
                    for (i, p) in probs.iter().enumerate() {
                        writeln!(out, "{i} {}", number(*p)).expect("write to buffer");
                    }
                }
                Format::Text => {
                    for (i, z) in last.to_vector().amplitudes().iter().enumerate() {
                        writeln!(out, "{i} {}", complex(*z)).expect("write to buffer");
                    }
                }
            }
            Ok(())
        }
        Command::Scenario { name, list, format } => {
            if list {
                for name in ScenarioName::ALL {
                    writeln!(out, "{name}").expect("write to buffer");
                }
                return Ok(());
            }
            let name: ScenarioName = name.expect("clap requires a name").parse()?;
            let report = run_scenario(&scenario(name))?;
            match format {
                Format::Text => write_scenario(&report, out),
                Format::Json => writeln!(out, "{}", to_json(&ScenarioJson::new(&report)))
                    .expect("write to buffer"),
            }
            if report.passed() {
                Ok(())
            } else {
                Err(CliError::Failed)
            }
        }
        Command::Deutsch { oracle, format } => {
            let f = oracle.function();
            let run = run_deutsch(f);
            match format {
                Format::Text => {
                    writeln!(out, "oracle: {}", f.name()).expect("write to buffer");
                    for (k, phi) in run.snapshots.iter().enumerate() {
                        writeln!(out, "phi{k}: {}", vector(phi)).expect("write to buffer");
                    }
                    let top = reals(run.top_distribution.probabilities());
                    writeln!(out, "top distribution: {top}").expect("write to buffer");
                    writeln!(out, "oracle calls: {}", run.oracle_calls).expect("write to buffer");
                    writeln!(out, "classification: {}", run.classification)
                        .expect("write to buffer");
                }
                Format::Json => {
                    let json = DeutschJson {
                        oracle: f.name(),
                        snapshots: run
                            .snapshots
                            .iter()
                            .map(|s| StateJson::new(s, probabilities_of_vector(s)))
                            .collect(),
                        top_distribution: run.top_distribution.probabilities().to_vec(),
                        oracle_calls: run.oracle_calls,
                        classification: run.classification.to_string(),
                    };
                    writeln!(out, "{}", to_json(&json)).expect("write to buffer");
                }
            }
            Ok(())
        }
        Command::Sample {
            graph,
            state,
            steps,
            shots,
            seed,
            regime,
            unchecked,
            tol,
        } => {
            let (sys, initial) = load(&graph, &state, regime.regime(), unchecked, tol, err)?;
            let last = evolve(&sys, &initial, steps)?;
            let dist = BasisDistribution::from_weights(&last.weights())?;
            let counts = sample_counts(&dist, shots, &mut SeededSource::new(seed));
            writeln!(out, "outcome count frequency").expect("write to buffer");
            for (i, c) in counts.iter().enumerate() {
                let freq = if shots == 0 {
                    0.0
                } else {
                    *c as f64 / shots as f64
                };
                writeln!(out, "{i} {c} {}", number(freq)).expect("write to buffer");
            }
            Ok(())
        }
    }
}

fn read(path: &Path) -> CliResult<String> {
    std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.display().to_string(),
        source,
    })
}

fn read_graph(path: &Path) -> CliResult<DenseMatrix> {
    parse_graph(&read(path)?).map_err(|source| CliError::Parse {
        path: path.display().to_string(),
        source,
    })
}

fn cmd_validate(graph: &Path, class: MatrixClass, tol: f64, out: &mut Vec<u8>) -> CliResult {
    let m = read_graph(graph)?;
    let report = validate(&m, class, tol)?;
    if report.passed() {
        writeln!(out, "PASS {class}").expect("write to buffer");
        return Ok(());
    }
    writeln!(
        out,
        "FAIL {class}: {} violation(s)",
        report.violations.len()
    )
    .expect("write to buffer");
    for v in &report.violations {
        writeln!(out, "{v}").expect("write to buffer");
    }
    Err(CliError::Failed)
}

/// Reads the graph and the initial state, validating the matrix unless
/// `unchecked`.
fn load(
    graph: &Path,
    state: &str,
    regime: Regime,
    unchecked: bool,
    tol: f64,
    err: &mut dyn Write,
) -> CliResult<(RegimeSystem, State)> {
    let m = read_graph(graph)?;
    let mode = if unchecked {
        Mode::Unchecked
    } else {
        Mode::Strict
    };
    if mode == Mode::Strict {
        let report = validate(&m, regime.class(), tol)?;
        if !report.passed() {
            let _ = writeln!(err, "error: matrix is not {}", regime.class());
            for v in &report.violations {
                let _ = writeln!(err, "{v}");
            }
            return Err(CliError::Failed);
        }
    }
    let dim = m.rows();
    let sys = RegimeSystem::with_mode(regime, m, mode, tol)?;
    let (source, text) = if Path::new(state).is_file() {
        (state.to_string(), read(Path::new(state))?)
    } else {
        ("--state".to_string(), state.to_string())
    };
    let v = parse_state(&text, dim).map_err(|source_err| CliError::Parse {
        path: source,
        source: source_err,
    })?;
    Ok((sys, state_for(regime, v, tol)?))
}

fn state_for(regime: Regime, v: StateVector, tol: f64) -> CliResult<State> {
    let real = |v: &StateVector| -> CliResult<Vec<f64>> {
        v.amplitudes()
            .iter()
            .enumerate()
            .map(|(i, z)| {
                if z.im == 0.0 {
                    Ok(z.re)
                } else {
                    Err(CliError::Usage(format!(
                        "state entry {i} must be real in the {} regime",
                        regime.name()
                    )))
                }
            })
            .collect()
    };
    Ok(match regime {
        Regime::Deterministic => {
            let counts = real(&v)?
                .into_iter()
                .enumerate()
                .map(|(i, x)| {
                    if x >= 0.0 && x.fract() == 0.0 && x <= u64::MAX as f64 {
                        Ok(x as u64)
                    } else {
                        Err(CliError::Usage(format!(
                            "state entry {i} = {} is not a marble count",
                            number(x)
                        )))
                    }
                })
                .collect::<CliResult<Vec<u64>>>()?;
            MarbleState::new(counts)?.into()
        }
        Regime::Stochastic => ProbabilityState::new(real(&v)?, tol)?.into(),
        Regime::Quantum => QuantumState::new(v)?.into(),
    })
}

fn probabilities_of(state: &State) -> Vec<f64> {
    let w = state.weights();
    let total: f64 = w.iter().sum();
    if total > 0.0 {
        w.iter().map(|x| x / total).collect()
    } else {
        w
    }
}

fn probabilities_of_vector(v: &StateVector) -> Vec<f64> {
    probabilities_of(&State::from(
        QuantumState::new(v.clone()).expect("non-zero snapshot"),
    ))
}

fn write_scenario(report: &ScenarioReport, out: &mut Vec<u8>) {
    writeln!(out, "scenario: {}", report.name).expect("write to buffer");
    writeln!(out, "regime: {}", report.regime.name()).expect("write to buffer");
    if let Some(last) = report.final_state() {
        writeln!(out, "steps: {}", report.trace.len() - 1).expect("write to buffer");
        writeln!(out, "final state: {}", vector(&last.to_vector())).expect("write to buffer");
    }
    if let Some(table) = &report.probability_table {
        writeln!(out, "probabilities: {}", reals(table)).expect("write to buffer");
    }
    for c in &report.checks {
        let verdict = if c.passed { "PASS" } else { "FAIL" };
        writeln!(
            out,
            "{verdict} {} (max deviation {})",
            c.label,
            number(c.max_deviation)
        )
        .expect("write to buffer");
    }
    let verdict = if report.passed() { "PASS" } else { "FAIL" };
    writeln!(out, "result: {verdict}").expect("write to buffer");
}

#[derive(Serialize)]
struct CheckJson {
    label: &'static str,
    max_deviation: f64,
    passed: bool,
}

#[derive(Serialize)]
struct ScenarioJson {
    name: &'static str,
    regime: &'static str,
    steps: Option<usize>,
    final_state: Option<StateJson>,
    checks: Vec<CheckJson>,
    passed: bool,
}

impl ScenarioJson {
    fn new(report: &ScenarioReport) -> Self {
        Self {
            name: report.name.as_str(),
            regime: report.regime.name(),
            steps: report.final_state().map(|_| report.trace.len() - 1),
            final_state: report
                .final_state()
                .map(|s| StateJson::new(&s.to_vector(), probabilities_of(s))),
            checks: report
                .checks
                .iter()
                .map(|c| CheckJson {
                    label: c.label,
                    max_deviation: c.max_deviation,
                    passed: c.passed,
                })
                .collect(),
            passed: report.passed(),
        }
    }
}

#[derive(Serialize)]
struct DeutschJson {
    oracle: &'static str,
    snapshots: Vec<StateJson>,
    top_distribution: Vec<f64>,
    oracle_calls: usize,
    classification: String,
}
