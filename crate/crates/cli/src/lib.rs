//! Front end for the `gatesplit` command: gate files, command runners and
//! JSON reports.

pub mod gatefile;
pub mod report;

use std::time::Instant;

use gatesplit::approx::approx_separate_in;
use gatesplit::exact::{qubit_structure_check_with, separate_unitary_with, Tolerances as ExactTolerances, Verdict};
use gatesplit::gates;
use gatesplit::generator::{generator_of, UnitaryGate};
use gatesplit::linalg::{NormKind, TensorSpace};
use gatesplit::random::{haar_unitary, random_product_unitary, rng};
use gatesplit::Matrix;
use serde::Serialize;

use gatefile::{digest, GateFile};
use report::{Approx, Check, CommandEcho, Report, Separation, StructureCheck, Tolerances};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_INPUT: u8 = 2;
pub const EXIT_NOT_SEPARABLE: u8 = 3;
pub const EXIT_EPSILON: u8 = 4;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("cannot read {path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Library(#[from] gatesplit::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use gatesplit::Error as E;
        match self {
            CliError::Library(E::NoConvergence { .. } | E::Internal(_)) => EXIT_INTERNAL,
            _ => EXIT_INPUT,
        }
    }
}

/// Options shared by the analysis commands.
#[derive(Debug, Clone)]
pub struct Options {
    pub input: String,
    pub validate: bool,
    pub tolerances: Tolerances,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            schmidt: gatesplit::exact::SCHMIDT_TOL,
            scalar: gatesplit::exact::SCALAR_TOL,
            block: gatesplit::exact::BLOCK_TOL,
            residual: gatesplit::exact::RESIDUAL_TOL,
            unitary: gatesplit::generator::UNITARY_TOL,
        }
    }
}

impl Tolerances {
    fn exact(&self) -> ExactTolerances<f64> {
        ExactTolerances {
            schmidt: self.schmidt,
            scalar: self.scalar,
            block: self.block,
            residual: self.residual,
            ..ExactTolerances::default()
        }
    }
}

/// Serialized report plus the process exit code.
#[derive(Debug)]
pub struct Outcome {
    pub json: String,
    pub exit_code: u8,
}

fn read_input(path: &str) -> Result<String, CliError> {
    let io = |source| CliError::Io { path: path.to_string(), source };
    if path == "-" {
        std::io::read_to_string(std::io::stdin()).map_err(io)
    } else {
        std::fs::read_to_string(path).map_err(io)
    }
}

fn load(opts: &Options) -> Result<UnitaryGate<f64>, CliError> {
    GateFile::parse(&read_input(&opts.input)?)?.to_gate(opts.validate, opts.tolerances.unitary)
}

fn finish<R: Serialize>(
    command: CommandEcho,
    gate: &UnitaryGate<f64>,
    result: R,
    tolerances: Tolerances,
    start: Instant,
    exit_code: u8,
) -> Outcome {
    let report = Report {
        command,
        input_digest: digest(gate),
        result,
        tolerances,
        wall_time_ms: start.elapsed().as_secs_f64() * 1e3,
    };
    let json = serde_json::to_string_pretty(&report).expect("report serializes");
    Outcome { json, exit_code }
}

fn echo(name: &'static str, opts: &Options) -> CommandEcho {
    CommandEcho { name, input: opts.input.clone(), validate: opts.validate, epsilon: None, t: None, norm: None }
}

fn verdict_code(v: Verdict) -> u8 {
    if v == Verdict::Separable {
        EXIT_OK
    } else {
        EXIT_NOT_SEPARABLE
    }
}

/// Schmidt-oracle decision, plus the block-structure check on the principal
/// generator for all-qubit spaces.
pub fn check(opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let gate = load(opts)?;
    let tol = opts.tolerances.exact();
    let oracle = separate_unitary_with(&gate, &tol)?;
    let structure_check = if gate.space().is_qubits() {
        let site = qubit_structure_check_with(&generator_of(&gate)?, &tol)?;
        Some(StructureCheck {
            site: site.map(|k| k + 1),
            verdict: if site.is_some() { "Separable" } else { "Inconclusive" },
        })
    } else {
        None
    };
    let code = verdict_code(oracle.verdict);
    let result = Check { oracle: Separation::from(&oracle), structure_check };
    Ok(finish(echo("check", opts), &gate, result, opts.tolerances, start, code))
}

/// Full factor extraction.
pub fn separate(opts: &Options) -> Result<Outcome, CliError> {
    let start = Instant::now();
    let gate = load(opts)?;
    let res = separate_unitary_with(&gate, &opts.tolerances.exact())?;
    let code = verdict_code(res.verdict);
    Ok(finish(echo("separate", opts), &gate, Separation::from(&res), opts.tolerances, start, code))
}

/// Local approximation with bound, measured distance and optional certificate.
/// Exits with [`EXIT_EPSILON`] when `epsilon` is given and the measured
/// distance is not below it.
pub fn approx(opts: &Options, epsilon: Option<f64>, t: f64, norm: NormKind) -> Result<Outcome, CliError> {
    let start = Instant::now();
    if let Some(e) = epsilon {
        if !(e > 0.0) {
            return Err(CliError::Input(format!("--epsilon must be positive, got {e}")));
        }
    }
    if t == 0.0 || !t.is_finite() {
        return Err(CliError::Input(format!("--t must be finite and non-zero, got {t}")));
    }
    let gate = load(opts)?;
    let res = approx_separate_in(&gate, t, epsilon, norm)?;
    let result = Approx::new(&res, epsilon);
    let code = match result.within_epsilon {
        Some(false) => EXIT_EPSILON,
        _ => EXIT_OK,
    };
    let mut command = echo("approx", opts);
    command.epsilon = epsilon;
    command.t = Some(t);
    command.norm = Some(norm.to_string());
    Ok(finish(command, &gate, result, opts.tolerances, start, code))
}

/// Built-in gate corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateName {
    Cnot,
    Cz,
    Swap,
    Iswap,
    Toffoli,
    RandomProduct,
    RandomUnitary,
}

/// Gate file for a corpus entry. Random entries take a qubit count and seed.
pub fn gate(name: GateName, qubits: Option<usize>, seed: Option<u64>) -> Result<GateFile, CliError> {
    let fixed = |m: Matrix| {
        let space = TensorSpace::qubits_for_size(m.rows()).expect("corpus gates act on qubits");
        GateFile::from_matrix(&m, space.dims())
    };
    let random_args = || -> Result<(TensorSpace, u64), CliError> {
        let n = qubits.ok_or_else(|| CliError::Input("random gates need a qubit count".into()))?;
        let seed = seed.ok_or_else(|| CliError::Input("random gates need a seed".into()))?;
        if n == 0 {
            return Err(CliError::Input("qubit count must be at least 1".into()));
        }
        Ok((TensorSpace::qubits(n)?, seed))
    };
    Ok(match name {
        GateName::Cnot => fixed(gates::cnot()),
        GateName::Cz => fixed(gates::cz()),
        GateName::Swap => fixed(gates::swap()),
        GateName::Iswap => fixed(gates::iswap()),
        GateName::Toffoli => fixed(gates::toffoli()),
        GateName::RandomProduct => {
            let (space, seed) = random_args()?;
            let (m, _) = random_product_unitary::<f64, _>(&mut rng(seed), &space)?;
            GateFile::from_matrix(&m, space.dims())
        }
        GateName::RandomUnitary => {
            let (space, seed) = random_args()?;
            let m: Matrix = haar_unitary(&mut rng(seed), space.total());
            GateFile::from_matrix(&m, space.dims())
        }
    })
}
