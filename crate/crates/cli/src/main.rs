use std::io::Write;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use gatesplit::linalg::NormKind;
use gatesplit_cli::report::Tolerances;
use gatesplit_cli::{approx, check, gate, separate, CliError, GateName, Options, Outcome, EXIT_OK};

/// Decide whether a multipartite unitary gate is a tensor product of local
/// gates, extract the factors, or approximate it by local gates.
#[derive(Debug, Parser)]
#[command(name = "gatesplit", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, clap::Args)]
struct Common {
    /// Gate file (JSON), or `-` for stdin.
    input: String,
    /// Skip the unitarity check on input.
    #[arg(long)]
    no_validate: bool,
    /// Schmidt coefficients at or below tol·σ_max count as zero.
    #[arg(long, default_value_t = gatesplit::exact::SCHMIDT_TOL)]
    tol: f64,
    /// Relative tolerance for recognizing multiples of the identity.
    #[arg(long, default_value_t = gatesplit::exact::SCALAR_TOL)]
    scalar_tol: f64,
    /// Block tolerance of the qubit structure check.
    #[arg(long, default_value_t = gatesplit::exact::BLOCK_TOL)]
    block_tol: f64,
    /// Largest reconstruction residual accepted as separable.
    #[arg(long, default_value_t = gatesplit::exact::RESIDUAL_TOL)]
    residual_tol: f64,
    /// Allowed ‖U†U − I‖_o on input.
    #[arg(long, default_value_t = gatesplit::generator::UNITARY_TOL)]
    unitary_tol: f64,
}

impl Common {
    fn options(&self) -> Options {
        Options {
            input: self.input.clone(),
            validate: !self.no_validate,
            tolerances: Tolerances {
                schmidt: self.tol,
                scalar: self.scalar_tol,
                block: self.block_tol,
                residual: self.residual_tol,
                unitary: self.unitary_tol,
            },
        }
    }
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Name {
    Cnot,
    Cz,
    Swap,
    Iswap,
    Toffoli,
    RandomProduct,
    RandomUnitary,
}

impl From<Name> for GateName {
    fn from(n: Name) -> Self {
        match n {
            Name::Cnot => GateName::Cnot,
            Name::Cz => GateName::Cz,
            Name::Swap => GateName::Swap,
            Name::Iswap => GateName::Iswap,
            Name::Toffoli => GateName::Toffoli,
            Name::RandomProduct => GateName::RandomProduct,
            Name::RandomUnitary => GateName::RandomUnitary,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Decide separability (exit 0 separable, 3 not separable).
    Check(Common),
    /// Extract local factors and global phase.
    Separate(Common),
    /// Approximate by local gates (exit 4 when the measured distance is not below ε).
    Approx {
        #[command(flatten)]
        common: Common,
        /// Target distance ε.
        #[arg(long, allow_negative_numbers = true)]
        epsilon: Option<f64>,
        /// Evolution time t in U = exp(i t H).
        #[arg(long, default_value_t = 1.0, allow_negative_numbers = true)]
        t: f64,
        /// Norm for the reported gap and bound: op, fro, trace or schatten:p.
        #[arg(long, default_value = "op")]
        norm: NormKind,
    },
    /// Print a built-in gate as a gate file.
    Gates {
        name: Name,
        /// Qubit count (random gates).
        qubits: Option<usize>,
        /// 64-bit seed (random gates).
        seed: Option<u64>,
    },
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    match cli.command {
        Command::Check(c) => check(&c.options()),
        Command::Separate(c) => separate(&c.options()),
        Command::Approx { common, epsilon, t, norm } => approx(&common.options(), epsilon, t, norm),
        Command::Gates { name, qubits, seed } => {
            let file = gate(name.into(), qubits, seed)?;
            Ok(Outcome { json: serde_json::to_string(&file).expect("gate file serializes"), exit_code: EXIT_OK })
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(out) => {
            // a closed pipe downstream is not an error of ours
            let _ = writeln!(std::io::stdout().lock(), "{}", out.json);
            ExitCode::from(out.exit_code)
        }
        Err(e) => {
            eprintln!("gatesplit: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
