use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use pauli_estimation::{Quantity, SchemeSelection, Slice};

#[derive(Debug, Parser)]
#[command(
    name = "pauli-est",
    version,
    about = "Pauli channel estimation: exact errors, entanglement advantage, Monte Carlo"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Expected quadratic error of one or both schemes.
    ExactError(ExactErrorArgs),
    /// Entanglement advantage at equal qubit count or equal channel uses.
    Delta(DeltaArgs),
    /// Tabulate a closed-form quantity over a simplex lattice.
    Sweep(SweepArgs),
    /// Monte Carlo estimation runs checked against the closed forms.
    Simulate(SimulateArgs),
    /// Lattice search for the largest scaled advantage.
    Maxima(MaximaArgs),
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::ExactError(_) => "exact-error",
            Command::Delta(_) => "delta",
            Command::Sweep(_) => "sweep",
            Command::Simulate(_) => "simulate",
            Command::Maxima(_) => "maxima",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Write data here instead of standard output.
    #[arg(short, long)]
    pub output: Option<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeArg {
    Separable,
    Entangled,
    Both,
}

impl From<SchemeArg> for SchemeSelection {
    fn from(s: SchemeArg) -> Self {
        match s {
            SchemeArg::Separable => SchemeSelection::Separable,
            SchemeArg::Entangled => SchemeSelection::Entangled,
            SchemeArg::Both => SchemeSelection::Both,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum QuantityArg {
    SeparableError,
    EntangledError,
    DeltaQubits,
    DeltaUses,
}

impl From<QuantityArg> for Quantity {
    fn from(q: QuantityArg) -> Self {
        match q {
            QuantityArg::SeparableError => Quantity::SeparableError,
            QuantityArg::EntangledError => Quantity::EntangledError,
            QuantityArg::DeltaQubits => Quantity::DeltaQubits,
            QuantityArg::DeltaUses => Quantity::DeltaUses,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Qubits,
    Uses,
}

/// Channel parameters as a comma-separated triple.
#[derive(Debug, Args)]
pub struct ParamsArg {
    /// Error probabilities p1,p2,p3.
    #[arg(long = "p", value_name = "P1,P2,P3", value_parser = parse_triple, allow_hyphen_values = true)]
    pub p: [f64; 3],
}

/// Resource flags. Which combinations make sense depends on the command.
#[derive(Debug, Args)]
pub struct ResourceArgs {
    /// Total qubits N shared as M = N/3 per state and N' = N/2 ebits.
    #[arg(long, conflicts_with = "uses")]
    pub qubits: Option<u64>,
    /// Channel uses K shared as M = K/3 per state and N' = K ebits.
    #[arg(long)]
    pub uses: Option<u64>,
    /// Qubits per reference state M (separable scheme only).
    #[arg(long)]
    pub per_state: Option<u64>,
    /// Ebits N' (entangled scheme only).
    #[arg(long)]
    pub ebits: Option<u64>,
}

#[derive(Debug, Args)]
pub struct ExactErrorArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    pub scheme: SchemeArg,
    #[command(flatten)]
    pub resource: ResourceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct DeltaArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    /// Compare at N total qubits.
    #[arg(long, conflicts_with = "uses", required_unless_present = "uses")]
    pub qubits: Option<u64>,
    /// Compare at K channel uses.
    #[arg(long)]
    pub uses: Option<u64>,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[arg(long, value_enum, default_value_t = QuantityArg::DeltaQubits)]
    pub quantity: QuantityArg,
    /// Emit the budget-independent value (e.g. N·Δ).
    #[arg(long)]
    pub scaled: bool,
    /// `full` or `p2=<value>`.
    #[arg(long, value_parser = parse_slice, default_value = "full")]
    pub slice: Slice,
    #[arg(long, default_value_t = 100)]
    pub grid_steps: u64,
    #[command(flatten)]
    pub resource: ResourceArgs,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub params: ParamsArg,
    #[arg(long, conflicts_with = "uses", required_unless_present = "uses")]
    pub qubits: Option<u64>,
    #[arg(long)]
    pub uses: Option<u64>,
    #[arg(long, value_enum, default_value_t = SchemeArg::Both)]
    pub scheme: SchemeArg,
    #[arg(long, default_value_t = 10_000)]
    pub trials: u64,
    /// Master seed; trial seeds are derived from it.
    #[arg(long)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Args)]
pub struct MaximaArgs {
    /// `full` or `p2=<value>`.
    #[arg(long, value_parser = parse_slice, default_value = "full")]
    pub slice: Slice,
    #[arg(long, default_value_t = 1000)]
    pub grid_steps: u64,
    /// Maximize N·Δ (qubits) or K·Δ̃ (uses).
    #[arg(long, value_enum, default_value_t = ModeArg::Qubits)]
    pub mode: ModeArg,
    #[command(flatten)]
    pub output: OutputArgs,
}

fn parse_triple(s: &str) -> Result<[f64; 3], String> {
    let parts: Vec<&str> = s.split(',').map(str::trim).collect();
    let [a, b, c] = parts.as_slice() else {
        return Err(format!("expected three comma-separated values, got {}", parts.len()));
    };
    let num = |x: &str| x.parse::<f64>().map_err(|e| format!("invalid number {x:?}: {e}"));
    Ok([num(a)?, num(b)?, num(c)?])
}

fn parse_slice(s: &str) -> Result<Slice, String> {
    if s == "full" {
        return Ok(Slice::FullSimplex);
    }
    let value = s
        .strip_prefix("p2=")
        .ok_or_else(|| format!("expected `full` or `p2=<value>`, got {s:?}"))?;
    let p2: f64 = value.parse().map_err(|e| format!("invalid p2 {value:?}: {e}"))?;
    let slice = if p2 == 0.0 {
        Slice::FixedP2Zero
    } else {
        Slice::Custom(p2)
    };
    slice.validate().map_err(|e| e.to_string())?;
    Ok(slice)
}
