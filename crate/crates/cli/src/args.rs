use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use qldpc_bp::bp::Heuristic;
use qldpc_bp::constructions::RowDeletion;

#[derive(Debug, Parser)]
#[command(
    name = "qbp",
    version,
    about = "Belief propagation decoding of sparse quantum stabilizer codes"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Generate a bicycle code; writes the code file and the sparse H matrix next to it.
    Generate(GenerateArgs),
    /// Print parameters, degree distributions and 4-loop census of a code.
    Inspect(InspectArgs),
    /// Decode one syndrome (given directly or from an injected error).
    Decode(DecodeArgs),
    /// Monte Carlo block error rate over one or more depolarizing strengths.
    Simulate(SimulateArgs),
    /// Compare BP beliefs against exact marginals on a small code.
    OracleCheck(OracleArgs),
}

/// Bicycle parameters written as `n,m,w`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BicycleParams {
    pub n: usize,
    pub m: usize,
    pub w: usize,
}

pub fn parse_bicycle(s: &str) -> Result<BicycleParams, String> {
    let parts: Vec<&str> = s.split(',').collect();
    let [n, m, w] = parts[..] else {
        return Err(format!("expected n,m,w, got {s:?}"));
    };
    let num = |t: &str| t.trim().parse::<usize>().map_err(|e| format!("{t:?}: {e}"));
    Ok(BicycleParams {
        n: num(n)?,
        m: num(m)?,
        w: num(w)?,
    })
}

/// A log-spaced sweep written as `lo:hi:steps`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Sweep {
    pub lo: f64,
    pub hi: f64,
    pub steps: usize,
}

pub fn parse_sweep(s: &str) -> Result<Sweep, String> {
    let parts: Vec<&str> = s.split(':').collect();
    let [lo, hi, steps] = parts[..] else {
        return Err(format!("expected lo:hi:steps, got {s:?}"));
    };
    Ok(Sweep {
        lo: lo.trim().parse().map_err(|e| format!("{lo:?}: {e}"))?,
        hi: hi.trim().parse().map_err(|e| format!("{hi:?}: {e}"))?,
        steps: steps
            .trim()
            .parse()
            .map_err(|e| format!("{steps:?}: {e}"))?,
    })
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct CodeSource {
    /// Code file ("n m" header, one Pauli string per check).
    #[arg(long)]
    pub code: Option<PathBuf>,
    /// Built-in code: two_qubit_toy or five_qubit.
    #[arg(long)]
    pub builtin: Option<String>,
    /// Generate a bicycle code on the fly from n,m,w.
    #[arg(long, value_parser = parse_bicycle, value_name = "N,M,W")]
    pub bicycle: Option<BicycleParams>,
}

#[derive(Debug, Args)]
pub struct BicycleOptions {
    /// Seed of the bicycle generator.
    #[arg(long, default_value_t = 0)]
    pub code_seed: u64,
    /// Row deletion strategy: balanced or random.
    #[arg(long, default_value_t = RowDeletion::Balanced)]
    pub deletion: RowDeletion,
}

#[derive(Debug, Args)]
pub struct DecoderOptions {
    #[arg(long, default_value_t = Heuristic::None)]
    pub heuristic: Heuristic,
    #[arg(long, default_value_t = 90)]
    pub max_iter: usize,
    /// Iterations between interventions.
    #[arg(long, default_value_t = 6)]
    pub t_pert: usize,
    /// Perturbation strength.
    #[arg(long, default_value_t = 0.1)]
    pub delta: f64,
}

#[derive(Debug, Args)]
pub struct GenerateArgs {
    #[arg(long, value_parser = parse_bicycle, value_name = "N,M,W")]
    pub bicycle: BicycleParams,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, default_value_t = RowDeletion::Balanced)]
    pub deletion: RowDeletion,
    /// Code file to write; the H matrix goes to the same path with `.h` appended.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
pub struct InspectArgs {
    #[command(flatten)]
    pub source: CodeSource,
    #[command(flatten)]
    pub bicycle: BicycleOptions,
    /// Write the decorated Tanner graph in DOT format.
    #[arg(long)]
    pub dot: Option<PathBuf>,
    /// Maximum number of 4-loops to list individually.
    #[arg(long, default_value_t = 10)]
    pub list_loops: usize,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct SyndromeSource {
    /// Syndrome as a string over {+,-}, one sign per check.
    #[arg(long, allow_hyphen_values = true)]
    pub syndrome: Option<String>,
    /// Pauli string whose syndrome is decoded; the result is also classified.
    #[arg(long)]
    pub error: Option<String>,
}

#[derive(Debug, Args)]
pub struct DecodeArgs {
    #[command(flatten)]
    pub source: CodeSource,
    #[command(flatten)]
    pub bicycle: BicycleOptions,
    #[command(flatten)]
    pub input: SyndromeSource,
    #[arg(long)]
    pub epsilon: f64,
    #[command(flatten)]
    pub decoder: DecoderOptions,
    /// Decoder seed (perturbation draws and freeze order).
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Write per-iteration beliefs as CSV.
    #[arg(long)]
    pub trace: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct EpsilonSource {
    #[arg(long)]
    pub epsilon: Option<f64>,
    /// Log-spaced sweep lo:hi:steps.
    #[arg(long, value_parser = parse_sweep, value_name = "LO:HI:STEPS")]
    pub epsilon_sweep: Option<Sweep>,
}

#[derive(Debug, Args)]
pub struct SimulateArgs {
    #[command(flatten)]
    pub source: CodeSource,
    #[command(flatten)]
    pub bicycle: BicycleOptions,
    #[command(flatten)]
    pub epsilon: EpsilonSource,
    #[arg(long, default_value_t = 1000)]
    pub trials: u64,
    /// Master seed of the per-trial random streams.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    #[command(flatten)]
    pub decoder: DecoderOptions,
    /// Stop a point after this many failures; 0 disables early stopping.
    #[arg(long, default_value_t = 100)]
    pub early_stop: u64,
    #[arg(long, default_value_t = 256)]
    pub batch_size: u64,
    /// Results CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Also write a JSON report.
    #[arg(long)]
    pub json: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct OracleArgs {
    #[command(flatten)]
    pub source: CodeSource,
    #[command(flatten)]
    pub bicycle: BicycleOptions,
    #[arg(long)]
    pub epsilon: f64,
    /// Number of sampled errors whose syndromes are compared.
    #[arg(long, default_value_t = 10)]
    pub trials: u64,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// BP iterations before comparing beliefs.
    #[arg(long, default_value_t = 90)]
    pub max_iter: usize,
    /// Comparison CSV; printed to stdout when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}
