mod bench;
mod commands;
mod report;

use clap::{Args, Parser, Subcommand, ValueEnum};
use std::path::PathBuf;
use std::process::ExitCode;

/// Compile PLA tables and probability tables into quantum circuits.
#[derive(Debug, Parser)]
#[command(name = "qsynth", version)]
struct Cli {
    /// Log verbosity; repeat for more detail.
    #[arg(short, long, action = clap::ArgAction::Count, global = true)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Synthesize a circuit and write OpenQASM plus a metrics sidecar.
    Synth(SynthArgs),
    /// Check a circuit against the table or distribution it came from.
    Verify(VerifyArgs),
    /// Run a manifest of benchmark cells.
    Bench(BenchArgs),
    /// Grover search over a single-output predicate.
    Grover(GroverArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum GateSetArg {
    Natural,
    Uniform,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ReportFormat {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum OntoArg {
    /// Unassigned inputs take unused outputs in ascending order.
    RandomFill,
    /// Closest unused output by Hamming distance.
    HammingMin,
}

/// Where the function or distribution comes from.
#[derive(Debug, Clone, Args)]
pub struct SourceArgs {
    /// Synthesis method: esop, tbs, tbs-rm, basis, angle, dense-angle, improved-angle, amplitude.
    #[arg(long, short)]
    pub method: String,
    /// `.pla` file, or a distribution file for amplitude encoding.
    pub input: Option<PathBuf>,
    /// Named distribution for amplitude encoding (uniform, binomial, binomial-wide, triangle, bimodal, arbitrary).
    #[arg(long, conflicts_with = "input")]
    pub dist: Option<String>,
    /// Qubit count for named distributions; pads distribution files.
    #[arg(long)]
    pub qubits: Option<usize>,
    /// Read distribution files as amplitudes rather than probabilities.
    #[arg(long)]
    pub amplitudes: bool,
    /// Comma-separated passes: double-x, mcx-ladder, toffoli-5, graycode, sym-dup, sym-mirror.
    #[arg(long, value_delimiter = ',')]
    pub opt: Vec<String>,
    #[arg(long, value_enum, default_value = "random-fill")]
    pub onto: OntoArg,
    /// Seed for shuffled onto completion and for sampling.
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Wall-clock limit in seconds.
    #[arg(long, default_value_t = 60.0)]
    pub timeout: f64,
}

#[derive(Debug, Args)]
struct SynthArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[arg(long, value_enum, default_value = "natural")]
    gateset: GateSetArg,
    /// QASM output path; the sidecar goes next to it. Without it, QASM goes to stdout.
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "json")]
    report: ReportFormat,
    /// Leave timings out of reports so identical runs give identical files.
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct VerifyArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Verify this QASM file instead of a fresh synthesis.
    #[arg(long)]
    circuit: Option<PathBuf>,
    /// Shots for distribution checks.
    #[arg(long, default_value_t = 100_000)]
    shots: u64,
    /// Report path; stdout otherwise.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct BenchArgs {
    /// TOML manifest of cells.
    manifest: PathBuf,
    /// Worker threads; defaults to the manifest value or 1.
    #[arg(long)]
    jobs: Option<usize>,
    /// Per-cell limit in seconds; defaults to the manifest value or 60.
    #[arg(long)]
    timeout: Option<f64>,
    #[arg(long, value_enum, default_value = "csv")]
    report: ReportFormat,
    #[arg(long, short)]
    out: Option<PathBuf>,
    #[arg(long)]
    no_timing: bool,
}

#[derive(Debug, Args)]
struct GroverArgs {
    /// Single-output `.pla` predicate.
    #[arg(long, conflicts_with_all = ["card", "suit", "value"])]
    predicate: Option<PathBuf>,
    /// One card, as `suit:value`, e.g. `diamonds:10`.
    #[arg(long)]
    card: Option<String>,
    /// Every encoding of a suit.
    #[arg(long)]
    suit: Option<String>,
    /// A card value (1 to 13) in any suit.
    #[arg(long)]
    value: Option<u8>,
    #[arg(long, short = 'k', default_value_t = 1)]
    iterations: usize,
    #[arg(long, default_value_t = 1024)]
    shots: u64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Sweep `k = 0..=K` and print CSV instead of one run.
    #[arg(long, value_name = "K")]
    sweep: Option<usize>,
    /// Write the circuit as QASM (single run) or the sweep CSV here.
    #[arg(long, short)]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        2 => "debug",
        _ => "trace",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    let result = match cli.command {
        Command::Synth(a) => commands::synth(&a.source, a.gateset, a.out.as_deref(), a.report, a.no_timing),
        Command::Verify(a) => commands::verify(&a.source, a.circuit.as_deref(), a.shots, a.out.as_deref()),
        Command::Bench(a) => bench::run(&a.manifest, a.jobs, a.timeout, a.report, a.out.as_deref(), a.no_timing),
        Command::Grover(a) => commands::grover(&commands::GroverRequest {
            predicate: a.predicate,
            card: a.card,
            suit: a.suit,
            value: a.value,
            iterations: a.iterations,
            shots: a.shots,
            seed: a.seed,
            sweep: a.sweep,
            out: a.out,
        }),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
