use qsynth::circuit::Metrics;
use qsynth::pipeline::Embedding;
use serde::Serialize;
use std::fmt;
use std::fs;
use std::io::Write;
use std::path::Path;

/// Bumped whenever a report field changes meaning or disappears.
pub const SCHEMA_VERSION: u32 = 1;

pub const EXIT_INTERNAL: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INPUT: u8 = 3;
pub const EXIT_SYNTHESIS: u8 = 4;
pub const EXIT_TIMEOUT: u8 = 5;
pub const EXIT_VERIFICATION_FAILED: u8 = 6;
pub const EXIT_BENCH_CELLS_FAILED: u8 = 7;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Io(String),
    /// Malformed PLA, distribution or QASM input.
    Input(qsynth::Error),
    Synthesis(qsynth::Error),
    Timeout(f64),
    VerificationFailed(String),
    BenchCellsFailed(usize),
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Io(_) | CliError::Input(_) => EXIT_INPUT,
            CliError::Synthesis(_) => EXIT_SYNTHESIS,
            CliError::Timeout(_) => EXIT_TIMEOUT,
            CliError::VerificationFailed(_) => EXIT_VERIFICATION_FAILED,
            CliError::BenchCellsFailed(_) => EXIT_BENCH_CELLS_FAILED,
            CliError::Internal(_) => EXIT_INTERNAL,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Internal(m) => f.write_str(m),
            CliError::Input(e) => write!(f, "bad input: {e}"),
            CliError::Synthesis(e) => write!(f, "synthesis failed: {e}"),
            CliError::Timeout(s) => write!(f, "timed out after {s} s"),
            CliError::VerificationFailed(m) => write!(f, "verification failed: {m}"),
            CliError::BenchCellsFailed(n) => write!(f, "{n} bench cell(s) did not finish ok"),
        }
    }
}

impl From<qsynth::Error> for CliError {
    fn from(e: qsynth::Error) -> Self {
        use qsynth::Error as E;
        match e {
            E::Pla(_) | E::Pmf(_) | E::Qasm(_) => CliError::Input(e),
            E::UnknownMethod(m) => CliError::Usage(format!("unknown method '{m}'")),
            E::Optimize(qsynth::optimize::OptimizeError::UnknownPass(p)) => {
                CliError::Usage(format!("unknown pass '{p}'"))
            }
            E::WrongInput { .. } => CliError::Usage(e.to_string()),
            other => CliError::Synthesis(other),
        }
    }
}

pub fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Io(format!("{}: {e}", path.display()))
}

pub fn read_file(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

pub fn write_file(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| io_error(path, e))
}

/// Writes to `path`, or to stdout when there is none.
pub fn emit(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => write_file(p, text),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes()).map_err(|e| CliError::Io(format!("stdout: {e}")))
        }
    }
}

/// Metrics sidecar written next to each synthesized circuit.
#[derive(Debug, Clone, Serialize)]
pub struct SynthReport {
    pub schema_version: u32,
    pub input: String,
    pub method: String,
    pub gateset: &'static str,
    pub passes: Vec<String>,
    pub qubits: usize,
    pub gate_count: usize,
    pub complexity: usize,
    pub depth: usize,
    pub parameterized_gate_count: usize,
    /// Absent when timing is disabled.
    pub synth_time_us: Option<u64>,
    pub embedding: Option<Embedding>,
    pub fallback_rows: usize,
}

impl SynthReport {
    pub fn with_metrics(mut self, m: Metrics) -> Self {
        self.qubits = m.qubits;
        self.gate_count = m.gate_count;
        self.complexity = m.complexity;
        self.depth = m.depth;
        self.parameterized_gate_count = m.parameterized_gate_count;
        self
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("plain data serializes");
        s.push('\n');
        s
    }

    pub fn to_csv(&self) -> Result<String, CliError> {
        let row = SynthCsvRow {
            schema_version: self.schema_version,
            input: &self.input,
            method: &self.method,
            gateset: self.gateset,
            passes: self.passes.join(","),
            qubits: self.qubits,
            gate_count: self.gate_count,
            complexity: self.complexity,
            depth: self.depth,
            parameterized_gate_count: self.parameterized_gate_count,
            synth_time_us: self.synth_time_us,
        };
        to_csv(std::iter::once(row))
    }
}

#[derive(Serialize)]
struct SynthCsvRow<'a> {
    schema_version: u32,
    input: &'a str,
    method: &'a str,
    gateset: &'a str,
    passes: String,
    qubits: usize,
    gate_count: usize,
    complexity: usize,
    depth: usize,
    parameterized_gate_count: usize,
    synth_time_us: Option<u64>,
}

pub fn to_csv<T: Serialize>(rows: impl IntoIterator<Item = T>) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    for r in rows {
        w.serialize(r).map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Internal(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::Internal(format!("csv: {e}")))
}

/// Expansion cap, overridable through `QSYNTH_MAX_ROWS`.
pub fn max_rows() -> Result<u64, CliError> {
    match std::env::var("QSYNTH_MAX_ROWS") {
        Ok(v) => v
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&n| n > 0)
            .ok_or_else(|| CliError::Usage(format!("QSYNTH_MAX_ROWS must be a positive integer, got '{v}'"))),
        Err(_) => Ok(qsynth::funcprep::DEFAULT_MAX_ROWS),
    }
}
