use crate::report::{self, emit, read_file, CliError, SynthReport, SCHEMA_VERSION};
use crate::{GateSetArg, OntoArg, ReportFormat, SourceArgs};
use qsynth::circuit::Circuit;
use qsynth::funcprep::OntoStrategy;
use qsynth::grover::{self, cards, GroverSpec};
use qsynth::optimize::{lower_to_uniform, Pass};
use qsynth::pipeline::{self, Method, PipelineOptions, Source, Synthesis};
use qsynth::pla::{parse_pla, PlaTable};
use qsynth::pmf::{BinMode, Pmf};
use qsynth::qasm::{emit_qasm, parse_qasm, GateSet};
use qsynth::simulate::sample_circuit;
use serde::Serialize;
use std::collections::BTreeMap;
use std::panic::{catch_unwind, AssertUnwindSafe};
use std::path::{Path, PathBuf};
use std::sync::mpsc;
use std::time::{Duration, Instant};

/// Runs `job` on its own thread with a wall-clock limit. The job receives the
/// deadline so long searches can stop themselves; a job still running at the
/// limit is abandoned.
pub fn run_with_timeout<T: Send + 'static>(
    secs: f64,
    job: impl FnOnce(Option<Instant>) -> T + Send + 'static,
) -> Result<T, CliError> {
    if !(secs.is_finite() && secs > 0.0) {
        return Err(CliError::Usage(format!("timeout must be a positive number of seconds, got {secs}")));
    }
    let limit = Duration::from_secs_f64(secs);
    let deadline = Instant::now().checked_add(limit);
    let (tx, rx) = mpsc::channel();
    std::thread::spawn(move || {
        let out = catch_unwind(AssertUnwindSafe(|| job(deadline)));
        let _ = tx.send(out);
    });
    match rx.recv_timeout(limit) {
        Ok(Ok(v)) => Ok(v),
        Ok(Err(panic)) => {
            let msg = panic
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| panic.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_else(|| "unknown panic".into());
            Err(CliError::Internal(format!("synthesis panicked: {msg}")))
        }
        Err(mpsc::RecvTimeoutError::Timeout) => Err(CliError::Timeout(secs)),
        Err(mpsc::RecvTimeoutError::Disconnected) => Err(CliError::Internal("worker vanished".into())),
    }
}

pub fn parse_method(s: &str) -> Result<Method, CliError> {
    s.parse::<Method>().map_err(CliError::from)
}

pub fn parse_passes(names: &[String]) -> Result<Vec<Pass>, CliError> {
    names
        .iter()
        .filter(|s| !s.trim().is_empty())
        .map(|s| s.trim().parse::<Pass>().map_err(|e| CliError::from(qsynth::Error::from(e))))
        .collect()
}

pub fn load_pla(path: &Path) -> Result<PlaTable, CliError> {
    Ok(parse_pla(&read_file(path)?).map_err(qsynth::Error::from)?)
}

/// Distribution from a file or a name, padded to `qubits` when given.
pub fn load_pmf(path: Option<&Path>, name: Option<&str>, qubits: Option<usize>, amplitudes: bool) -> Result<Pmf, CliError> {
    let pmf = match (path, name) {
        (_, Some(name)) => {
            let q = qubits.ok_or_else(|| CliError::Usage("--dist needs --qubits".into()))?;
            Pmf::named(name, q).map_err(qsynth::Error::from)?
        }
        (Some(p), None) => {
            let mode = if amplitudes { BinMode::Amplitudes } else { BinMode::Probabilities };
            let pmf = Pmf::parse(&read_file(p)?, mode).map_err(qsynth::Error::from)?;
            match qubits {
                Some(q) => pmf.padded(q).map_err(qsynth::Error::from)?,
                None => pmf,
            }
        }
        (None, None) => return Err(CliError::Usage("amplitude encoding needs an input file or --dist".into())),
    };
    Ok(pmf)
}

/// Source plus a label for reports.
pub fn load_source(a: &SourceArgs, method: Method) -> Result<(Source, String), CliError> {
    if method.takes_distribution() {
        let pmf = load_pmf(a.input.as_deref(), a.dist.as_deref(), a.qubits, a.amplitudes)?;
        let label = match (&a.dist, &a.input) {
            (Some(d), _) => format!("dist:{d}"),
            (None, Some(p)) => label_of(p),
            (None, None) => unreachable!("load_pmf rejects this"),
        };
        return Ok((Source::Distribution(pmf), label));
    }
    let path = a.input.as_deref().ok_or_else(|| CliError::Usage(format!("method {method} needs a .pla input")))?;
    Ok((Source::Pla(load_pla(path)?), label_of(path)))
}

fn label_of(p: &Path) -> String {
    p.file_name().map(|f| f.to_string_lossy().into_owned()).unwrap_or_else(|| p.display().to_string())
}

pub fn pipeline_options(a: &SourceArgs) -> Result<PipelineOptions, CliError> {
    Ok(PipelineOptions {
        max_rows: report::max_rows()?,
        onto: match a.onto {
            OntoArg::RandomFill => OntoStrategy::RandomFill { seed: None },
            OntoArg::HammingMin => OntoStrategy::HammingMin,
        },
        passes: parse_passes(&a.opt)?,
        ..PipelineOptions::default()
    })
}

fn synthesize_timed(
    source: Source,
    method: Method,
    options: PipelineOptions,
    timeout: f64,
) -> Result<(Synthesis, Duration), CliError> {
    let (result, elapsed) = run_with_timeout(timeout, move |deadline| {
        let start = Instant::now();
        let r = pipeline::synthesize(&source, method, &PipelineOptions { deadline, ..options });
        (r, start.elapsed())
    })?;
    match result {
        Err(qsynth::Error::Tbs(qsynth::tbs::TbsError::Timeout)) => Err(CliError::Timeout(timeout)),
        r => Ok((r?, elapsed)),
    }
}

pub fn emit_circuit(circuit: &Circuit, gateset: GateSetArg) -> Result<(Circuit, String), CliError> {
    let (c, gs) = match gateset {
        GateSetArg::Natural => (circuit.clone(), GateSet::Natural),
        GateSetArg::Uniform => (lower_to_uniform(circuit).map_err(qsynth::Error::from)?, GateSet::Uniform),
    };
    let text = emit_qasm(&c, gs).map_err(qsynth::Error::from)?;
    Ok((c, text))
}

pub fn gateset_name(g: GateSetArg) -> &'static str {
    match g {
        GateSetArg::Natural => "natural",
        GateSetArg::Uniform => "uniform",
    }
}

pub fn synth(
    a: &SourceArgs,
    gateset: GateSetArg,
    out: Option<&Path>,
    format: ReportFormat,
    no_timing: bool,
) -> Result<(), CliError> {
    let method = parse_method(&a.method)?;
    let (source, label) = load_source(a, method)?;
    let options = pipeline_options(a)?;
    let passes = options.passes.iter().map(|p| p.name().to_string()).collect();
    let (syn, elapsed) = synthesize_timed(source, method, options, a.timeout)?;
    let (emitted, qasm) = emit_circuit(&syn.circuit, gateset)?;
    let report = SynthReport {
        schema_version: SCHEMA_VERSION,
        input: label,
        method: method.name().into(),
        gateset: gateset_name(gateset),
        passes,
        qubits: 0,
        gate_count: 0,
        complexity: 0,
        depth: 0,
        parameterized_gate_count: 0,
        synth_time_us: (!no_timing).then(|| elapsed.as_micros() as u64),
        embedding: syn.embedding,
        fallback_rows: syn.fallback_rows.len(),
    }
    .with_metrics(emitted.metrics());
    let (text, ext) = match format {
        ReportFormat::Json => (report.to_json(), "json"),
        ReportFormat::Csv => (report.to_csv()?, "csv"),
    };
    match out {
        Some(path) => {
            report::write_file(path, &qasm)?;
            report::write_file(&path.with_extension(ext), &text)
        }
        None => {
            emit(None, &qasm)?;
            eprint!("{text}");
            Ok(())
        }
    }
}

#[derive(Serialize)]
struct VerifyOutput<'a> {
    schema_version: u32,
    input: String,
    method: &'static str,
    circuit: String,
    #[serde(flatten)]
    report: &'a pipeline::VerifyReport,
}

pub fn verify(a: &SourceArgs, circuit_path: Option<&Path>, shots: u64, out: Option<&Path>) -> Result<(), CliError> {
    let method = parse_method(&a.method)?;
    let (source, label) = load_source(a, method)?;
    let options = pipeline_options(a)?;
    let (circuit, circuit_label) = match circuit_path {
        Some(p) => (parse_qasm(&read_file(p)?).map_err(qsynth::Error::from)?, label_of(p)),
        None => (synthesize_timed(source.clone(), method, options.clone(), a.timeout)?.0.circuit, "synthesized".into()),
    };
    let report = pipeline::verify(&source, method, &circuit, &options, shots, a.seed)?;
    let doc = VerifyOutput { schema_version: SCHEMA_VERSION, input: label, method: method.name(), circuit: circuit_label, report: &report };
    let mut text = serde_json::to_string_pretty(&doc).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    emit(out, &text)?;
    if report.passed {
        Ok(())
    } else {
        let why = report.first_mismatch.clone().unwrap_or_else(|| match report.distribution {
            Some(d) => format!("G-test rejects the sample (G = {}, p = {})", d.g, d.p),
            None => "mismatch".into(),
        });
        Err(CliError::VerificationFailed(why))
    }
}

pub struct GroverRequest {
    pub predicate: Option<PathBuf>,
    pub card: Option<String>,
    pub suit: Option<String>,
    pub value: Option<u8>,
    pub iterations: usize,
    pub shots: u64,
    pub seed: u64,
    pub sweep: Option<usize>,
    pub out: Option<PathBuf>,
}

fn parse_suit(s: &str) -> Result<cards::Suit, CliError> {
    Ok(match s.to_ascii_lowercase().as_str() {
        "clubs" | "c" => cards::Suit::Clubs,
        "hearts" | "h" => cards::Suit::Hearts,
        "diamonds" | "d" => cards::Suit::Diamonds,
        "spades" | "s" => cards::Suit::Spades,
        _ => return Err(CliError::Usage(format!("unknown suit '{s}'"))),
    })
}

fn parse_value(s: &str) -> Result<u8, CliError> {
    let v = match s.to_ascii_lowercase().as_str() {
        "a" | "ace" => 1,
        "j" | "jack" => 11,
        "q" | "queen" => 12,
        "k" | "king" => 13,
        other => other.parse::<u8>().map_err(|_| CliError::Usage(format!("unknown card value '{s}'")))?,
    };
    if (1..=13).contains(&v) {
        Ok(v)
    } else {
        Err(CliError::Usage(format!("card value {v} outside 1..=13")))
    }
}

fn grover_predicate(r: &GroverRequest) -> Result<PlaTable, CliError> {
    match (&r.predicate, &r.card, &r.suit, r.value) {
        (Some(p), None, None, None) => load_pla(p),
        (None, Some(card), None, None) => {
            let (suit, value) = card
                .split_once(':')
                .ok_or_else(|| CliError::Usage(format!("card '{card}' is not suit:value")))?;
            Ok(cards::card(parse_suit(suit)?, parse_value(value)?))
        }
        (None, None, Some(suit), None) => Ok(cards::suit(parse_suit(suit)?)),
        (None, None, None, Some(v)) => Ok(cards::value(parse_value(&v.to_string())?)),
        _ => Err(CliError::Usage("give exactly one of --predicate, --card, --suit, --value".into())),
    }
}

#[derive(Serialize)]
struct GroverRun {
    schema_version: u32,
    n: usize,
    solutions: usize,
    iterations: usize,
    naive_iterations: usize,
    p_analytic: f64,
    p_simulated: f64,
    shots: u64,
    seed: u64,
    hits: u64,
    counts: BTreeMap<String, u64>,
}

pub fn grover(r: &GroverRequest) -> Result<(), CliError> {
    let spec = GroverSpec::new(grover_predicate(r)?, r.iterations, r.shots);
    let grover_err = |e: grover::GroverError| CliError::from(qsynth::Error::from(e));
    if let Some(k_max) = r.sweep {
        let sweep = grover::iteration_sweep(&spec, k_max, r.seed).map_err(grover_err)?;
        if sweep.naive_is_suboptimal() {
            log::warn!(
                "textbook iteration count {} gives p = {:.4}; k = {} gives {:.4}",
                sweep.naive_k,
                grover::success_probability(1 << sweep.n, sweep.solutions, sweep.naive_k),
                sweep.best_k,
                grover::success_probability(1 << sweep.n, sweep.solutions, sweep.best_k),
            );
        }
        return emit(r.out.as_deref(), &sweep.to_csv());
    }
    let solutions = spec.solutions().map_err(grover_err)?;
    let circuit = grover::build_grover(&spec).map_err(grover_err)?;
    let hist = sample_circuit(&circuit, r.shots, r.seed).map_err(qsynth::Error::from)?;
    let hits = solutions.iter().map(|&s| hist.counts()[s as usize]).sum();
    let n_total = 1u64 << spec.n;
    let run = GroverRun {
        schema_version: SCHEMA_VERSION,
        n: spec.n,
        solutions: solutions.len(),
        iterations: spec.iterations,
        naive_iterations: grover::naive_iterations(n_total, solutions.len() as u64),
        p_analytic: grover::success_probability(n_total, solutions.len() as u64, spec.iterations),
        p_simulated: grover::simulated_success(&spec).map_err(grover_err)?,
        shots: r.shots,
        seed: r.seed,
        hits,
        counts: hist.to_map().into_iter().filter(|&(_, c)| c > 0).collect(),
    };
    if let Some(path) = &r.out {
        let (_, qasm) = emit_circuit(&circuit, GateSetArg::Natural)?;
        report::write_file(path, &qasm)?;
    }
    let mut text = serde_json::to_string_pretty(&run).map_err(|e| CliError::Internal(e.to_string()))?;
    text.push('\n');
    emit(None, &text)
}
