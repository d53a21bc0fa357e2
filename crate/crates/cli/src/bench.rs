use crate::commands::{emit_circuit, gateset_name, load_pla, load_pmf, parse_method, parse_passes, run_with_timeout};
use crate::report::{self, emit, read_file, CliError, SCHEMA_VERSION};
use crate::{GateSetArg, ReportFormat};
use qsynth::pipeline::{self, PipelineOptions, Source};
use serde::{Deserialize, Serialize};
use std::collections::VecDeque;
use std::path::{Path, PathBuf};
use std::sync::{mpsc, Arc, Mutex};
use std::time::Instant;

pub const DEFAULT_TIMEOUT_SECS: f64 = 60.0;

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct Manifest {
    jobs: Option<usize>,
    timeout_secs: Option<f64>,
    #[serde(default)]
    cell: Vec<CellSpec>,
    #[serde(default)]
    matrix: Vec<MatrixSpec>,
}

#[derive(Debug, Clone, Deserialize)]
#[serde(deny_unknown_fields)]
struct CellSpec {
    input: Option<PathBuf>,
    dist: Option<String>,
    qubits: Option<usize>,
    method: String,
    #[serde(default)]
    opt: Vec<String>,
    #[serde(default)]
    gateset: Option<String>,
}

/// Every input crossed with every method and pass list.
#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct MatrixSpec {
    inputs: Vec<PathBuf>,
    methods: Vec<String>,
    #[serde(default)]
    opt: Option<Vec<Vec<String>>>,
    #[serde(default)]
    gateset: Option<String>,
}

#[derive(Debug, Clone, Serialize)]
struct CellRow {
    schema_version: u32,
    function: String,
    method: String,
    opt: String,
    gateset: String,
    /// `ok`, `timeout` or `error`.
    status: &'static str,
    qubits: Option<usize>,
    gate_count: Option<usize>,
    complexity: Option<usize>,
    depth: Option<usize>,
    parameterized_gate_count: Option<usize>,
    time_us: Option<u64>,
    error: Option<String>,
}

#[derive(Serialize)]
struct JsonReport<'a> {
    schema_version: u32,
    cells: &'a [CellRow],
}

fn expand(m: Manifest) -> Vec<CellSpec> {
    let mut cells = m.cell;
    for mx in m.matrix {
        let opts = mx.opt.unwrap_or_else(|| vec![Vec::new()]);
        for input in &mx.inputs {
            for method in &mx.methods {
                for opt in &opts {
                    cells.push(CellSpec {
                        input: Some(input.clone()),
                        dist: None,
                        qubits: None,
                        method: method.clone(),
                        opt: opt.clone(),
                        gateset: mx.gateset.clone(),
                    });
                }
            }
        }
    }
    cells
}

fn parse_gateset(s: Option<&str>) -> Result<GateSetArg, CliError> {
    match s.unwrap_or("natural") {
        "natural" => Ok(GateSetArg::Natural),
        "uniform" => Ok(GateSetArg::Uniform),
        other => Err(CliError::Usage(format!("unknown gate set '{other}'"))),
    }
}

fn function_label(c: &CellSpec) -> String {
    match (&c.input, &c.dist) {
        (Some(p), _) => p.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default(),
        (None, Some(d)) => format!("{d}{}", c.qubits.map(|q| format!("-{q}")).unwrap_or_default()),
        (None, None) => String::new(),
    }
}

fn load(c: &CellSpec, base: &Path) -> Result<(Source, pipeline::Method, GateSetArg, PipelineOptions), CliError> {
    let method = parse_method(&c.method)?;
    let input = c.input.as_ref().map(|p| base.join(p));
    let source = if method.takes_distribution() {
        Source::Distribution(load_pmf(input.as_deref(), c.dist.as_deref(), c.qubits, false)?)
    } else {
        let p = input.ok_or_else(|| CliError::Usage(format!("cell for {method} has no input")))?;
        Source::Pla(load_pla(&p)?)
    };
    let options =
        PipelineOptions { max_rows: report::max_rows()?, passes: parse_passes(&c.opt)?, ..PipelineOptions::default() };
    Ok((source, method, parse_gateset(c.gateset.as_deref())?, options))
}

fn run_cell(c: &CellSpec, base: &Path, timeout: f64, no_timing: bool) -> CellRow {
    let mut row = CellRow {
        schema_version: SCHEMA_VERSION,
        function: function_label(c),
        method: c.method.clone(),
        opt: c.opt.join("+"),
        gateset: c.gateset.clone().unwrap_or_else(|| "natural".into()),
        status: "error",
        qubits: None,
        gate_count: None,
        complexity: None,
        depth: None,
        parameterized_gate_count: None,
        time_us: None,
        error: None,
    };
    let (source, method, gateset, options) = match load(c, base) {
        Ok(v) => v,
        Err(e) => {
            row.error = Some(e.to_string());
            return row;
        }
    };
    row.gateset = gateset_name(gateset).into();
    let result = run_with_timeout(timeout, move |deadline| {
        let start = Instant::now();
        let syn = pipeline::synthesize(&source, method, &PipelineOptions { deadline, ..options })?;
        let elapsed = start.elapsed();
        let (emitted, _) = emit_circuit(&syn.circuit, gateset)?;
        Ok::<_, CliError>((emitted.metrics(), elapsed))
    });
    match result.and_then(|r| r) {
        Ok((m, elapsed)) => {
            row.status = "ok";
            row.qubits = Some(m.qubits);
            row.gate_count = Some(m.gate_count);
            row.complexity = Some(m.complexity);
            row.depth = Some(m.depth);
            row.parameterized_gate_count = Some(m.parameterized_gate_count);
            row.time_us = (!no_timing).then(|| elapsed.as_micros() as u64);
        }
        Err(CliError::Timeout(_)) | Err(CliError::Synthesis(qsynth::Error::Tbs(qsynth::tbs::TbsError::Timeout))) => {
            row.status = "timeout";
        }
        Err(e) => row.error = Some(e.to_string()),
    }
    row
}

/// Runs every cell in a bounded worker pool; rows come back in manifest order.
fn run_cells(cells: Vec<CellSpec>, base: &Path, jobs: usize, timeout: f64, no_timing: bool) -> Vec<CellRow> {
    let n = cells.len();
    let queue = Arc::new(Mutex::new(cells.into_iter().enumerate().collect::<VecDeque<_>>()));
    let (tx, rx) = mpsc::channel();
    let workers: Vec<_> = (0..jobs.clamp(1, n.max(1)))
        .map(|_| {
            let queue = Arc::clone(&queue);
            let tx = tx.clone();
            let base = base.to_path_buf();
            std::thread::spawn(move || loop {
                let next = queue.lock().expect("queue lock").pop_front();
                let Some((i, cell)) = next else { break };
                log::info!("cell {i}: {} {}", function_label(&cell), cell.method);
                let _ = tx.send((i, run_cell(&cell, &base, timeout, no_timing)));
            })
        })
        .collect();
    drop(tx);
    let mut rows: Vec<Option<CellRow>> = vec![None; n];
    for (i, row) in rx {
        rows[i] = Some(row);
    }
    for w in workers {
        let _ = w.join();
    }
    rows.into_iter().map(|r| r.expect("every cell reports")).collect()
}

pub fn run(
    manifest_path: &Path,
    jobs: Option<usize>,
    timeout: Option<f64>,
    format: ReportFormat,
    out: Option<&Path>,
    no_timing: bool,
) -> Result<(), CliError> {
    let manifest: Manifest = toml::from_str(&read_file(manifest_path)?)
        .map_err(|e| CliError::Usage(format!("{}: {e}", manifest_path.display())))?;
    let jobs = jobs.or(manifest.jobs).unwrap_or(1);
    let timeout = timeout.or(manifest.timeout_secs).unwrap_or(DEFAULT_TIMEOUT_SECS);
    let base = manifest_path.parent().unwrap_or(Path::new(".")).to_path_buf();
    let cells = expand(manifest);
    if cells.is_empty() {
        return Err(CliError::Usage("manifest has no cells".into()));
    }
    let rows = run_cells(cells, &base, jobs, timeout, no_timing);
    let text = match format {
        ReportFormat::Csv => report::to_csv(rows.iter())?,
        ReportFormat::Json => {
            let mut s = serde_json::to_string_pretty(&JsonReport { schema_version: SCHEMA_VERSION, cells: &rows })
                .map_err(|e| CliError::Internal(e.to_string()))?;
            s.push('\n');
            s
        }
    };
    emit(out, &text)?;
    let failed = rows.iter().filter(|r| r.status != "ok").count();
    if failed == 0 {
        Ok(())
    } else {
        Err(CliError::BenchCellsFailed(failed))
    }
}
