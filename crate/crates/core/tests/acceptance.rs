//! Acceptance gate. Prints one PASS/FAIL line per criterion and exits non-zero
//! when a criterion fails outside the documented gap list.
//!
//! Expected values are computed here from first principles (direct PLA cube
//! evaluation, integer binomials, closed-form Grover angles) rather than
//! through the library routes under test.

mod common;

use common::*;
use qsynth::circuit::{Circuit, Control, Gate, GateKind};
use qsynth::encoding::synth_amplitude;
use qsynth::funcprep::TruthTable;
use qsynth::grover::{self, cards, GroverSpec};
use qsynth::optimize::{decompose_mcx, graycode_optimize, remove_double_x, symmetric_optimize, DecomposeMode, SymmetryKind};
use qsynth::pla::{parse_pla, write_pla};
use qsynth::pmf::Pmf;
use qsynth::qasm::{emit_qasm, parse_qasm, GateSet};
use qsynth::simulate::{calibrate_shots, run_statevector, CalibrationOptions, ReversibleProgram};
use qsynth::stats::{g_statistic_counts, js_divergence, kl_divergence};
use qsynth::tbs::{synth_tbs_basic, synth_tbs_rm, TbsOptions};
use qsynth::{synthesize, Method, PipelineOptions, Source};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use std::f64::consts::PI;
use std::time::{Duration, Instant};

/// Wall-clock budget per benchmark function and method.
const PER_FUNCTION_LIMIT: Duration = Duration::from_secs(60);
const AMPLITUDE_TOL: f64 = 1e-10;
const BINOMIAL_TOL: f64 = 1e-12;
const PASS_TOL: f64 = 1e-9;
const GROVER_TOL: f64 = 1e-9;
const STATS_TOL: f64 = 1e-9;
const ROUNDTRIP_TOL: f64 = 1e-12;
const SUITE_SIZE: usize = 200;
const SUITE_SEED: u64 = 0x5eed_0005;

struct Outcome {
    pass: bool,
    detail: String,
    /// Set when the failure is a documented, environment-bound gap.
    known_gap: Option<&'static str>,
}

impl Outcome {
    fn check(pass: bool, detail: String) -> Self {
        Outcome { pass, detail, known_gap: None }
    }
}

/// `(name, inputs, outputs, ESOP qubits, TBS qubits)` for the twelve functions.
const FUNCTIONS: [(&str, usize, usize, usize, Option<usize>); 12] = [
    ("squar5", 5, 8, 13, Some(9)),
    ("Z9sym", 9, 1, 10, Some(10)),
    ("inc", 7, 9, 16, None),
    ("Z5xp1", 7, 10, 17, Some(10)),
    ("dist", 8, 5, 13, Some(10)),
    ("f51m", 8, 8, 16, Some(8)),
    ("mlp4", 8, 8, 16, None),
    ("clip", 9, 5, 14, Some(11)),
    ("addm4", 9, 8, 17, None),
    ("b11", 8, 31, 39, None),
    ("apex4", 9, 19, 28, None),
    ("ex5", 8, 63, 71, None),
];

fn timed<T>(f: impl FnOnce() -> T) -> (T, Duration) {
    let start = Instant::now();
    let v = f();
    (v, start.elapsed())
}

fn qubit_counts() -> Outcome {
    let corpus = Corpus::locate();
    let mut problems = Vec::new();
    let mut unverifiable = Vec::new();
    let mut checked = 0;
    let mut slowest = Duration::ZERO;
    for (name, n, m, esop_q, tbs_q) in FUNCTIONS {
        let Some(bench) = corpus.load(name) else {
            problems.push(format!("{name}: file missing"));
            continue;
        };
        let t = &bench.table;
        if (t.num_inputs, t.num_outputs) != (n, m) {
            problems.push(format!("{name}: header {}x{} instead of {n}x{m}", t.num_inputs, t.num_outputs));
            continue;
        }
        let (esop, dt) = timed(|| synthesize(&bench.source(), Method::Esop, &PipelineOptions::default()));
        slowest = slowest.max(dt);
        match esop {
            Ok(s) if s.circuit.num_qubits == esop_q && dt < PER_FUNCTION_LIMIT => checked += 1,
            Ok(s) => problems.push(format!("{name}: ESOP {} qubits in {dt:?}", s.circuit.num_qubits)),
            Err(e) => problems.push(format!("{name}: ESOP failed: {e}")),
        }
        let Some(tbs_q) = tbs_q else { continue };
        if bench.stand_in {
            unverifiable.push(name);
            continue;
        }
        let (tbs, dt) = timed(|| synthesize(&bench.source(), Method::Tbs, &PipelineOptions::default()));
        slowest = slowest.max(dt);
        match tbs {
            Ok(s) if s.circuit.num_qubits == tbs_q && dt < PER_FUNCTION_LIMIT => checked += 1,
            Ok(s) => problems.push(format!("{name}: TBS {} qubits in {dt:?}", s.circuit.num_qubits)),
            Err(e) => problems.push(format!("{name}: TBS failed: {e}")),
        }
    }
    let mut detail = format!("{checked} widths exact, slowest {:.1} s", slowest.as_secs_f64());
    if !problems.is_empty() {
        detail += &format!("; {}", problems.join("; "));
        return Outcome::check(false, detail);
    }
    if !unverifiable.is_empty() {
        detail += &format!(
            "; TBS widths for {} need the original benchmark files (set QSYNTH_BENCH_DIR), local copies are stand-ins",
            unverifiable.join(", ")
        );
        return Outcome { pass: false, detail, known_gap: Some("benchmark corpus not distributable") };
    }
    Outcome::check(true, detail)
}

fn functional_correctness() -> Outcome {
    let corpus = Corpus::locate();
    let mut circuits = 0;
    let mut rows = 0u64;
    let mut mismatches = Vec::new();
    let mut skipped = Vec::new();
    for (name, n, m, _, _) in FUNCTIONS {
        if n + m > 16 {
            continue;
        }
        let Some(bench) = corpus.load(name) else {
            mismatches.push(format!("{name}: file missing"));
            continue;
        };
        let f = DirectPla::new(&bench.table);
        for method in [Method::Esop, Method::Tbs, Method::TbsRm] {
            let syn = match synthesize(&bench.source(), method, &PipelineOptions::default()) {
                Ok(s) => s,
                Err(e) => {
                    skipped.push(format!("{name}/{method} ({e})"));
                    continue;
                }
            };
            let prog = ReversibleProgram::compile(&syn.circuit).expect("classical circuit");
            circuits += 1;
            let w = syn.circuit.num_qubits;
            let bad = if method == Method::Esop {
                // Inputs pass through; outputs land on the last m qubits.
                (0..1u64 << n).filter(|&x| {
                    rows += 1;
                    prog.run_value(x << m) != (x << m | f.eval(x))
                }).count()
            } else {
                // Input on the top n bits, the duplicate index in the ancilla;
                // f(x) on the top m bits, the duplicate index in the garbage.
                let (width, embedded) = f.embedded_rows();
                if width != w {
                    mismatches.push(format!("{name}/{method}: width {w}, embedding says {width}"));
                    continue;
                }
                embedded.iter().filter(|&&(input, output)| {
                    rows += 1;
                    prog.run_value(input) != output
                }).count()
            };
            if bad > 0 {
                mismatches.push(format!("{name}/{method}: {bad} rows"));
            }
        }
    }
    let (perm_circuits, perm_bad) = all_three_bit_bijections();
    let pass = mismatches.is_empty() && perm_bad == 0;
    let mut detail = format!(
        "{circuits} benchmark circuits, {rows} rows, 0 mismatches expected, {} found; {perm_circuits} bijection circuits, {perm_bad} wrong",
        mismatches.len()
    );
    if !mismatches.is_empty() {
        detail += &format!(" ({})", mismatches.join("; "));
    }
    if !skipped.is_empty() {
        detail += &format!("; not synthesized: {}", skipped.join(", "));
    }
    Outcome::check(pass, detail)
}

/// Both TBS variants on every permutation of `0..8`.
fn all_three_bit_bijections() -> (usize, usize) {
    let mut f: Vec<u64> = (0..8).collect();
    let (mut total, mut bad) = (0, 0);
    loop {
        let table = TruthTable::from_fn(3, 3, &f).expect("valid permutation");
        for synth in [synth_tbs_basic, synth_tbs_rm] {
            let (c, _) = synth(&table, &TbsOptions::default()).expect("3-bit TBS");
            let prog = ReversibleProgram::compile(&c).expect("classical circuit");
            total += 1;
            if (0..8u64).any(|x| prog.run_value(x) != f[x as usize]) {
                bad += 1;
            }
        }
        if !next_permutation(&mut f) {
            break;
        }
    }
    (total, bad)
}

fn amplitude_fidelity() -> Outcome {
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for name in ["uniform", "binomial", "triangle", "bimodal", "arbitrary"] {
        let pmf = Pmf::named(name, 5).expect("named distribution");
        let c = synth_amplitude(&pmf).expect("amplitude synthesis");
        let probs = run_statevector(&c, 0).expect("5 qubits").probabilities();
        let err = max_abs_diff(&probs, pmf.probs());
        worst = worst.max(err);
        if err > AMPLITUDE_TOL {
            problems.push(format!("{name}: error {err:.2e}"));
        }
        if c.parameterized_gate_count() != 31 {
            problems.push(format!("{name}: {} parameterized gates", c.parameterized_gate_count()));
        }
        if name == "binomial" {
            let exact: Vec<f64> = (0..32u64).map(|k| if k <= 5 { choose(5, k) as f64 / 32.0 } else { 0.0 }).collect();
            let err = max_abs_diff(&probs, &exact);
            if err > BINOMIAL_TOL {
                problems.push(format!("binomial vs C(5,k)/32: {err:.2e}"));
            }
        }
    }
    let detail = format!("5 distributions, worst bin error {worst:.1e}, 31 parameterized gates each");
    Outcome::check(problems.is_empty(), with_problems(detail, &problems))
}

fn shot_calibration() -> Outcome {
    let mut problems = Vec::new();
    let mut parts = Vec::new();
    for (name, reference) in [("uniform", 34_500.0), ("bimodal", 6_000.0)] {
        let pmf = Pmf::named(name, 5).expect("named distribution");
        let c = synth_amplitude(&pmf).expect("amplitude synthesis");
        let options = CalibrationOptions::default();
        let cal = calibrate_shots(&pmf, &c, &options).expect("calibration converges");
        let ratio = cal.shots as f64 / reference;
        parts.push(format!("{name} {} shots (x{ratio:.2}), G/n {:.2e}, p {:.4}", cal.shots, cal.passing_g, cal.final_p));
        if cal.passing_g >= 1e-3 {
            problems.push(format!("{name}: G/n {:.2e}", cal.passing_g));
        }
        if !(0.25..=4.0).contains(&ratio) {
            problems.push(format!("{name}: {} shots outside 4x of {reference}", cal.shots));
        }
        if cal.final_p <= 0.97 {
            problems.push(format!("{name}: similarity {:.4}", cal.final_p));
        }
    }
    Outcome::check(problems.is_empty(), with_problems(parts.join("; "), &problems))
}

fn optimization_soundness() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(SUITE_SEED);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    let mut runs_rewritten = 0;
    for i in 0..SUITE_SIZE {
        let c = random_circuit(&mut rng, 2 + i % 9);
        let outputs = [
            ("double-x", remove_double_x(&c)),
            ("mcx-ladder", decompose_mcx(&c, DecomposeMode::ToTrueToffoli)),
            ("toffoli-5", decompose_mcx(&c, DecomposeMode::ToffoliTo5Gate)),
            ("graycode", graycode_optimize(&c)),
        ];
        for (pass, out) in &outputs {
            let d = unitary_distance(&c, out, &mut rng);
            worst = worst.max(d);
            if d > PASS_TOL {
                problems.push(format!("circuit {i} {pass}: distance {d:.2e}"));
            }
        }
        if natural_count(&outputs[0].1) > natural_count(&c) || natural_count(&outputs[3].1) > natural_count(&c) {
            problems.push(format!("circuit {i}: a pass grew the circuit"));
        }
        let rot = random_rotation_circuit(&mut rng, 2 + i % 5);
        let g = graycode_optimize(&rot);
        runs_rewritten += (g != rot) as usize;
        if g.max_controls() > 1 {
            problems.push(format!("rotation circuit {i}: graycode left {} controls", g.max_controls()));
        }
        let d = unitary_distance(&rot, &g, &mut rng);
        worst = worst.max(d);
        if d > PASS_TOL {
            problems.push(format!("rotation circuit {i} graycode: distance {d:.2e}"));
        }
    }
    let mut reductions = Vec::new();
    for (name, pmf) in [
        ("triangle", Pmf::triangle(5)),
        ("bimodal", Pmf::bimodal(5)),
        ("binomial-wide", Pmf::named("binomial-wide", 5).expect("named")),
    ] {
        let base = synth_amplitude(&pmf).expect("amplitude").parameterized_gate_count();
        let sym = symmetric_optimize(&pmf, SymmetryKind::Mirror).expect("mirror symmetric");
        let probs = run_statevector(&sym, 0).expect("5 qubits").probabilities();
        let err = max_abs_diff(&probs, pmf.probs());
        let cut = 1.0 - sym.parameterized_gate_count() as f64 / base as f64;
        reductions.push(format!("{name} {base}->{}", sym.parameterized_gate_count()));
        if err > PASS_TOL {
            problems.push(format!("{name} symmetric: distribution error {err:.2e}"));
        }
        if cut < 0.40 {
            problems.push(format!("{name} symmetric: only {:.0}% fewer parameterized gates", cut * 100.0));
        }
    }
    let detail = format!(
        "{SUITE_SIZE} mixed + {SUITE_SIZE} rotation circuits, worst distance {worst:.1e}, {runs_rewritten} Gray rewrites; symmetric {}",
        reductions.join(", ")
    );
    Outcome::check(problems.is_empty(), with_problems(detail, &problems))
}

fn grover_reproduction() -> Outcome {
    let (res, dt) = timed(|| {
        let mut problems = Vec::new();
        let diamonds = GroverSpec::new(cards::card(cards::Suit::Diamonds, 10), 6, 0);
        let p_single = grover::simulated_success(&diamonds).expect("one solution");
        if p_single < 0.99 {
            problems.push(format!("ten of diamonds k=6: {p_single:.4}"));
        }
        let clubs = GroverSpec::new(cards::suit(cards::Suit::Clubs), 0, 0);
        let sweep = grover::iteration_sweep(&clubs, 12, 0).expect("sweep");
        // sin(theta/2) = sqrt(16/64) = 1/2.
        let half = (0.5f64).asin();
        let p: Vec<f64> = sweep.rows.iter().map(|r| r.p_simulated).collect();
        let mut worst: f64 = 0.0;
        for (k, &pk) in p.iter().enumerate() {
            worst = worst.max((pk - ((2 * k + 1) as f64 * half).sin().powi(2)).abs());
        }
        if worst > GROVER_TOL {
            problems.push(format!("clubs sweep off by {worst:.2e}"));
        }
        let local_max = |k: usize| p[k] > p[k - 1] + 0.5 && p[k] > p[k + 1] + 0.5;
        if !(local_max(1) && local_max(4)) {
            problems.push("clubs maxima not at k=1,4".into());
        }
        let floor = p.iter().cloned().fold(f64::INFINITY, f64::min);
        if (p[2] - floor).abs() > GROVER_TOL || (p[8] - floor).abs() > GROVER_TOL {
            problems.push(format!("clubs k=2,8 give {:.3}, {:.3}, floor {floor:.3}", p[2], p[8]));
        }
        (format!("ten of diamonds k=6 p={p_single:.4}; clubs k<=12 within {worst:.1e}, peaks 1,4,7,10"), problems)
    });
    let (detail, mut problems) = res;
    if dt > Duration::from_secs(30) {
        problems.push(format!("took {dt:?}"));
    }
    Outcome::check(problems.is_empty(), with_problems(format!("{detail}, {:.2} s", dt.as_secs_f64()), &problems))
}

fn statistics_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut problems = Vec::new();
    let mut worst: f64 = 0.0;
    for i in 0..1000 {
        let bins = rng.gen_range(2..=64);
        let q = random_pmf(&mut rng, bins);
        let mut counts: Vec<u64> = (0..bins).map(|_| rng.gen_range(0..500)).collect();
        counts[0] += 1;
        let n: u64 = counts.iter().sum();
        let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n as f64).collect();
        let g = g_statistic_counts(&counts, &q).expect("same length").g;
        let kl_direct: f64 =
            freq.iter().zip(&q).filter(|(&p, _)| p > 0.0).map(|(&p, &qq)| p * (p / qq).ln()).sum();
        let rel = (g - 2.0 * n as f64 * kl_direct).abs() / g.abs().max(1.0);
        worst = worst.max(rel);
        if rel > STATS_TOL {
            problems.push(format!("pair {i}: G {g} vs 2nKL {}", 2.0 * n as f64 * kl_direct));
        }
        let p2 = random_pmf(&mut rng, bins);
        let kl = kl_divergence(&freq, &q).expect("support");
        let js_ab = js_divergence(&q, &p2).expect("same length");
        let js_ba = js_divergence(&p2, &q).expect("same length");
        if kl < -STATS_TOL || js_ab < -STATS_TOL || (js_ab - js_ba).abs() > STATS_TOL {
            problems.push(format!("pair {i}: KL {kl}, JS {js_ab}/{js_ba}"));
        }
    }
    let q = [0.125, 0.375, 0.5];
    let same = g_statistic_counts(&[100, 300, 400], &q).expect("same length");
    if same.g.abs() > STATS_TOL || (same.p - 1.0).abs() > STATS_TOL {
        problems.push(format!("P=Q gave G {} p {}", same.g, same.p));
    }
    let detail = format!("1000 pairs, worst relative G-2nKL gap {worst:.1e}; P=Q gives G=0, p=1");
    Outcome::check(problems.is_empty(), with_problems(detail, &problems))
}

fn round_trips() -> Outcome {
    let corpus = Corpus::locate();
    let mut problems = Vec::new();
    let mut plas = 0;
    for (name, ..) in FUNCTIONS {
        let Some(bench) = corpus.load(name) else { continue };
        let once = write_pla(&bench.table);
        let twice = write_pla(&parse_pla(&once).expect("written PLA parses"));
        plas += 1;
        if once != twice {
            problems.push(format!("{name}: PLA text drifted"));
        }
    }
    let mut circuits: Vec<(String, Circuit)> = Vec::new();
    if let Some(b) = corpus.load("squar5") {
        for method in [Method::Esop, Method::Tbs, Method::Angle, Method::ImprovedAngle] {
            let s = synthesize(&b.source(), method, &PipelineOptions::default()).expect("squar5 synthesizes");
            circuits.push((format!("squar5/{method}"), s.circuit));
        }
    }
    for name in ["triangle", "bimodal"] {
        let src = Source::Distribution(Pmf::named(name, 5).expect("named"));
        let opts = PipelineOptions {
            passes: vec![qsynth::optimize::Pass::SymMirror, qsynth::optimize::Pass::Graycode],
            ..PipelineOptions::default()
        };
        circuits.push((format!("{name}/plain"), synthesize(&src, Method::Amplitude, &PipelineOptions::default()).expect("amplitude").circuit));
        circuits.push((format!("{name}/optimized"), synthesize(&src, Method::Amplitude, &opts).expect("amplitude").circuit));
    }
    circuits.push((
        "grover".into(),
        grover::build_grover(&GroverSpec::new(cards::card(cards::Suit::Hearts, 1), 2, 0)).expect("grover"),
    ));
    let mut rng = ChaCha8Rng::seed_from_u64(88);
    for i in 0..20 {
        circuits.push((format!("random {i}"), random_circuit(&mut rng, 2 + i % 7)));
    }
    let mut worst: f64 = 0.0;
    for (label, c) in &circuits {
        let text = emit_qasm(c, GateSet::Natural).expect("emit");
        let back = parse_qasm(&text).expect("parse");
        if emit_qasm(&back, GateSet::Natural).expect("re-emit") != text {
            problems.push(format!("{label}: QASM text drifted"));
        }
        let a = run_statevector(c, 0).expect("small circuit");
        let b = run_statevector(&back, 0).expect("small circuit");
        let d = a.amps.iter().zip(&b.amps).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max);
        worst = worst.max(d);
        if a.amps.len() != b.amps.len() || d > ROUNDTRIP_TOL {
            problems.push(format!("{label}: re-simulation differs by {d:.2e}"));
        }
    }
    let detail = format!("{plas} PLA files and {} circuits stable, worst amplitude gap {worst:.1e}", circuits.len());
    Outcome::check(problems.is_empty(), with_problems(detail, &problems))
}

fn with_problems(detail: String, problems: &[String]) -> String {
    if problems.is_empty() {
        detail
    } else {
        let shown: Vec<&str> = problems.iter().take(5).map(String::as_str).collect();
        format!("{detail}; {} problem(s): {}", problems.len(), shown.join("; "))
    }
}

fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    if a.len() != b.len() {
        return f64::INFINITY;
    }
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

fn choose(n: u64, k: u64) -> u64 {
    (1..=k).fold(1, |acc, i| acc * (n + 1 - i) / i)
}

fn random_pmf(rng: &mut ChaCha8Rng, bins: usize) -> Vec<f64> {
    let w: Vec<f64> = (0..bins).map(|_| rng.gen_range(0.01..1.0)).collect();
    let s: f64 = w.iter().sum();
    w.into_iter().map(|x| x / s).collect()
}

/// Natural gate count with each negative control spelled as an X pair.
fn natural_count(c: &Circuit) -> usize {
    c.gates.iter().map(|g| 1 + 2 * g.controls.iter().filter(|c| !c.positive).count()).sum()
}

fn random_controls(rng: &mut ChaCha8Rng, n: usize, target: usize, k: usize) -> Vec<Control> {
    let mut pool: Vec<usize> = (0..n).filter(|&q| q != target).collect();
    let mut out = Vec::new();
    for _ in 0..k.min(pool.len()) {
        let q = pool.swap_remove(rng.gen_range(0..pool.len()));
        out.push(Control { qubit: q, positive: rng.gen_bool(0.6) });
    }
    out
}

fn random_angle(rng: &mut ChaCha8Rng) -> f64 {
    rng.gen_range(-PI..PI)
}

/// Uniformly controlled rotation: one gate per control pattern, random angles.
fn multiplexed_run(rng: &mut ChaCha8Rng, n: usize, target: usize, k: usize) -> Vec<Gate> {
    let controls: Vec<usize> = random_controls(rng, n, target, k).into_iter().map(|c| c.qubit).collect();
    let axis = rng.gen_range(0..3);
    (0..1usize << controls.len())
        .map(|p| {
            let a = random_angle(rng);
            let kind = [GateKind::Rx(a), GateKind::Ry(a), GateKind::Rz(a)][axis];
            let cs = controls
                .iter()
                .enumerate()
                .map(|(j, &q)| Control { qubit: q, positive: (p >> j) & 1 == 1 })
                .collect();
            Gate::controlled(kind, cs, target)
        })
        .collect()
}

/// Mixed classical, Clifford and rotation gates, including multi-controlled X
/// with mixed polarity, adjacent X pairs and complete multiplexed runs.
fn random_circuit(rng: &mut ChaCha8Rng, n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    let len = rng.gen_range(4..24);
    for _ in 0..len {
        let t = rng.gen_range(0..n);
        match rng.gen_range(0..8) {
            0 => c.push(Gate::x(t)),
            1 => {
                c.push(Gate::x(t));
                c.push(Gate::x(t));
            }
            2 => c.push(Gate::h(t)),
            3 => {
                let k = rng.gen_range(1..=n.min(5)).min(n - 1).max(1);
                c.push(Gate::mcx(random_controls(rng, n, t, k), t));
            }
            4 => {
                let k = rng.gen_range(0..=2);
                c.push(Gate::controlled(GateKind::Z, random_controls(rng, n, t, k), t));
            }
            5 => {
                let a = random_angle(rng);
                let kind = [GateKind::Rx(a), GateKind::Ry(a), GateKind::Rz(a)][rng.gen_range(0..3)];
                let k = rng.gen_range(0..=2);
                c.push(Gate::controlled(kind, random_controls(rng, n, t, k), t));
            }
            _ => {
                let k = rng.gen_range(1..=n.min(3)).min(n - 1).max(1);
                c.extend(multiplexed_run(rng, n, t, k));
            }
        }
    }
    c
}

/// Circuits shaped like angle and amplitude encoders: complete multiplexed
/// runs separated by uncontrolled and single-control gates.
fn random_rotation_circuit(rng: &mut ChaCha8Rng, n: usize) -> Circuit {
    let mut c = Circuit::new(n);
    for _ in 0..rng.gen_range(1..5) {
        let t = rng.gen_range(0..n);
        match rng.gen_range(0..3) {
            0 => c.push(Gate::h(t)),
            1 => c.push(Gate::controlled(GateKind::X, random_controls(rng, n, t, 1), t)),
            _ => {
                let k = rng.gen_range(1..n);
                c.extend(multiplexed_run(rng, n, t, k));
            }
        }
    }
    c
}

fn next_permutation(v: &mut [u64]) -> bool {
    let Some(i) = (1..v.len()).rev().find(|&i| v[i - 1] < v[i]) else { return false };
    let j = (i..v.len()).rev().find(|&j| v[j] > v[i - 1]).expect("pivot has a successor");
    v.swap(i - 1, j);
    v[i..].reverse();
    true
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 8] = [
        ("qubit-count exactness", qubit_counts),
        ("functional correctness", functional_correctness),
        ("amplitude-encoding fidelity", amplitude_fidelity),
        ("shot calibration", shot_calibration),
        ("optimization soundness", optimization_soundness),
        ("Grover reproduction", grover_reproduction),
        ("statistics identities", statistics_identities),
        ("round-trips", round_trips),
    ];
    let mut fatal = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let (o, dt) = timed(run);
        let status = if o.pass { "PASS" } else { "FAIL" };
        let gap = o.known_gap.map(|g| format!(" [known gap: {g}]")).unwrap_or_default();
        println!("{status} {} {name} ({:.1} s): {}{gap}", i + 1, dt.as_secs_f64(), o.detail);
        if !o.pass && o.known_gap.is_none() {
            fatal += 1;
        }
    }
    if fatal > 0 {
        println!("{fatal} criterion(s) failed");
        std::process::exit(1);
    }
}
