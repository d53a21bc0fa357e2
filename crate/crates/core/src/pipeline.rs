//! End-to-end synthesis and verification from a PLA table or a distribution.

use crate::circuit::{Circuit, QubitRole};
use crate::encoding::{qrom_pipeline, synth_amplitude, EncodingError, QromEncoding, QromOptions, QromSpec};
use crate::esop::{synth_esop, to_esop};
use crate::funcprep::{
    make_one_to_one, make_onto, normalize, to_truth_table, FuncprepError, OntoStrategy, Scheme, TruthTable,
    DEFAULT_MAX_ROWS,
};
use crate::grover::GroverError;
use crate::optimize::{run_passes, symmetric_optimize, OptimizeError, Pass, SymmetryKind};
use crate::pla::{PlaError, PlaTable};
use crate::pmf::{Pmf, PmfError};
use crate::qasm::QasmError;
use crate::simulate::{run_statevector, sample_circuit, BitString, ReversibleProgram, SimError};
use crate::stats::{DistributionReport, StatsError};
use crate::tbs::{synth_tbs_basic, synth_tbs_rm, TbsError, TbsOptions, DEFAULT_GATE_LIMIT};
use serde::Serialize;
use std::fmt;
use std::str::FromStr;
use std::time::Instant;
use thiserror::Error;

/// Any error the library can produce.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error(transparent)]
    Pla(#[from] PlaError),
    #[error(transparent)]
    Funcprep(#[from] FuncprepError),
    #[error(transparent)]
    Pmf(#[from] PmfError),
    #[error(transparent)]
    Tbs(#[from] TbsError),
    #[error(transparent)]
    Encoding(#[from] EncodingError),
    #[error(transparent)]
    Optimize(#[from] OptimizeError),
    #[error(transparent)]
    Qasm(#[from] QasmError),
    #[error(transparent)]
    Sim(#[from] SimError),
    #[error(transparent)]
    Stats(#[from] StatsError),
    #[error(transparent)]
    Grover(#[from] GroverError),
    #[error("method {method} needs a {expected} input")]
    WrongInput { method: Method, expected: &'static str },
    #[error("unknown method '{0}'")]
    UnknownMethod(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Esop,
    Tbs,
    TbsRm,
    Basis,
    Angle,
    DenseAngle,
    ImprovedAngle,
    Amplitude,
}

impl Method {
    pub const ALL: [Method; 8] = [
        Method::Esop,
        Method::Tbs,
        Method::TbsRm,
        Method::Basis,
        Method::Angle,
        Method::DenseAngle,
        Method::ImprovedAngle,
        Method::Amplitude,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Method::Esop => "esop",
            Method::Tbs => "tbs",
            Method::TbsRm => "tbs-rm",
            Method::Basis => "basis",
            Method::Angle => "angle",
            Method::DenseAngle => "dense-angle",
            Method::ImprovedAngle => "improved-angle",
            Method::Amplitude => "amplitude",
        }
    }

    pub fn takes_distribution(self) -> bool {
        self == Method::Amplitude
    }
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Method {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Method::ALL.into_iter().find(|m| m.name() == s).ok_or_else(|| Error::UnknownMethod(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Source {
    Pla(PlaTable),
    Distribution(Pmf),
}

#[derive(Debug, Clone)]
pub struct PipelineOptions {
    /// Cap on expanded PLA rows and on embedded table sizes.
    pub max_rows: u64,
    pub onto: OntoStrategy,
    pub minimize_esop: bool,
    pub gate_limit: usize,
    pub deadline: Option<Instant>,
    pub qrom: QromOptions,
    pub passes: Vec<Pass>,
}

impl Default for PipelineOptions {
    fn default() -> Self {
        PipelineOptions {
            max_rows: DEFAULT_MAX_ROWS,
            onto: OntoStrategy::RandomFill { seed: None },
            minimize_esop: true,
            gate_limit: DEFAULT_GATE_LIMIT,
            deadline: None,
            qrom: QromOptions::default(),
            passes: Vec::new(),
        }
    }
}

/// Layout of a TBS circuit after the one-to-one embedding.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Embedding {
    pub width: usize,
    pub ancilla: usize,
    pub garbage: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Synthesis {
    pub circuit: Circuit,
    pub method: Method,
    pub embedding: Option<Embedding>,
    /// TBS-RM rows that fell back to the basic step.
    pub fallback_rows: Vec<usize>,
}

fn pla_of(source: &Source, method: Method) -> Result<&PlaTable, Error> {
    match source {
        Source::Pla(t) => Ok(t),
        Source::Distribution(_) => Err(Error::WrongInput { method, expected: "PLA" }),
    }
}

/// Runs one synthesis method and the requested passes.
///
/// Symmetric passes apply only to amplitude encoding, where they replace the
/// base circuit; requesting both looks for either symmetry at every node.
pub fn synthesize(source: &Source, method: Method, options: &PipelineOptions) -> Result<Synthesis, Error> {
    let (sym, circuit_passes): (Vec<Pass>, Vec<Pass>) =
        options.passes.iter().partition(|p| p.symmetry().is_some());
    let mut out = Synthesis { circuit: Circuit::new(0), method, embedding: None, fallback_rows: Vec::new() };
    out.circuit = match method {
        Method::Esop => synth_esop(&to_esop(pla_of(source, method)?, options.minimize_esop)),
        Method::Tbs | Method::TbsRm => {
            let (circuit, embedding, fallback) = tbs_pipeline(pla_of(source, method)?, method, options)?;
            out.embedding = Some(embedding);
            out.fallback_rows = fallback;
            circuit
        }
        Method::Basis | Method::Angle | Method::DenseAngle | Method::ImprovedAngle => {
            let encoding = match method {
                Method::Basis => QromEncoding::Basis,
                Method::Angle => QromEncoding::Angle,
                Method::DenseAngle => QromEncoding::DenseAngle,
                _ => QromEncoding::ImprovedAngle,
            };
            let qrom = QromOptions { max_rows: options.max_rows, ..options.qrom };
            qrom_pipeline(pla_of(source, method)?, encoding, &qrom)?
        }
        Method::Amplitude => {
            let Source::Distribution(pmf) = source else {
                return Err(Error::WrongInput { method, expected: "distribution" });
            };
            match (sym.contains(&Pass::SymDup), sym.contains(&Pass::SymMirror)) {
                (false, false) => synth_amplitude(pmf)?,
                (true, false) => symmetric_optimize(pmf, SymmetryKind::Duplicate)?,
                (false, true) => symmetric_optimize(pmf, SymmetryKind::Mirror)?,
                (true, true) => symmetric_optimize(pmf, SymmetryKind::Both)?,
            }
        }
    };
    if let (Some(&p), false) = (sym.first(), method == Method::Amplitude) {
        return Err(OptimizeError::NeedsDistribution(p).into());
    }
    out.circuit = run_passes(&out.circuit, &circuit_passes)?;
    Ok(out)
}

/// PLA to truth table, one-to-one embedding, completion to a bijection, then TBS.
fn tbs_pipeline(
    table: &PlaTable,
    method: Method,
    options: &PipelineOptions,
) -> Result<(Circuit, Embedding, Vec<usize>), Error> {
    let tt = to_truth_table(table, options.max_rows)?;
    let rtt = make_one_to_one(&tt)?;
    let full = make_onto(&rtt.table, options.onto, options.max_rows)?;
    let tbs = TbsOptions { gate_limit: options.gate_limit, deadline: options.deadline, keep_snapshots: false };
    let (mut circuit, trace) =
        if method == Method::TbsRm { synth_tbs_rm(&full, &tbs)? } else { synth_tbs_basic(&full, &tbs)? };
    let width = rtt.width();
    for (q, role) in circuit.roles.iter_mut().enumerate() {
        *role = if q < rtt.original_n { QubitRole::Input } else { QubitRole::Ancilla };
    }
    Ok((circuit, Embedding { width, ancilla: width - rtt.original_n, garbage: rtt.garbage_count }, trace.fallback_rows))
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyReport {
    /// `classical`, `angle` or `distribution`.
    pub kind: &'static str,
    pub checked: u64,
    pub mismatches: u64,
    pub first_mismatch: Option<String>,
    /// Largest probability error for angle checks.
    pub max_error: Option<f64>,
    pub distribution: Option<DistributionReport>,
    pub passed: bool,
}

/// Probability error allowed by angle checks.
pub const ANGLE_TOLERANCE: f64 = 1e-9;
/// Significance level at which a sampled distribution is rejected.
pub const DISTRIBUTION_ALPHA: f64 = 1e-3;
/// Widest circuit checked by statevector when gates are not classical.
pub const MAX_STATEVECTOR_VERIFY_QUBITS: usize = 20;

/// Checks `circuit` against the source it was synthesized from.
///
/// Classical methods compare every defined row of the truth table, computed
/// independently of the synthesis route. Angle encodings compare each
/// address's data-qubit probabilities with the normalized words. Amplitude
/// encoding samples `shots` and fails when the G-test rejects at [`DISTRIBUTION_ALPHA`].
pub fn verify(
    source: &Source,
    method: Method,
    circuit: &Circuit,
    options: &PipelineOptions,
    shots: u64,
    seed: u64,
) -> Result<VerifyReport, Error> {
    match method {
        Method::Esop | Method::Basis => {
            let tt = to_truth_table(pla_of(source, method)?, options.max_rows)?;
            let n = tt.num_inputs;
            let m = tt.num_outputs;
            let mut checker = ClassicalChecker::new(circuit)?;
            let limit = if n < 64 { 1u128 << n } else { u128::MAX };
            // Rows missing from the table read as zero.
            let inputs: Box<dyn Iterator<Item = u128>> = if limit <= options.max_rows as u128 {
                Box::new(0..limit)
            } else {
                Box::new(tt.sorted().into_iter().map(|(x, _)| x))
            };
            for x in inputs {
                let y = tt.get(x).unwrap_or(0);
                checker.check(x, n, (y, n, m));
            }
            Ok(checker.report())
        }
        Method::Tbs | Method::TbsRm => {
            let tt = to_truth_table(pla_of(source, method)?, options.max_rows)?;
            let rtt = make_one_to_one(&tt)?;
            let (n, m, w) = (tt.num_inputs, tt.num_outputs, rtt.width());
            let mut checker = ClassicalChecker::new(circuit)?;
            for &(xin, yout) in rtt.table.entries() {
                let y = tt.get(xin >> (w - n)).expect("embedded row comes from the table");
                checker.check(xin, w, (y, 0, m));
                checker.check(xin, w, (yout, 0, w));
            }
            Ok(checker.report())
        }
        Method::Angle | Method::DenseAngle | Method::ImprovedAngle => verify_angle(source, method, circuit, options),
        Method::Amplitude => {
            let Source::Distribution(pmf) = source else {
                return Err(Error::WrongInput { method, expected: "distribution" });
            };
            let mut c = circuit.clone();
            if c.measured_qubits().is_empty() {
                for q in 0..pmf.num_qubits() {
                    c.push(crate::circuit::Gate::measure(q));
                }
            }
            let hist = sample_circuit(&c, shots, seed)?;
            let d = DistributionReport::compute(&hist, pmf, seed)?;
            Ok(VerifyReport {
                kind: "distribution",
                checked: shots,
                mismatches: 0,
                first_mismatch: None,
                max_error: None,
                distribution: Some(d),
                passed: d.p >= DISTRIBUTION_ALPHA,
            })
        }
    }
}

/// Runs basis inputs through a circuit, classically when possible.
struct ClassicalChecker<'a> {
    circuit: &'a Circuit,
    program: Option<ReversibleProgram>,
    checked: u64,
    mismatches: u64,
    first: Option<String>,
}

impl<'a> ClassicalChecker<'a> {
    fn new(circuit: &'a Circuit) -> Result<Self, Error> {
        let program = match ReversibleProgram::compile(circuit) {
            Ok(p) => Some(p),
            Err(SimError::NonClassicalGate { .. }) if circuit.num_qubits <= MAX_STATEVECTOR_VERIFY_QUBITS => None,
            Err(e) => return Err(e.into()),
        };
        Ok(ClassicalChecker { circuit, program, checked: 0, mismatches: 0, first: None })
    }

    /// Feeds `input` (the top `width` bits of the register, the rest zero) and
    /// compares `expected = (value, first qubit, bits)` with the output field.
    fn check(&mut self, input: u128, width: usize, expected: (u128, usize, usize)) {
        let total = self.circuit.num_qubits;
        let bits = BitString((0..total).map(|q| q < width && (input >> (width - 1 - q)) & 1 == 1).collect());
        let (value, start, len) = expected;
        let ok = match &self.program {
            Some(p) => {
                let out = p.run(&bits).expect("width matches");
                field(&out, start, len) == value
            }
            None => {
                let idx = bits.0.iter().fold(0usize, |a, &b| (a << 1) | b as usize);
                let probs = run_statevector(self.circuit, idx).expect("within cap").probabilities();
                let mass: f64 = probs
                    .iter()
                    .enumerate()
                    .filter(|&(i, _)| {
                        let out = BitString((0..total).map(|q| (i >> (total - 1 - q)) & 1 == 1).collect());
                        field(&out, start, len) == value
                    })
                    .map(|(_, p)| p)
                    .sum();
                mass > 1.0 - ANGLE_TOLERANCE
            }
        };
        self.checked += 1;
        if !ok {
            self.mismatches += 1;
            if self.first.is_none() {
                self.first = Some(format!("input {input:#b}: expected {value:#b} on qubits {start}..{}", start + len));
            }
        }
    }

    fn report(self) -> VerifyReport {
        VerifyReport {
            kind: "classical",
            checked: self.checked,
            mismatches: self.mismatches,
            first_mismatch: self.first,
            max_error: None,
            distribution: None,
            passed: self.mismatches == 0,
        }
    }
}

fn field(bits: &BitString, start: usize, len: usize) -> u128 {
    bits.0[start..start + len].iter().fold(0u128, |a, &b| (a << 1) | b as u128)
}

fn verify_angle(source: &Source, method: Method, circuit: &Circuit, options: &PipelineOptions) -> Result<VerifyReport, Error> {
    let tt: TruthTable = to_truth_table(pla_of(source, method)?, options.max_rows)?;
    let spec = QromSpec::from_truth_table(&tt)?;
    let scheme = if method == Method::ImprovedAngle { Scheme::FloatLike } else { options.qrom.scheme };
    let norm = normalize(&spec.words(), spec.word_bits, scheme, options.qrom.normalize)?;
    let angles: Vec<f64> = if method == Method::ImprovedAngle { norm.significands.clone() } else { norm.values.clone() };
    // Expected P(data = 1) per circuit address, and the phase for dense pairs.
    let mut expected: Vec<(u64, f64, Option<f64>)> = Vec::new();
    match method {
        Method::DenseAngle => {
            let mut order: Vec<usize> = (0..spec.pairs.len()).collect();
            order.sort_by_key(|&j| spec.pairs[j].0);
            for (k, chunk) in order.chunks(2).enumerate() {
                let phi = chunk.get(1).map_or(0.0, |&j| angles[j]);
                expected.push((k as u64, angles[chunk[0]].sin().powi(2), Some(phi)));
            }
        }
        _ => {
            let mut by_address = vec![0.0; 1usize << spec.address_bits];
            for (j, &(a, _)) in spec.pairs.iter().enumerate() {
                by_address[a as usize] = angles[j].sin().powi(2);
            }
            expected.extend(by_address.into_iter().enumerate().map(|(a, p)| (a as u64, p, None)));
        }
    }
    let data = circuit.roles.iter().position(|&r| r == QubitRole::Data).unwrap_or(circuit.num_qubits - 1);
    let mut max_error: f64 = 0.0;
    let mut first = None;
    let mut mismatches = 0;
    let one = 1usize << (circuit.num_qubits - 1 - data);
    for &(a, p, phi) in &expected {
        let idx = (a as usize) << (circuit.num_qubits - data);
        let state = run_statevector(circuit, idx)?;
        let got = state.marginal(&[data])[1];
        let mut err = (got - p).abs();
        // Dense pairs: <X> = sin 2t sin phi and <Y> = -sin 2t cos phi on the data qubit.
        if let Some(phi) = phi {
            let cross = state.amps[idx].conj() * state.amps[idx | one] * 2.0;
            let s2t = 2.0 * (p * (1.0 - p)).sqrt();
            err = err.max((cross.re - s2t * phi.sin()).abs()).max((cross.im + s2t * phi.cos()).abs());
        }
        max_error = max_error.max(err);
        if err > ANGLE_TOLERANCE {
            mismatches += 1;
            first.get_or_insert_with(|| match phi {
                Some(phi) => format!("address {a}: P(1) = {got}, expected {p} with phase {phi}"),
                None => format!("address {a}: P(1) = {got}, expected {p}"),
            });
        }
    }
    Ok(VerifyReport {
        kind: "angle",
        checked: expected.len() as u64,
        mismatches,
        first_mismatch: first,
        max_error: Some(max_error),
        distribution: None,
        passed: mismatches == 0,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;
    use crate::pla::parse_pla;

    /// `x^2 mod 8`.
    const SQUARES: &str = ".i 3\n.o 3\n000 000\n001 001\n010 100\n011 001\n100 000\n101 001\n110 100\n111 001\n.e\n";

    fn squares() -> Source {
        Source::Pla(parse_pla(SQUARES).unwrap())
    }

    #[test]
    fn every_pla_method_verifies() {
        let o = PipelineOptions::default();
        for m in Method::ALL.into_iter().filter(|m| !m.takes_distribution()) {
            let s = synthesize(&squares(), m, &o).unwrap();
            let r = verify(&squares(), m, &s.circuit, &o, 0, 0).unwrap();
            assert!(r.passed, "{m}: {r:?}");
            assert!(r.checked > 0);
        }
    }

    #[test]
    fn dense_angle_phase_is_checked() {
        use crate::circuit::GateKind;
        let o = PipelineOptions::default();
        let mut c = synthesize(&squares(), Method::DenseAngle, &o).unwrap().circuit;
        let rz = c.gates.iter_mut().rev().find(|g| matches!(g.kind, GateKind::Rz(_))).expect("a phase gate");
        if let GateKind::Rz(phi) = rz.kind {
            rz.kind = GateKind::Rz(phi + 0.01);
        }
        let r = verify(&squares(), Method::DenseAngle, &c, &o, 0, 0).unwrap();
        assert!(!r.passed);
        assert!(r.first_mismatch.unwrap().contains("phase"));
    }

    #[test]
    fn tbs_width_from_embedding() {
        let s = synthesize(&squares(), Method::Tbs, &PipelineOptions::default()).unwrap();
        // Output 001 appears four times: v = 2, w = 2.
        assert_eq!(s.embedding, Some(Embedding { width: 5, ancilla: 2, garbage: 2 }));
        assert_eq!(s.circuit.num_qubits, 5);
    }

    #[test]
    fn corrupted_circuit_fails() {
        let o = PipelineOptions::default();
        for m in [Method::Esop, Method::Tbs, Method::Basis, Method::Angle] {
            let mut c = synthesize(&squares(), m, &o).unwrap().circuit;
            c.push(Gate::x(c.num_qubits - 1));
            let r = verify(&squares(), m, &c, &o, 0, 0).unwrap();
            assert!(!r.passed, "{m}");
            assert!(r.first_mismatch.is_some());
        }
    }

    #[test]
    fn non_classical_passes_still_verify() {
        let o = PipelineOptions { passes: vec![Pass::McxLadder, Pass::Toffoli5], ..Default::default() };
        let s = synthesize(&squares(), Method::Esop, &o).unwrap();
        assert!(ReversibleProgram::compile(&s.circuit).is_err());
        assert!(verify(&squares(), Method::Esop, &s.circuit, &o, 0, 0).unwrap().passed);
    }

    #[test]
    fn amplitude_and_symmetric() {
        let pmf = Pmf::triangle(4);
        let src = Source::Distribution(pmf);
        let plain = synthesize(&src, Method::Amplitude, &PipelineOptions::default()).unwrap();
        assert_eq!(plain.circuit.parameterized_gate_count(), 15);
        let o = PipelineOptions { passes: vec![Pass::SymMirror, Pass::Graycode], ..Default::default() };
        let sym = synthesize(&src, Method::Amplitude, &o).unwrap();
        assert!(sym.circuit.parameterized_gate_count() < 15);
        let r = verify(&src, Method::Amplitude, &sym.circuit, &o, 20_000, 3).unwrap();
        assert!(r.passed, "{r:?}");
    }

    #[test]
    fn input_kind_checked() {
        let o = PipelineOptions::default();
        assert!(matches!(
            synthesize(&squares(), Method::Amplitude, &o),
            Err(Error::WrongInput { expected: "distribution", .. })
        ));
        let o = PipelineOptions { passes: vec![Pass::SymDup], ..Default::default() };
        assert!(matches!(synthesize(&squares(), Method::Esop, &o), Err(Error::Optimize(OptimizeError::NeedsDistribution(_)))));
        assert!("nope".parse::<Method>().is_err());
        assert_eq!("tbs-rm".parse::<Method>().unwrap(), Method::TbsRm);
    }
}
