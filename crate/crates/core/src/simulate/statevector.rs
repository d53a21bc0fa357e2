use super::SimError;
use crate::circuit::{Circuit, Gate, GateKind};
use num_complex::Complex64;
use std::f64::consts::FRAC_1_SQRT_2;

pub const DEFAULT_MAX_QUBITS: usize = 20;

/// Dense amplitudes. Qubit 0 is the most significant bit of the basis index.
#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    pub num_qubits: usize,
    pub amps: Vec<Complex64>,
}

type Mat2 = [[Complex64; 2]; 2];

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn matrix(kind: GateKind) -> Option<Mat2> {
    let z = c(0.0, 0.0);
    let one = c(1.0, 0.0);
    Some(match kind {
        GateKind::X => [[z, one], [one, z]],
        GateKind::H => {
            let h = c(FRAC_1_SQRT_2, 0.0);
            [[h, h], [h, -h]]
        }
        GateKind::Z => [[one, z], [z, -one]],
        GateKind::Rx(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(0.0, -s)], [c(0.0, -s), c(co, 0.0)]]
        }
        GateKind::Ry(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, 0.0), c(-s, 0.0)], [c(s, 0.0), c(co, 0.0)]]
        }
        GateKind::Rz(t) => {
            let (s, co) = (t / 2.0).sin_cos();
            [[c(co, -s), z], [z, c(co, s)]]
        }
        GateKind::SqrtX => [[c(0.5, 0.5), c(0.5, -0.5)], [c(0.5, -0.5), c(0.5, 0.5)]],
        GateKind::SqrtXDg => [[c(0.5, -0.5), c(0.5, 0.5)], [c(0.5, 0.5), c(0.5, -0.5)]],
        GateKind::Measure => return None,
    })
}

impl Statevector {
    pub fn basis(num_qubits: usize, index: usize) -> Self {
        let mut amps = vec![c(0.0, 0.0); 1 << num_qubits];
        amps[index] = c(1.0, 0.0);
        Statevector { num_qubits, amps }
    }

    pub fn from_amplitudes(amps: Vec<Complex64>) -> Self {
        assert!(amps.len().is_power_of_two());
        Statevector { num_qubits: amps.len().trailing_zeros() as usize, amps }
    }

    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Distribution over `qubits`, the first listed qubit being the most significant outcome bit.
    pub fn marginal(&self, qubits: &[usize]) -> Vec<f64> {
        let n = self.num_qubits;
        let mut out = vec![0.0; 1 << qubits.len()];
        for (idx, a) in self.amps.iter().enumerate() {
            let p = a.norm_sqr();
            if p == 0.0 {
                continue;
            }
            let key = qubits.iter().fold(0usize, |acc, &q| (acc << 1) | (idx >> (n - 1 - q) & 1));
            out[key] += p;
        }
        out
    }

    pub fn bit_mask(&self, q: usize) -> usize {
        1 << (self.num_qubits - 1 - q)
    }

    pub fn apply(&mut self, gate: &Gate) {
        let Some(u) = matrix(gate.kind) else { return };
        let tbit = self.bit_mask(gate.target);
        let mut cmask = 0usize;
        let mut cval = 0usize;
        for ctl in &gate.controls {
            let b = self.bit_mask(ctl.qubit);
            cmask |= b;
            if ctl.positive {
                cval |= b;
            }
        }
        for i in 0..self.amps.len() {
            if i & tbit != 0 || i & cmask != cval {
                continue;
            }
            let j = i | tbit;
            let (a0, a1) = (self.amps[i], self.amps[j]);
            self.amps[i] = u[0][0] * a0 + u[0][1] * a1;
            self.amps[j] = u[1][0] * a0 + u[1][1] * a1;
        }
    }

    pub fn apply_circuit(&mut self, circuit: &Circuit) {
        for g in &circuit.gates {
            self.apply(g);
        }
    }

    pub fn inner(&self, other: &Statevector) -> Complex64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| a.conj() * b).sum()
    }

    /// Largest amplitude difference after removing the global phase that best aligns the states.
    pub fn distance_up_to_phase(&self, other: &Statevector) -> f64 {
        let ip = self.inner(other);
        let phase = if ip.norm() > 1e-300 { ip / ip.norm() } else { c(1.0, 0.0) };
        self.amps
            .iter()
            .zip(&other.amps)
            .map(|(a, b)| (a * phase - b).norm())
            .fold(0.0, f64::max)
    }

    pub fn max_abs_diff(&self, other: &Statevector) -> f64 {
        self.amps.iter().zip(&other.amps).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max)
    }
}

/// Runs `circuit` from basis state `initial` under the default qubit cap.
/// Measurements are taken to be terminal and leave the amplitudes untouched.
pub fn run_statevector(circuit: &Circuit, initial: usize) -> Result<Statevector, SimError> {
    run_statevector_capped(circuit, initial, DEFAULT_MAX_QUBITS)
}

pub fn run_statevector_capped(
    circuit: &Circuit,
    initial: usize,
    cap: usize,
) -> Result<Statevector, SimError> {
    if circuit.num_qubits > cap {
        return Err(SimError::TooManyQubits { qubits: circuit.num_qubits, cap });
    }
    let mut sv = Statevector::basis(circuit.num_qubits, initial);
    sv.apply_circuit(circuit);
    Ok(sv)
}

/// Runs `circuit` from an arbitrary state.
pub fn run_statevector_from(circuit: &Circuit, initial: Statevector) -> Result<Statevector, SimError> {
    if circuit.num_qubits > DEFAULT_MAX_QUBITS {
        return Err(SimError::TooManyQubits { qubits: circuit.num_qubits, cap: DEFAULT_MAX_QUBITS });
    }
    if initial.num_qubits != circuit.num_qubits {
        return Err(SimError::WidthMismatch { expected: circuit.num_qubits, got: initial.num_qubits });
    }
    let mut sv = initial;
    sv.apply_circuit(circuit);
    Ok(sv)
}
