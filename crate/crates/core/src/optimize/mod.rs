//! Post-synthesis circuit passes.
//!
//! Each pass returns a new circuit; the input is never modified. Passes that
//! need scratch qubits append them to the register with [`QubitRole::Ancilla`](crate::circuit::QubitRole).

mod decompose;
mod double_x;
mod graycode;
mod lower;
mod symmetric;

pub use decompose::{decompose_mcx, DecomposeMode};
pub use double_x::remove_double_x;
pub use graycode::graycode_optimize;
pub use lower::{is_uniform, lower_to_uniform};
pub use symmetric::{symmetric_optimize, SymmetryKind};

use crate::circuit::Circuit;
use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum OptimizeError {
    #[error("distribution has no {0} symmetry")]
    NoSymmetry(SymmetryKind),
    #[error("gate {0} has no lowering to the uniform gate set")]
    UnsupportedGate(String),
    #[error("pass {0} applies to distributions, not circuits")]
    NeedsDistribution(Pass),
    #[error("unknown pass '{0}'")]
    UnknownPass(String),
    #[error(transparent)]
    Pmf(#[from] crate::pmf::PmfError),
}

/// Circuit passes by their command-line names.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Pass {
    DoubleX,
    McxLadder,
    Toffoli5,
    Graycode,
    SymDup,
    SymMirror,
}

impl Pass {
    pub const ALL: [Pass; 6] =
        [Pass::DoubleX, Pass::McxLadder, Pass::Toffoli5, Pass::Graycode, Pass::SymDup, Pass::SymMirror];

    pub fn name(self) -> &'static str {
        match self {
            Pass::DoubleX => "double-x",
            Pass::McxLadder => "mcx-ladder",
            Pass::Toffoli5 => "toffoli-5",
            Pass::Graycode => "graycode",
            Pass::SymDup => "sym-dup",
            Pass::SymMirror => "sym-mirror",
        }
    }

    /// Symmetric passes rebuild an amplitude circuit from its distribution.
    pub fn symmetry(self) -> Option<SymmetryKind> {
        match self {
            Pass::SymDup => Some(SymmetryKind::Duplicate),
            Pass::SymMirror => Some(SymmetryKind::Mirror),
            _ => None,
        }
    }
}

impl fmt::Display for Pass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Pass {
    type Err = OptimizeError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Pass::ALL.into_iter().find(|p| p.name() == s).ok_or_else(|| OptimizeError::UnknownPass(s.to_string()))
    }
}

/// Runs circuit passes in order.
pub fn run_passes(circuit: &Circuit, passes: &[Pass]) -> Result<Circuit, OptimizeError> {
    let mut c = circuit.clone();
    for &p in passes {
        c = match p {
            Pass::DoubleX => remove_double_x(&c),
            Pass::McxLadder => decompose_mcx(&c, DecomposeMode::ToTrueToffoli),
            Pass::Toffoli5 => decompose_mcx(&c, DecomposeMode::ToffoliTo5Gate),
            Pass::Graycode => graycode_optimize(&c),
            Pass::SymDup | Pass::SymMirror => return Err(OptimizeError::NeedsDistribution(p)),
        };
    }
    Ok(c)
}

#[cfg(test)]
pub(crate) mod test_util {
    use crate::circuit::Circuit;
    use crate::simulate::{run_statevector, Statevector};
    use num_complex::Complex64;

    /// Largest amplitude error of `b` against `a` over all basis inputs on the
    /// first `a.num_qubits` qubits, under one global phase. Extra qubits of `b`
    /// start in |0> and must return there.
    pub fn unitary_distance(a: &Circuit, b: &Circuit) -> f64 {
        let extra = b.num_qubits - a.num_qubits;
        let mut phase: Option<Complex64> = None;
        let mut worst: f64 = 0.0;
        for x in 0..1usize << a.num_qubits {
            let sa = run_statevector(a, x).unwrap();
            let sb = run_statevector(b, x << extra).unwrap();
            let mut padded = vec![Complex64::new(0.0, 0.0); sb.amps.len()];
            for (i, amp) in sa.amps.iter().enumerate() {
                padded[i << extra] = *amp;
            }
            let padded = Statevector::from_amplitudes(padded);
            let p = *phase.get_or_insert_with(|| {
                let ip = padded.inner(&sb);
                ip / ip.norm()
            });
            let err = padded.amps.iter().zip(&sb.amps).map(|(u, v)| (u * p - v).norm()).fold(0.0, f64::max);
            worst = worst.max(err);
        }
        worst
    }
}
