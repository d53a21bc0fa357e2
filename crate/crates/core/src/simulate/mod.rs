//! Verification engines: classical reversible propagation, dense statevector
//! simulation, and seeded shot sampling.

mod reversible;
mod sampling;
mod statevector;

pub use reversible::{run_reversible, ReversibleProgram};
pub use sampling::{
    calibrate_shots, sample, sample_circuit, Calibration, CalibrationOptions, CountHistogram,
    ShotGrowth,
};
pub use statevector::{run_statevector, run_statevector_from, Statevector, DEFAULT_MAX_QUBITS};

use std::fmt;
use std::str::FromStr;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SimError {
    #[error("gate {index} ({kind}) is not classical")]
    NonClassicalGate { index: usize, kind: &'static str },
    #[error("{qubits} qubits exceed the statevector cap of {cap}")]
    TooManyQubits { qubits: usize, cap: usize },
    #[error("input has {got} bits, circuit has {expected} qubits")]
    WidthMismatch { expected: usize, got: usize },
    #[error("shot count must be at least 1")]
    ZeroShots,
    #[error("no tested shot count up to {cap} reached the threshold")]
    NonConvergent { cap: u64 },
    #[error("distribution has {got} bins, histogram has {expected}")]
    BinMismatch { expected: usize, got: usize },
}

/// Bitstring with character `i` holding qubit `i`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct BitString(pub Vec<bool>);

impl BitString {
    pub fn zeros(n: usize) -> Self {
        BitString(vec![false; n])
    }

    /// `n` bits of `value`, most significant bit first.
    pub fn from_value(value: u64, n: usize) -> Self {
        BitString((0..n).map(|i| (value >> (n - 1 - i)) & 1 == 1).collect())
    }

    /// Reads the bits as an integer, first bit most significant. At most 64 bits.
    pub fn value(&self) -> u64 {
        self.0.iter().fold(0, |acc, &b| (acc << 1) | b as u64)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn slice(&self, start: usize, len: usize) -> BitString {
        BitString(self.0[start..start + len].to_vec())
    }
}

impl fmt::Display for BitString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for &b in &self.0 {
            f.write_str(if b { "1" } else { "0" })?;
        }
        Ok(())
    }
}

impl FromStr for BitString {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        s.chars()
            .map(|c| match c {
                '0' => Ok(false),
                '1' => Ok(true),
                other => Err(format!("invalid bit {other:?}")),
            })
            .collect::<Result<Vec<_>, _>>()
            .map(BitString)
    }
}
