//! Data-encoding circuits: quantum read-only memories (basis, angle and
//! improved-angle encodings) and amplitude-encoded random number generators.
//!
//! Address qubits come first, most significant address bit on qubit 0. Data
//! qubits follow.

mod amplitude;
mod qrom;

pub use amplitude::{synth_amplitude, synth_amplitude_with, AmplitudeOptions, AngleTree};
pub use qrom::{qrom_pipeline, synth_angle, synth_basis, AngleMode, QromEncoding, QromOptions};

use crate::circuit::Control;
use crate::funcprep::{FuncprepError, TruthTable};
use crate::pmf::PmfError;
use std::collections::HashSet;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum EncodingError {
    #[error("address {0:#b} appears more than once")]
    DuplicateAddress(u64),
    #[error("value {value} for word {index} is outside [0, 2pi)")]
    ValueOutOfRange { index: usize, value: f64 },
    #[error("{0} words normalized for {1} addresses")]
    LengthMismatch(usize, usize),
    #[error("improved-angle encoding needs float-like normalization")]
    NeedsFloatLike,
    #[error("address width {address} with word width {word} is not supported")]
    UnsupportedWidth { address: usize, word: usize },
    #[error(transparent)]
    Funcprep(#[from] FuncprepError),
    #[error(transparent)]
    Pmf(#[from] PmfError),
}

/// Memory image: distinct addresses with their words. Addresses not listed hold 0.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QromSpec {
    pub address_bits: usize,
    pub word_bits: usize,
    pub pairs: Vec<(u64, u64)>,
}

/// Widest address or word held as a machine integer.
pub const MAX_QROM_BITS: usize = 64;

impl QromSpec {
    pub fn new(address_bits: usize, word_bits: usize, pairs: Vec<(u64, u64)>) -> Result<Self, EncodingError> {
        if address_bits == 0 || address_bits > MAX_QROM_BITS || word_bits == 0 || word_bits > MAX_QROM_BITS {
            return Err(EncodingError::UnsupportedWidth { address: address_bits, word: word_bits });
        }
        let mut seen = HashSet::new();
        for &(a, _) in &pairs {
            if !seen.insert(a) {
                return Err(EncodingError::DuplicateAddress(a));
            }
        }
        Ok(QromSpec { address_bits, word_bits, pairs })
    }

    pub fn from_truth_table(table: &TruthTable) -> Result<Self, EncodingError> {
        let (n, m) = (table.num_inputs, table.num_outputs);
        if n > MAX_QROM_BITS || m > MAX_QROM_BITS {
            return Err(EncodingError::UnsupportedWidth { address: n, word: m });
        }
        QromSpec::new(n, m, table.entries().iter().map(|&(a, x)| (a as u64, x as u64)).collect())
    }

    pub fn words(&self) -> Vec<u64> {
        self.pairs.iter().map(|&(_, x)| x).collect()
    }

    /// Word stored at `address`.
    pub fn read(&self, address: u64) -> u64 {
        self.pairs.iter().find(|&&(a, _)| a == address).map_or(0, |&(_, x)| x)
    }
}

/// Controls on qubits `0..bits` that fire exactly on `address`.
pub(crate) fn address_controls(address: u64, bits: usize) -> Vec<Control> {
    (0..bits)
        .map(|q| {
            if address >> (bits - 1 - q) & 1 == 1 {
                Control::pos(q)
            } else {
                Control::neg(q)
            }
        })
        .collect()
}
