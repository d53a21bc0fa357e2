//! Transformation-based synthesis of reversible functions on exactly `n` qubits.
//!
//! Both variants walk the inputs in ascending order and apply gates to the
//! output side until every row maps to itself; the circuit is the recorded
//! gate list reversed. Word bit `b` corresponds to qubit `n - 1 - b`.

mod basic;
mod reed_muller;
mod spectrum;

pub use basic::synth_tbs_basic;
pub use reed_muller::synth_tbs_rm;
pub use spectrum::{rm_spectrum, RmSpectrum};

use crate::circuit::{Circuit, Control, Gate, QubitRole};
use crate::funcprep::TruthTable;
use std::time::Instant;
use thiserror::Error;

pub const DEFAULT_GATE_LIMIT: usize = 50_000;

/// Widest table accepted; `2^n` rows are held in memory.
pub const MAX_WIDTH: usize = 26;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TbsError {
    #[error("table is not a complete bijection")]
    NotBijective,
    #[error("table is not complete")]
    NotComplete,
    #[error("table has {inputs} inputs and {outputs} outputs")]
    NotSquare { inputs: usize, outputs: usize },
    #[error("more than {limit} gates needed")]
    SizeLimitExceeded { limit: usize },
    #[error("no pivot output bit for row {row}")]
    NoPivot { row: usize },
    #[error("deadline passed")]
    Timeout,
    #[error("width {0} is too large for an in-memory table")]
    TooWide(usize),
}

#[derive(Debug, Clone)]
pub struct TbsOptions {
    pub gate_limit: usize,
    pub deadline: Option<Instant>,
    /// Record the working table after each row (debug aid, `2^n` words per row).
    pub keep_snapshots: bool,
}

impl Default for TbsOptions {
    fn default() -> Self {
        TbsOptions { gate_limit: DEFAULT_GATE_LIMIT, deadline: None, keep_snapshots: false }
    }
}

/// Multi-controlled X on words: flip `target` bit when all `controls` bits are set.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WordGate {
    pub controls: u64,
    pub target: u32,
}

impl WordGate {
    pub fn apply(&self, v: u64) -> u64 {
        if v & self.controls == self.controls {
            v ^ (1 << self.target)
        } else {
            v
        }
    }
}

#[derive(Debug, Clone, Default)]
pub struct SynthTrace {
    /// Gates in application order, before reversal.
    pub gates: Vec<WordGate>,
    /// `(row, table after the row was fixed)`.
    pub snapshots: Vec<(usize, Vec<u64>)>,
    /// Rows where the spectrum step could not be used and the basic step ran instead.
    pub fallback_rows: Vec<usize>,
}

impl SynthTrace {
    pub fn to_circuit(&self, n: usize) -> Circuit {
        let mut c = Circuit::with_roles(vec![QubitRole::Work; n]);
        for g in self.gates.iter().rev() {
            let controls = (0..n as u32)
                .rev()
                .filter(|b| g.controls >> b & 1 == 1)
                .map(|b| Control::pos(n - 1 - b as usize))
                .collect();
            c.push(Gate::mcx(controls, n - 1 - g.target as usize));
        }
        c
    }
}

/// Working state shared by both variants.
pub(crate) struct Worker<'a> {
    pub f: Vec<u64>,
    pub trace: SynthTrace,
    pub options: &'a TbsOptions,
}

impl<'a> Worker<'a> {
    pub fn new(table: &TruthTable, options: &'a TbsOptions) -> Result<Self, TbsError> {
        let n = table.num_inputs;
        if n != table.num_outputs {
            return Err(TbsError::NotSquare { inputs: n, outputs: table.num_outputs });
        }
        if n > MAX_WIDTH {
            return Err(TbsError::TooWide(n));
        }
        if !table.is_complete() {
            return Err(TbsError::NotComplete);
        }
        let f = table.to_permutation().map_err(|_| TbsError::NotBijective)?;
        Ok(Worker { f, trace: SynthTrace::default(), options })
    }

    pub fn apply(&mut self, g: WordGate) -> Result<(), TbsError> {
        if self.trace.gates.len() >= self.options.gate_limit {
            return Err(TbsError::SizeLimitExceeded { limit: self.options.gate_limit });
        }
        for v in self.f.iter_mut() {
            *v = g.apply(*v);
        }
        self.trace.gates.push(g);
        Ok(())
    }

    pub fn check_deadline(&self) -> Result<(), TbsError> {
        match self.options.deadline {
            Some(d) if Instant::now() >= d => Err(TbsError::Timeout),
            _ => Ok(()),
        }
    }

    pub fn snapshot(&mut self, row: usize) {
        if self.options.keep_snapshots {
            self.trace.snapshots.push((row, self.f.clone()));
        }
    }

    /// Miller's step for row `i`: raise the bits of `i` missing from the
    /// current output (controls on the output's 1-bits), then clear the extra
    /// bits (controls on `i`'s 1-bits). Bits are visited most significant first.
    pub fn basic_step(&mut self, i: usize, n: usize) -> Result<(), TbsError> {
        let i = i as u64;
        let mut q = self.f[i as usize];
        for b in (0..n as u32).rev() {
            if i >> b & 1 == 1 && q >> b & 1 == 0 {
                self.apply(WordGate { controls: q, target: b })?;
                q |= 1 << b;
            }
        }
        for b in (0..n as u32).rev() {
            if q >> b & 1 == 1 && i >> b & 1 == 0 {
                self.apply(WordGate { controls: i, target: b })?;
                q &= !(1 << b);
            }
        }
        debug_assert_eq!(self.f[i as usize], i);
        Ok(())
    }
}
