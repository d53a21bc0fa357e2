use super::{BitString, SimError};
use crate::circuit::{Circuit, GateKind};

/// Classical circuit compiled to word masks. Qubit `q` lives in word `q / 64`, bit `q % 64`.
#[derive(Debug, Clone)]
pub struct ReversibleProgram {
    num_qubits: usize,
    words: usize,
    ops: Vec<Op>,
}

#[derive(Debug, Clone)]
struct Op {
    pos: Vec<(usize, u64)>,
    neg: Vec<(usize, u64)>,
    target_word: usize,
    target_bit: u64,
}

impl ReversibleProgram {
    pub fn compile(circuit: &Circuit) -> Result<Self, SimError> {
        let words = circuit.num_qubits.div_ceil(64).max(1);
        let mut ops = Vec::with_capacity(circuit.gates.len());
        for (index, g) in circuit.gates.iter().enumerate() {
            match g.kind {
                GateKind::X => {}
                GateKind::Measure => continue,
                other => return Err(SimError::NonClassicalGate { index, kind: other.name() }),
            }
            let mut pos = vec![0u64; words];
            let mut neg = vec![0u64; words];
            for c in &g.controls {
                let slot = if c.positive { &mut pos } else { &mut neg };
                slot[c.qubit / 64] |= 1 << (c.qubit % 64);
            }
            let squash = |m: Vec<u64>| -> Vec<(usize, u64)> {
                m.into_iter().enumerate().filter(|&(_, v)| v != 0).collect()
            };
            ops.push(Op {
                pos: squash(pos),
                neg: squash(neg),
                target_word: g.target / 64,
                target_bit: 1 << (g.target % 64),
            });
        }
        Ok(ReversibleProgram { num_qubits: circuit.num_qubits, words, ops })
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn words(&self) -> usize {
        self.words
    }

    /// Runs the program in place on a packed state.
    pub fn run_words(&self, state: &mut [u64]) {
        debug_assert_eq!(state.len(), self.words);
        for op in &self.ops {
            let fire = op.pos.iter().all(|&(w, m)| state[w] & m == m)
                && op.neg.iter().all(|&(w, m)| state[w] & m == 0);
            if fire {
                state[op.target_word] ^= op.target_bit;
            }
        }
    }

    pub fn run(&self, input: &BitString) -> Result<BitString, SimError> {
        if input.len() != self.num_qubits {
            return Err(SimError::WidthMismatch { expected: self.num_qubits, got: input.len() });
        }
        let mut state = pack(input, self.words);
        self.run_words(&mut state);
        Ok(unpack(&state, self.num_qubits))
    }

    /// Runs on a state given as an integer whose most significant of `num_qubits` bits is qubit 0.
    /// Only for registers of at most 64 qubits.
    pub fn run_value(&self, input: u64) -> u64 {
        assert!(self.num_qubits <= 64);
        let n = self.num_qubits;
        let mut state = [reverse_low_bits(input, n)];
        self.run_words(&mut state);
        reverse_low_bits(state[0], n)
    }
}

fn reverse_low_bits(v: u64, n: usize) -> u64 {
    if n == 0 {
        0
    } else {
        v.reverse_bits() >> (64 - n)
    }
}

fn pack(bits: &BitString, words: usize) -> Vec<u64> {
    let mut state = vec![0u64; words];
    for (q, &b) in bits.0.iter().enumerate() {
        if b {
            state[q / 64] |= 1 << (q % 64);
        }
    }
    state
}

fn unpack(state: &[u64], n: usize) -> BitString {
    BitString((0..n).map(|q| state[q / 64] >> (q % 64) & 1 == 1).collect())
}

/// Propagates a basis state through a circuit of (multi-)controlled X gates.
pub fn run_reversible(circuit: &Circuit, input: &BitString) -> Result<BitString, SimError> {
    ReversibleProgram::compile(circuit)?.run(input)
}
