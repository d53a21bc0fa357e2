//! Grover search circuits with ESOP phase oracles, the analytic success
//! curve, and the 52-card deck predicates.

use crate::circuit::{Circuit, Control, Gate, GateKind, QubitRole};
use crate::esop::{synth_esop, to_esop, EsopSpec};
use crate::pla::{Cube, PlaTable};
use crate::simulate::{run_statevector, sample, SimError, Statevector};
use num_complex::Complex64;
use serde::Serialize;
use std::f64::consts::FRAC_PI_4;
use std::fmt::Write;
use thiserror::Error;

/// Widest database the builder accepts; the statevector holds `n + 1` qubits.
pub const MAX_DATABASE_BITS: usize = 24;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GroverError {
    #[error("predicate has no satisfying inputs")]
    NoSolutions,
    #[error("every input satisfies the predicate")]
    AllSolutions,
    #[error("predicate must have exactly one output, found {0}")]
    NotSingleOutput(usize),
    #[error("predicate has {got} inputs, database width is {expected}")]
    WidthMismatch { expected: usize, got: usize },
    #[error("database width {0} is outside 1..={max}", max = MAX_DATABASE_BITS)]
    UnsupportedWidth(usize),
    #[error(transparent)]
    Sim(#[from] SimError),
}

#[derive(Debug, Clone, PartialEq)]
pub struct GroverSpec {
    /// Database width; the search space holds `2^n` entries.
    pub n: usize,
    /// Single-output predicate. Unspecified inputs are non-solutions.
    pub predicate: PlaTable,
    pub iterations: usize,
    pub shots: u64,
}

impl GroverSpec {
    pub fn new(predicate: PlaTable, iterations: usize, shots: u64) -> Self {
        GroverSpec { n: predicate.num_inputs, predicate, iterations, shots }
    }

    fn esop(&self) -> Result<EsopSpec, GroverError> {
        if self.n == 0 || self.n > MAX_DATABASE_BITS {
            return Err(GroverError::UnsupportedWidth(self.n));
        }
        if self.predicate.num_inputs != self.n {
            return Err(GroverError::WidthMismatch { expected: self.n, got: self.predicate.num_inputs });
        }
        if self.predicate.num_outputs != 1 {
            return Err(GroverError::NotSingleOutput(self.predicate.num_outputs));
        }
        Ok(to_esop(&self.predicate, true))
    }

    /// Satisfying inputs in ascending order.
    pub fn solutions(&self) -> Result<Vec<u64>, GroverError> {
        let esop = self.esop()?;
        Ok((0..1u64 << self.n).filter(|&x| esop.evaluate(x as u128)[0]).collect())
    }

    fn checked_solutions(&self) -> Result<Vec<u64>, GroverError> {
        let s = self.solutions()?;
        match s.len() as u64 {
            0 => Err(GroverError::NoSolutions),
            m if m == 1u64 << self.n => Err(GroverError::AllSolutions),
            _ => Ok(s),
        }
    }
}

/// Phase oracle on `n + 1` qubits: the predicate is XORed into qubit `n`.
/// With that qubit in |->, solution states pick up a sign.
pub fn phase_oracle(spec: &GroverSpec) -> Result<Circuit, GroverError> {
    let mut c = synth_esop(&spec.esop()?);
    c.roles[spec.n] = QubitRole::Ancilla;
    Ok(c)
}

/// Reflection about the uniform superposition on qubits `0..n`, up to global phase.
pub fn diffusion(n: usize) -> Vec<Gate> {
    let mut gates: Vec<Gate> = (0..n).map(Gate::h).collect();
    gates.extend((0..n).map(Gate::x));
    let controls = (0..n - 1).map(Control::pos).collect();
    gates.push(Gate::controlled(GateKind::Z, controls, n - 1));
    gates.extend((0..n).map(Gate::x));
    gates.extend((0..n).map(Gate::h));
    gates
}

/// Full search circuit: uniform superposition, `k` oracle + diffusion rounds,
/// ancilla returned to |0>, and measurement of the `n` database qubits.
pub fn build_grover(spec: &GroverSpec) -> Result<Circuit, GroverError> {
    spec.checked_solutions()?;
    let n = spec.n;
    let oracle = phase_oracle(spec)?;
    let mut c = Circuit::with_roles(oracle.roles.clone());
    c.push(Gate::x(n));
    c.push(Gate::h(n));
    c.extend((0..n).map(Gate::h));
    let diffuse = diffusion(n);
    for _ in 0..spec.iterations {
        c.extend(oracle.gates.iter().cloned());
        c.extend(diffuse.iter().cloned());
    }
    c.push(Gate::h(n));
    c.push(Gate::x(n));
    for q in 0..n {
        c.push(Gate::measure(q));
    }
    Ok(c)
}

/// Probability of measuring a solution after `k` iterations with `m` of `n_total` marked.
pub fn success_probability(n_total: u64, m: u64, k: usize) -> f64 {
    let half = (m as f64 / n_total as f64).sqrt().asin();
    ((2 * k + 1) as f64 * half).sin().powi(2)
}

/// The textbook `floor(pi/4 * sqrt(N/M))` iteration count.
pub fn naive_iterations(n_total: u64, m: u64) -> usize {
    (FRAC_PI_4 * (n_total as f64 / m as f64).sqrt()).floor() as usize
}

/// Probability mass on solutions in the simulated circuit.
pub fn simulated_success(spec: &GroverSpec) -> Result<f64, GroverError> {
    let solutions = spec.checked_solutions()?;
    let circuit = build_grover(spec)?;
    let marginal = run_statevector(&circuit, 0)?.marginal(&(0..spec.n).collect::<Vec<_>>());
    Ok(solutions.iter().map(|&s| marginal[s as usize]).sum())
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub k: usize,
    pub p_analytic: f64,
    pub p_simulated: f64,
    pub shots: u64,
    pub hits: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Sweep {
    pub n: usize,
    pub solutions: u64,
    pub rows: Vec<SweepRow>,
    /// Iteration count the textbook formula suggests.
    pub naive_k: usize,
    /// Iteration count with the highest analytic success in the sweep.
    pub best_k: usize,
}

impl Sweep {
    /// The textbook count misses the best count in the sweep by more than 1e-9.
    pub fn naive_is_suboptimal(&self) -> bool {
        let p = |k: usize| success_probability(1 << self.n, self.solutions, k);
        p(self.best_k) - p(self.naive_k) > 1e-9
    }

    pub fn to_csv(&self) -> String {
        let mut out = String::from("k,p_analytic,p_simulated,shots,hits\n");
        for r in &self.rows {
            let _ = writeln!(out, "{},{},{},{},{}", r.k, r.p_analytic, r.p_simulated, r.shots, r.hits);
        }
        out
    }
}

/// Runs `k = 0..=k_max` both analytically and by simulation. Shots for row
/// `k` are drawn with seed `seed + k`; zero shots skip sampling.
pub fn iteration_sweep(spec: &GroverSpec, k_max: usize, seed: u64) -> Result<Sweep, GroverError> {
    let solutions = spec.checked_solutions()?;
    let (n_total, m) = (1u64 << spec.n, solutions.len() as u64);
    let qubits: Vec<usize> = (0..spec.n).collect();
    let mut rows = Vec::with_capacity(k_max + 1);
    for k in 0..=k_max {
        let s = GroverSpec { iterations: k, ..spec.clone() };
        let state = run_statevector(&build_grover(&s)?, 0)?;
        let marginal = state.marginal(&qubits);
        let p_simulated = solutions.iter().map(|&x| marginal[x as usize]).sum();
        let hits = if spec.shots == 0 {
            0
        } else {
            let amps = marginal.iter().map(|p| Complex64::new(p.sqrt(), 0.0)).collect();
            let h = sample(&Statevector::from_amplitudes(amps), spec.shots, seed + k as u64)?;
            solutions.iter().map(|&x| h.counts()[x as usize]).sum()
        };
        rows.push(SweepRow { k, p_analytic: success_probability(n_total, m, k), p_simulated, shots: spec.shots, hits });
    }
    let best_k = rows
        .iter()
        .fold((0, f64::MIN), |(bk, bp), r| if r.p_analytic > bp + 1e-12 { (r.k, r.p_analytic) } else { (bk, bp) })
        .0;
    Ok(Sweep { n: spec.n, solutions: m, rows, naive_k: naive_iterations(n_total, m), best_k })
}

/// Six-bit playing cards: two suit bits, then four value bits with ace = 1
/// through king = 13. Values 0, 14 and 15 are unused.
pub mod cards {
    use super::*;

    #[derive(Debug, Clone, Copy, PartialEq, Eq)]
    pub enum Suit {
        Clubs = 0b00,
        Hearts = 0b01,
        Diamonds = 0b10,
        Spades = 0b11,
    }

    impl Suit {
        fn bits(self) -> String {
            format!("{:02b}", self as u8)
        }
    }

    pub const DECK_BITS: usize = 6;

    pub fn encode(suit: Suit, value: u8) -> u64 {
        assert!((1..=13).contains(&value), "card value {value} outside 1..=13");
        ((suit as u64) << 4) | value as u64
    }

    fn predicate(rows: Vec<Cube>) -> PlaTable {
        let mut t = PlaTable::with_rows(DECK_BITS, 1, rows);
        t.kind = Some("fd".into());
        t
    }

    /// One specific card.
    pub fn card(suit: Suit, value: u8) -> PlaTable {
        let code = format!("{:06b}", encode(suit, value));
        predicate(vec![Cube::parse(&code, "1")])
    }

    /// Any encoding whose suit bits match, including the unused value codes.
    pub fn suit(suit: Suit) -> PlaTable {
        predicate(vec![Cube::parse(&format!("{}----", suit.bits()), "1")])
    }

    /// A value in any suit.
    pub fn value(value: u8) -> PlaTable {
        let code = format!("{:04b}", encode(Suit::Clubs, value));
        predicate(vec![Cube::parse(&format!("--{code}"), "1")])
    }
}
