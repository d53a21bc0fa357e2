use super::{run_statevector, BitString, SimError, Statevector};
use crate::circuit::Circuit;
use crate::pmf::Pmf;
use crate::stats::{kl_divergence, per_shot_similarity};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use std::collections::BTreeMap;

/// Measurement counts over `2^num_bits` outcomes, indexed MSB-first.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CountHistogram {
    num_bits: usize,
    counts: Vec<u64>,
    pub seed: Option<u64>,
}

impl CountHistogram {
    pub fn from_counts(counts: Vec<u64>) -> Self {
        assert!(counts.len().is_power_of_two());
        CountHistogram { num_bits: counts.len().trailing_zeros() as usize, counts, seed: None }
    }

    pub fn num_bits(&self) -> usize {
        self.num_bits
    }

    pub fn counts(&self) -> &[u64] {
        &self.counts
    }

    pub fn count(&self, bits: &str) -> u64 {
        let b: BitString = bits.parse().expect("bitstring");
        self.counts[b.value() as usize]
    }

    pub fn shots(&self) -> u64 {
        self.counts.iter().sum()
    }

    pub fn frequencies(&self) -> Vec<f64> {
        let n = self.shots() as f64;
        self.counts.iter().map(|&c| c as f64 / n).collect()
    }

    /// Non-zero outcomes keyed by bitstring.
    pub fn to_map(&self) -> BTreeMap<String, u64> {
        self.counts
            .iter()
            .enumerate()
            .filter(|(_, &c)| c > 0)
            .map(|(i, &c)| (BitString::from_value(i as u64, self.num_bits).to_string(), c))
            .collect()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_map()).expect("string keys")
    }

    pub fn to_csv(&self) -> String {
        let mut s = String::from("bitstring,count\n");
        for (k, v) in self.to_map() {
            s.push_str(&format!("{k},{v}\n"));
        }
        s
    }
}

fn draw(probs: &[f64], shots: u64, seed: u64) -> Vec<u64> {
    let mut cumulative = Vec::with_capacity(probs.len());
    let mut acc = 0.0;
    for &p in probs {
        acc += p;
        cumulative.push(acc);
    }
    let total = acc;
    let last_nonzero = probs.iter().rposition(|&p| p > 0.0).unwrap_or(0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut counts = vec![0u64; probs.len()];
    for _ in 0..shots {
        let u: f64 = rng.gen::<f64>() * total;
        let idx = cumulative.partition_point(|&c| c <= u).min(last_nonzero);
        counts[idx] += 1;
    }
    counts
}

/// Multinomial draw over all qubits of a statevector.
pub fn sample(state: &Statevector, shots: u64, seed: u64) -> Result<CountHistogram, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let mut h = CountHistogram::from_counts(draw(&state.probabilities(), shots, seed));
    h.seed = Some(seed);
    Ok(h)
}

/// Runs `circuit` from |0...0> and samples its measured qubits (all qubits if none are measured).
pub fn sample_circuit(circuit: &Circuit, shots: u64, seed: u64) -> Result<CountHistogram, SimError> {
    if shots == 0 {
        return Err(SimError::ZeroShots);
    }
    let sv = run_statevector(circuit, 0)?;
    let mut qubits = circuit.measured_qubits();
    if qubits.is_empty() {
        qubits = (0..circuit.num_qubits).collect();
    }
    let mut h = CountHistogram::from_counts(draw(&sv.marginal(&qubits), shots, seed));
    h.seed = Some(seed);
    Ok(h)
}

/// How the shot count grows between calibration rounds.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ShotGrowth {
    Doubling,
    Linear(u64),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CalibrationOptions {
    /// Bound on the per-shot statistic `G/n = 2 KL(empirical || target)`.
    pub threshold: f64,
    pub growth: ShotGrowth,
    pub margin: f64,
    pub start: u64,
    pub cap: u64,
    pub seed: u64,
}

impl Default for CalibrationOptions {
    fn default() -> Self {
        CalibrationOptions {
            threshold: 1e-3,
            growth: ShotGrowth::Linear(1000),
            margin: 1.5,
            start: 1000,
            cap: 1 << 26,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Calibration {
    /// First passing count times the margin, rounded up.
    pub shots: u64,
    pub passing_shots: u64,
    pub passing_g: f64,
    /// Per-shot G of a fresh draw at `shots`.
    pub final_g: f64,
    /// Similarity of `final_g`.
    pub final_p: f64,
    /// `(shots, per-shot G)` for every tested count.
    pub trace: Vec<(u64, f64)>,
}

/// Grows the shot count until a fresh histogram sits within `threshold` of `pmf`,
/// then adds the safety margin and re-checks at the returned count.
pub fn calibrate_shots(
    pmf: &Pmf,
    circuit: &Circuit,
    options: &CalibrationOptions,
) -> Result<Calibration, SimError> {
    let sv = run_statevector(circuit, 0)?;
    let mut qubits = circuit.measured_qubits();
    if qubits.is_empty() {
        qubits = (0..circuit.num_qubits).collect();
    }
    let probs = sv.marginal(&qubits);
    if probs.len() != pmf.len() {
        return Err(SimError::BinMismatch { expected: pmf.len(), got: probs.len() });
    }
    let per_shot_g = |shots: u64, seed: u64| -> f64 {
        let counts = draw(&probs, shots, seed);
        let n = shots as f64;
        let freq: Vec<f64> = counts.iter().map(|&c| c as f64 / n).collect();
        2.0 * kl_divergence(&freq, pmf.probs()).expect("equal lengths")
    };
    let mut trace = Vec::new();
    let mut shots = options.start.max(1);
    let mut round = 0u64;
    while shots <= options.cap {
        let g = per_shot_g(shots, options.seed.wrapping_add(round));
        trace.push((shots, g));
        if g < options.threshold {
            let returned = (shots as f64 * options.margin).ceil() as u64;
            let final_g = per_shot_g(returned, options.seed.wrapping_add(round + 1));
            return Ok(Calibration {
                shots: returned,
                passing_shots: shots,
                passing_g: g,
                final_g,
                final_p: per_shot_similarity(final_g),
                trace,
            });
        }
        shots = match options.growth {
            ShotGrowth::Doubling => shots * 2,
            ShotGrowth::Linear(step) => shots + step.max(1),
        };
        round += 1;
    }
    Err(SimError::NonConvergent { cap: options.cap })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::Gate;

    #[test]
    fn deterministic_state() {
        let mut c = Circuit::new(3);
        c.push(Gate::x(0));
        c.push(Gate::x(2));
        let h = sample_circuit(&c, 100, 7).unwrap();
        assert_eq!(h.to_map().into_iter().collect::<Vec<_>>(), vec![("101".to_string(), 100)]);
    }

    #[test]
    fn uniform_two_qubits() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::h(1));
        let h = sample_circuit(&c, 1_000_000, 1).unwrap();
        for f in h.frequencies() {
            assert!((f - 0.25).abs() < 0.01);
        }
    }

    #[test]
    fn seeded_reproducible() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.push(Gate::new(crate::circuit::GateKind::Ry(0.3), 1));
        assert_eq!(sample_circuit(&c, 5000, 42).unwrap(), sample_circuit(&c, 5000, 42).unwrap());
        assert_ne!(sample_circuit(&c, 5000, 42).unwrap(), sample_circuit(&c, 5000, 43).unwrap());
    }

    #[test]
    fn measured_subset_marginalizes() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(1));
        c.push(Gate::measure(1));
        let h = sample_circuit(&c, 10, 0).unwrap();
        assert_eq!(h.num_bits(), 1);
        assert_eq!(h.counts(), &[0, 10]);
    }

    #[test]
    fn point_mass_calibrates_immediately() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(0));
        let cal = calibrate_shots(&Pmf::point(2, 2), &c, &CalibrationOptions::default()).unwrap();
        assert_eq!(cal.passing_shots, 1000);
        assert_eq!(cal.shots, 1500);
        assert_eq!(cal.trace.len(), 1);
    }

    #[test]
    fn histogram_exports() {
        let h = CountHistogram::from_counts(vec![1, 0, 2, 0]);
        assert_eq!(h.to_csv(), "bitstring,count\n00,1\n10,2\n");
        let back: BTreeMap<String, u64> = serde_json::from_str(&h.to_json()).unwrap();
        assert_eq!(back.get("10"), Some(&2));
    }
}
