//! Shared fixtures for integration tests: benchmark lookup and a PLA evaluator
//! that reads cubes directly instead of going through table expansion.
#![allow(dead_code)]

use num_complex::Complex64;
use qsynth::circuit::Circuit;
use qsynth::pla::{parse_pla, PlaTable, Trit};
use qsynth::simulate::{run_statevector_from, Statevector};
use qsynth::Source;
use rand::Rng;
use rand_chacha::ChaCha8Rng;
use std::path::PathBuf;

/// Marks files generated to stand in for a benchmark whose original is not bundled.
const STAND_IN_MARK: &str = "# stand-in";

pub struct Bench {
    pub table: PlaTable,
    pub stand_in: bool,
}

impl Bench {
    pub fn source(&self) -> Source {
        Source::Pla(self.table.clone())
    }
}

/// Benchmark directories in lookup order: `QSYNTH_BENCH_DIR` first, then the bundled set.
pub struct Corpus {
    dirs: Vec<PathBuf>,
}

impl Corpus {
    pub fn locate() -> Self {
        let mut dirs = Vec::new();
        if let Ok(d) = std::env::var("QSYNTH_BENCH_DIR") {
            dirs.push(PathBuf::from(d));
        }
        dirs.push(bundled_dir());
        Corpus { dirs }
    }

    pub fn load(&self, name: &str) -> Option<Bench> {
        let text = self.dirs.iter().find_map(|d| std::fs::read_to_string(d.join(format!("{name}.pla"))).ok())?;
        let table = parse_pla(&text).unwrap_or_else(|e| panic!("{name}.pla: {e}"));
        Some(Bench { table, stand_in: text.lines().any(|l| l.starts_with(STAND_IN_MARK)) })
    }
}

pub fn bundled_dir() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("../../benchmarks")
}

pub fn bundled(name: &str) -> Bench {
    Corpus { dirs: vec![bundled_dir()] }.load(name).unwrap_or_else(|| panic!("{name}.pla is bundled"))
}

/// `.type fd` semantics: an output bit is 1 when any covering cube has a 1
/// there, and 0 everywhere else.
pub struct DirectPla<'a> {
    table: &'a PlaTable,
}

impl<'a> DirectPla<'a> {
    pub fn new(table: &'a PlaTable) -> Self {
        DirectPla { table }
    }

    fn covers(inputs: &[Trit], x: u64) -> bool {
        let n = inputs.len();
        inputs.iter().enumerate().all(|(i, t)| {
            let bit = (x >> (n - 1 - i)) & 1 == 1;
            match t {
                Trit::Zero => !bit,
                Trit::One => bit,
                Trit::Dash => true,
            }
        })
    }

    pub fn eval(&self, x: u64) -> u64 {
        let m = self.table.num_outputs;
        let mut y = 0u64;
        for cube in &self.table.rows {
            if Self::covers(&cube.inputs, x) {
                for (j, &t) in cube.outputs.iter().enumerate() {
                    if t == Trit::One {
                        y |= 1 << (m - 1 - j);
                    }
                }
            }
        }
        y
    }

    /// Covered inputs in order of first appearance, expanding each cube's
    /// dashes in ascending order.
    pub fn appearance_order(&self) -> Vec<u64> {
        let n = self.table.num_inputs;
        let mut seen = std::collections::HashSet::new();
        let mut order = Vec::new();
        for cube in &self.table.rows {
            let dashes: Vec<usize> = (0..n).filter(|&i| cube.inputs[i] == Trit::Dash).collect();
            let fixed = cube.inputs.iter().enumerate().fold(0u64, |acc, (i, &t)| {
                acc | ((t == Trit::One) as u64) << (n - 1 - i)
            });
            for k in 0..1u64 << dashes.len() {
                let x = dashes.iter().enumerate().fold(fixed, |acc, (j, &pos)| {
                    acc | ((k >> (dashes.len() - 1 - j)) & 1) << (n - 1 - pos)
                });
                if seen.insert(x) {
                    order.push(x);
                }
            }
        }
        order
    }

    /// Embedded `(input, output)` words of every covered row: the `g`-th row
    /// sharing an output value carries `g` in its ancilla and garbage fields.
    pub fn embedded_rows(&self) -> (usize, Vec<(u64, u64)>) {
        let (n, m) = (self.table.num_inputs, self.table.num_outputs);
        let order = self.appearance_order();
        let mut seen: std::collections::HashMap<u64, u64> = std::collections::HashMap::new();
        let tagged: Vec<(u64, u64, u64)> = order
            .iter()
            .map(|&x| {
                let y = self.eval(x);
                let g = seen.entry(y).or_insert(0);
                *g += 1;
                (x, y, *g - 1)
            })
            .collect();
        let n_dup = seen.values().copied().max().unwrap_or(0);
        if n_dup <= 1 && n == m {
            return (n, tagged.into_iter().map(|(x, y, _)| (x, y)).collect());
        }
        let v = (64 - (n_dup.max(1) - 1).leading_zeros()) as usize;
        let w = (v + m).saturating_sub(n);
        let width = (n + w).max(m + v);
        let mask = (1u64 << w) - 1;
        let rows = tagged
            .into_iter()
            .map(|(x, y, g)| {
                let input = ((x << w) | (g & mask)) << (width - n - w);
                let output = (y << (width - m)) | (g << (width - m - v));
                (input, output)
            })
            .collect();
        (width, rows)
    }

    /// Inputs covered by at least one cube, ascending.
    pub fn minterms(&self) -> Vec<u64> {
        (0..1u64 << self.table.num_inputs)
            .filter(|&x| self.table.rows.iter().any(|c| Self::covers(&c.inputs, x)))
            .collect()
    }
}

/// Largest amplitude error of `b` against `a` under one global phase, over
/// every basis input (up to 7 qubits) or 48 basis and 8 dense random inputs.
/// Qubits that `b` appends start in |0> and must return there.
pub fn unitary_distance(a: &Circuit, b: &Circuit, rng: &mut ChaCha8Rng) -> f64 {
    let n = a.num_qubits;
    let extra = b.num_qubits - n;
    let dim = 1usize << n;
    let mut probes: Vec<Vec<Complex64>> = Vec::new();
    let basis = |i: usize| {
        let mut v = vec![Complex64::new(0.0, 0.0); dim];
        v[i] = Complex64::new(1.0, 0.0);
        v
    };
    if n <= 7 {
        probes.extend((0..dim).map(basis));
    } else {
        probes.extend((0..48).map(|_| basis(rng.gen_range(0..dim))));
        for _ in 0..8 {
            let v: Vec<Complex64> =
                (0..dim).map(|_| Complex64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0))).collect();
            let norm = v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
            probes.push(v.into_iter().map(|z| z / norm).collect());
        }
    }
    let mut phase: Option<Complex64> = None;
    let mut worst: f64 = 0.0;
    for v in probes {
        let sa = apply(a, v.clone(), 0);
        let sb = apply(b, v, extra);
        let mut expected = vec![Complex64::new(0.0, 0.0); sb.len()];
        for (i, z) in sa.iter().enumerate() {
            expected[i << extra] = *z;
        }
        if phase.is_none() {
            if let Some((i, _)) = expected.iter().enumerate().find(|(_, z)| z.norm() > 1e-6) {
                phase = Some(sb[i] / expected[i]);
            }
        }
        let ph = phase.unwrap_or(Complex64::new(1.0, 0.0));
        for (x, y) in expected.iter().zip(&sb) {
            worst = worst.max((x * ph - y).norm());
        }
    }
    worst
}

pub fn apply(c: &Circuit, v: Vec<Complex64>, extra: usize) -> Vec<Complex64> {
    let mut amps = vec![Complex64::new(0.0, 0.0); v.len() << extra];
    for (i, z) in v.into_iter().enumerate() {
        amps[i << extra] = z;
    }
    run_statevector_from(c, Statevector::from_amplitudes(amps)).expect("small circuit").amps
}
