use super::EncodingError;
use crate::circuit::{Circuit, Control, Gate, GateKind, QubitRole};
use crate::pmf::Pmf;

/// Binary tree of branching angles for a PMF over `2^N` bins.
///
/// `levels[l][p]` is the angle at the node reached by the `l`-bit prefix `p`
/// (most significant bit first): `cos^2` of it is the share of the node's mass
/// in its left (next bit 0) subtree. Nodes with no mass get angle 0.
#[derive(Debug, Clone, PartialEq)]
pub struct AngleTree {
    pub num_qubits: usize,
    pub levels: Vec<Vec<f64>>,
    /// Probability mass under each node, same layout as `levels` plus the leaves last.
    pub masses: Vec<Vec<f64>>,
}

impl AngleTree {
    pub fn from_pmf(pmf: &Pmf) -> AngleTree {
        let n = pmf.num_qubits();
        let mut masses = vec![pmf.probs().to_vec()];
        for _ in 0..n {
            let below = masses.last().expect("non-empty");
            masses.push(below.chunks(2).map(|c| c[0] + c[1]).collect());
        }
        masses.reverse();
        let levels = (0..n)
            .map(|l| {
                (0..1usize << l)
                    .map(|p| {
                        let total = masses[l][p];
                        let left = masses[l + 1][2 * p];
                        if total <= 0.0 {
                            0.0
                        } else {
                            (left / total).clamp(0.0, 1.0).sqrt().acos()
                        }
                    })
                    .collect()
            })
            .collect();
        AngleTree { num_qubits: n, levels, masses }
    }

    /// Products of `cos^2` / `sin^2` along each root-to-leaf path.
    pub fn leaf_probabilities(&self) -> Vec<f64> {
        let mut probs = vec![1.0];
        for level in &self.levels {
            probs = probs
                .iter()
                .zip(level)
                .flat_map(|(&p, &t)| [p * t.cos().powi(2), p * t.sin().powi(2)])
                .collect();
        }
        probs
    }

    pub fn node_count(&self) -> usize {
        self.levels.iter().map(Vec::len).sum()
    }

    /// Mass under prefix `p` at level `l`.
    pub fn mass(&self, l: usize, p: usize) -> f64 {
        self.masses[l][p]
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct AmplitudeOptions {
    /// Skip nodes whose subtree holds no probability.
    pub prune_zero_subtrees: bool,
}

/// One RY per tree node: level `l` targets qubit `l`, controlled by qubits
/// `0..l` spelling the node's prefix, with angle `2 theta`. Emits `2^N - 1`
/// rotations unless pruning is requested.
pub fn synth_amplitude(pmf: &Pmf) -> Result<Circuit, EncodingError> {
    synth_amplitude_with(pmf, AmplitudeOptions::default())
}

pub fn synth_amplitude_with(pmf: &Pmf, options: AmplitudeOptions) -> Result<Circuit, EncodingError> {
    let pmf = Pmf::new(pmf.probs().to_vec())?;
    let tree = AngleTree::from_pmf(&pmf);
    Ok(tree_circuit(&tree, options))
}

pub(crate) fn prefix_controls(p: usize, l: usize) -> Vec<Control> {
    (0..l)
        .map(|q| if p >> (l - 1 - q) & 1 == 1 { Control::pos(q) } else { Control::neg(q) })
        .collect()
}

fn tree_circuit(tree: &AngleTree, options: AmplitudeOptions) -> Circuit {
    let mut c = Circuit::with_roles(vec![QubitRole::Data; tree.num_qubits]);
    for (l, level) in tree.levels.iter().enumerate() {
        for (p, &theta) in level.iter().enumerate() {
            if options.prune_zero_subtrees && tree.mass(l, p) <= 0.0 {
                continue;
            }
            c.push(Gate::controlled(GateKind::Ry(2.0 * theta), prefix_controls(p, l), l));
        }
    }
    c
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::simulate::run_statevector;
    use std::f64::consts::FRAC_PI_2;

    fn max_diff(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
    }

    #[test]
    fn two_bin_uniform() {
        let c = synth_amplitude(&Pmf::uniform(1)).unwrap();
        assert_eq!(c.len(), 1);
        let GateKind::Ry(a) = c.gates[0].kind else { panic!() };
        assert!((a - FRAC_PI_2).abs() < 1e-15);
    }

    #[test]
    fn three_qubit_tree() {
        let probs = vec![0.03, 0.07, 0.1, 0.1, 0.2, 0.2, 0.2, 0.1];
        let pmf = Pmf::new(probs.clone()).unwrap();
        let tree = AngleTree::from_pmf(&pmf);
        assert!((tree.levels[0][0] - 0.3f64.sqrt().acos()).abs() < 1e-15);
        assert!(max_diff(&tree.leaf_probabilities(), &probs) < 1e-12);
        let c = synth_amplitude(&pmf).unwrap();
        assert_eq!(c.len(), 7);
        let sv = run_statevector(&c, 0).unwrap();
        let p = sv.probabilities();
        assert!((p[0] - 0.03).abs() < 1e-12 && (p[7] - 0.10).abs() < 1e-12);
        assert!(max_diff(&p, &probs) < 1e-10);
    }

    #[test]
    fn five_qubit_gate_count() {
        for name in ["uniform", "binomial", "triangle", "bimodal", "arbitrary"] {
            let pmf = Pmf::named(name, 5).unwrap();
            let c = synth_amplitude(&pmf).unwrap();
            assert_eq!(c.parameterized_gate_count(), 31, "{name}");
            let p = run_statevector(&c, 0).unwrap().probabilities();
            assert!(max_diff(&p, pmf.probs()) < 1e-10, "{name}");
        }
    }

    #[test]
    fn pruning_skips_empty_subtrees() {
        let pmf = Pmf::new(vec![0.5, 0.5, 0.0, 0.0]).unwrap();
        let c = synth_amplitude_with(&pmf, AmplitudeOptions { prune_zero_subtrees: true }).unwrap();
        assert_eq!(c.len(), 2);
        let p = run_statevector(&c, 0).unwrap().probabilities();
        assert!(max_diff(&p, pmf.probs()) < 1e-12);
    }
}
