use super::OptimizeError;
use crate::circuit::{Circuit, Control, Gate, GateKind, QubitRole};
use crate::pmf::Pmf;
use std::f64::consts::FRAC_PI_4;
use std::fmt;

/// Subtrees compare equal when their normalized masses agree to this.
const SYMMETRY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SymmetryKind {
    /// Both children of a node carry the same conditional distribution.
    Duplicate,
    /// The right child is the left child read backwards.
    Mirror,
    /// Either, checked mirror first.
    Both,
}

impl fmt::Display for SymmetryKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SymmetryKind::Duplicate => "duplicate",
            SymmetryKind::Mirror => "mirror",
            SymmetryKind::Both => "duplicate or mirror",
        })
    }
}

/// Amplitude-encoding circuit for `pmf` that shares work between symmetric subtrees.
///
/// A duplicate node prepares its shared subtree once, without a control on
/// the branching qubit. A mirror node prepares the left subtree once and then
/// complements every lower qubit when the branching qubit is 1. An
/// uncontrolled even split is an H. Subtrees with no mass emit nothing.
pub fn symmetric_optimize(pmf: &Pmf, kind: SymmetryKind) -> Result<Circuit, OptimizeError> {
    let pmf = Pmf::new(pmf.probs().to_vec())?;
    let n = pmf.num_qubits();
    let mut b = Builder { rotations: Vec::new(), fanouts: Vec::new(), kind, found: false, n };
    b.node(pmf.probs(), 0, &[]);
    if !b.found {
        return Err(OptimizeError::NoSymmetry(kind));
    }
    // Rotations on one qubit commute with each other, and each only depends on
    // lower qubits, so grouping by level and control set keeps the state.
    b.rotations.sort_by_key(|g| (g.target, control_qubits(g)));
    let mut circuit = Circuit::with_roles(vec![QubitRole::Data; n]);
    circuit.extend(b.rotations);
    circuit.extend(b.fanouts);
    Ok(circuit)
}

fn control_qubits(g: &Gate) -> Vec<usize> {
    g.controls.iter().map(|c| c.qubit).collect()
}

/// Rotations are emitted level by level; complementing fan-outs come after
/// all of them, innermost first.
struct Builder {
    rotations: Vec<Gate>,
    fanouts: Vec<Gate>,
    kind: SymmetryKind,
    found: bool,
    n: usize,
}

fn normalized(v: &[f64]) -> Option<Vec<f64>> {
    let total: f64 = v.iter().sum();
    (total > 0.0).then(|| v.iter().map(|x| x / total).collect())
}

fn close(a: impl Iterator<Item = f64>, b: impl Iterator<Item = f64>) -> bool {
    a.zip(b).all(|(x, y)| (x - y).abs() <= SYMMETRY_TOL)
}

impl Builder {
    fn node(&mut self, dist: &[f64], level: usize, controls: &[Control]) {
        let total: f64 = dist.iter().sum();
        if total <= 0.0 || dist.len() < 2 {
            return;
        }
        let (left, right) = dist.split_at(dist.len() / 2);
        let left_mass: f64 = left.iter().sum();
        let theta = (left_mass / total).clamp(0.0, 1.0).sqrt().acos();
        if controls.is_empty() && (theta - FRAC_PI_4).abs() <= SYMMETRY_TOL {
            self.rotations.push(Gate::h(level));
        } else {
            self.rotations.push(Gate::controlled(GateKind::Ry(2.0 * theta), controls.to_vec(), level));
        }

        let (nl, nr) = (normalized(left), normalized(right));
        let mirror = matches!(self.kind, SymmetryKind::Mirror | SymmetryKind::Both)
            && dist.len() > 2
            && matches!((&nl, &nr), (Some(l), Some(r)) if close(l.iter().rev().copied(), r.iter().copied()));
        let duplicate = !mirror
            && (dist.len() > 2 || self.n == 1)
            && matches!(self.kind, SymmetryKind::Duplicate | SymmetryKind::Both)
            && matches!((&nl, &nr), (Some(l), Some(r)) if close(l.iter().copied(), r.iter().copied()));

        if mirror {
            self.found = true;
            self.node(left, level + 1, controls);
            let mut fan = controls.to_vec();
            fan.push(Control::pos(level));
            for q in level + 1..self.n {
                self.fanouts.push(Gate::mcx(fan.clone(), q));
            }
        } else if duplicate {
            self.found = true;
            self.node(left, level + 1, controls);
        } else {
            let mut c = controls.to_vec();
            c.push(Control::neg(level));
            self.node(left, level + 1, &c);
            c.pop();
            c.push(Control::pos(level));
            self.node(right, level + 1, &c);
        }
    }
}
