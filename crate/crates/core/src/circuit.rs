//! Technology-independent circuit representation and cost metrics.
//!
//! A [`Circuit`] is a flat, ordered gate list over a fixed qubit register.
//! Every gate has a single target and any number of polarity-tagged controls,
//! so CX is `X` with one control, a Toffoli is `X` with two, and CZ is `Z`
//! with one.

use serde::{Deserialize, Serialize};
use std::fmt;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub enum GateKind {
    X,
    H,
    Z,
    Rx(f64),
    Ry(f64),
    Rz(f64),
    SqrtX,
    SqrtXDg,
    Measure,
}

impl GateKind {
    pub fn angle(&self) -> Option<f64> {
        match *self {
            GateKind::Rx(a) | GateKind::Ry(a) | GateKind::Rz(a) => Some(a),
            _ => None,
        }
    }

    pub fn is_parameterized(&self) -> bool {
        self.angle().is_some()
    }

    /// Same kind with a different angle. Non-rotations are returned as-is.
    pub fn with_angle(&self, angle: f64) -> GateKind {
        match self {
            GateKind::Rx(_) => GateKind::Rx(angle),
            GateKind::Ry(_) => GateKind::Ry(angle),
            GateKind::Rz(_) => GateKind::Rz(angle),
            k => *k,
        }
    }

    /// Kind ignoring the angle, for grouping rotations.
    pub fn same_family(&self, other: &GateKind) -> bool {
        std::mem::discriminant(self) == std::mem::discriminant(other)
    }

    pub fn name(&self) -> &'static str {
        match self {
            GateKind::X => "x",
            GateKind::H => "h",
            GateKind::Z => "z",
            GateKind::Rx(_) => "rx",
            GateKind::Ry(_) => "ry",
            GateKind::Rz(_) => "rz",
            GateKind::SqrtX => "sx",
            GateKind::SqrtXDg => "sxdg",
            GateKind::Measure => "measure",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Control {
    pub qubit: usize,
    /// `true` fires on |1>, `false` fires on |0>.
    pub positive: bool,
}

impl Control {
    pub fn pos(qubit: usize) -> Self {
        Control { qubit, positive: true }
    }

    pub fn neg(qubit: usize) -> Self {
        Control { qubit, positive: false }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Gate {
    pub kind: GateKind,
    pub controls: Vec<Control>,
    pub target: usize,
}

impl Gate {
    pub fn new(kind: GateKind, target: usize) -> Self {
        Gate { kind, controls: Vec::new(), target }
    }

    pub fn controlled(kind: GateKind, controls: Vec<Control>, target: usize) -> Self {
        Gate { kind, controls, target }
    }

    pub fn x(target: usize) -> Self {
        Gate::new(GateKind::X, target)
    }

    pub fn h(target: usize) -> Self {
        Gate::new(GateKind::H, target)
    }

    pub fn cx(control: usize, target: usize) -> Self {
        Gate::controlled(GateKind::X, vec![Control::pos(control)], target)
    }

    pub fn cz(control: usize, target: usize) -> Self {
        Gate::controlled(GateKind::Z, vec![Control::pos(control)], target)
    }

    pub fn ccx(c0: usize, c1: usize, target: usize) -> Self {
        Gate::controlled(GateKind::X, vec![Control::pos(c0), Control::pos(c1)], target)
    }

    pub fn mcx(controls: Vec<Control>, target: usize) -> Self {
        Gate::controlled(GateKind::X, controls, target)
    }

    pub fn measure(qubit: usize) -> Self {
        Gate::new(GateKind::Measure, qubit)
    }

    pub fn qubits(&self) -> impl Iterator<Item = usize> + '_ {
        self.controls.iter().map(|c| c.qubit).chain(std::iter::once(self.target))
    }

    pub fn touches(&self, q: usize) -> bool {
        self.target == q || self.controls.iter().any(|c| c.qubit == q)
    }

    /// Uncontrolled X on `q`.
    pub fn is_plain_x_on(&self, q: usize) -> bool {
        self.kind == GateKind::X && self.controls.is_empty() && self.target == q
    }

    pub fn has_negative_controls(&self) -> bool {
        self.controls.iter().any(|c| !c.positive)
    }

    pub fn cost(&self) -> usize {
        self.controls.len() + 1
    }
}

impl fmt::Display for Gate {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.kind.name())?;
        if let Some(a) = self.kind.angle() {
            write!(f, "({a})")?;
        }
        for c in &self.controls {
            write!(f, " {}q{}", if c.positive { "" } else { "!" }, c.qubit)?;
        }
        write!(f, " -> q{}", self.target)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum QubitRole {
    Input,
    Output,
    Ancilla,
    Garbage,
    Address,
    Data,
    Work,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Circuit {
    pub num_qubits: usize,
    pub gates: Vec<Gate>,
    pub roles: Vec<QubitRole>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Metrics {
    pub qubits: usize,
    pub gate_count: usize,
    pub complexity: usize,
    pub depth: usize,
    pub parameterized_gate_count: usize,
}

impl Circuit {
    pub fn new(num_qubits: usize) -> Self {
        Circuit { num_qubits, gates: Vec::new(), roles: vec![QubitRole::Work; num_qubits] }
    }

    pub fn with_roles(roles: Vec<QubitRole>) -> Self {
        Circuit { num_qubits: roles.len(), gates: Vec::new(), roles }
    }

    /// Same register, no gates.
    pub fn empty_like(&self) -> Self {
        Circuit { num_qubits: self.num_qubits, gates: Vec::new(), roles: self.roles.clone() }
    }

    pub fn push(&mut self, gate: Gate) {
        debug_assert!(gate.qubits().all(|q| q < self.num_qubits), "gate {gate} out of range");
        self.gates.push(gate);
    }

    pub fn extend<I: IntoIterator<Item = Gate>>(&mut self, gates: I) {
        for g in gates {
            self.push(g);
        }
    }

    /// Appends fresh qubits and returns the index of the first one.
    pub fn add_qubits(&mut self, count: usize, role: QubitRole) -> usize {
        let first = self.num_qubits;
        self.num_qubits += count;
        self.roles.extend(std::iter::repeat(role).take(count));
        first
    }

    pub fn len(&self) -> usize {
        self.gates.len()
    }

    pub fn is_empty(&self) -> bool {
        self.gates.is_empty()
    }

    pub fn max_controls(&self) -> usize {
        self.gates.iter().map(|g| g.controls.len()).max().unwrap_or(0)
    }

    pub fn complexity(&self) -> usize {
        complexity(self)
    }

    pub fn depth(&self) -> usize {
        depth(self)
    }

    pub fn parameterized_gate_count(&self) -> usize {
        self.gates.iter().filter(|g| g.kind.is_parameterized()).count()
    }

    pub fn metrics(&self) -> Metrics {
        Metrics {
            qubits: self.num_qubits,
            gate_count: self.gates.len(),
            complexity: self.complexity(),
            depth: self.depth(),
            parameterized_gate_count: self.parameterized_gate_count(),
        }
    }

    /// Checks index bounds and control/target disjointness.
    pub fn validate(&self) -> Result<(), String> {
        if self.roles.len() != self.num_qubits {
            return Err(format!("{} roles for {} qubits", self.roles.len(), self.num_qubits));
        }
        for (i, g) in self.gates.iter().enumerate() {
            if let Some(q) = g.qubits().find(|&q| q >= self.num_qubits) {
                return Err(format!("gate {i} uses qubit {q} outside register of {}", self.num_qubits));
            }
            let mut seen: Vec<usize> = g.qubits().collect();
            seen.sort_unstable();
            if seen.windows(2).any(|w| w[0] == w[1]) {
                return Err(format!("gate {i} repeats a qubit"));
            }
            if g.kind == GateKind::Measure && !g.controls.is_empty() {
                return Err(format!("gate {i} is a controlled measurement"));
            }
        }
        Ok(())
    }

    /// Concatenation; both circuits must share the register size.
    pub fn then(mut self, other: &Circuit) -> Circuit {
        assert_eq!(self.num_qubits, other.num_qubits);
        self.gates.extend(other.gates.iter().cloned());
        self
    }

    pub fn measure_all(&mut self) {
        for q in 0..self.num_qubits {
            self.push(Gate::measure(q));
        }
    }

    pub fn measured_qubits(&self) -> Vec<usize> {
        let mut qs: Vec<usize> =
            self.gates.iter().filter(|g| g.kind == GateKind::Measure).map(|g| g.target).collect();
        qs.sort_unstable();
        qs.dedup();
        qs
    }

    /// Applies a qubit permutation `q -> perm[q]`.
    pub fn relabel(&self, perm: &[usize]) -> Circuit {
        let mut roles = self.roles.clone();
        for (q, &p) in perm.iter().enumerate() {
            roles[p] = self.roles[q];
        }
        let gates = self
            .gates
            .iter()
            .map(|g| Gate {
                kind: g.kind,
                controls: g
                    .controls
                    .iter()
                    .map(|c| Control { qubit: perm[c.qubit], positive: c.positive })
                    .collect(),
                target: perm[g.target],
            })
            .collect();
        Circuit { num_qubits: self.num_qubits, gates, roles }
    }
}

impl fmt::Display for Circuit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "circuit on {} qubits, {} gates", self.num_qubits, self.gates.len())?;
        for g in &self.gates {
            writeln!(f, "  {g}")?;
        }
        Ok(())
    }
}

/// Sum over gates of controls plus targets.
pub fn complexity(circuit: &Circuit) -> usize {
    circuit.gates.iter().map(Gate::cost).sum()
}

/// Longest chain of gates where consecutive gates share a qubit.
pub fn depth(circuit: &Circuit) -> usize {
    let mut level = vec![0usize; circuit.num_qubits];
    let mut best = 0;
    for g in &circuit.gates {
        let l = g.qubits().map(|q| level[q]).max().unwrap_or(0) + 1;
        for q in g.qubits() {
            level[q] = l;
        }
        best = best.max(l);
    }
    best
}

/// Replaces every negative control by an X / gate / X sandwich.
pub fn lower_negative_controls(circuit: &Circuit) -> Circuit {
    let mut out = circuit.empty_like();
    for g in &circuit.gates {
        if !g.has_negative_controls() {
            out.push(g.clone());
            continue;
        }
        let negs: Vec<usize> = g.controls.iter().filter(|c| !c.positive).map(|c| c.qubit).collect();
        for &q in &negs {
            out.push(Gate::x(q));
        }
        out.push(Gate {
            kind: g.kind,
            controls: g.controls.iter().map(|c| Control::pos(c.qubit)).collect(),
            target: g.target,
        });
        for &q in &negs {
            out.push(Gate::x(q));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn toffoli_complexity_is_three() {
        let mut c = Circuit::new(3);
        c.push(Gate::ccx(0, 1, 2));
        assert_eq!(c.complexity(), 3);
        assert_eq!(Circuit::new(4).complexity(), 0);
    }

    #[test]
    fn mixed_multiset_complexity() {
        let mut c = Circuit::new(6);
        for i in 0..8 {
            c.push(Gate::ccx(i % 3, 3, 4 + i % 2));
        }
        c.push(Gate::cx(0, 1));
        c.push(Gate::cx(1, 2));
        for q in 0..6 {
            c.push(Gate::x(q));
        }
        assert_eq!(c.complexity(), 34);
    }

    #[test]
    fn depth_examples() {
        let mut c = Circuit::new(2);
        c.push(Gate::x(0));
        assert_eq!(c.depth(), 1);
        c.push(Gate::x(1));
        assert_eq!(c.depth(), 1);
        let mut c = Circuit::new(2);
        c.push(Gate::x(0));
        c.push(Gate::cx(0, 1));
        c.push(Gate::x(1));
        assert_eq!(c.depth(), 3);
        let mut m = Circuit::new(1);
        m.push(Gate::x(0));
        m.push(Gate::measure(0));
        assert_eq!(m.depth(), 2);
    }

    #[test]
    fn lowering_single_negative_control() {
        let mut c = Circuit::new(2);
        c.push(Gate::mcx(vec![Control::neg(0)], 1));
        let l = lower_negative_controls(&c);
        assert_eq!(l.gates, vec![Gate::x(0), Gate::cx(0, 1), Gate::x(0)]);
        assert_eq!(lower_negative_controls(&l), l);
    }

    #[test]
    fn validate_rejects_overlap() {
        let mut c = Circuit::new(2);
        c.gates.push(Gate::cx(1, 1));
        assert!(c.validate().is_err());
    }
}
