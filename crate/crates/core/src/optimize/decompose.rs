use crate::circuit::{Circuit, Control, Gate, GateKind, QubitRole};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DecomposeMode {
    /// X gates with three or more controls, and any other gate with two or
    /// more, become a ladder of two-control Toffolis through appended ancilla.
    ToTrueToffoli,
    /// Two-control Toffolis become two CX and three controlled square-root-of-X gates.
    ToffoliTo5Gate,
}

pub fn decompose_mcx(circuit: &Circuit, mode: DecomposeMode) -> Circuit {
    match mode {
        DecomposeMode::ToTrueToffoli => ladder(circuit),
        DecomposeMode::ToffoliTo5Gate => five_gate(circuit),
    }
}

/// Ancilla an AND-ladder needs for `g`, or `None` if `g` is left alone.
fn ladder_ancilla(g: &Gate) -> Option<usize> {
    let k = g.controls.len();
    let needs = match g.kind {
        GateKind::X => k >= 3,
        GateKind::Measure => false,
        _ => k >= 2,
    };
    needs.then(|| k - 1)
}

/// `a_1 = c_1 c_2`, `a_i = a_{i-1} c_{i+1}`; the gate then fires on `a_{k-1}`
/// and the ladder is undone. Ancilla are shared by all gates.
fn ladder(circuit: &Circuit) -> Circuit {
    let needed = circuit.gates.iter().filter_map(ladder_ancilla).max().unwrap_or(0);
    let mut out = circuit.empty_like();
    let first = out.add_qubits(needed, QubitRole::Ancilla);
    for g in &circuit.gates {
        let Some(k1) = ladder_ancilla(g) else {
            out.push(g.clone());
            continue;
        };
        let anc = |i: usize| first + i;
        let mut compute = Vec::with_capacity(k1);
        compute.push(Gate::mcx(vec![g.controls[0], g.controls[1]], anc(0)));
        for i in 1..k1 {
            compute.push(Gate::mcx(vec![Control::pos(anc(i - 1)), g.controls[i + 1]], anc(i)));
        }
        out.extend(compute.iter().cloned());
        out.push(Gate::controlled(g.kind, vec![Control::pos(anc(k1 - 1))], g.target));
        out.extend(compute.into_iter().rev());
    }
    out
}

/// `C-sqrtX(b,t) CX(a,b) C-sqrtXdg(b,t) CX(a,b) C-sqrtX(a,t)`; control polarities carry over.
fn five_gate(circuit: &Circuit) -> Circuit {
    let mut out = circuit.empty_like();
    for g in &circuit.gates {
        if g.kind != GateKind::X || g.controls.len() != 2 {
            out.push(g.clone());
            continue;
        }
        let (a, b, t) = (g.controls[0], g.controls[1], g.target);
        let flip_b = Gate::controlled(GateKind::X, vec![a], b.qubit);
        out.push(Gate::controlled(GateKind::SqrtX, vec![b], t));
        out.push(flip_b.clone());
        out.push(Gate::controlled(GateKind::SqrtXDg, vec![b], t));
        out.push(flip_b);
        out.push(Gate::controlled(GateKind::SqrtX, vec![a], t));
    }
    out
}
