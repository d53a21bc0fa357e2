use crate::circuit::{lower_negative_controls, Circuit};

/// Deletes pairs of uncontrolled X gates on one qubit with nothing touching
/// that qubit in between. Removal cascades, so `X X X X` vanishes entirely.
///
/// Negative controls are first spelled out as X pairs, so the output has
/// only positive controls and its gate count is the natural-set count.
pub fn remove_double_x(circuit: &Circuit) -> Circuit {
    let lowered = lower_negative_controls(circuit);
    let circuit = &lowered;
    let mut kept: Vec<Option<usize>> = Vec::with_capacity(circuit.len());
    // Per qubit, indices into `kept` of surviving gates touching it, in order.
    let mut stacks: Vec<Vec<usize>> = vec![Vec::new(); circuit.num_qubits];
    for (i, g) in circuit.gates.iter().enumerate() {
        if g.is_plain_x_on(g.target) {
            let q = g.target;
            if let Some(&top) = stacks[q].last() {
                let prev = kept[top].expect("stack entries are live");
                if circuit.gates[prev].is_plain_x_on(q) {
                    kept[top] = None;
                    stacks[q].pop();
                    continue;
                }
            }
        }
        let slot = kept.len();
        kept.push(Some(i));
        for q in g.qubits() {
            stacks[q].push(slot);
        }
    }
    let mut out = circuit.empty_like();
    out.extend(kept.into_iter().flatten().map(|i| circuit.gates[i].clone()));
    out
}
