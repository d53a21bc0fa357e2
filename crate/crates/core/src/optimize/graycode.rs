use crate::circuit::{Circuit, Control, Gate, GateKind};

/// Angles below this are dropped from the rewritten runs.
const ZERO_ANGLE: f64 = 1e-12;

/// Rewrites each maximal run of same-axis rotations on one target, all
/// controlled by the same `k >= 1` qubits, as `2^k` uncontrolled rotations
/// interleaved with `2^k` single-control couplings along a Gray-code cycle.
/// Couplings are CZ for X rotations and CX otherwise.
///
/// Missing control patterns count as zero angles and repeated patterns add up.
/// A run is only rewritten when the result is no longer than the run with its
/// negative controls spelled out as X pairs.
pub fn graycode_optimize(circuit: &Circuit) -> Circuit {
    let mut out = circuit.empty_like();
    let gates = &circuit.gates;
    let mut i = 0;
    while i < gates.len() {
        let g = &gates[i];
        if !g.kind.is_parameterized() || g.controls.is_empty() {
            out.push(g.clone());
            i += 1;
            continue;
        }
        let key = control_set(g);
        let mut j = i + 1;
        while j < gates.len()
            && gates[j].kind.same_family(&g.kind)
            && gates[j].target == g.target
            && control_set(&gates[j]) == key
        {
            j += 1;
        }
        let run = &gates[i..j];
        let rewritten = rewrite_run(run, &key);
        let spelled: usize = run.iter().map(|g| 1 + 2 * g.controls.iter().filter(|c| !c.positive).count()).sum();
        if rewritten.len() <= spelled {
            out.extend(rewritten);
        } else {
            out.extend(run.iter().cloned());
        }
        i = j;
    }
    out
}

fn control_set(g: &Gate) -> Vec<usize> {
    let mut qs: Vec<usize> = g.controls.iter().map(|c| c.qubit).collect();
    qs.sort_unstable();
    qs
}

/// Pattern bit `k - 1 - j` is the polarity of control `qubits[j]`.
fn rewrite_run(run: &[Gate], qubits: &[usize]) -> Vec<Gate> {
    let k = qubits.len();
    let size = 1usize << k;
    let mut w = vec![0.0f64; size];
    for g in run {
        let p = g.controls.iter().fold(0usize, |acc, c| {
            let j = qubits.iter().position(|&q| q == c.qubit).expect("same control set");
            acc | (c.positive as usize) << (k - 1 - j)
        });
        w[p] += g.kind.angle().expect("rotation");
    }
    walsh_hadamard(&mut w);
    let kind = run[0].kind;
    let target = run[0].target;
    let scale = 1.0 / size as f64;
    if w.iter().all(|a| (a * scale).abs() < ZERO_ANGLE) {
        return Vec::new();
    }
    let coupling = if matches!(kind, GateKind::Rx(_)) { GateKind::Z } else { GateKind::X };
    let mut out = Vec::with_capacity(2 * size);
    for i in 0..size {
        let gray = i ^ (i >> 1);
        let alpha = w[gray] * scale;
        if alpha.abs() >= ZERO_ANGLE {
            out.push(Gate::new(kind.with_angle(alpha), target));
        }
        let bit = if i + 1 == size { k - 1 } else { (i + 1).trailing_zeros() as usize };
        out.push(Gate::controlled(coupling, vec![Control::pos(qubits[k - 1 - bit])], target));
    }
    out
}

/// In place: `w[s] = sum_p (-1)^{popcount(p & s)} w[p]`.
fn walsh_hadamard(w: &mut [f64]) {
    let mut h = 1;
    while h < w.len() {
        for block in (0..w.len()).step_by(2 * h) {
            for i in block..block + h {
                let (a, b) = (w[i], w[i + h]);
                w[i] = a + b;
                w[i + h] = a - b;
            }
        }
        h *= 2;
    }
}
