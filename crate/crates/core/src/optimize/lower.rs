use super::{decompose_mcx, DecomposeMode, OptimizeError};
use crate::circuit::{lower_negative_controls, Circuit, Gate, GateKind};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Every gate is one of `x`, `cx`, `h`, `rx`, `ry`, `rz` or `measure`, with positive controls.
pub fn is_uniform(circuit: &Circuit) -> bool {
    circuit.gates.iter().all(|g| {
        let positive = g.controls.iter().all(|c| c.positive);
        positive
            && match g.kind {
                GateKind::X => g.controls.len() <= 1,
                GateKind::H | GateKind::Rx(_) | GateKind::Ry(_) | GateKind::Rz(_) | GateKind::Measure => {
                    g.controls.is_empty()
                }
                _ => false,
            }
    })
}

/// Rewrites a circuit into the uniform gate set, equal up to global phase.
/// Multi-controlled gates go through the Toffoli ladder (appending ancilla)
/// and the five-gate Toffoli first.
pub fn lower_to_uniform(circuit: &Circuit) -> Result<Circuit, OptimizeError> {
    let staged = decompose_mcx(
        &lower_negative_controls(&decompose_mcx(circuit, DecomposeMode::ToTrueToffoli)),
        DecomposeMode::ToffoliTo5Gate,
    );
    let mut out = staged.empty_like();
    for g in &staged.gates {
        lower_gate(g, &mut out)?;
    }
    Ok(out)
}

fn controlled_ry_like(kind: fn(f64) -> GateKind, theta: f64, c: usize, t: usize, out: &mut Circuit) {
    out.push(Gate::new(kind(theta / 2.0), t));
    out.push(Gate::cx(c, t));
    out.push(Gate::new(kind(-theta / 2.0), t));
    out.push(Gate::cx(c, t));
}

fn controlled_rx(theta: f64, c: usize, t: usize, out: &mut Circuit) {
    out.push(Gate::new(GateKind::Rz(FRAC_PI_2), t));
    controlled_ry_like(GateKind::Ry, theta, c, t, out);
    out.push(Gate::new(GateKind::Rz(-FRAC_PI_2), t));
}

fn lower_gate(g: &Gate, out: &mut Circuit) -> Result<(), OptimizeError> {
    let t = g.target;
    match (g.controls.as_slice(), g.kind) {
        (_, GateKind::Measure) | ([], GateKind::X | GateKind::H | GateKind::Rx(_) | GateKind::Ry(_) | GateKind::Rz(_)) => {
            out.push(g.clone())
        }
        ([], GateKind::Z) => out.push(Gate::new(GateKind::Rz(PI), t)),
        ([], GateKind::SqrtX) => out.push(Gate::new(GateKind::Rx(FRAC_PI_2), t)),
        ([], GateKind::SqrtXDg) => out.push(Gate::new(GateKind::Rx(-FRAC_PI_2), t)),
        ([c], kind) => {
            let c = c.qubit;
            match kind {
                GateKind::X => out.push(g.clone()),
                GateKind::Z => {
                    out.push(Gate::h(t));
                    out.push(Gate::cx(c, t));
                    out.push(Gate::h(t));
                }
                GateKind::Ry(a) => controlled_ry_like(GateKind::Ry, a, c, t, out),
                GateKind::Rz(a) => controlled_ry_like(GateKind::Rz, a, c, t, out),
                GateKind::Rx(a) => controlled_rx(a, c, t, out),
                GateKind::SqrtX | GateKind::SqrtXDg => {
                    let sign = if kind == GateKind::SqrtX { 1.0 } else { -1.0 };
                    out.push(Gate::new(GateKind::Rz(sign * FRAC_PI_4), c));
                    controlled_rx(sign * FRAC_PI_2, c, t, out);
                }
                GateKind::H => {
                    // H = Ry(-pi/4) X Ry(pi/4).
                    out.push(Gate::new(GateKind::Ry(FRAC_PI_4), t));
                    out.push(Gate::cx(c, t));
                    out.push(Gate::new(GateKind::Ry(-FRAC_PI_4), t));
                }
                GateKind::Measure => return Err(OptimizeError::UnsupportedGate(g.to_string())),
            }
        }
        _ => return Err(OptimizeError::UnsupportedGate(g.to_string())),
    }
    Ok(())
}
