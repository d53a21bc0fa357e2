use super::{GateSet, QasmError};
use crate::circuit::{Circuit, Gate, GateKind};
use crate::optimize::is_uniform;
use std::collections::BTreeSet;
use std::fmt::Write;

/// In-file macro definitions, in the order they are written.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub(super) enum Macro {
    SqrtX,
    SqrtXDg,
    CtrlRx,
    CtrlRy,
    CtrlSx,
    CtrlSxDg,
    /// Gate `base` with `k` controls through `k - 1` scratch qubits.
    Multi { base: &'static str, k: usize },
}

pub(super) fn base_name(kind: GateKind) -> Option<&'static str> {
    Some(match kind {
        GateKind::X => "x",
        GateKind::Z => "z",
        GateKind::H => "h",
        GateKind::Rx(_) => "rx",
        GateKind::Ry(_) => "ry",
        GateKind::Rz(_) => "rz",
        GateKind::SqrtX => "sx",
        GateKind::SqrtXDg => "sxdg",
        GateKind::Measure => return None,
    })
}

/// Single-control statement name for a base, and whether it takes an angle.
fn single_control(base: &str) -> (&'static str, bool) {
    match base {
        "x" => ("cx", false),
        "z" => ("cz", false),
        "h" => ("ch", false),
        "rx" => ("ctrl_rx", true),
        "ry" => ("ctrl_ry", true),
        "rz" => ("crz", true),
        "sx" => ("ctrl_sx", false),
        "sxdg" => ("ctrl_sxdg", false),
        _ => unreachable!("unknown base {base}"),
    }
}

fn deps(m: &Macro) -> Vec<Macro> {
    match m {
        Macro::CtrlSx | Macro::CtrlSxDg => vec![Macro::CtrlRx],
        Macro::Multi { base, .. } => match *base {
            "rx" => vec![Macro::CtrlRx],
            "ry" => vec![Macro::CtrlRy],
            "sx" => vec![Macro::CtrlSx, Macro::CtrlRx],
            "sxdg" => vec![Macro::CtrlSxDg, Macro::CtrlRx],
            _ => vec![],
        },
        _ => vec![],
    }
}

/// Macro a gate needs directly, if any.
fn gate_macro(g: &Gate) -> Option<Macro> {
    let k = g.controls.len();
    match (k, g.kind) {
        (_, GateKind::Measure) => None,
        (0, GateKind::SqrtX) => Some(Macro::SqrtX),
        (0, GateKind::SqrtXDg) => Some(Macro::SqrtXDg),
        (0, _) => None,
        (1, GateKind::Rx(_)) => Some(Macro::CtrlRx),
        (1, GateKind::Ry(_)) => Some(Macro::CtrlRy),
        (1, GateKind::SqrtX) => Some(Macro::CtrlSx),
        (1, GateKind::SqrtXDg) => Some(Macro::CtrlSxDg),
        (1, _) | (2, GateKind::X) => None,
        (k, kind) => Some(Macro::Multi { base: base_name(kind).expect("not a measurement"), k }),
    }
}

fn definition(m: &Macro) -> String {
    match m {
        Macro::SqrtX => "gate sqrt_x a { rx(pi/2) a; }".into(),
        Macro::SqrtXDg => "gate sqrt_xdg a { rx(-pi/2) a; }".into(),
        Macro::CtrlRx => {
            "gate ctrl_rx(theta) c,t { rz(pi/2) t; ry(theta/2) t; cx c,t; ry(-theta/2) t; cx c,t; rz(-pi/2) t; }"
                .into()
        }
        Macro::CtrlRy => "gate ctrl_ry(theta) c,t { ry(theta/2) t; cx c,t; ry(-theta/2) t; cx c,t; }".into(),
        Macro::CtrlSx => "gate ctrl_sx c,t { rz(pi/4) c; ctrl_rx(pi/2) c,t; }".into(),
        Macro::CtrlSxDg => "gate ctrl_sxdg c,t { rz(-pi/4) c; ctrl_rx(-pi/2) c,t; }".into(),
        Macro::Multi { base, k } => {
            let (single, angled) = single_control(base);
            let param = if angled { "(theta)" } else { "" };
            let c: Vec<String> = (0..*k).map(|i| format!("c{i}")).collect();
            let a: Vec<String> = (0..k - 1).map(|i| format!("a{i}")).collect();
            let mut ladder = vec![format!("ccx {},{},{};", c[0], c[1], a[0])];
            for i in 1..k - 1 {
                ladder.push(format!("ccx {},{},{};", a[i - 1], c[i + 1], a[i]));
            }
            let mut body = ladder.clone();
            body.push(format!("{single}{param} {},t;", a[k - 2]));
            body.extend(ladder.into_iter().rev());
            format!("gate mc{base}_{k}{param} {},{},t {{ {} }}", c.join(","), a.join(","), body.join(" "))
        }
    }
}

pub(super) fn format_angle(a: f64) -> String {
    format!("{a}")
}

/// Deterministic OpenQASM 2.0 text for `circuit`.
pub fn emit_qasm(circuit: &Circuit, gateset: GateSet) -> Result<String, QasmError> {
    if gateset == GateSet::Uniform && !is_uniform(circuit) {
        return Err(QasmError::NotUniform);
    }
    let mut macros = BTreeSet::new();
    let mut scratch = 0;
    for g in &circuit.gates {
        if let Some(m) = gate_macro(g) {
            if let Macro::Multi { k, .. } = m {
                scratch = scratch.max(k - 1);
            }
            for d in deps(&m) {
                macros.insert(d);
            }
            macros.insert(m);
        }
    }
    let has_measure = circuit.gates.iter().any(|g| g.kind == GateKind::Measure);

    let mut out = String::from("OPENQASM 2.0;\ninclude \"qelib1.inc\";\n");
    for m in &macros {
        out.push_str(&definition(m));
        out.push('\n');
    }
    let _ = writeln!(out, "qreg q[{}];", circuit.num_qubits);
    if scratch > 0 {
        let _ = writeln!(out, "qreg anc[{scratch}];");
    }
    if has_measure {
        let _ = writeln!(out, "creg c[{}];", circuit.num_qubits);
    }
    for g in &circuit.gates {
        statement(g, &mut out);
    }
    Ok(out)
}

fn statement(g: &Gate, out: &mut String) {
    if g.kind == GateKind::Measure {
        let _ = writeln!(out, "measure q[{0}] -> c[{0}];", g.target);
        return;
    }
    let negs: Vec<usize> = g.controls.iter().filter(|c| !c.positive).map(|c| c.qubit).collect();
    for q in &negs {
        let _ = writeln!(out, "x q[{q}];");
    }
    let param = g.kind.angle().map(|a| format!("({})", format_angle(a))).unwrap_or_default();
    let base = base_name(g.kind).expect("not a measurement");
    let mut args: Vec<String> = g.controls.iter().map(|c| format!("q[{}]", c.qubit)).collect();
    let name = match gate_macro(g) {
        Some(Macro::SqrtX) => "sqrt_x".to_string(),
        Some(Macro::SqrtXDg) => "sqrt_xdg".to_string(),
        Some(Macro::Multi { base, k }) => {
            args.extend((0..k - 1).map(|i| format!("anc[{i}]")));
            format!("mc{base}_{k}")
        }
        _ => match g.controls.len() {
            0 => base.to_string(),
            1 => single_control(base).0.to_string(),
            _ => "ccx".to_string(),
        },
    };
    args.push(format!("q[{}]", g.target));
    let _ = writeln!(out, "{name}{param} {};", args.join(","));
    for q in &negs {
        let _ = writeln!(out, "x q[{q}];");
    }
}
