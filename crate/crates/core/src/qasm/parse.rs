use super::QasmError;
use crate::circuit::{Circuit, Control, Gate, GateKind};
use std::f64::consts::PI;

/// Register holding ladder scratch qubits; its arguments are dropped on read.
const SCRATCH_REGISTER: &str = "anc";

struct Register {
    name: String,
    offset: usize,
    size: usize,
}

/// Reads the subset of OpenQASM 2.0 that [`emit_qasm`](super::emit_qasm)
/// writes, plus `barrier`, `id`, `CX`, and angle expressions over `pi`.
/// Data registers are concatenated in declaration order.
pub fn parse_qasm(text: &str) -> Result<Circuit, QasmError> {
    let clean = strip_comments(text);
    let mut registers: Vec<Register> = Vec::new();
    let mut scratch_size = 0usize;
    let mut width = 0usize;
    let mut gates: Vec<Gate> = Vec::new();
    let mut pos = 0;
    let bytes = clean.as_bytes();
    while pos < bytes.len() {
        if bytes[pos].is_ascii_whitespace() {
            pos += 1;
            continue;
        }
        let line = clean[..pos].matches('\n').count() + 1;
        let rest = &clean[pos..];
        if rest.starts_with("gate") && rest[4..].starts_with(|c: char| c.is_whitespace()) {
            let close = rest.find('}').ok_or_else(|| syntax(line, "unterminated gate definition"))?;
            let name: String = rest[4..].trim_start().chars().take_while(|c| c.is_alphanumeric() || *c == '_').collect();
            if !is_known_macro(&name) {
                return Err(QasmError::UnsupportedGate { line, name });
            }
            pos += close + 1;
            continue;
        }
        let end = rest.find(';').ok_or_else(|| syntax(line, "missing ';'"))?;
        let stmt = rest[..end].trim();
        pos += end + 1;
        let (head, tail) = split_head(stmt);
        match head {
            "OPENQASM" | "include" | "creg" | "barrier" | "id" => {}
            "qreg" => {
                let (name, size) = parse_ref(tail, line)?;
                if name == SCRATCH_REGISTER {
                    scratch_size = size;
                } else {
                    registers.push(Register { name: name.to_string(), offset: width, size });
                    width += size;
                }
            }
            "measure" => {
                let (src, _) = tail.split_once("->").ok_or_else(|| syntax(line, "measure without '->'"))?;
                let q = resolve(&registers, src.trim(), line)?;
                gates.push(Gate::measure(q));
            }
            _ => gates.push(parse_gate(head, tail, &registers, scratch_size, line)?),
        }
    }
    let mut c = Circuit::new(width);
    for g in gates {
        if let Some(q) = g.qubits().find(|&q| q >= width) {
            return Err(syntax(0, &format!("qubit {q} outside the data registers")));
        }
        c.push(g);
    }
    Ok(c)
}

fn syntax(line: usize, message: &str) -> QasmError {
    QasmError::Syntax { line, message: message.to_string() }
}

fn strip_comments(text: &str) -> String {
    text.lines()
        .map(|l| match l.find("//") {
            Some(i) => &l[..i],
            None => l,
        })
        .collect::<Vec<_>>()
        .join("\n")
}

/// Splits `name(params) args` into the name (with parameters) and the rest.
fn split_head(stmt: &str) -> (&str, &str) {
    let mut depth = 0;
    for (i, ch) in stmt.char_indices() {
        match ch {
            '(' => depth += 1,
            ')' => depth -= 1,
            c if c.is_whitespace() && depth == 0 => return (&stmt[..i], stmt[i..].trim()),
            _ => {}
        }
    }
    (stmt, "")
}

fn parse_ref(s: &str, line: usize) -> Result<(&str, usize), QasmError> {
    let s = s.trim();
    let open = s.find('[').ok_or_else(|| syntax(line, &format!("expected indexed reference, got '{s}'")))?;
    let close = s.rfind(']').filter(|&c| c > open).ok_or_else(|| syntax(line, "missing ']'"))?;
    let idx = s[open + 1..close].trim().parse().map_err(|_| syntax(line, "bad index"))?;
    Ok((s[..open].trim(), idx))
}

fn resolve(registers: &[Register], s: &str, line: usize) -> Result<usize, QasmError> {
    let (name, idx) = parse_ref(s, line)?;
    let reg = registers
        .iter()
        .find(|r| r.name == name)
        .ok_or_else(|| QasmError::UnknownRegister { line, name: name.to_string() })?;
    if idx >= reg.size {
        return Err(QasmError::IndexOutOfRange { line, name: name.to_string(), index: idx });
    }
    Ok(reg.offset + idx)
}

fn is_known_macro(name: &str) -> bool {
    matches!(name, "sqrt_x" | "sqrt_xdg" | "ctrl_rx" | "ctrl_ry" | "ctrl_sx" | "ctrl_sxdg") || multi_macro(name).is_some()
}

/// `mc{base}_{k}` to (base, k).
fn multi_macro(name: &str) -> Option<(&str, usize)> {
    let (base, k) = name.strip_prefix("mc")?.rsplit_once('_')?;
    let k: usize = k.parse().ok()?;
    let ok = matches!(base, "x" | "z" | "h" | "rx" | "ry" | "rz" | "sx" | "sxdg") && k >= 2;
    ok.then_some((base, k))
}

fn kind_for(base: &str, angle: Option<f64>) -> Option<GateKind> {
    Some(match (base, angle) {
        ("x", None) => GateKind::X,
        ("z", None) => GateKind::Z,
        ("h", None) => GateKind::H,
        ("sx", None) => GateKind::SqrtX,
        ("sxdg", None) => GateKind::SqrtXDg,
        ("rx", Some(a)) => GateKind::Rx(a),
        ("ry", Some(a)) => GateKind::Ry(a),
        ("rz", Some(a)) => GateKind::Rz(a),
        _ => return None,
    })
}

fn parse_gate(
    head: &str,
    tail: &str,
    registers: &[Register],
    scratch_size: usize,
    line: usize,
) -> Result<Gate, QasmError> {
    let (name, angle) = match head.find('(') {
        Some(i) => {
            let inner = head[i + 1..].strip_suffix(')').ok_or_else(|| syntax(line, "unbalanced parameters"))?;
            (&head[..i], Some(eval_expr(inner).map_err(|m| syntax(line, &m))?))
        }
        None => (head, None),
    };
    let args: Vec<&str> = tail.split(',').map(str::trim).filter(|a| !a.is_empty()).collect();
    let unsupported = || QasmError::UnsupportedGate { line, name: name.to_string() };
    let (base, k, scratch) = match name {
        "x" | "h" | "z" | "rx" | "ry" | "rz" | "sx" | "sxdg" => (name, 0, 0),
        "sqrt_x" => ("sx", 0, 0),
        "sqrt_xdg" => ("sxdg", 0, 0),
        "cx" | "CX" => ("x", 1, 0),
        "cz" => ("z", 1, 0),
        "ch" => ("h", 1, 0),
        "crz" => ("rz", 1, 0),
        "ctrl_rx" => ("rx", 1, 0),
        "ctrl_ry" => ("ry", 1, 0),
        "ctrl_sx" => ("sx", 1, 0),
        "ctrl_sxdg" => ("sxdg", 1, 0),
        "ccx" => ("x", 2, 0),
        _ => {
            let (base, k) = multi_macro(name).ok_or_else(unsupported)?;
            (base, k, k - 1)
        }
    };
    let kind = kind_for(base, angle).ok_or_else(unsupported)?;
    if args.len() != k + scratch + 1 {
        return Err(syntax(line, &format!("{name} takes {} qubits, got {}", k + scratch + 1, args.len())));
    }
    for a in &args[k..k + scratch] {
        let (reg, idx) = parse_ref(a, line)?;
        if reg != SCRATCH_REGISTER || idx >= scratch_size {
            return Err(syntax(line, &format!("scratch argument '{a}' must index the {SCRATCH_REGISTER} register")));
        }
    }
    let controls = args[..k].iter().map(|a| resolve(registers, a, line).map(Control::pos)).collect::<Result<_, _>>()?;
    let target = resolve(registers, args[k + scratch], line)?;
    Ok(Gate::controlled(kind, controls, target))
}

/// Arithmetic over numbers and `pi` with `+ - * /`, unary minus and parentheses.
fn eval_expr(s: &str) -> Result<f64, String> {
    let tokens = tokenize(s)?;
    let mut p = ExprParser { tokens, pos: 0 };
    let v = p.sum()?;
    if p.pos != p.tokens.len() {
        return Err(format!("trailing input in '{s}'"));
    }
    Ok(v)
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Num(f64),
    Op(char),
}

fn tokenize(s: &str) -> Result<Vec<Tok>, String> {
    let mut out = Vec::new();
    let chars: Vec<char> = s.chars().collect();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if "+-*/()".contains(c) {
            out.push(Tok::Op(c));
            i += 1;
        } else if c.is_ascii_digit() || c == '.' {
            let start = i;
            while i < chars.len()
                && (chars[i].is_ascii_digit()
                    || chars[i] == '.'
                    || chars[i] == 'e'
                    || chars[i] == 'E'
                    || ((chars[i] == '-' || chars[i] == '+') && matches!(chars[i - 1], 'e' | 'E')))
            {
                i += 1;
            }
            let lit: String = chars[start..i].iter().collect();
            out.push(Tok::Num(lit.parse().map_err(|_| format!("bad number '{lit}'"))?));
        } else if chars[i..].starts_with(&['p', 'i']) {
            out.push(Tok::Num(PI));
            i += 2;
        } else {
            return Err(format!("unexpected '{c}' in expression"));
        }
    }
    Ok(out)
}

struct ExprParser {
    tokens: Vec<Tok>,
    pos: usize,
}

impl ExprParser {
    fn peek_op(&self) -> Option<char> {
        match self.tokens.get(self.pos) {
            Some(Tok::Op(c)) => Some(*c),
            _ => None,
        }
    }

    fn sum(&mut self) -> Result<f64, String> {
        let mut v = self.product()?;
        while let Some(op @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let r = self.product()?;
            v = if op == '+' { v + r } else { v - r };
        }
        Ok(v)
    }

    fn product(&mut self) -> Result<f64, String> {
        let mut v = self.unary()?;
        while let Some(op @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let r = self.unary()?;
            v = if op == '*' { v * r } else { v / r };
        }
        Ok(v)
    }

    fn unary(&mut self) -> Result<f64, String> {
        match self.tokens.get(self.pos).cloned() {
            Some(Tok::Op('-')) => {
                self.pos += 1;
                Ok(-self.unary()?)
            }
            Some(Tok::Op('+')) => {
                self.pos += 1;
                self.unary()
            }
            Some(Tok::Op('(')) => {
                self.pos += 1;
                let v = self.sum()?;
                if self.peek_op() != Some(')') {
                    return Err("missing ')'".into());
                }
                self.pos += 1;
                Ok(v)
            }
            Some(Tok::Num(n)) => {
                self.pos += 1;
                Ok(n)
            }
            other => Err(format!("unexpected {other:?}")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::lower_negative_controls;
    use crate::qasm::{emit_qasm, GateSet};
    use crate::simulate::run_statevector;

    #[test]
    fn expressions() {
        assert_eq!(eval_expr("pi/2").unwrap(), PI / 2.0);
        assert_eq!(eval_expr("-(1+2)*3").unwrap(), -9.0);
        assert_eq!(eval_expr("1.5e-3").unwrap(), 1.5e-3);
        assert_eq!(eval_expr("-0.25").unwrap(), -0.25);
        assert!(eval_expr("2 pi").is_err());
    }

    fn sample_circuit() -> Circuit {
        let mut c = Circuit::new(5);
        c.push(Gate::h(0));
        c.push(Gate::h(1));
        c.push(Gate::h(2));
        c.push(Gate::controlled(GateKind::Ry(0.1 + 0.2), vec![Control::neg(0)], 3));
        c.push(Gate::controlled(GateKind::Rx(-1.0 / 3.0), vec![Control::pos(1)], 4));
        c.push(Gate::controlled(GateKind::Rz(2.5), vec![Control::pos(2)], 4));
        c.push(Gate::controlled(GateKind::SqrtX, vec![Control::pos(0)], 4));
        c.push(Gate::controlled(GateKind::SqrtXDg, vec![Control::pos(3)], 1));
        c.push(Gate::new(GateKind::SqrtX, 2));
        c.push(Gate::ccx(0, 1, 2));
        c.push(Gate::mcx(vec![Control::pos(0), Control::neg(1), Control::pos(2)], 3));
        c.push(Gate::controlled(GateKind::Ry(1e-17), vec![Control::pos(0), Control::pos(1)], 4));
        c.push(Gate::controlled(GateKind::Z, vec![Control::pos(0), Control::pos(1), Control::pos(2)], 4));
        c.push(Gate::cz(4, 0));
        c
    }

    #[test]
    fn natural_round_trip() {
        let c = sample_circuit();
        let text = emit_qasm(&c, GateSet::Natural).unwrap();
        let back = parse_qasm(&text).unwrap();
        assert_eq!(back.gates, lower_negative_controls(&c).gates);
        assert_eq!(emit_qasm(&back, GateSet::Natural).unwrap(), text);
        let a = run_statevector(&c, 0).unwrap();
        let b = run_statevector(&back, 0).unwrap();
        assert!(a.max_abs_diff(&b) < 1e-12);
        assert!(text.contains("qreg anc[2];"));
        assert!(text.contains("gate mcx_3 c0,c1,c2,a0,a1,t {"));
    }

    #[test]
    fn measure_and_errors() {
        let mut c = Circuit::new(2);
        c.push(Gate::h(0));
        c.measure_all();
        let text = emit_qasm(&c, GateSet::Uniform).unwrap();
        assert!(text.contains("creg c[2];\n"));
        assert!(text.ends_with("measure q[1] -> c[1];\n"));
        assert_eq!(parse_qasm(&text).unwrap(), c);
        assert_eq!(emit_qasm(&sample_circuit(), GateSet::Uniform), Err(QasmError::NotUniform));
        assert!(matches!(parse_qasm("qreg q[1];\ny q[0];"), Err(QasmError::UnsupportedGate { line: 2, .. })));
        assert!(matches!(parse_qasm("qreg q[1];\nx r[0];"), Err(QasmError::UnknownRegister { .. })));
        assert!(matches!(parse_qasm("qreg q[1];\nx q[3];"), Err(QasmError::IndexOutOfRange { .. })));
    }
}
