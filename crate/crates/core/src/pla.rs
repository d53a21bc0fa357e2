//! Reader and writer for the espresso PLA format.
//!
//! ```
//! use qsynth::pla::parse_pla;
//!
//! let t = parse_pla(".i 2\n.o 1\n11 1\n.e\n").unwrap();
//! assert_eq!((t.num_inputs, t.num_outputs, t.rows.len()), (2, 1, 1));
//! ```

use serde::{Deserialize, Serialize};
use std::collections::HashMap;
use std::fmt;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum PlaError {
    #[error("line {line}: {message}")]
    MalformedDirective { line: usize, message: String },
    #[error("line {line}: {message}")]
    BadCube { line: usize, message: String },
    #[error("lines {first} and {second} assign opposite values to output {output}")]
    ConflictingRows { first: usize, second: usize, output: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Trit {
    Zero,
    One,
    Dash,
}

impl Trit {
    pub fn from_char(c: char) -> Option<Trit> {
        match c {
            '0' => Some(Trit::Zero),
            '1' => Some(Trit::One),
            '-' | '~' | '2' => Some(Trit::Dash),
            _ => None,
        }
    }

    pub fn to_char(self) -> char {
        match self {
            Trit::Zero => '0',
            Trit::One => '1',
            Trit::Dash => '-',
        }
    }

    pub fn from_bool(b: bool) -> Trit {
        if b {
            Trit::One
        } else {
            Trit::Zero
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Cube {
    pub inputs: Vec<Trit>,
    pub outputs: Vec<Trit>,
}

fn trits(s: &str) -> Option<Vec<Trit>> {
    s.chars().map(Trit::from_char).collect()
}

pub fn trit_string(t: &[Trit]) -> String {
    t.iter().map(|x| x.to_char()).collect()
}

impl Cube {
    /// Builds a cube from symbol strings; panics on illegal symbols.
    pub fn parse(inputs: &str, outputs: &str) -> Cube {
        Cube {
            inputs: trits(inputs).expect("input symbols"),
            outputs: trits(outputs).expect("output symbols"),
        }
    }

    pub fn input_dashes(&self) -> usize {
        self.inputs.iter().filter(|&&t| t == Trit::Dash).count()
    }

    /// Whether the input part covers the minterm `x` (first input is the MSB).
    pub fn covers(&self, x: u64) -> bool {
        let n = self.inputs.len();
        self.inputs.iter().enumerate().all(|(i, t)| {
            let bit = (x >> (n - 1 - i)) & 1 == 1;
            match t {
                Trit::Dash => true,
                Trit::One => bit,
                Trit::Zero => !bit,
            }
        })
    }
}

impl fmt::Display for Cube {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} {}", trit_string(&self.inputs), trit_string(&self.outputs))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PlaTable {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub rows: Vec<Cube>,
    pub declared_products: Option<usize>,
    /// Value of the `.type` directive (`f`, `fd`, `fr`, `fdr`, `esop`, ...).
    pub kind: Option<String>,
    pub input_labels: Option<Vec<String>>,
    pub output_labels: Option<Vec<String>>,
}

impl PlaTable {
    pub fn new(num_inputs: usize, num_outputs: usize) -> Self {
        PlaTable {
            num_inputs,
            num_outputs,
            rows: Vec::new(),
            declared_products: None,
            kind: None,
            input_labels: None,
            output_labels: None,
        }
    }

    pub fn with_rows(num_inputs: usize, num_outputs: usize, rows: Vec<Cube>) -> Self {
        PlaTable { rows, ..PlaTable::new(num_inputs, num_outputs) }
    }

    /// Rows are combined by XOR rather than OR.
    pub fn is_xor_type(&self) -> bool {
        self.kind.as_deref() == Some("esop")
    }

    /// `0` in an output column declares membership of the OFF-set.
    pub fn declares_offset(&self) -> bool {
        matches!(self.kind.as_deref(), Some("fr") | Some("fdr"))
    }
}

/// Parses a PLA document. Rows are kept verbatim; no expansion happens here.
pub fn parse_pla(text: &str) -> Result<PlaTable, PlaError> {
    let mut n: Option<usize> = None;
    let mut m: Option<usize> = None;
    let mut table = PlaTable::new(0, 0);
    let mut row_lines = Vec::new();

    let directive_err =
        |line: usize, message: String| PlaError::MalformedDirective { line, message };
    let parse_count = |line: usize, arg: Option<&str>, name: &str| -> Result<usize, PlaError> {
        arg.and_then(|a| a.parse::<usize>().ok())
            .ok_or_else(|| directive_err(line, format!("{name} needs a non-negative integer")))
    };

    for (idx, raw) in text.lines().enumerate() {
        let lineno = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        if let Some(rest) = line.strip_prefix('.') {
            let mut parts = rest.split_whitespace();
            let name = parts.next().unwrap_or("");
            match name {
                "i" | "o" => {
                    let v = parse_count(lineno, parts.next(), name)?;
                    if v == 0 {
                        return Err(directive_err(lineno, format!(".{name} must be at least 1")));
                    }
                    let slot = if name == "i" { &mut n } else { &mut m };
                    if slot.is_some_and(|old| old != v) {
                        return Err(directive_err(lineno, format!("contradictory .{name}")));
                    }
                    if !table.rows.is_empty() {
                        return Err(directive_err(lineno, format!(".{name} after cube rows")));
                    }
                    *slot = Some(v);
                }
                "p" => table.declared_products = Some(parse_count(lineno, parts.next(), "p")?),
                "type" => {
                    table.kind = Some(
                        parts
                            .next()
                            .ok_or_else(|| directive_err(lineno, ".type needs a value".into()))?
                            .to_string(),
                    )
                }
                "ilb" => table.input_labels = Some(parts.map(str::to_string).collect()),
                "ob" => table.output_labels = Some(parts.map(str::to_string).collect()),
                "e" | "end" => break,
                other => log::warn!("line {lineno}: ignoring directive .{other}"),
            }
            continue;
        }
        let (Some(ni), Some(mo)) = (n, m) else {
            return Err(directive_err(lineno, "cube row before .i and .o".into()));
        };
        let joined: String = line.split_whitespace().collect();
        if joined.chars().count() != ni + mo {
            return Err(PlaError::BadCube {
                line: lineno,
                message: format!("expected {} symbols, found {}", ni + mo, joined.chars().count()),
            });
        }
        let (ins, outs) = joined.split_at(ni);
        let cube = match (trits(ins), trits(outs)) {
            (Some(inputs), Some(outputs)) => Cube { inputs, outputs },
            _ => {
                return Err(PlaError::BadCube {
                    line: lineno,
                    message: format!("illegal symbol in {line:?}"),
                })
            }
        };
        table.rows.push(cube);
        row_lines.push(lineno);
    }

    let (Some(ni), Some(mo)) = (n, m) else {
        return Err(directive_err(0, "missing .i or .o".into()));
    };
    table.num_inputs = ni;
    table.num_outputs = mo;
    for (name, labels, width) in
        [("ilb", &table.input_labels, ni), ("ob", &table.output_labels, mo)]
    {
        if labels.as_ref().is_some_and(|l| l.len() != width) {
            return Err(directive_err(0, format!(".{name} lists the wrong number of names")));
        }
    }
    if let Some(p) = table.declared_products {
        if p != table.rows.len() {
            log::warn!(".p declares {p} products but {} rows were read", table.rows.len());
        }
    }
    if table.declares_offset() {
        check_conflicts(&table, &row_lines)?;
    }
    Ok(table)
}

fn check_conflicts(table: &PlaTable, row_lines: &[usize]) -> Result<(), PlaError> {
    let mut seen: HashMap<&[Trit], usize> = HashMap::new();
    for (r, cube) in table.rows.iter().enumerate() {
        if cube.input_dashes() > 0 {
            continue;
        }
        if let Some(&prev) = seen.get(cube.inputs.as_slice()) {
            let other = &table.rows[prev];
            for (j, (a, b)) in other.outputs.iter().zip(&cube.outputs).enumerate() {
                if matches!((a, b), (Trit::Zero, Trit::One) | (Trit::One, Trit::Zero)) {
                    return Err(PlaError::ConflictingRows {
                        first: row_lines[prev],
                        second: row_lines[r],
                        output: j,
                    });
                }
            }
        } else {
            seen.insert(&cube.inputs, r);
        }
    }
    Ok(())
}

/// Serializes with space-separated input and output fields.
pub fn write_pla(table: &PlaTable) -> String {
    let mut s = format!(".i {}\n.o {}\n", table.num_inputs, table.num_outputs);
    if let Some(l) = &table.input_labels {
        s.push_str(&format!(".ilb {}\n", l.join(" ")));
    }
    if let Some(l) = &table.output_labels {
        s.push_str(&format!(".ob {}\n", l.join(" ")));
    }
    if let Some(k) = &table.kind {
        s.push_str(&format!(".type {k}\n"));
    }
    if let Some(p) = table.declared_products {
        s.push_str(&format!(".p {p}\n"));
    }
    for c in &table.rows {
        s.push_str(&format!("{c}\n"));
    }
    s.push_str(".e\n");
    s
}
