//! ESOP oracles: one multi-controlled X per (cube, hot output bit), on `n + m` qubits.

use crate::circuit::{Circuit, Control, Gate, QubitRole};
use crate::funcprep::assign_dont_cares;
use crate::pla::{Cube, PlaTable, Trit};
use std::collections::HashMap;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct EsopCube {
    pub inputs: Vec<Trit>,
    pub outputs: Vec<bool>,
}

/// Cube list read under XOR: a minterm's output is the XOR of every cube covering it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EsopSpec {
    pub num_inputs: usize,
    pub num_outputs: usize,
    pub cubes: Vec<EsopCube>,
}

impl EsopSpec {
    /// Output word for minterm `x`, MSB-first on both sides.
    pub fn evaluate(&self, x: u128) -> Vec<bool> {
        let mut out = vec![false; self.num_outputs];
        for c in &self.cubes {
            if covers(&c.inputs, x) {
                for (o, &b) in out.iter_mut().zip(&c.outputs) {
                    *o ^= b;
                }
            }
        }
        out
    }

    pub fn to_pla(&self) -> PlaTable {
        let rows = self
            .cubes
            .iter()
            .map(|c| Cube {
                inputs: c.inputs.clone(),
                outputs: c.outputs.iter().map(|&b| Trit::from_bool(b)).collect(),
            })
            .collect();
        let mut t = PlaTable::with_rows(self.num_inputs, self.num_outputs, rows);
        t.kind = Some("esop".into());
        t
    }
}

fn covers(inputs: &[Trit], x: u128) -> bool {
    let n = inputs.len();
    inputs.iter().enumerate().all(|(i, t)| {
        let bit = (x >> (n - 1 - i)) & 1 == 1;
        match t {
            Trit::Dash => true,
            Trit::One => bit,
            Trit::Zero => !bit,
        }
    })
}

fn intersect(a: &[Trit], b: &[Trit]) -> Option<Vec<Trit>> {
    a.iter()
        .zip(b)
        .map(|(&x, &y)| match (x, y) {
            (Trit::Dash, t) | (t, Trit::Dash) => Some(t),
            (s, t) if s == t => Some(s),
            _ => None,
        })
        .collect()
}

/// Disjoint pieces of `a` outside `b`. Assumes the cubes intersect.
fn sharp(a: &[Trit], b: &[Trit]) -> Vec<Vec<Trit>> {
    let mut pieces = Vec::new();
    let mut prefix = a.to_vec();
    for i in 0..a.len() {
        if a[i] == Trit::Dash && b[i] != Trit::Dash {
            let mut p = prefix.clone();
            p[i] = if b[i] == Trit::One { Trit::Zero } else { Trit::One };
            pieces.push(p);
            prefix[i] = b[i];
        }
    }
    pieces
}

/// Pairs of row indices whose input cubes intersect.
pub fn find_overlaps(table: &PlaTable) -> Vec<(usize, usize)> {
    let mut out = Vec::new();
    for i in 0..table.rows.len() {
        for j in i + 1..table.rows.len() {
            if intersect(&table.rows[i].inputs, &table.rows[j].inputs).is_some() {
                out.push((i, j));
            }
        }
    }
    out
}

fn or_to_disjoint(table: &PlaTable) -> Vec<EsopCube> {
    let mut cover: Vec<EsopCube> = Vec::new();
    for row in &table.rows {
        let outs: Vec<bool> = row.outputs.iter().map(|&t| t == Trit::One).collect();
        if !outs.iter().any(|&b| b) {
            continue;
        }
        let mut fresh = vec![row.inputs.clone()];
        let mut next = Vec::with_capacity(cover.len() + 4);
        for d in cover.drain(..) {
            let Some(common) = intersect(&d.inputs, &row.inputs) else {
                next.push(d);
                continue;
            };
            for piece in sharp(&d.inputs, &row.inputs) {
                next.push(EsopCube { inputs: piece, outputs: d.outputs.clone() });
            }
            let merged: Vec<bool> = d.outputs.iter().zip(&outs).map(|(a, b)| a | b).collect();
            next.push(EsopCube { inputs: common, outputs: merged });
            fresh = fresh
                .into_iter()
                .flat_map(|f| {
                    if intersect(&f, &d.inputs).is_some() {
                        sharp(&f, &d.inputs)
                    } else {
                        vec![f]
                    }
                })
                .collect();
        }
        next.extend(fresh.into_iter().map(|inputs| EsopCube { inputs, outputs: outs.clone() }));
        cover = next;
    }
    cover
}

/// Rewrites a table as an ESOP whose XOR reading equals the table's reading.
///
/// `.type esop` tables are already XOR and are kept verbatim; every other type
/// is read as a cover (OR), which is first made disjoint so OR and XOR agree.
/// With `minimize`, identical cubes cancel and distance-1 pairs merge until
/// nothing changes.
pub fn to_esop(table: &PlaTable, minimize: bool) -> EsopSpec {
    let table = assign_dont_cares(table);
    let cubes = if table.is_xor_type() {
        table
            .rows
            .iter()
            .map(|r| EsopCube {
                inputs: r.inputs.clone(),
                outputs: r.outputs.iter().map(|&t| t == Trit::One).collect(),
            })
            .filter(|c| c.outputs.iter().any(|&b| b))
            .collect()
    } else {
        or_to_disjoint(&table)
    };
    let mut spec = EsopSpec { num_inputs: table.num_inputs, num_outputs: table.num_outputs, cubes };
    if minimize {
        spec.cubes = minimize_cubes(spec.cubes);
    }
    spec
}

fn xor_merge(a: &[Trit], b: &[Trit]) -> Option<Vec<Trit>> {
    let mut diff = None;
    for i in 0..a.len() {
        if a[i] != b[i] {
            if diff.is_some() {
                return None;
            }
            diff = Some(i);
        }
    }
    let i = diff?;
    let mut m = a.to_vec();
    // x.a ^ x.a' = x ; x ^ x.a = x.a' ; x ^ x.a' = x.a
    m[i] = match (a[i], b[i]) {
        (Trit::One, Trit::Zero) | (Trit::Zero, Trit::One) => Trit::Dash,
        (Trit::Dash, Trit::One) | (Trit::One, Trit::Dash) => Trit::Zero,
        (Trit::Dash, Trit::Zero) | (Trit::Zero, Trit::Dash) => Trit::One,
        _ => unreachable!(),
    };
    Some(m)
}

fn minimize_cubes(cubes: Vec<EsopCube>) -> Vec<EsopCube> {
    let mut slots: Vec<Option<EsopCube>> = Vec::new();
    let mut by_inputs: HashMap<Vec<Trit>, usize> = HashMap::new();

    fn add(
        slots: &mut Vec<Option<EsopCube>>,
        by_inputs: &mut HashMap<Vec<Trit>, usize>,
        cube: EsopCube,
    ) {
        if let Some(&idx) = by_inputs.get(&cube.inputs) {
            let existing = slots[idx].as_mut().expect("indexed slots are live");
            for (o, b) in existing.outputs.iter_mut().zip(&cube.outputs) {
                *o ^= b;
            }
            if !existing.outputs.iter().any(|&b| b) {
                slots[idx] = None;
                by_inputs.remove(&cube.inputs);
            }
        } else if cube.outputs.iter().any(|&b| b) {
            by_inputs.insert(cube.inputs.clone(), slots.len());
            slots.push(Some(cube));
        }
    }

    for c in cubes {
        add(&mut slots, &mut by_inputs, c);
    }
    loop {
        let mut changed = false;
        let mut i = 0;
        while i < slots.len() {
            let Some(a) = slots[i].clone() else {
                i += 1;
                continue;
            };
            let mut merged = false;
            'search: for pos in 0..a.inputs.len() {
                for alt in [Trit::Zero, Trit::One, Trit::Dash] {
                    if alt == a.inputs[pos] {
                        continue;
                    }
                    let mut probe = a.inputs.clone();
                    probe[pos] = alt;
                    let Some(&j) = by_inputs.get(&probe) else { continue };
                    let b = slots[j].as_ref().expect("indexed slots are live");
                    if b.outputs != a.outputs {
                        continue;
                    }
                    let inputs = xor_merge(&a.inputs, &probe).expect("distance one");
                    slots[i] = None;
                    slots[j] = None;
                    by_inputs.remove(&a.inputs);
                    by_inputs.remove(&probe);
                    add(&mut slots, &mut by_inputs, EsopCube { inputs, outputs: a.outputs.clone() });
                    merged = true;
                    break 'search;
                }
            }
            if merged {
                changed = true;
            }
            i += 1;
        }
        if !changed {
            break;
        }
    }
    slots.into_iter().flatten().collect()
}

/// Maps each cube to one X gate per hot output bit: positive controls on `1`
/// inputs, negative controls on `0` inputs, none on dashes. Inputs are qubits
/// `0..n`, outputs `n..n+m`.
pub fn synth_esop(spec: &EsopSpec) -> Circuit {
    let (n, m) = (spec.num_inputs, spec.num_outputs);
    let mut roles = vec![QubitRole::Input; n];
    roles.extend(std::iter::repeat(QubitRole::Output).take(m));
    let mut circuit = Circuit::with_roles(roles);
    for cube in &spec.cubes {
        let controls: Vec<Control> = cube
            .inputs
            .iter()
            .enumerate()
            .filter_map(|(q, t)| match t {
                Trit::One => Some(Control::pos(q)),
                Trit::Zero => Some(Control::neg(q)),
                Trit::Dash => None,
            })
            .collect();
        for (j, &hot) in cube.outputs.iter().enumerate() {
            if hot {
                circuit.push(Gate::mcx(controls.clone(), n + j));
            }
        }
    }
    circuit
}
