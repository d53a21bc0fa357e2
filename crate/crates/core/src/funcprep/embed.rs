use super::{FuncprepError, TruthTable};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use std::collections::HashMap;

/// Injective square embedding of a table.
///
/// Input words are `x | ancilla | zero padding` and output words are
/// `f(x) | garbage | zero padding`, most significant field first, both of
/// width `max(n + w, m + v)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RttResult {
    pub table: TruthTable,
    pub ancilla_count: usize,
    pub garbage_count: usize,
    pub original_n: usize,
    pub original_m: usize,
    /// Largest number of inputs sharing one output word.
    pub n_dup: usize,
}

impl RttResult {
    pub fn width(&self) -> usize {
        self.table.num_inputs
    }
}

fn ceil_log2(x: usize) -> usize {
    if x <= 1 {
        0
    } else {
        (usize::BITS - (x - 1).leading_zeros()) as usize
    }
}

/// Adds garbage outputs (and ancilla inputs where needed) so that no two rows
/// share an output word. Duplicate groups are numbered 0, 1, 2, ... in order
/// of appearance.
pub fn make_one_to_one(table: &TruthTable) -> Result<RttResult, FuncprepError> {
    let (n, m) = (table.num_inputs, table.num_outputs);
    let mut group_size: HashMap<u128, usize> = HashMap::new();
    for &(_, y) in table.entries() {
        *group_size.entry(y).or_default() += 1;
    }
    let n_dup = group_size.values().copied().max().unwrap_or(0);
    if n_dup <= 1 && n == m {
        return Ok(RttResult {
            table: table.clone(),
            ancilla_count: 0,
            garbage_count: 0,
            original_n: n,
            original_m: m,
            n_dup,
        });
    }
    let v = ceil_log2(n_dup);
    let w = (v + m).saturating_sub(n);
    let width = (n + w).max(m + v);
    if width > super::table::MAX_WORD_BITS {
        return Err(FuncprepError::UnsupportedWidth(width));
    }
    let anc_mask = if w == 0 { 0 } else { (1u128 << w) - 1 };
    let mut counter: HashMap<u128, u128> = HashMap::new();
    let mut out = TruthTable::new(width, width)?;
    for &(x, y) in table.entries() {
        let k = counter.entry(y).or_insert(0);
        let g = *k;
        *k += 1;
        let input = ((x << w) | (g & anc_mask)) << (width - n - w);
        let output = (y << (width - m)) | (g << (width - m - v));
        out.insert(input, output)?;
    }
    Ok(RttResult { table: out, ancilla_count: w, garbage_count: v, original_n: n, original_m: m, n_dup })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OntoStrategy {
    /// Unassigned inputs take unused outputs in ascending order; a seed shuffles the outputs first.
    RandomFill { seed: Option<u64> },
    /// Identity where possible, then nearest unused output by Hamming distance, ties to the smaller value.
    HammingMin,
}

/// Completes an injective square table to a bijection on all `2^n` words.
pub fn make_onto(
    table: &TruthTable,
    strategy: OntoStrategy,
    max_rows: u64,
) -> Result<TruthTable, FuncprepError> {
    let n = table.num_inputs;
    if n != table.num_outputs {
        return Err(FuncprepError::WidthMismatch { inputs: n, outputs: table.num_outputs });
    }
    if n >= 64 || (1u64 << n) > max_rows {
        let needed = if n >= 127 { u128::MAX } else { 1u128 << n };
        return Err(FuncprepError::SizeLimitExceeded { what: "onto embedding", needed, limit: max_rows });
    }
    let size = 1usize << n;
    let mut used = vec![false; size];
    let mut assigned = vec![false; size];
    for &(x, y) in table.entries() {
        if std::mem::replace(&mut used[y as usize], true) {
            return Err(FuncprepError::NotInjective(y));
        }
        assigned[x as usize] = true;
    }
    let free_domain: Vec<usize> = (0..size).filter(|&d| !assigned[d]).collect();
    let mut out = table.clone();
    match strategy {
        OntoStrategy::RandomFill { seed } => {
            let mut free_range: Vec<usize> = (0..size).filter(|&r| !used[r]).collect();
            if let Some(s) = seed {
                free_range.shuffle(&mut ChaCha8Rng::seed_from_u64(s));
            }
            for (&d, &r) in free_domain.iter().zip(&free_range) {
                out.insert(d as u128, r as u128)?;
            }
        }
        OntoStrategy::HammingMin => {
            let mut pairs = Vec::with_capacity(free_domain.len());
            let mut rest = Vec::new();
            for &d in &free_domain {
                if !used[d] {
                    used[d] = true;
                    pairs.push((d, d));
                } else {
                    rest.push(d);
                }
            }
            let mut free_range: Vec<usize> = (0..size).filter(|&r| !used[r]).collect();
            for d in rest {
                let (pos, _) = free_range
                    .iter()
                    .enumerate()
                    .min_by_key(|&(_, &r)| ((d ^ r).count_ones(), r))
                    .expect("as many free outputs as free inputs");
                pairs.push((d, free_range.remove(pos)));
            }
            pairs.sort_unstable();
            for (d, r) in pairs {
                out.insert(d as u128, r as u128)?;
            }
        }
    }
    Ok(out)
}
