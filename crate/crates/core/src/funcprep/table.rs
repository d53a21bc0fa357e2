use super::FuncprepError;
use crate::pla::{Cube, PlaTable, Trit};
use std::collections::HashMap;

/// Dash-free function over `n`-bit inputs. Words are MSB-first: the first PLA
/// column is the most significant bit.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TruthTable {
    pub num_inputs: usize,
    pub num_outputs: usize,
    entries: Vec<(u128, u128)>,
    index: HashMap<u128, usize>,
}

pub(crate) const MAX_WORD_BITS: usize = 128;

fn mask(bits: usize) -> u128 {
    if bits >= 128 {
        u128::MAX
    } else {
        (1u128 << bits) - 1
    }
}

impl TruthTable {
    pub fn new(num_inputs: usize, num_outputs: usize) -> Result<Self, FuncprepError> {
        for w in [num_inputs, num_outputs] {
            if w == 0 || w > MAX_WORD_BITS {
                return Err(FuncprepError::UnsupportedWidth(w));
            }
        }
        Ok(TruthTable { num_inputs, num_outputs, entries: Vec::new(), index: HashMap::new() })
    }

    /// Builds a table from `(input, output)` pairs in order.
    pub fn from_pairs(
        num_inputs: usize,
        num_outputs: usize,
        pairs: impl IntoIterator<Item = (u128, u128)>,
    ) -> Result<Self, FuncprepError> {
        let mut t = TruthTable::new(num_inputs, num_outputs)?;
        for (x, y) in pairs {
            t.insert(x, y)?;
        }
        Ok(t)
    }

    /// Complete table `x -> f[x]`.
    pub fn from_fn(num_inputs: usize, num_outputs: usize, f: &[u64]) -> Result<Self, FuncprepError> {
        Self::from_pairs(num_inputs, num_outputs, f.iter().enumerate().map(|(x, &y)| (x as u128, y as u128)))
    }

    pub fn insert(&mut self, input: u128, output: u128) -> Result<(), FuncprepError> {
        debug_assert!(input <= mask(self.num_inputs) && output <= mask(self.num_outputs));
        if self.index.contains_key(&input) {
            return Err(FuncprepError::DuplicateInput(input));
        }
        self.index.insert(input, self.entries.len());
        self.entries.push((input, output));
        Ok(())
    }

    pub fn entries(&self) -> &[(u128, u128)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn get(&self, input: u128) -> Option<u128> {
        self.index.get(&input).map(|&i| self.entries[i].1)
    }

    pub fn is_complete(&self) -> bool {
        self.num_inputs < 64 && self.entries.len() as u128 == 1u128 << self.num_inputs
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = std::collections::HashSet::with_capacity(self.entries.len());
        self.entries.iter().all(|&(_, y)| seen.insert(y))
    }

    pub fn is_bijective(&self) -> bool {
        self.num_inputs == self.num_outputs && self.is_complete() && self.is_injective()
    }

    /// `f[x]` for a complete bijection.
    pub fn to_permutation(&self) -> Result<Vec<u64>, FuncprepError> {
        if !self.is_bijective() || self.num_inputs > 32 {
            return Err(FuncprepError::NotBijective);
        }
        let mut f = vec![0u64; 1 << self.num_inputs];
        for &(x, y) in &self.entries {
            f[x as usize] = y as u64;
        }
        Ok(f)
    }

    /// Entries sorted by input word.
    pub fn sorted(&self) -> Vec<(u128, u128)> {
        let mut e = self.entries.clone();
        e.sort_unstable();
        e
    }

    /// Back to PLA rows, one per entry, in table order.
    pub fn to_pla(&self) -> PlaTable {
        let bits = |v: u128, w: usize| -> Vec<Trit> {
            (0..w).map(|i| Trit::from_bool((v >> (w - 1 - i)) & 1 == 1)).collect()
        };
        let rows = self
            .entries
            .iter()
            .map(|&(x, y)| Cube { inputs: bits(x, self.num_inputs), outputs: bits(y, self.num_outputs) })
            .collect();
        PlaTable::with_rows(self.num_inputs, self.num_outputs, rows)
    }
}

/// Rows produced by expanding every input dash.
pub fn expanded_row_count(table: &PlaTable) -> u128 {
    table.rows.iter().map(|c| 1u128 << c.input_dashes().min(127)).sum()
}

/// Replaces each cube with `q` input dashes by its `2^q` minterm rows, in
/// ascending order of the substituted bits. Output dashes are untouched.
pub fn expand(table: &PlaTable, max_rows: u64) -> Result<PlaTable, FuncprepError> {
    let needed = expanded_row_count(table);
    if needed > max_rows as u128 {
        return Err(FuncprepError::SizeLimitExceeded { what: "expansion", needed, limit: max_rows });
    }
    let mut rows = Vec::with_capacity(needed as usize);
    for cube in &table.rows {
        let dash_pos: Vec<usize> = cube
            .inputs
            .iter()
            .enumerate()
            .filter(|(_, &t)| t == Trit::Dash)
            .map(|(i, _)| i)
            .collect();
        let q = dash_pos.len();
        for k in 0..(1u64 << q) {
            let mut inputs = cube.inputs.clone();
            for (j, &pos) in dash_pos.iter().enumerate() {
                inputs[pos] = Trit::from_bool((k >> (q - 1 - j)) & 1 == 1);
            }
            rows.push(Cube { inputs, outputs: cube.outputs.clone() });
        }
    }
    Ok(PlaTable { rows, ..table.clone() })
}

/// Every output dash becomes 0.
pub fn assign_dont_cares(table: &PlaTable) -> PlaTable {
    let rows = table
        .rows
        .iter()
        .map(|c| Cube {
            inputs: c.inputs.clone(),
            outputs: c
                .outputs
                .iter()
                .map(|&t| if t == Trit::Dash { Trit::Zero } else { t })
                .collect(),
        })
        .collect();
    PlaTable { rows, ..table.clone() }
}

fn word(t: &[Trit]) -> u128 {
    t.iter().fold(0, |acc, &x| (acc << 1) | (x == Trit::One) as u128)
}

/// Expands, assigns don't-cares, and merges rows sharing an input: by XOR for
/// `.type esop` tables, by OR otherwise. Rows keep their first-appearance order.
pub fn to_truth_table(table: &PlaTable, max_rows: u64) -> Result<TruthTable, FuncprepError> {
    let expanded = assign_dont_cares(&expand(table, max_rows)?);
    let xor = table.is_xor_type();
    let mut order: Vec<u128> = Vec::new();
    let mut values: HashMap<u128, u128> = HashMap::new();
    for c in &expanded.rows {
        let x = word(&c.inputs);
        let y = word(&c.outputs);
        match values.get_mut(&x) {
            Some(v) => *v = if xor { *v ^ y } else { *v | y },
            None => {
                values.insert(x, y);
                order.push(x);
            }
        }
    }
    TruthTable::from_pairs(
        table.num_inputs,
        table.num_outputs,
        order.into_iter().map(|x| (x, values[&x])),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn expand_examples() {
        let t = PlaTable::with_rows(3, 2, vec![Cube::parse("1-1", "10")]);
        let e = expand(&t, 100).unwrap();
        assert_eq!(e.rows, vec![Cube::parse("101", "10"), Cube::parse("111", "10")]);
        let t = PlaTable::with_rows(2, 1, vec![Cube::parse("--", "1")]);
        let e = expand(&t, 100).unwrap();
        let ins: Vec<String> = e.rows.iter().map(|c| crate::pla::trit_string(&c.inputs)).collect();
        assert_eq!(ins, ["00", "01", "10", "11"]);
        assert!(matches!(expand(&t, 3), Err(FuncprepError::SizeLimitExceeded { needed: 4, .. })));
    }

    #[test]
    fn assign_examples() {
        let t = PlaTable::with_rows(1, 3, vec![Cube::parse("1", "1-0")]);
        assert_eq!(assign_dont_cares(&t).rows[0], Cube::parse("1", "100"));
        let t = PlaTable::with_rows(1, 2, vec![Cube::parse("0", "10")]);
        assert_eq!(assign_dont_cares(&t), t);
    }

    #[test]
    fn expand_then_assign_three_dashes() {
        let t = PlaTable::with_rows(4, 2, vec![Cube::parse("-1--", "-1")]);
        let e = assign_dont_cares(&expand(&t, 100).unwrap());
        assert_eq!(e.rows.len(), 8);
        let mut seen: Vec<String> = Vec::new();
        for c in &e.rows {
            assert_eq!(c.input_dashes(), 0);
            assert_eq!(crate::pla::trit_string(&c.outputs), "01");
            assert_eq!(c.inputs[1], Trit::One);
            seen.push(crate::pla::trit_string(&c.inputs));
        }
        seen.sort();
        seen.dedup();
        assert_eq!(seen.len(), 8);
    }

    #[test]
    fn merge_semantics() {
        let mut t = PlaTable::with_rows(2, 1, vec![Cube::parse("1-", "1"), Cube::parse("-1", "1")]);
        let or = to_truth_table(&t, 100).unwrap();
        assert_eq!(or.get(0b11), Some(1));
        t.kind = Some("esop".into());
        let xor = to_truth_table(&t, 100).unwrap();
        assert_eq!(xor.get(0b11), Some(0));
        assert_eq!(xor.get(0b10), Some(1));
        assert_eq!(xor.get(0b00), None);
    }
}
