use super::{SynthTrace, TbsError, TbsOptions, Worker};
use crate::circuit::Circuit;
use crate::funcprep::TruthTable;

/// Unidirectional transformation-based synthesis.
pub fn synth_tbs_basic(table: &TruthTable, options: &TbsOptions) -> Result<(Circuit, SynthTrace), TbsError> {
    let n = table.num_inputs;
    let mut w = Worker::new(table, options)?;
    for i in 0..w.f.len() {
        if i % 256 == 0 {
            w.check_deadline()?;
        }
        if w.f[i] != i as u64 {
            w.basic_step(i, n)?;
        }
        w.snapshot(i);
    }
    Ok((w.trace.to_circuit(n), w.trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::circuit::GateKind;
    use crate::tbs::test_util::{next_permutation, perm_table, realizes};

    #[test]
    fn identity_is_empty() {
        let f: Vec<u64> = (0..8).collect();
        let (c, _) = synth_tbs_basic(&perm_table(&f), &TbsOptions::default()).unwrap();
        assert!(c.is_empty());
        assert_eq!(c.num_qubits, 3);
    }

    #[test]
    fn rows_fixed_in_order() {
        let f = [1, 0, 3, 2, 5, 7, 4, 6];
        let opts = TbsOptions { keep_snapshots: true, ..Default::default() };
        let (c, trace) = synth_tbs_basic(&perm_table(&f), &opts).unwrap();
        for (row, snap) in &trace.snapshots {
            assert!((0..=*row).all(|k| snap[k] == k as u64));
        }
        assert!(realizes(&c, &f));
        assert!(c.gates.iter().all(|g| g.kind == GateKind::X && !g.has_negative_controls()));
    }

    #[test]
    fn all_three_bit_bijections() {
        let mut f: Vec<u64> = (0..8).collect();
        loop {
            let (c, _) = synth_tbs_basic(&perm_table(&f), &TbsOptions::default()).unwrap();
            assert!(realizes(&c, &f), "{f:?}");
            if !next_permutation(&mut f) {
                break;
            }
        }
    }

    #[test]
    fn gate_limit() {
        let f: Vec<u64> = (0..64).rev().collect();
        let opts = TbsOptions { gate_limit: 3, ..Default::default() };
        assert_eq!(
            synth_tbs_basic(&perm_table(&f), &opts).unwrap_err(),
            TbsError::SizeLimitExceeded { limit: 3 }
        );
    }

    #[test]
    fn rejects_non_bijection() {
        let t = TruthTable::from_fn(2, 2, &[0, 0, 1, 2]).unwrap();
        assert_eq!(synth_tbs_basic(&t, &TbsOptions::default()).unwrap_err(), TbsError::NotBijective);
        let t = TruthTable::from_pairs(2, 2, [(0, 1)]).unwrap();
        assert_eq!(synth_tbs_basic(&t, &TbsOptions::default()).unwrap_err(), TbsError::NotComplete);
    }
}
