use super::spectrum::{identity_row, RmSpectrum};
use super::{SynthTrace, TbsError, TbsOptions, WordGate, Worker};
use crate::circuit::Circuit;
use crate::funcprep::TruthTable;

/// Transformation-based synthesis driven by the Reed-Muller spectrum.
///
/// Row `i` of the spectrum depends only on function rows that are subsets of
/// `i`, so once rows `0..i` are fixed the spectrum rows `0..i` equal those of
/// the identity. Each step drives spectrum row `i` to its identity value.
pub fn synth_tbs_rm(table: &TruthTable, options: &TbsOptions) -> Result<(Circuit, SynthTrace), TbsError> {
    let n = table.num_inputs;
    let mut w = Worker::new(table, options)?;
    for i in 0..w.f.len() {
        if i % 256 == 0 {
            w.check_deadline()?;
        }
        let f = &w.f;
        let r = RmSpectrum::row_streaming(i, |k| f[k]);
        let hot = r ^ identity_row(i);
        if hot != 0 {
            rm_step(&mut w, i, r, hot, n)?;
        }
        debug_assert_eq!(w.f[i], i as u64);
        w.snapshot(i);
    }
    Ok((w.trace.to_circuit(n), w.trace))
}

fn bits_desc(v: u64, n: usize) -> impl Iterator<Item = u32> {
    (0..n as u32).rev().filter(move |b| v >> b & 1 == 1)
}

fn rm_step(w: &mut Worker, i: usize, r: u64, hot: u64, n: usize) -> Result<(), TbsError> {
    if i == 0 {
        for b in bits_desc(hot, n) {
            w.apply(WordGate { controls: 0, target: b })?;
        }
        return Ok(());
    }
    if i.is_power_of_two() {
        let k = i.trailing_zeros();
        if r >> k & 1 == 0 {
            let s = bits_desc(r, n).find(|&j| j > k).ok_or(TbsError::NoPivot { row: i })?;
            w.apply(WordGate { controls: 1 << s, target: k })?;
        }
        let rest = w.f[i] & !(1u64 << k);
        for j in bits_desc(rest, n) {
            w.apply(WordGate { controls: 1 << k, target: j })?;
        }
        return Ok(());
    }

    let start = w.trace.gates.len();
    let s = bits_desc(hot, n).find(|&j| (i as u64) >> j & 1 == 0).ok_or(TbsError::NoPivot { row: i })?;
    let fan: Vec<WordGate> =
        bits_desc(hot & !(1 << s), n).map(|j| WordGate { controls: 1 << s, target: j }).collect();
    for &g in &fan {
        w.apply(g)?;
    }
    w.apply(WordGate { controls: i as u64, target: s })?;
    if (1usize << s) < i {
        for &g in fan.iter().rev() {
            w.apply(g)?;
        }
        if (0..i).any(|k| w.f[k] != k as u64) {
            revert(w, start);
            log::debug!("spectrum step disturbed earlier rows at row {i}; using the basic step");
            w.trace.fallback_rows.push(i);
            w.basic_step(i, n)?;
        }
    }
    Ok(())
}

/// Undoes gates recorded after `start`; every gate is self-inverse.
fn revert(w: &mut Worker, start: usize) {
    let undo: Vec<WordGate> = w.trace.gates.drain(start..).rev().collect();
    for g in undo {
        for v in w.f.iter_mut() {
            *v = g.apply(*v);
        }
    }
}
