use super::FuncprepError;
use crate::pmf::{normalize_heights, BinMode, Pmf};
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Scheme {
    /// `value * 2pi / v_max`.
    Factor,
    /// Word read as `0.b_{m-1}...b_0`, in `[0, 1)`.
    FixedPoint01,
    /// Word read as `b_1 b_0 . b_{-1}...`, in `[0, 4)`.
    FixedPoint04,
    /// Significand in `[0, 4)` and exponent, `V = S * 2^-E`.
    FloatLike,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct NormalizeOptions {
    /// Factor scheme divides by `v_max + 1` so no word reaches `2pi`.
    pub strict_halfopen: bool,
    /// Float scheme stores `S - 2` for non-zero words.
    pub hidden_bit: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct NormalizedWords {
    pub scheme: Scheme,
    pub word_bits: usize,
    /// Rotation angle per word, in `[0, 2pi)`.
    pub values: Vec<f64>,
    /// Phase angle per word, in `[0, 2pi)`; zero except under the float scheme.
    pub phases: Vec<f64>,
    pub significands: Vec<f64>,
    pub exponents: Vec<u32>,
    pub z_max: u32,
    pub hidden_bit: bool,
}

const MAX_EXACT_BITS: usize = 52;

/// Maps `m`-bit words to angles. Words are integers whose bit `m-1` is the leading bit.
pub fn normalize(
    words: &[u64],
    word_bits: usize,
    scheme: Scheme,
    options: NormalizeOptions,
) -> Result<NormalizedWords, FuncprepError> {
    if words.is_empty() {
        return Err(FuncprepError::EmptyInput);
    }
    if word_bits == 0 || word_bits > MAX_EXACT_BITS {
        return Err(FuncprepError::UnsupportedWidth(word_bits));
    }
    let m = word_bits;
    let place = |w: u64, shift: i32| w as f64 * 2f64.powi(shift);
    let mut out = NormalizedWords {
        scheme,
        word_bits: m,
        values: Vec::with_capacity(words.len()),
        phases: vec![0.0; words.len()],
        significands: Vec::new(),
        exponents: Vec::new(),
        z_max: 0,
        hidden_bit: options.hidden_bit,
    };
    match scheme {
        Scheme::Factor => {
            let v_max = *words.iter().max().expect("non-empty");
            if v_max == 0 {
                return Err(FuncprepError::AllZeroWithFactor);
            }
            let denom = if options.strict_halfopen { v_max as f64 + 1.0 } else { v_max as f64 };
            let f_norm = TAU / denom;
            if !options.strict_halfopen {
                log::warn!("factor normalization maps {v_max} to 2pi, which aliases to 0");
            }
            out.values = words.iter().map(|&w| (w as f64 * f_norm).rem_euclid(TAU)).collect();
        }
        Scheme::FixedPoint01 => out.values = words.iter().map(|&w| place(w, -(m as i32))).collect(),
        Scheme::FixedPoint04 => out.values = words.iter().map(|&w| place(w, 2 - m as i32)).collect(),
        Scheme::FloatLike => {
            if m < 3 {
                return Err(FuncprepError::UnsupportedWidth(m));
            }
            for &w in words {
                let z = if w == 0 { m as u32 } else { w.leading_zeros() - (64 - m as u32) };
                let s = place(w << z.min(63), 2 - m as i32);
                let stored = if options.hidden_bit && w != 0 { s - 2.0 } else { s };
                out.significands.push(stored);
                out.exponents.push(z);
            }
            out.z_max = out.exponents.iter().copied().max().unwrap_or(0);
            let step = TAU / (out.z_max as f64 + 1.0);
            out.values = out.significands.clone();
            out.phases = out.exponents.iter().map(|&e| e as f64 * step).collect();
        }
    }
    Ok(out)
}

/// Inverse of the float scheme: `S * 2^-E`, with zero encoded as `E = m`.
pub fn decode_floatlike(significand: f64, exponent: u32, word_bits: usize, hidden_bit: bool) -> f64 {
    if exponent as usize >= word_bits {
        return 0.0;
    }
    let s = if hidden_bit { significand + 2.0 } else { significand };
    s * 2f64.powi(-(exponent as i32))
}

impl NormalizedWords {
    /// Recovers the exponent from a stored phase by rounding to the nearest step.
    pub fn exponent_from_phase(&self, phase: f64) -> u32 {
        let step = TAU / (self.z_max as f64 + 1.0);
        (phase / step).round() as u32
    }
}

/// Normalizes raw bin heights; see [`BinMode`].
pub fn normalize_pmf(bins: &[f64], mode: BinMode) -> Result<Pmf, FuncprepError> {
    Ok(normalize_heights(bins, mode)?)
}
