use super::{TbsError, MAX_WIDTH};
use crate::funcprep::TruthTable;

/// Positive-polarity Reed-Muller coefficients: `R[i] = XOR of F[k] over k subset of i`,
/// i.e. `R = M^n F` over GF(2). Each row is an output word.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RmSpectrum {
    pub width: usize,
    pub rows: Vec<u64>,
}

impl RmSpectrum {
    /// Row `i` from function rows fetched through `source`; only subsets of `i` are requested.
    pub fn row_streaming(i: usize, mut source: impl FnMut(usize) -> u64) -> u64 {
        let mut acc = 0;
        let mut k = i;
        loop {
            acc ^= source(k);
            if k == 0 {
                break;
            }
            k = (k - 1) & i;
        }
        acc
    }

    /// Whole spectrum of a function table, via the in-place subset transform.
    pub fn from_function(f: &[u64]) -> RmSpectrum {
        let mut r = f.to_vec();
        let width = f.len().trailing_zeros() as usize;
        for b in 0..width {
            let bit = 1usize << b;
            for i in 0..r.len() {
                if i & bit != 0 {
                    r[i] ^= r[i ^ bit];
                }
            }
        }
        RmSpectrum { width, rows: r }
    }

    /// `f(x) = XOR of R[i] over i subset of x`.
    pub fn evaluate(&self, x: usize) -> u64 {
        RmSpectrum::row_streaming(x, |i| self.rows[i])
    }

    /// The spectrum is its own inverse transform.
    pub fn to_function(&self) -> Vec<u64> {
        RmSpectrum::from_function(&self.rows).rows
    }

    pub fn is_identity_row(&self, i: usize) -> bool {
        self.rows[i] == identity_row(i)
    }
}

/// Spectrum row of the identity function.
pub fn identity_row(i: usize) -> u64 {
    if i.is_power_of_two() {
        i as u64
    } else {
        0
    }
}

pub fn rm_spectrum(table: &TruthTable) -> Result<RmSpectrum, TbsError> {
    let n = table.num_inputs;
    if n != table.num_outputs {
        return Err(TbsError::NotSquare { inputs: n, outputs: table.num_outputs });
    }
    if n > MAX_WIDTH {
        return Err(TbsError::TooWide(n));
    }
    if !table.is_complete() {
        return Err(TbsError::NotComplete);
    }
    let mut f = vec![0u64; 1 << n];
    for &(x, y) in table.entries() {
        f[x as usize] = y as u64;
    }
    Ok(RmSpectrum::from_function(&f))
}
