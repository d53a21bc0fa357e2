//! Probability mass functions over `2^n` bins.

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Allowed deviation of the total mass from 1.
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum PmfError {
    #[error("bin count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("probabilities sum to {0}, not 1")]
    NotNormalized(f64),
    #[error("bin {index} holds invalid value {value}")]
    InvalidBin { index: usize, value: f64 },
    #[error("all bins are zero")]
    AllZero,
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error("unknown distribution {0:?}")]
    UnknownDistribution(String),
    #[error("{bins} bins do not fit in {qubits} qubits")]
    TooManyBins { bins: usize, qubits: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Pmf {
    probs: Vec<f64>,
}

/// How raw bin heights relate to probabilities.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinMode {
    /// `p_i = x_i / sum x`.
    Probabilities,
    /// `p_i = x_i^2 / sum x^2`.
    Amplitudes,
}

impl Pmf {
    pub fn new(probs: Vec<f64>) -> Result<Self, PmfError> {
        if !probs.len().is_power_of_two() {
            return Err(PmfError::NotPowerOfTwo(probs.len()));
        }
        if let Some((index, &value)) =
            probs.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0)
        {
            return Err(PmfError::InvalidBin { index, value });
        }
        let total: f64 = probs.iter().sum();
        if (total - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(PmfError::NotNormalized(total));
        }
        Ok(Pmf { probs })
    }

    pub fn probs(&self) -> &[f64] {
        &self.probs
    }

    pub fn len(&self) -> usize {
        self.probs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.probs.is_empty()
    }

    pub fn num_qubits(&self) -> usize {
        self.probs.len().trailing_zeros() as usize
    }

    /// Pads with zero bins up to `2^qubits`.
    pub fn padded(&self, qubits: usize) -> Result<Pmf, PmfError> {
        let bins = 1usize << qubits;
        if self.probs.len() > bins {
            return Err(PmfError::TooManyBins { bins: self.probs.len(), qubits });
        }
        let mut probs = self.probs.clone();
        probs.resize(bins, 0.0);
        Ok(Pmf { probs })
    }

    pub fn uniform(qubits: usize) -> Pmf {
        let n = 1usize << qubits;
        Pmf { probs: vec![1.0 / n as f64; n] }
    }

    pub fn point(qubits: usize, index: usize) -> Pmf {
        let mut probs = vec![0.0; 1 << qubits];
        probs[index] = 1.0;
        Pmf { probs }
    }

    /// Coefficients of `(x+y)^trials` scaled by `2^-trials`, in the first `trials+1` bins.
    pub fn binomial(trials: usize, qubits: usize) -> Result<Pmf, PmfError> {
        let bins = 1usize << qubits;
        if trials + 1 > bins {
            return Err(PmfError::TooManyBins { bins: trials + 1, qubits });
        }
        let mut probs = vec![0.0; bins];
        let mut coeff = 1.0f64;
        let scale = 0.5f64.powi(trials as i32);
        for (k, p) in probs.iter_mut().enumerate().take(trials + 1) {
            *p = coeff * scale;
            coeff = coeff * (trials - k) as f64 / (k + 1) as f64;
        }
        Ok(Pmf { probs })
    }

    /// Heights `min(k+1, N-k)`, mirror symmetric.
    pub fn triangle(qubits: usize) -> Pmf {
        let n = 1usize << qubits;
        let heights: Vec<f64> = (0..n).map(|k| (k + 1).min(n - k) as f64).collect();
        normalize_heights(&heights, BinMode::Probabilities).expect("positive heights")
    }

    /// Two Gaussian bumps of width `N/32` centred on bins `N/4` and `3N/4 - 1`.
    pub fn bimodal(qubits: usize) -> Pmf {
        let n = 1usize << qubits;
        let sigma = (n as f64 / 32.0).max(0.5);
        let (c1, c2) = ((n / 4) as f64, (3 * n / 4) as f64 - 1.0);
        let bump = |k: f64, c: f64| (-(k - c) * (k - c) / (2.0 * sigma * sigma)).exp();
        let heights: Vec<f64> = (0..n).map(|k| bump(k as f64, c1) + bump(k as f64, c2)).collect();
        normalize_heights(&heights, BinMode::Probabilities).expect("positive heights")
    }

    /// A fixed irregular table with no symmetry, repeated cyclically for other widths.
    pub fn arbitrary(qubits: usize) -> Pmf {
        const HEIGHTS: [f64; 32] = [
            3.0, 7.0, 2.0, 9.0, 4.0, 1.0, 6.0, 8.0, 5.0, 2.0, 11.0, 3.0, 1.0, 4.0, 7.0, 6.0, 2.0,
            9.0, 5.0, 3.0, 8.0, 1.0, 4.0, 10.0, 6.0, 2.0, 3.0, 7.0, 5.0, 1.0, 2.0, 4.0,
        ];
        let n = 1usize << qubits;
        let heights: Vec<f64> = (0..n).map(|k| HEIGHTS[k % 32]).collect();
        normalize_heights(&heights, BinMode::Probabilities).expect("positive heights")
    }

    /// Built-in distributions by name.
    pub fn named(name: &str, qubits: usize) -> Result<Pmf, PmfError> {
        match name {
            "uniform" => Ok(Pmf::uniform(qubits)),
            "binomial" => Pmf::binomial(qubits, qubits),
            "binomial-wide" => Pmf::binomial((1 << qubits) - 1, qubits),
            "triangle" => Ok(Pmf::triangle(qubits)),
            "bimodal" => Ok(Pmf::bimodal(qubits)),
            "arbitrary" => Ok(Pmf::arbitrary(qubits)),
            other => Err(PmfError::UnknownDistribution(other.to_string())),
        }
    }

    /// Reads one value per line, or `bin,height` CSV rows. `#` starts a comment.
    pub fn parse(text: &str, mode: BinMode) -> Result<Pmf, PmfError> {
        let mut heights: Vec<(usize, f64)> = Vec::new();
        let mut csv = None;
        for (i, raw) in text.lines().enumerate() {
            let line = raw.split('#').next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            let err = |message: String| PmfError::Parse { line: i + 1, message };
            let fields: Vec<&str> = line.split(',').map(str::trim).collect();
            let is_csv = fields.len() == 2;
            if *csv.get_or_insert(is_csv) != is_csv {
                return Err(err("mixed single-column and bin,height rows".into()));
            }
            let parse_f = |s: &str| s.parse::<f64>().map_err(|e| err(format!("{s:?}: {e}")));
            match fields.as_slice() {
                [v] => heights.push((heights.len(), parse_f(v)?)),
                [b, v] => {
                    let Ok(bin) = b.parse::<usize>() else {
                        if heights.is_empty() {
                            // header row
                            continue;
                        }
                        return Err(err(format!("bad bin index {b:?}")));
                    };
                    heights.push((bin, parse_f(v)?));
                }
                _ => return Err(err(format!("expected 1 or 2 fields, got {}", fields.len()))),
            }
        }
        let bins = heights.iter().map(|&(b, _)| b + 1).max().unwrap_or(0);
        let mut dense = vec![0.0; bins];
        for (b, v) in heights {
            dense[b] += v;
        }
        normalize_heights(&dense, mode)
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for p in &self.probs {
            s.push_str(&format!("{p}\n"));
        }
        s
    }
}

/// Turns non-negative heights into a distribution.
pub fn normalize_heights(bins: &[f64], mode: BinMode) -> Result<Pmf, PmfError> {
    if !bins.len().is_power_of_two() {
        return Err(PmfError::NotPowerOfTwo(bins.len()));
    }
    if let Some((index, &value)) = bins.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0)
    {
        return Err(PmfError::InvalidBin { index, value });
    }
    let weights: Vec<f64> = match mode {
        BinMode::Probabilities => bins.to_vec(),
        BinMode::Amplitudes => bins.iter().map(|x| x * x).collect(),
    };
    let total: f64 = weights.iter().sum();
    if total <= 0.0 {
        return Err(PmfError::AllZero);
    }
    Ok(Pmf { probs: weights.iter().map(|w| w / total).collect() })
}
