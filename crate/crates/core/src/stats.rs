//! Distribution similarity: KL and JS divergence, the G-statistic and its
//! chi-square p-value. Natural logarithms throughout.

use crate::pmf::Pmf;
use crate::simulate::CountHistogram;
use serde::{Deserialize, Serialize};
use statrs::distribution::{ChiSquared, ContinuousCDF};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum StatsError {
    #[error("distributions have {0} and {1} bins")]
    LengthMismatch(usize, usize),
    #[error("histogram is empty")]
    NoShots,
}

fn check_len(p: &[f64], q: &[f64]) -> Result<(), StatsError> {
    if p.len() != q.len() {
        return Err(StatsError::LengthMismatch(p.len(), q.len()));
    }
    Ok(())
}

/// `sum P ln(P/Q)`. Returns `+inf` when `P` has mass where `Q` has none.
pub fn kl_divergence(p: &[f64], q: &[f64]) -> Result<f64, StatsError> {
    check_len(p, q)?;
    let mut total = 0.0;
    for (&pi, &qi) in p.iter().zip(q) {
        if pi <= 0.0 {
            continue;
        }
        if qi <= 0.0 {
            return Ok(f64::INFINITY);
        }
        total += pi * (pi / qi).ln();
    }
    Ok(total.max(0.0))
}

/// True when some bin has `P > 0` and `Q = 0`.
pub fn support_mismatch(p: &[f64], q: &[f64]) -> bool {
    p.iter().zip(q).any(|(&pi, &qi)| pi > 0.0 && qi <= 0.0)
}

/// Jensen-Shannon divergence, in `[0, ln 2]`.
pub fn js_divergence(p: &[f64], q: &[f64]) -> Result<f64, StatsError> {
    check_len(p, q)?;
    let m: Vec<f64> = p.iter().zip(q).map(|(a, b)| 0.5 * (a + b)).collect();
    let js = 0.5 * kl_divergence(p, &m)? + 0.5 * kl_divergence(q, &m)?;
    Ok(js.clamp(0.0, std::f64::consts::LN_2))
}

/// Upper tail of the chi-square distribution.
pub fn chi_square_sf(x: f64, df: usize) -> f64 {
    if x.is_nan() {
        return f64::NAN;
    }
    if x <= 0.0 {
        return 1.0;
    }
    if x.is_infinite() {
        return 0.0;
    }
    if df == 0 {
        return 0.0;
    }
    let dist = ChiSquared::new(df as f64).expect("df > 0");
    (1.0 - dist.cdf(x)).clamp(0.0, 1.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GTest {
    pub g: f64,
    /// Chi-square upper tail with `df` degrees of freedom.
    pub p: f64,
    pub df: usize,
    pub shots: u64,
    /// Observed counts in a bin of zero expected probability; `g` is then infinite.
    pub support_mismatch: bool,
}

impl GTest {
    /// `G / n`, which equals `2 KL(empirical || expected)`.
    pub fn per_shot(&self) -> f64 {
        self.g / self.shots as f64
    }
}

/// `G = 2 sum O ln(O/E)` with `E = n Q`.
pub fn g_statistic_counts(observed: &[u64], expected: &[f64]) -> Result<GTest, StatsError> {
    if observed.len() != expected.len() {
        return Err(StatsError::LengthMismatch(observed.len(), expected.len()));
    }
    let shots: u64 = observed.iter().sum();
    if shots == 0 {
        return Err(StatsError::NoShots);
    }
    let n = shots as f64;
    let mut g = 0.0;
    let mut mismatch = false;
    for (&o, &q) in observed.iter().zip(expected) {
        if o == 0 {
            continue;
        }
        if q <= 0.0 {
            mismatch = true;
            continue;
        }
        let o = o as f64;
        g += o * (o / (n * q)).ln();
    }
    let g = if mismatch { f64::INFINITY } else { (2.0 * g).max(0.0) };
    let df = observed.len().saturating_sub(1);
    Ok(GTest { g, p: chi_square_sf(g, df), df, shots, support_mismatch: mismatch })
}

pub fn g_statistic(observed: &CountHistogram, expected: &Pmf) -> Result<GTest, StatsError> {
    g_statistic_counts(observed.counts(), expected.probs())
}

/// Similarity of a per-shot statistic `G/n`, read against one degree of freedom.
///
/// This is the convention under which a shot-normalized G of 0.0012 maps to
/// 0.9723, so calibration thresholds on `G/n` carry matching similarity values.
pub fn per_shot_similarity(g_per_shot: f64) -> f64 {
    chi_square_sf(g_per_shot, 1)
}

/// Metrics block shared by reports.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DistributionReport {
    pub kl: f64,
    pub js: f64,
    pub g: f64,
    pub p: f64,
    pub shots: u64,
    pub seed: u64,
}

impl DistributionReport {
    pub fn compute(observed: &CountHistogram, expected: &Pmf, seed: u64) -> Result<Self, StatsError> {
        let freq = observed.frequencies();
        let gt = g_statistic(observed, expected)?;
        Ok(DistributionReport {
            kl: kl_divergence(&freq, expected.probs())?,
            js: js_divergence(&freq, expected.probs())?,
            g: gt.g,
            p: gt.p,
            shots: gt.shots,
            seed,
        })
    }
}
