//! Classical preprocessing between a PLA table and a synthesis method:
//! dash expansion, don't-care assignment, the RTT one-to-one embedding,
//! completion to a bijection, and word normalization.

mod embed;
mod normalize;
mod table;

pub use embed::{make_one_to_one, make_onto, OntoStrategy, RttResult};
pub use normalize::{
    decode_floatlike, normalize, normalize_pmf, NormalizeOptions, NormalizedWords, Scheme,
};
pub use table::{assign_dont_cares, expand, expanded_row_count, to_truth_table, TruthTable};

use thiserror::Error;

/// Default bound on expanded rows and on embedded table sizes.
pub const DEFAULT_MAX_ROWS: u64 = 1 << 22;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FuncprepError {
    #[error("{what} needs {needed} rows, above the limit of {limit}")]
    SizeLimitExceeded { what: &'static str, needed: u128, limit: u64 },
    #[error("output word {0:#b} appears more than once")]
    NotInjective(u128),
    #[error("table is {inputs} inputs by {outputs} outputs, expected a square table")]
    WidthMismatch { inputs: usize, outputs: usize },
    #[error("input word {0:#b} is defined twice")]
    DuplicateInput(u128),
    #[error("word width {0} is outside the supported range")]
    UnsupportedWidth(usize),
    #[error("no words to normalize")]
    EmptyInput,
    #[error("every word is zero, so the scaling factor is undefined")]
    AllZeroWithFactor,
    #[error("table is not a complete bijection")]
    NotBijective,
    #[error(transparent)]
    Pmf(#[from] crate::pmf::PmfError),
}
