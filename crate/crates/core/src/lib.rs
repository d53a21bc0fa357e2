//! Compiles classically specified functions (PLA tables, probability tables)
//! into technology-independent quantum circuits, optimizes them, emits
//! OpenQASM 2.0, and verifies the result by simulation.

pub mod circuit;
pub mod encoding;
pub mod esop;
pub mod funcprep;
pub mod grover;
pub mod optimize;
pub mod pipeline;
pub mod pla;
pub mod pmf;
pub mod qasm;
pub mod simulate;
pub mod stats;
pub mod tbs;

pub use pipeline::{synthesize, verify, Error, Method, PipelineOptions, Source};
