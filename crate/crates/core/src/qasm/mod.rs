//! OpenQASM 2.0 output and the matching reader.
//!
//! Natural mode writes each gate as one statement, defining in-file macros
//! for controlled rotations and for gates with many controls. The latter
//! take scratch qubits from a separate `anc` register. Negative controls are
//! written as X gates around the statement. Uniform mode accepts only circuits
//! already lowered to `x`, `cx`, `h`, `rx`, `ry`, `rz` and `measure`.

mod emit;
mod parse;

pub use emit::emit_qasm;
pub use parse::parse_qasm;

use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GateSet {
    Natural,
    Uniform,
}

#[derive(Debug, Error, Clone, PartialEq)]
pub enum QasmError {
    #[error("circuit has gates outside the uniform set; lower it first")]
    NotUniform,
    #[error("line {line}: {message}")]
    Syntax { line: usize, message: String },
    #[error("line {line}: unsupported gate '{name}'")]
    UnsupportedGate { line: usize, name: String },
    #[error("line {line}: unknown register '{name}'")]
    UnknownRegister { line: usize, name: String },
    #[error("line {line}: qubit index {index} outside register '{name}'")]
    IndexOutOfRange { line: usize, name: String, index: usize },
}
