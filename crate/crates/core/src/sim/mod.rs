//! Exact dense statevector simulation over the toolkit's gate vocabulary.
//!
//! Qubit ordering is little-endian: qubit 0 is the least significant bit
//! of an amplitude index. For two-qubit gates the first listed qubit is
//! the first tensor factor (the control for controlled gates).

mod circuit;
mod gates;
mod state;

pub use circuit::{app, Complexity, GateApplication, ParameterizedCircuit};
pub use gates::{
    gate_matrix, rx_mat, ry_mat, rz_mat, u3_mat, GateKind, GateMatrix, Mat2, Mat4, MAT2_ID,
};
pub use state::{fidelity, StateVector};

use thiserror::Error;

/// Errors raised by simulator operations.
#[derive(Debug, Error, PartialEq)]
pub enum SimError {
    #[error("qubit index {index} out of range for {num_qubits} qubits")]
    QubitOutOfRange { index: usize, num_qubits: usize },
    #[error("gate {kind:?} expects {expected} parameters, got {got}")]
    WrongParamCount {
        kind: GateKind,
        expected: usize,
        got: usize,
    },
    #[error("duplicate qubit operand {index}")]
    DuplicateQubit { index: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("parameter slot {slot} outside vector of length {len}")]
    ParamSlotOutOfRange { slot: usize, len: usize },
    #[error("{0}")]
    Contract(String),
}
