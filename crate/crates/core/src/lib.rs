//! Quantum-circuit simulation and QCNN toolkit.
//!
//! Provides exact dense statevector simulation of parameterized quantum
//! circuits, the single-qubit feature encodings and fragment-encoding
//! pipeline, expressibility/entanglement/complexity metrics with their
//! composite search objective, a sequential model-based ansatz search,
//! hybrid and regular QCNN forward passes, and a finite-difference ADAM
//! training loop for MNIST-style binary and multiclass tasks at desk
//! scale (exact statevectors, <= 20 qubits).

pub mod data;
pub mod encodings;
pub mod metrics;
pub mod models;
pub mod search;
pub mod sim;
pub mod training;

pub use sim::{GateApplication, GateKind, ParameterizedCircuit, SimError, StateVector};
