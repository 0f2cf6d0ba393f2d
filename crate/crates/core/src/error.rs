//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("qubit index {qubit} out of range for {num_qubits} qubits")]
    QubitOutOfRange { qubit: usize, num_qubits: usize },

    #[error("gate wires must be distinct (got {0})")]
    DuplicateWires(usize),

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("matrix is not unitary (residual {residual:.3e})")]
    NonUnitary { residual: f64 },

    #[error("matrix is not particle-conserving (residual {residual:.3e})")]
    NotParticleConserving { residual: f64 },

    #[error("expected {expected} parameters, got {got}")]
    ArityMismatch { expected: usize, got: usize },

    #[error("system size {l} exceeds the supported cap of {cap} qubits")]
    SizeCap { l: usize, cap: usize },

    #[error("cost function returned a non-finite value at evaluation {eval}")]
    NonFiniteCost { eval: usize },

    #[error("{0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;
