//! Statevector simulation and variational optimization built around
//! particle-conserving (number-conserving) two-qubit gates.
//!
//! The crate is organised in layers:
//!
//! * [`gates`] / [`state`] — dense statevector simulation with little-endian
//!   qubit indexing (qubit `i` contributes bit `i` of the basis index).
//! * [`pauli`] — Pauli strings, exact expectation values and shot-based
//!   estimation.
//! * [`pcgates`] — the particle-conserving two-qubit gate family (kinds `A`,
//!   `B` and `G`), their elementary-gate decompositions, long-range variants
//!   and canonicalization of arbitrary number-conserving two-qubit unitaries.
//! * [`circuits`] — brick-wall circuit builders (nearest-neighbour and the
//!   extended variant with next-nearest-neighbour layers) plus parameter
//!   bookkeeping and JSON serialization.
//! * [`models`] — spin-chain Hamiltonians (XXZ, XX, next-nearest-neighbour
//!   Heisenberg, hardcore-boson chain) and exact diagonalization.
//! * [`vqe`] — derivative-free optimizers, energy/fidelity cost functions and
//!   the experiment drivers.
//! * [`verify`] — the self-check suite exposed through the CLI.

pub mod circuits;
pub mod error;
pub mod fock;
pub mod gates;
pub mod models;
pub mod pauli;
pub mod pcgates;
pub mod state;
pub mod tol;
pub mod verify;
pub mod vqe;

pub use error::{Error, Result};
pub use gates::GateMatrix;
pub use state::Statevector;
