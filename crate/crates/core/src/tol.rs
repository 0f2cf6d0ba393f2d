//! Numerical tolerances used across the crate.
//!
//! | constant        | used for                                             |
//! |-----------------|------------------------------------------------------|
//! | [`MATRIX_EQ`]   | exact matrix-equality oracles (decompositions, etc.) |
//! | [`UNITARITY`]   | unitarity and norm-preservation checks               |
//! | [`CANONICAL`]   | canonicalization round-trip reconstruction           |
//! | [`EIGEN`]       | iterative eigenvalue convergence                     |

/// Matrix-equality tolerance for algebraic identities that should hold to
/// machine precision (gate reconstructions, commutators, conservation laws).
pub const MATRIX_EQ: f64 = 1e-12;

/// Tolerance for unitarity residuals and statevector norm drift.
pub const UNITARITY: f64 = 1e-10;

/// Tolerance for the canonical-form round trip of number-conserving
/// two-qubit unitaries (slightly looser: it involves `atan2`/`arg` extraction).
pub const CANONICAL: f64 = 1e-9;

/// Convergence tolerance for iterative extremal-eigenvalue solves.
pub const EIGEN: f64 = 1e-9;
