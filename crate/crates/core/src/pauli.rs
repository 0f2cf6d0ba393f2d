//! Pauli strings, exact expectation values and shot-based estimation.

use crate::error::{Error, Result};
use crate::gates;
use crate::state::Statevector;
use num_complex::Complex64;
use rand::Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PauliOp {
    X,
    Y,
    Z,
}

/// A weighted product of single-qubit Pauli operators on distinct qubits.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct PauliString {
    pub coefficient: f64,
    pub ops: Vec<(usize, PauliOp)>,
}

impl PauliString {
    pub fn new(coefficient: f64, ops: Vec<(usize, PauliOp)>) -> Result<Self> {
        let mut seen = std::collections::HashSet::new();
        for (q, _) in &ops {
            if !seen.insert(*q) {
                return Err(Error::DuplicateWires(*q));
            }
        }
        Ok(Self { coefficient, ops })
    }

    pub fn max_qubit(&self) -> Option<usize> {
        self.ops.iter().map(|(q, _)| *q).max()
    }

    fn validate(&self, num_qubits: usize) -> Result<()> {
        if let Some(q) = self.max_qubit() {
            if q >= num_qubits {
                return Err(Error::QubitOutOfRange { qubit: q, num_qubits });
            }
        }
        Ok(())
    }

    /// Applies the string to a basis index: `P|i> = phase * |i ^ flip>`.
    fn action(&self, index: usize) -> (usize, Complex64) {
        let mut flip = 0usize;
        let mut phase = Complex64::new(1.0, 0.0);
        for (q, op) in &self.ops {
            let bit = (index >> q) & 1;
            match op {
                PauliOp::X => flip |= 1 << q,
                PauliOp::Y => {
                    flip |= 1 << q;
                    // Y|b> = i (-1)^b |1-b>
                    phase *= Complex64::new(0.0, if bit == 0 { 1.0 } else { -1.0 });
                }
                PauliOp::Z => {
                    if bit == 1 {
                        phase = -phase;
                    }
                }
            }
        }
        (index ^ flip, phase)
    }

    /// Adds `coefficient * P v` into `out`. Both slices must have the same
    /// power-of-two length covering every qubit the string acts on.
    pub fn accumulate_apply(&self, v: &[Complex64], out: &mut [Complex64]) {
        debug_assert_eq!(v.len(), out.len());
        for (i, amp) in v.iter().enumerate() {
            if amp.re == 0.0 && amp.im == 0.0 {
                continue;
            }
            let (j, phase) = self.action(i);
            out[j] += self.coefficient * phase * amp;
        }
    }
}

/// Exact expectation value of a sum of Pauli strings.
pub fn expectation(state: &Statevector, terms: &[PauliString]) -> Result<f64> {
    let mut total = Complex64::new(0.0, 0.0);
    for term in terms {
        term.validate(state.num_qubits())?;
        let mut acc = Complex64::new(0.0, 0.0);
        for (i, amp) in state.amplitudes().iter().enumerate() {
            if amp.norm_sqr() == 0.0 {
                continue;
            }
            let (j, phase) = term.action(i);
            acc += state.amplitudes()[j].conj() * phase * amp;
        }
        total += acc * term.coefficient;
    }
    debug_assert!(total.im.abs() < 1e-9, "expectation of Hermitian sum must be real");
    Ok(total.re)
}

/// Shot-based estimate of the same expectation value.
///
/// Each string is measured independently with `shots` shots: the state is
/// rotated so that every factor becomes a Z measurement (H for X, then S†H
/// for Y), complete basis outcomes are sampled, and the eigenvalue
/// `prod_q (1 - 2 bit_q)` is averaged.
pub fn estimate_expectation<R: Rng + ?Sized>(
    state: &Statevector,
    terms: &[PauliString],
    shots: u64,
    rng: &mut R,
) -> Result<f64> {
    if shots == 0 {
        return Err(Error::InvalidArgument("shots must be positive".into()));
    }
    let mut total = 0.0;
    for term in terms {
        term.validate(state.num_qubits())?;
        if term.ops.is_empty() {
            total += term.coefficient;
            continue;
        }
        let mut rotated = state.clone();
        let mut support = 0usize;
        for (q, op) in &term.ops {
            support |= 1 << q;
            match op {
                PauliOp::X => rotated.apply_one_qubit(&gates::hadamard(), *q)?,
                PauliOp::Y => {
                    rotated.apply_one_qubit(&gates::s_dagger(), *q)?;
                    rotated.apply_one_qubit(&gates::hadamard(), *q)?;
                }
                PauliOp::Z => {}
            }
        }
        let counts = rotated.sample_counts(shots, rng);
        let mut sum = 0i64;
        for (outcome, count) in counts.iter().enumerate() {
            if *count == 0 {
                continue;
            }
            let parity = (outcome & support).count_ones() & 1;
            let eigen = if parity == 0 { 1i64 } else { -1i64 };
            sum += eigen * *count as i64;
        }
        total += term.coefficient * sum as f64 / shots as f64;
    }
    Ok(total)
}
