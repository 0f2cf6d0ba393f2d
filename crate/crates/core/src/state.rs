//! Dense statevector with little-endian qubit indexing.
//!
//! Basis index `i` encodes the computational state in which qubit `q` holds
//! bit `(i >> q) & 1`; a state of occupations `n_q` therefore maps to the
//! index `sum_q n_q * 2^q`.

use crate::error::{Error, Result};
use crate::gates::{C64, GateMatrix};
use num_complex::Complex64;
use rand::Rng;

/// Hard cap on the number of simulated qubits (dense amplitudes).
pub const MAX_QUBITS: usize = 16;

#[derive(Debug, Clone, PartialEq)]
pub struct Statevector {
    num_qubits: usize,
    amps: Vec<C64>,
}

impl Statevector {
    /// The all-zeros computational basis state on `num_qubits` qubits.
    pub fn zero_state(num_qubits: usize) -> Result<Self> {
        if num_qubits == 0 || num_qubits > MAX_QUBITS {
            return Err(Error::SizeCap {
                l: num_qubits,
                cap: MAX_QUBITS,
            });
        }
        let mut amps = vec![C64::new(0.0, 0.0); 1 << num_qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { num_qubits, amps })
    }

    /// The computational basis state with the given index.
    pub fn basis_state(num_qubits: usize, index: usize) -> Result<Self> {
        let mut state = Self::zero_state(num_qubits)?;
        if index >= state.amps.len() {
            return Err(Error::QubitOutOfRange {
                qubit: index,
                num_qubits,
            });
        }
        state.amps[0] = C64::new(0.0, 0.0);
        state.amps[index] = C64::new(1.0, 0.0);
        Ok(state)
    }

    /// Wraps raw amplitudes; the vector must have length `2^L` and unit norm.
    pub fn from_amplitudes(num_qubits: usize, amps: Vec<C64>) -> Result<Self> {
        if amps.len() != 1 << num_qubits {
            return Err(Error::DimensionMismatch {
                expected: 1 << num_qubits,
                got: amps.len(),
            });
        }
        let state = Self { num_qubits, amps };
        let drift = (state.norm_sqr() - 1.0).abs();
        if drift > crate::tol::UNITARITY {
            return Err(Error::InvalidArgument(format!(
                "amplitudes are not normalized (|1 - norm^2| = {drift:.3e})"
            )));
        }
        Ok(state)
    }

    pub fn num_qubits(&self) -> usize {
        self.num_qubits
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn amplitudes_mut(&mut self) -> &mut [C64] {
        &mut self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }

    /// `<self|other>`.
    pub fn inner_product(&self, other: &Statevector) -> C64 {
        self.amps
            .iter()
            .zip(other.amps.iter())
            .map(|(a, b)| a.conj() * b)
            .sum()
    }

    fn check_qubit(&self, q: usize) -> Result<()> {
        if q >= self.num_qubits {
            return Err(Error::QubitOutOfRange {
                qubit: q,
                num_qubits: self.num_qubits,
            });
        }
        Ok(())
    }

    /// Applies a one-qubit gate to qubit `q` in place (stride iteration).
    pub fn apply_one_qubit(&mut self, gate: &GateMatrix, q: usize) -> Result<()> {
        if gate.arity() != 1 {
            return Err(Error::DimensionMismatch {
                expected: 2,
                got: gate.dim(),
            });
        }
        self.check_qubit(q)?;
        let bit = 1usize << q;
        let (g00, g01, g10, g11) = (gate.get(0, 0), gate.get(0, 1), gate.get(1, 0), gate.get(1, 1));
        let dim = self.amps.len();
        let mut base = 0usize;
        while base < dim {
            for low in 0..bit {
                let i0 = base + low;
                let i1 = i0 | bit;
                let (a0, a1) = (self.amps[i0], self.amps[i1]);
                self.amps[i0] = g00 * a0 + g01 * a1;
                self.amps[i1] = g10 * a0 + g11 * a1;
            }
            base += bit << 1;
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < crate::tol::UNITARITY);
        Ok(())
    }

    /// Applies a two-qubit gate to the (not necessarily adjacent, in either
    /// order) wires `a` and `b`, with wire `a` as the gate's first index.
    pub fn apply_two_qubit(&mut self, gate: &GateMatrix, a: usize, b: usize) -> Result<()> {
        if gate.arity() != 2 {
            return Err(Error::DimensionMismatch {
                expected: 4,
                got: gate.dim(),
            });
        }
        self.check_qubit(a)?;
        self.check_qubit(b)?;
        if a == b {
            return Err(Error::DuplicateWires(a));
        }
        let (bit_a, bit_b) = (1usize << a, 1usize << b);
        let mut g = [[C64::new(0.0, 0.0); 4]; 4];
        for r in 0..4 {
            for cidx in 0..4 {
                g[r][cidx] = gate.get(r, cidx);
            }
        }
        let dim = self.amps.len();
        for i in 0..dim {
            if i & bit_a != 0 || i & bit_b != 0 {
                continue;
            }
            // Row index convention: 2 * bit(a) + bit(b).
            let idx = [i, i | bit_b, i | bit_a, i | bit_a | bit_b];
            let v = [
                self.amps[idx[0]],
                self.amps[idx[1]],
                self.amps[idx[2]],
                self.amps[idx[3]],
            ];
            for r in 0..4 {
                let mut acc = C64::new(0.0, 0.0);
                for cidx in 0..4 {
                    acc += g[r][cidx] * v[cidx];
                }
                self.amps[idx[r]] = acc;
            }
        }
        debug_assert!((self.norm_sqr() - 1.0).abs() < crate::tol::UNITARITY);
        Ok(())
    }

    /// Measurement probabilities over basis indices.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }

    /// Samples `shots` complete computational-basis measurements, returning a
    /// histogram over basis indices.
    pub fn sample_counts<R: Rng + ?Sized>(&self, shots: u64, rng: &mut R) -> Vec<u64> {
        let probs = self.probabilities();
        let mut cumulative = Vec::with_capacity(probs.len());
        let mut acc = 0.0;
        for p in &probs {
            acc += p;
            cumulative.push(acc);
        }
        let total = acc;
        let mut counts = vec![0u64; probs.len()];
        let last = counts.len() - 1;
        for _ in 0..shots {
            let u: f64 = rng.gen::<f64>() * total;
            let idx = cumulative.partition_point(|&cp| cp < u);
            counts[idx.min(last)] += 1;
        }
        counts
    }

    /// Total probability carried by basis states whose Hamming weight differs
    /// from `n`.
    pub fn mass_outside_weight(&self, n: usize) -> f64 {
        self.amps
            .iter()
            .enumerate()
            .filter(|(i, _)| i.count_ones() as usize != n)
            .map(|(_, a)| a.norm_sqr())
            .sum()
    }
}

/// Test oracle: the full `2^L x 2^L` matrix of a two-qubit gate acting on
/// wires `(a, b)`, built entry-by-entry from the definition rather than by
/// stride iteration. Intended for small `L` only.
pub fn embed_two_qubit_dense(
    gate: &GateMatrix,
    a: usize,
    b: usize,
    num_qubits: usize,
) -> Vec<Vec<Complex64>> {
    let dim = 1usize << num_qubits;
    let mut out = vec![vec![C64::new(0.0, 0.0); dim]; dim];
    let rest_mask = !((1usize << a) | (1usize << b)) & (dim - 1);
    for i in 0..dim {
        for j in 0..dim {
            if i & rest_mask != j & rest_mask {
                continue;
            }
            let row = (((i >> a) & 1) << 1) | ((i >> b) & 1);
            let col = (((j >> a) & 1) << 1) | ((j >> b) & 1);
            out[i][j] = gate.get(row, col);
        }
    }
    out
}
