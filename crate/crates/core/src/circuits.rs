//! Brick-wall circuits of particle-conserving gates.
//!
//! A circuit starts from a fixed-weight product state, applies layers of
//! two-qubit gates and therefore stays inside one particle-number sector.
//! Each gate placement owns a contiguous range of parameter slots; slots at
//! or beyond `free_params` are bound to the shared `fixed_value` instead of a
//! variational parameter, which is how circuits of different shapes are
//! brought to equal free-parameter counts.

use crate::error::{Error, Result};
use crate::pcgates::{self, PCGateKind};
use crate::state::Statevector;
use serde::{Deserialize, Serialize};

/// Number of layers needed to host at least `fock_dimension(L, N)` gates in
/// a nearest-neighbour brick-wall pattern of `L - 1` gates per layer.
pub fn layer_count(l: usize, n: usize) -> Result<usize> {
    if l < 2 {
        return Err(Error::InvalidArgument("need at least two sites".into()));
    }
    let d = fock_dimension(l, n)? as usize;
    Ok(d.div_ceil(l - 1))
}

/// Evenly spread initial occupation: bit `floor((k + 1/2) L / N)` is set for
/// `k = 0 .. N-1`. Returned as a basis-index bitmask.
pub fn initial_occupation(l: usize, n: usize) -> Result<u64> {
    if n > l {
        return Err(Error::InvalidArgument(format!(
            "particle number {n} exceeds {l} sites"
        )));
    }
    let mut mask = 0u64;
    for k in 0..n {
        let pos = (((2 * k + 1) * l) / (2 * n)).min(l - 1);
        mask |= 1 << pos;
    }
    debug_assert_eq!(mask.count_ones() as usize, n, "occupation bits must be distinct");
    Ok(mask)
}

pub use crate::fock::fock_dimension;

/// One two-qubit gate placement inside a circuit.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GatePlacement {
    pub kind: PCGateKind,
    pub wires: (usize, usize),
    pub slots: Vec<usize>,
}

/// A parametrised brick-wall circuit.
#[derive(Debug, Clone, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub struct ParamCircuit {
    #[serde(rename = "L")]
    pub num_qubits: usize,
    #[serde(rename = "N")]
    pub num_particles: usize,
    pub kind: PCGateKind,
    pub layers: usize,
    pub extended: bool,
    pub placements: Vec<GatePlacement>,
    pub free_params: usize,
    pub fixed_value: f64,
}

fn assemble(
    l: usize,
    n: usize,
    kind: PCGateKind,
    layers: usize,
    extended: bool,
    wire_pairs: Vec<(usize, usize)>,
) -> ParamCircuit {
    let arity = kind.arity();
    let mut placements = Vec::with_capacity(wire_pairs.len());
    let mut slot = 0usize;
    for wires in wire_pairs {
        placements.push(GatePlacement {
            kind,
            wires,
            slots: (slot..slot + arity).collect(),
        });
        slot += arity;
    }
    ParamCircuit {
        num_qubits: l,
        num_particles: n,
        kind,
        layers,
        extended,
        placements,
        free_params: slot,
        fixed_value: 0.0,
    }
}

/// Nearest-neighbour brick-wall circuit: each layer places gates on
/// `(i, i+1)` for even `i`, then for odd `i`. With `layers = None` the depth
/// defaults to [`layer_count`]. All parameter slots start free.
pub fn build_brickwall(l: usize, n: usize, kind: PCGateKind, layers: Option<usize>) -> Result<ParamCircuit> {
    if l < 2 || l > crate::state::MAX_QUBITS {
        return Err(Error::SizeCap { l, cap: crate::state::MAX_QUBITS });
    }
    initial_occupation(l, n)?;
    let layers = match layers {
        Some(v) if v > 0 => v,
        Some(_) => return Err(Error::InvalidArgument("layer count must be positive".into())),
        None => layer_count(l, n)?,
    };
    let mut pairs = Vec::new();
    for _ in 0..layers {
        for i in (0..l - 1).step_by(2) {
            pairs.push((i, i + 1));
        }
        for i in (1..l - 1).step_by(2) {
            pairs.push((i, i + 1));
        }
    }
    Ok(assemble(l, n, kind, layers, false, pairs))
}

/// Extended brick-wall circuit: odd-numbered layers (1st, 3rd, ...) are
/// nearest-neighbour brick-wall layers, even-numbered layers consist of
/// three next-nearest-neighbour sub-layers placing gates on `(i, i+2)` for
/// `i = r (mod 3)`, `r = 0, 1, 2`.
pub fn build_brickwall_extended(
    l: usize,
    n: usize,
    kind: PCGateKind,
    layers: Option<usize>,
) -> Result<ParamCircuit> {
    if l < 3 || l > crate::state::MAX_QUBITS {
        return Err(Error::SizeCap { l, cap: crate::state::MAX_QUBITS });
    }
    initial_occupation(l, n)?;
    let layers = match layers {
        Some(v) if v > 0 => v,
        Some(_) => return Err(Error::InvalidArgument("layer count must be positive".into())),
        None => layer_count(l, n)?,
    };
    let mut pairs = Vec::new();
    for layer in 1..=layers {
        if layer % 2 == 1 {
            for i in (0..l - 1).step_by(2) {
                pairs.push((i, i + 1));
            }
            for i in (1..l - 1).step_by(2) {
                pairs.push((i, i + 1));
            }
        } else {
            for r in 0..3 {
                let mut i = r;
                while i + 2 < l {
                    pairs.push((i, i + 2));
                    i += 3;
                }
            }
        }
    }
    Ok(assemble(l, n, kind, layers, true, pairs))
}

impl ParamCircuit {
    pub fn total_slots(&self) -> usize {
        self.placements.iter().map(|p| p.slots.len()).sum()
    }

    /// Restricts the circuit to `free` variational parameters; trailing slots
    /// bind to the shared `fixed_value` instead.
    pub fn with_free_params(mut self, free: usize, fixed_value: f64) -> Result<Self> {
        if free > self.total_slots() {
            return Err(Error::ArityMismatch { expected: self.total_slots(), got: free });
        }
        self.free_params = free;
        self.fixed_value = fixed_value;
        Ok(self)
    }

    /// The circuit's starting product state.
    pub fn initial_state(&self) -> Result<Statevector> {
        let mask = initial_occupation(self.num_qubits, self.num_particles)?;
        Statevector::basis_state(self.num_qubits, mask as usize)
    }

    fn slot_values(&self, theta: &[f64]) -> Result<Vec<f64>> {
        if theta.len() != self.free_params {
            return Err(Error::ArityMismatch { expected: self.free_params, got: theta.len() });
        }
        let total = self.total_slots();
        let mut values = Vec::with_capacity(total);
        values.extend_from_slice(theta);
        values.resize(total, self.fixed_value);
        Ok(values)
    }

    /// Binds parameters and runs the circuit, applying each gate as a dense
    /// two-qubit matrix.
    pub fn bind(&self, theta: &[f64]) -> Result<Statevector> {
        let values = self.slot_values(theta)?;
        let mut state = self.initial_state()?;
        for placement in &self.placements {
            let params: Vec<f64> = placement.slots.iter().map(|&s| values[s]).collect();
            let gate = pcgates::gate_matrix(placement.kind, &params)?;
            state.apply_two_qubit(&gate, placement.wires.0, placement.wires.1)?;
        }
        Ok(state)
    }

    /// Same circuit run through the elementary-gate decompositions (CNOTs,
    /// rotations, phases) instead of dense 4x4 matrices. Dual path used as a
    /// cross-check oracle.
    pub fn bind_elementary(&self, theta: &[f64]) -> Result<Statevector> {
        let values = self.slot_values(theta)?;
        let mut state = self.initial_state()?;
        for placement in &self.placements {
            let params: Vec<f64> = placement.slots.iter().map(|&s| values[s]).collect();
            let seq = pcgates::long_range_gate(
                placement.kind,
                &params,
                placement.wires.0,
                placement.wires.1,
                self.num_qubits,
            )?;
            seq.apply(&mut state)?;
        }
        Ok(state)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("circuit serialization cannot fail")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidArgument(format!("bad circuit JSON: {e}")))
    }
}
