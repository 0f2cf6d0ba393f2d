//! Particle-conserving two-qubit gates.
//!
//! A two-qubit unitary conserves particle number exactly when its only
//! nonzero entries are the `(0,0)` and `(3,3)` corners and the central 2x2
//! block coupling `|01>` and `|10>`. This module provides:
//!
//! * the symmetric construction `Z = F Q F` from a fusion gate `F` (a CNOT)
//!   and a charge-controlled pair of one-qubit operators `Q = (Q0, Q1)`,
//! * three named parametrised kinds `A`, `B` and `G`,
//! * elementary-gate decompositions and long-range (non-adjacent) variants,
//! * canonicalization of an arbitrary number-conserving two-qubit unitary
//!   into a diagonal phase layer times a `G` gate.

use crate::error::{Error, Result};
use crate::gates::{self, C64, GateMatrix};
use crate::state::Statevector;
use crate::tol;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

/// The parametrised particle-conserving gate kinds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum PCGateKind {
    A,
    B,
    G,
}

impl PCGateKind {
    /// Number of real parameters carried by one gate of this kind.
    pub fn arity(&self) -> usize {
        match self {
            PCGateKind::A | PCGateKind::B => 2,
            PCGateKind::G => 4,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            PCGateKind::A => "A",
            PCGateKind::B => "B",
            PCGateKind::G => "G",
        }
    }
}

impl std::str::FromStr for PCGateKind {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "A" | "a" => Ok(PCGateKind::A),
            "B" | "b" => Ok(PCGateKind::B),
            "G" | "g" => Ok(PCGateKind::G),
            other => Err(Error::InvalidArgument(format!("unknown gate kind '{other}'"))),
        }
    }
}

/// The fusion gate: a CNOT with the first wire as control. Conjugating a
/// charge-controlled operator by it turns the control charge into the total
/// charge of the pair.
pub fn fusion_gate() -> GateMatrix {
    gates::cnot()
}

/// `Q = Q0 (x) |0><0| + Q1 (x) |1><1|`: applies `Q0` or `Q1` to the first
/// wire depending on the second wire's occupation.
pub fn charge_controlled_op(q0: &GateMatrix, q1: &GateMatrix) -> Result<GateMatrix> {
    for q in [q0, q1] {
        if q.arity() != 1 {
            return Err(Error::DimensionMismatch { expected: 2, got: q.dim() });
        }
        q.check_unitary(tol::UNITARITY)?;
    }
    let mut m = GateMatrix::zeros(2);
    // Second wire clear (rows/cols {0, 2}) -> Q0 on the first wire.
    for i in 0..2 {
        for j in 0..2 {
            m.set(i * 2, j * 2, q0.get(i, j));
            m.set(i * 2 + 1, j * 2 + 1, q1.get(i, j));
        }
    }
    Ok(m)
}

/// The symmetric composition `Z = F Q F` with `Q = charge_controlled_op(q0, q1)`.
///
/// The result has `q0`'s entries spread over the four corners and `q1` as
/// the central block, hence it conserves the Z2 parity of the pair; it
/// conserves particle number exactly when `q0` is diagonal.
pub fn z2_generic_gate(q0: &GateMatrix, q1: &GateMatrix) -> Result<GateMatrix> {
    let f = fusion_gate();
    let q = charge_controlled_op(q0, q1)?;
    Ok(f.matmul(&q).matmul(&f))
}

fn check_param_count(kind: PCGateKind, params: &[f64]) -> Result<()> {
    if params.len() != kind.arity() {
        return Err(Error::ArityMismatch {
            expected: kind.arity(),
            got: params.len(),
        });
    }
    Ok(())
}

/// Closed-form matrix of a parametrised particle-conserving gate.
///
/// * `A(theta, phi)`: corners 1, central block
///   `[[sin t, e^{i p} cos t], [e^{-i p} cos t, -sin t]]`.
/// * `B(theta, phi)`: corners `(1, e^{i p})`, central block
///   `[[cos t, -i sin t], [-i sin t, cos t]]`.
/// * `G(alpha, theta, phi1, phi2)`: corners 1, central block
///   `e^{i a} [[e^{i mu} cos t, e^{i nu} sin t], [-e^{-i nu} sin t, e^{-i mu} cos t]]`
///   with `mu = (phi1 + phi2)/2`, `nu = (phi1 - phi2)/2`.
pub fn gate_matrix(kind: PCGateKind, params: &[f64]) -> Result<GateMatrix> {
    check_param_count(kind, params)?;
    let one = C64::new(1.0, 0.0);
    let mut m = GateMatrix::zeros(2);
    match kind {
        PCGateKind::A => {
            let (theta, phi) = (params[0], params[1]);
            let (s, c) = (theta.sin(), theta.cos());
            m.set(0, 0, one);
            m.set(3, 3, one);
            m.set(1, 1, C64::new(s, 0.0));
            m.set(1, 2, Complex64::from_polar(c, phi));
            m.set(2, 1, Complex64::from_polar(c, -phi));
            m.set(2, 2, C64::new(-s, 0.0));
        }
        PCGateKind::B => {
            let (theta, phi) = (params[0], params[1]);
            let (s, c) = (theta.sin(), theta.cos());
            m.set(0, 0, one);
            m.set(3, 3, Complex64::from_polar(1.0, phi));
            m.set(1, 1, C64::new(c, 0.0));
            m.set(1, 2, C64::new(0.0, -s));
            m.set(2, 1, C64::new(0.0, -s));
            m.set(2, 2, C64::new(c, 0.0));
        }
        PCGateKind::G => {
            let (alpha, theta, phi1, phi2) = (params[0], params[1], params[2], params[3]);
            let (s, c) = (theta.sin(), theta.cos());
            let mu = (phi1 + phi2) / 2.0;
            let nu = (phi1 - phi2) / 2.0;
            m.set(0, 0, one);
            m.set(3, 3, one);
            m.set(1, 1, Complex64::from_polar(c, alpha + mu));
            m.set(1, 2, Complex64::from_polar(s, alpha + nu));
            m.set(2, 1, -Complex64::from_polar(s, alpha - nu));
            m.set(2, 2, Complex64::from_polar(c, alpha - mu));
        }
    }
    Ok(m)
}

/// Residual of the particle-conservation zero pattern.
pub fn particle_conservation_residual(m: &GateMatrix) -> f64 {
    assert_eq!(m.arity(), 2);
    let mut residual: f64 = 0.0;
    for r in 0..4 {
        for c in 0..4 {
            let allowed = matches!((r, c), (0, 0) | (3, 3) | (1, 1) | (1, 2) | (2, 1) | (2, 2));
            if !allowed {
                residual = residual.max(m.get(r, c).norm());
            }
        }
    }
    residual
}

// ---------------------------------------------------------------------------
// Elementary-gate sequences.
// ---------------------------------------------------------------------------

/// Elementary gate kinds used in decompositions.
///
/// One-wire placements act on `wires[0]`. A two-wire placement of `Cnot` is
/// the usual controlled-NOT with `wires[0]` as control; a two-wire placement
/// of any rotation/phase kind is the controlled version of that gate, again
/// with `wires[0]` as control and `wires[1]` as target.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ElementaryKind {
    Cnot,
    Rx,
    Ry,
    Rz,
    Phase,
    X,
    Generic1Q,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Placement {
    pub kind: ElementaryKind,
    pub wires: Vec<usize>,
    pub params: Vec<f64>,
}

impl Placement {
    pub fn one(kind: ElementaryKind, wire: usize, params: Vec<f64>) -> Self {
        Self { kind, wires: vec![wire], params }
    }

    pub fn cnot(control: usize, target: usize) -> Self {
        Self { kind: ElementaryKind::Cnot, wires: vec![control, target], params: vec![] }
    }

    pub fn controlled(kind: ElementaryKind, control: usize, target: usize, params: Vec<f64>) -> Self {
        Self { kind, wires: vec![control, target], params }
    }

    /// The one-qubit matrix of this placement's base gate.
    fn base_matrix(&self) -> Result<GateMatrix> {
        let need = |n: usize| -> Result<()> {
            if self.params.len() != n {
                return Err(Error::ArityMismatch { expected: n, got: self.params.len() });
            }
            Ok(())
        };
        match self.kind {
            ElementaryKind::Cnot => Err(Error::InvalidArgument("CNOT has no base one-qubit matrix".into())),
            ElementaryKind::Rx => {
                need(1)?;
                Ok(gates::rx(self.params[0]))
            }
            ElementaryKind::Ry => {
                need(1)?;
                Ok(gates::ry(self.params[0]))
            }
            ElementaryKind::Rz => {
                need(1)?;
                Ok(gates::rz(self.params[0]))
            }
            ElementaryKind::Phase => {
                need(1)?;
                Ok(gates::phase(self.params[0]))
            }
            ElementaryKind::X => {
                need(0)?;
                Ok(gates::pauli_x())
            }
            ElementaryKind::Generic1Q => {
                // Eight reals: row-major re/im pairs.
                need(8)?;
                let p = &self.params;
                let m = GateMatrix::from_rows(
                    1,
                    vec![
                        vec![C64::new(p[0], p[1]), C64::new(p[2], p[3])],
                        vec![C64::new(p[4], p[5]), C64::new(p[6], p[7])],
                    ],
                )?;
                m.check_unitary(tol::UNITARITY)?;
                Ok(m)
            }
        }
    }

    /// Applies the placement to a statevector.
    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        match (self.kind, self.wires.len()) {
            (ElementaryKind::Cnot, 2) => state.apply_two_qubit(&gates::cnot(), self.wires[0], self.wires[1]),
            (_, 1) => state.apply_one_qubit(&self.base_matrix()?, self.wires[0]),
            (_, 2) => {
                let controlled = gates::controlled(&self.base_matrix()?);
                state.apply_two_qubit(&controlled, self.wires[0], self.wires[1])
            }
            _ => Err(Error::InvalidArgument(format!(
                "placement must span one or two wires, got {}",
                self.wires.len()
            ))),
        }
    }
}

/// An ordered list of elementary placements on `width` wires; `gates[0]` is
/// applied first.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ElementaryGateSequence {
    pub width: usize,
    pub gates: Vec<Placement>,
}

impl ElementaryGateSequence {
    pub fn cnot_count(&self) -> usize {
        self.gates.iter().filter(|p| p.kind == ElementaryKind::Cnot).count()
    }

    /// Brute-force reconstruction of the full `2^width` matrix by applying
    /// the sequence to every basis state. Rows and columns are indexed with
    /// wire 0 as the most significant bit, matching the [`GateMatrix`]
    /// convention, so a width-2 sequence on wires `(0, 1)` is directly
    /// comparable to the closed-form gate.
    pub fn to_matrix(&self) -> Result<GateMatrix> {
        if self.width > 4 {
            return Err(Error::SizeCap { l: self.width, cap: 4 });
        }
        let dim = 1usize << self.width;
        let reverse = |i: usize| -> usize {
            let mut r = 0usize;
            for w in 0..self.width {
                r |= ((i >> (self.width - 1 - w)) & 1) << w;
            }
            r
        };
        let mut out = GateMatrix::zeros(self.width);
        for col in 0..dim {
            let mut state = Statevector::basis_state(self.width, reverse(col))?;
            for placement in &self.gates {
                placement.apply(&mut state)?;
            }
            for row in 0..dim {
                out.set(row, col, state.amplitudes()[reverse(row)]);
            }
        }
        Ok(out)
    }

    /// Re-labels the wires of every placement.
    pub fn remap_wires(&self, map: &dyn Fn(usize) -> usize, new_width: usize) -> Self {
        Self {
            width: new_width,
            gates: self
                .gates
                .iter()
                .map(|p| Placement {
                    kind: p.kind,
                    wires: p.wires.iter().map(|&w| map(w)).collect(),
                    params: p.params.clone(),
                })
                .collect(),
        }
    }

    pub fn apply(&self, state: &mut Statevector) -> Result<()> {
        for placement in &self.gates {
            placement.apply(state)?;
        }
        Ok(())
    }
}

/// Elementary decomposition of a parametrised gate on wires `(0, 1)`.
///
/// The reconstructed matrix equals [`gate_matrix`] exactly (including global
/// phase). CNOT counts of the emitted sequences: `A` uses 3, `B` uses 2 (its
/// middle entangler is a controlled-RX placement), `G` uses 4 (two fusion
/// CNOTs plus the two inside the controlled one-qubit rotation).
pub fn decompose(kind: PCGateKind, params: &[f64]) -> Result<ElementaryGateSequence> {
    check_param_count(kind, params)?;
    let gates = match kind {
        PCGateKind::A => {
            let (theta, phi) = (params[0], params[1]);
            // A = F . (I (x) P0 + W†XW (x) P1) . F with W = Ry(theta) Rz(phi).
            vec![
                Placement::cnot(0, 1),
                Placement::one(ElementaryKind::Rz, 0, vec![phi]),
                Placement::one(ElementaryKind::Ry, 0, vec![theta]),
                Placement::cnot(1, 0),
                Placement::one(ElementaryKind::Ry, 0, vec![-theta]),
                Placement::one(ElementaryKind::Rz, 0, vec![-phi]),
                Placement::cnot(0, 1),
            ]
        }
        PCGateKind::B => {
            let (theta, phi) = (params[0], params[1]);
            // Optimized form: the corner phase is spread over both wires and
            // refocused by the fusion CNOTs; the entangler is a controlled
            // RX(2 theta) with the second wire as control.
            vec![
                Placement::one(ElementaryKind::Phase, 0, vec![phi / 2.0]),
                Placement::one(ElementaryKind::Phase, 1, vec![phi / 2.0]),
                Placement::cnot(0, 1),
                Placement::one(ElementaryKind::Phase, 1, vec![-phi / 2.0]),
                Placement::controlled(ElementaryKind::Rx, 1, 0, vec![2.0 * theta]),
                Placement::cnot(0, 1),
            ]
        }
        PCGateKind::G => {
            let (alpha, theta, phi1, phi2) = (params[0], params[1], params[2], params[3]);
            // G = F . (I (x) P0 + U (x) P1) . F with
            // U = e^{i alpha} Rz(f1) Ry(2 t) Rz(f2), (f1, f2, t) = (-phi1, -phi2, -theta).
            // The controlled-U is expanded as P(alpha) on the control times
            // the standard A.X.B.X.C identity with A B C = I.
            let (f1, f2, t) = (-phi1, -phi2, -theta);
            vec![
                Placement::cnot(0, 1),
                Placement::one(ElementaryKind::Phase, 1, vec![alpha]),
                // C = Rz((f2 - f1)/2)
                Placement::one(ElementaryKind::Rz, 0, vec![(f2 - f1) / 2.0]),
                Placement::cnot(1, 0),
                // B = Ry(-t) Rz(-(f1 + f2)/2), applied right-to-left
                Placement::one(ElementaryKind::Rz, 0, vec![-(f1 + f2) / 2.0]),
                Placement::one(ElementaryKind::Ry, 0, vec![-t]),
                Placement::cnot(1, 0),
                // A = Rz(f1) Ry(t), applied right-to-left
                Placement::one(ElementaryKind::Ry, 0, vec![t]),
                Placement::one(ElementaryKind::Rz, 0, vec![f1]),
                Placement::cnot(0, 1),
            ]
        }
    };
    Ok(ElementaryGateSequence { width: 2, gates })
}

/// Long-range variant acting directly on wires `(i, j)` of a `width`-wire
/// register, with every placement confined to those two wires (no SWAP
/// ladder). Equivalent to SWAP-ing the wires adjacent, applying the gate,
/// and SWAP-ing back.
pub fn long_range_gate(
    kind: PCGateKind,
    params: &[f64],
    i: usize,
    j: usize,
    width: usize,
) -> Result<ElementaryGateSequence> {
    if i >= width || j >= width {
        return Err(Error::QubitOutOfRange { qubit: i.max(j), num_qubits: width });
    }
    if i == j {
        return Err(Error::DuplicateWires(i));
    }
    let seq = decompose(kind, params)?;
    Ok(seq.remap_wires(&move |w| if w == 0 { i } else { j }, width))
}

// ---------------------------------------------------------------------------
// Canonical form of number-conserving two-qubit unitaries.
// ---------------------------------------------------------------------------

/// Canonical parameters of a number-conserving two-qubit unitary
/// `U = T(omega1, omega2) . G(alpha, theta, phi1, phi2)` where
/// `T = diag(e^{i w1/2}, e^{i w2/2}) (x) diag(e^{i w1/2}, e^{i w2/2})`
/// acts as `diag(e^{i w1}, e^{i (w1+w2)/2}, e^{i (w1+w2)/2}, e^{i w2})`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CanonicalPC {
    pub omega1: f64,
    pub omega2: f64,
    pub alpha: f64,
    pub theta: f64,
    pub phi1: f64,
    pub phi2: f64,
}

/// The diagonal phase layer `T(omega1, omega2)`.
pub fn phase_layer(omega1: f64, omega2: f64) -> GateMatrix {
    let mut m = GateMatrix::zeros(2);
    m.set(0, 0, Complex64::from_polar(1.0, omega1));
    m.set(1, 1, Complex64::from_polar(1.0, (omega1 + omega2) / 2.0));
    m.set(2, 2, Complex64::from_polar(1.0, (omega1 + omega2) / 2.0));
    m.set(3, 3, Complex64::from_polar(1.0, omega2));
    m
}

fn wrap_angle(x: f64) -> f64 {
    // Normalize to (-pi, pi].
    let two_pi = 2.0 * std::f64::consts::PI;
    let mut y = x % two_pi;
    if y <= -std::f64::consts::PI {
        y += two_pi;
    } else if y > std::f64::consts::PI {
        y -= two_pi;
    }
    y
}

/// Factors an arbitrary number-conserving two-qubit unitary into the phase
/// layer [`phase_layer`] times a `G` gate.
///
/// Angles are normalized to `theta` in `[0, pi/2]` and phases in
/// `(-pi, pi]`; redundant phases are gauge-fixed to zero when `cos(theta)`
/// or `sin(theta)` vanishes.
pub fn canonicalize_pc_unitary(u: &GateMatrix) -> Result<CanonicalPC> {
    if u.arity() != 2 {
        return Err(Error::DimensionMismatch { expected: 4, got: u.dim() });
    }
    u.check_unitary(tol::UNITARITY)?;
    let residual = particle_conservation_residual(u);
    if residual > tol::UNITARITY {
        return Err(Error::NotParticleConserving { residual });
    }
    let omega1 = u.get(0, 0).arg();
    let omega2 = u.get(3, 3).arg();
    // Strip the phase layer from the central block.
    let strip = Complex64::from_polar(1.0, -(omega1 + omega2) / 2.0);
    let m11 = u.get(1, 1) * strip;
    let m12 = u.get(1, 2) * strip;
    let m21 = u.get(2, 1) * strip;
    let m22 = u.get(2, 2) * strip;
    // det M' = e^{2 i alpha}; pick the principal branch (either branch
    // reconstructs the same gate).
    let det = m11 * m22 - m12 * m21;
    let alpha = det.arg() / 2.0;
    let unphase = Complex64::from_polar(1.0, -alpha);
    let z = m11 * unphase; // e^{i mu} cos(theta)
    let w = m12 * unphase; // e^{i nu} sin(theta)
    let theta = w.norm().atan2(z.norm());
    let mu = if z.norm() > 1e-14 { z.arg() } else { 0.0 };
    let nu = if w.norm() > 1e-14 { w.arg() } else { 0.0 };
    let phi1 = wrap_angle(mu + nu);
    let phi2 = wrap_angle(mu - nu);
    // Wrapping phi1 and phi2 independently can shift the reconstructed
    // (mu, nu) pair by an odd multiple of pi, which negates the central
    // block; absorb that sign into alpha.
    let mut alpha = wrap_angle(alpha);
    if ((phi1 + phi2) / 2.0 - mu).cos() < 0.0 {
        alpha = wrap_angle(alpha + std::f64::consts::PI);
    }
    Ok(CanonicalPC {
        omega1: wrap_angle(omega1),
        omega2: wrap_angle(omega2),
        alpha,
        theta,
        phi1,
        phi2,
    })
}

impl CanonicalPC {
    /// Reconstructs the unitary `T(omega1, omega2) . G(alpha, theta, phi1, phi2)`.
    pub fn reconstruct(&self) -> Result<GateMatrix> {
        let g = gate_matrix(PCGateKind::G, &[self.alpha, self.theta, self.phi1, self.phi2])?;
        Ok(phase_layer(self.omega1, self.omega2).matmul(&g))
    }
}

/// Draws a Haar-like random number-conserving two-qubit unitary (random
/// central U(2) block and random corner phases).
pub fn random_pc_unitary<R: rand::Rng + ?Sized>(rng: &mut R) -> GateMatrix {
    use std::f64::consts::PI;
    let w1 = rng.gen_range(-PI..PI);
    let w2 = rng.gen_range(-PI..PI);
    // Random U(2): phase * SU(2) from unit quaternion.
    let mut q = [0.0f64; 4];
    let mut norm = 0.0;
    for v in &mut q {
        *v = rng.gen::<f64>() - 0.5;
        norm += *v * *v;
    }
    let norm = norm.sqrt().max(1e-9);
    for v in &mut q {
        *v /= norm;
    }
    // Central block: SU(2) from the unit quaternion times a global phase.
    let phase = Complex64::from_polar(1.0, rng.gen_range(-PI..PI));
    let a = C64::new(q[0], q[1]);
    let b = C64::new(q[2], q[3]);
    let mut m = GateMatrix::zeros(2);
    m.set(0, 0, Complex64::from_polar(1.0, w1));
    m.set(3, 3, Complex64::from_polar(1.0, w2));
    m.set(1, 1, a * phase);
    m.set(1, 2, b * phase);
    m.set(2, 1, -b.conj() * phase);
    m.set(2, 2, a.conj() * phase);
    m
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use std::f64::consts::PI;

    #[test]
    fn fusion_gate_action() {
        let f = fusion_gate();
        // F|11> -> |10> (charge moves to the control reading).
        assert!((f.get(2, 3) - C64::new(1.0, 0.0)).norm() < 1e-15);
        // F|01> -> |01> (control clear).
        assert!((f.get(1, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
        // Involution.
        assert!(f.matmul(&f).max_abs_diff(&GateMatrix::identity(2)) < 1e-15);
    }

    #[test]
    fn charge_controlled_identity_x() {
        let q = charge_controlled_op(&GateMatrix::identity(1), &gates::pauli_x()).unwrap();
        assert!((q.get(1, 3) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((q.get(3, 1) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((q.get(0, 0) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((q.get(2, 2) - C64::new(1.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn charge_controlled_rejects_non_unitary() {
        let bad = GateMatrix::from_rows(
            1,
            vec![
                vec![C64::new(2.0, 0.0), C64::new(0.0, 0.0)],
                vec![C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
            ],
        )
        .unwrap();
        assert!(charge_controlled_op(&bad, &GateMatrix::identity(1)).is_err());
    }

    #[test]
    fn z2_composition_layout() {
        // Z = F Q F spreads Q0 over the corners and keeps Q1 central.
        let mut rng = ChaCha8Rng::seed_from_u64(3);
        for _ in 0..20 {
            let q0 = random_su2(&mut rng);
            let q1 = random_su2(&mut rng);
            let z = z2_generic_gate(&q0, &q1).unwrap();
            assert!((z.get(0, 0) - q0.get(0, 0)).norm() < 1e-14);
            assert!((z.get(3, 0) - q0.get(1, 0)).norm() < 1e-14);
            assert!((z.get(0, 3) - q0.get(0, 1)).norm() < 1e-14);
            assert!((z.get(3, 3) - q0.get(1, 1)).norm() < 1e-14);
            assert!((z.get(1, 1) - q1.get(0, 0)).norm() < 1e-14);
            assert!((z.get(1, 2) - q1.get(0, 1)).norm() < 1e-14);
            assert!((z.get(2, 1) - q1.get(1, 0)).norm() < 1e-14);
            assert!((z.get(2, 2) - q1.get(1, 1)).norm() < 1e-14);
        }
    }

    fn random_su2<R: Rng>(rng: &mut R) -> GateMatrix {
        let mut q = [0.0f64; 4];
        let mut n = 0.0;
        for v in &mut q {
            *v = rng.gen::<f64>() - 0.5;
            n += *v * *v;
        }
        let n = n.sqrt();
        let (a, b) = (C64::new(q[0] / n, q[1] / n), C64::new(q[2] / n, q[3] / n));
        GateMatrix::from_rows(1, vec![vec![a, b], vec![-b.conj(), a.conj()]]).unwrap()
    }

    #[test]
    fn gate_a_special_values() {
        let a0 = gate_matrix(PCGateKind::A, &[0.0, 0.0]).unwrap();
        assert!((a0.get(1, 2) - C64::new(1.0, 0.0)).norm() < 1e-15);
        assert!((a0.get(1, 1)).norm() < 1e-15);
        let a_half = gate_matrix(PCGateKind::A, &[PI / 2.0, 0.7]).unwrap();
        // sin(pi/2) = 1: diag(1, 1, -1, 1).
        let mut expected = GateMatrix::identity(2);
        expected.set(2, 2, C64::new(-1.0, 0.0));
        assert!(a_half.max_abs_diff(&expected) < 1e-15);
    }

    #[test]
    fn gate_construction_from_charge_controlled_blocks() {
        // A = Z(I, V), B = Z(P(phi), Rx(2 theta)), and the closed forms agree.
        let (theta, phi): (f64, f64) = (0.37, -1.21);
        let v = GateMatrix::from_rows(
            1,
            vec![
                vec![C64::new(theta.sin(), 0.0), Complex64::from_polar(theta.cos(), phi)],
                vec![Complex64::from_polar(theta.cos(), -phi), C64::new(-theta.sin(), 0.0)],
            ],
        )
        .unwrap();
        let a = z2_generic_gate(&GateMatrix::identity(1), &v).unwrap();
        assert!(a.max_abs_diff(&gate_matrix(PCGateKind::A, &[theta, phi]).unwrap()) < 1e-14);

        let b = z2_generic_gate(&gates::phase(phi), &gates::rx(2.0 * theta)).unwrap();
        assert!(b.max_abs_diff(&gate_matrix(PCGateKind::B, &[theta, phi]).unwrap()) < 1e-14);
    }

    #[test]
    fn gates_are_unitary_and_particle_conserving() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            for kind in [PCGateKind::A, PCGateKind::B, PCGateKind::G] {
                let params: Vec<f64> = (0..kind.arity()).map(|_| rng.gen_range(-PI..PI)).collect();
                let m = gate_matrix(kind, &params).unwrap();
                assert!(m.unitarity_residual() < 1e-12);
                assert!(particle_conservation_residual(&m) < 1e-15);
            }
        }
    }

    #[test]
    fn wrong_param_count_rejected() {
        assert!(gate_matrix(PCGateKind::A, &[0.1]).is_err());
        assert!(gate_matrix(PCGateKind::G, &[0.1, 0.2]).is_err());
        assert!(decompose(PCGateKind::B, &[0.1, 0.2, 0.3]).is_err());
    }

    #[test]
    fn decompositions_reconstruct_exactly() {
        let mut rng = ChaCha8Rng::seed_from_u64(41);
        for kind in [PCGateKind::A, PCGateKind::B, PCGateKind::G] {
            for _ in 0..100 {
                let params: Vec<f64> = (0..kind.arity()).map(|_| rng.gen_range(-PI..PI)).collect();
                let target = gate_matrix(kind, &params).unwrap();
                let seq = decompose(kind, &params).unwrap();
                let rebuilt = seq.to_matrix().unwrap();
                let diff = rebuilt.max_abs_diff(&target);
                assert!(diff < crate::tol::MATRIX_EQ, "{}: residual {diff:.3e}", kind.name());
            }
        }
    }

    #[test]
    fn decomposition_cnot_counts() {
        assert_eq!(decompose(PCGateKind::A, &[0.3, 0.4]).unwrap().cnot_count(), 3);
        assert_eq!(decompose(PCGateKind::B, &[0.3, 0.4]).unwrap().cnot_count(), 2);
        // The controlled one-qubit rotation inside G costs two CNOTs on top of
        // the two fusion CNOTs.
        assert_eq!(decompose(PCGateKind::G, &[0.1, 0.3, 0.4, 0.5]).unwrap().cnot_count(), 4);
    }

    #[test]
    fn long_range_matches_swap_conjugation() {
        let params = [0.83, -0.29];
        let seq = long_range_gate(PCGateKind::A, &params, 0, 2, 3).unwrap();
        assert_eq!(seq.cnot_count(), 3);

        // SWAP-based reference: swap wires 1 and 2, apply on (0, 1), swap
        // back. Compare the action on every basis state.
        let gate = gate_matrix(PCGateKind::A, &params).unwrap();
        for col in 0..8usize {
            let mut direct = Statevector::basis_state(3, col).unwrap();
            seq.apply(&mut direct).unwrap();
            let mut reference = Statevector::basis_state(3, col).unwrap();
            reference.apply_two_qubit(&gates::swap(), 1, 2).unwrap();
            reference.apply_two_qubit(&gate, 0, 1).unwrap();
            reference.apply_two_qubit(&gates::swap(), 1, 2).unwrap();
            let diff = direct
                .amplitudes()
                .iter()
                .zip(reference.amplitudes())
                .map(|(a, b)| (a - b).norm())
                .fold(0.0f64, f64::max);
            assert!(diff < crate::tol::MATRIX_EQ, "column {col}: {diff:.3e}");
        }
    }

    #[test]
    fn canonicalization_round_trip() {
        let mut rng = ChaCha8Rng::seed_from_u64(2024);
        for _ in 0..500 {
            let u = random_pc_unitary(&mut rng);
            assert!(u.unitarity_residual() < 1e-12, "draw not unitary");
            let canon = canonicalize_pc_unitary(&u).unwrap();
            assert!(canon.theta >= 0.0 && canon.theta <= PI / 2.0 + 1e-12);
            let rebuilt = canon.reconstruct().unwrap();
            assert!(rebuilt.max_abs_diff(&u) < crate::tol::CANONICAL);
        }
    }

    #[test]
    fn canonicalization_of_pure_g_has_zero_omegas() {
        let params = [0.4, 0.8, -0.6, 1.9];
        let g = gate_matrix(PCGateKind::G, &params).unwrap();
        let canon = canonicalize_pc_unitary(&g).unwrap();
        assert!(canon.omega1.abs() < 1e-12);
        assert!(canon.omega2.abs() < 1e-12);
        assert!(canon.reconstruct().unwrap().max_abs_diff(&g) < 1e-12);
    }

    #[test]
    fn canonicalization_rejects_non_conserving_input() {
        assert!(canonicalize_pc_unitary(&gates::cnot()).is_err());
        assert!(canonicalize_pc_unitary(&gates::swap().matmul(&gates::cnot())).is_err());
    }

    #[test]
    fn gauge_fix_at_theta_extremes() {
        // theta = 0: sin block vanishes -> nu gauge-fixed to 0.
        let g = gate_matrix(PCGateKind::G, &[0.3, 0.0, 0.5, 0.5]).unwrap();
        let canon = canonicalize_pc_unitary(&g).unwrap();
        assert!((canon.phi1 - canon.phi2).abs() < 1e-12);
        assert!(canon.reconstruct().unwrap().max_abs_diff(&g) < 1e-12);
    }
}
