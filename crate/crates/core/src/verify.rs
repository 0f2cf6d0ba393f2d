//! Self-contained verification suite for the gate and circuit invariants,
//! reusable from tests and the command-line `gates verify` runner.

use crate::circuits::{build_brickwall, build_brickwall_extended};
use crate::error::Result;
use crate::pcgates::{
    canonicalize_pc_unitary, decompose, gate_matrix, long_range_gate,
    particle_conservation_residual, random_pc_unitary, PCGateKind,
};
use crate::tol;
use crate::vqe::subseed;
use rand::Rng;
use serde::Serialize;

/// One named invariant check with its worst observed residual.
#[derive(Debug, Clone, Serialize)]
pub struct CheckResult {
    pub name: String,
    pub residual: f64,
    pub threshold: f64,
    pub pass: bool,
    pub detail: String,
}

impl CheckResult {
    fn new(name: impl Into<String>, residual: f64, threshold: f64, detail: impl Into<String>) -> Self {
        let name = name.into();
        Self { name, residual, threshold, pass: residual < threshold, detail: detail.into() }
    }
}

/// Deliberate defects injectable for negative testing of the runner itself.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Corruption {
    /// Flip the sign of one closed-form matrix entry before comparing it
    /// against its decomposition.
    FlipGateSign,
}

fn random_params<R: Rng + ?Sized>(kind: PCGateKind, rng: &mut R) -> Vec<f64> {
    (0..kind.arity())
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// Runs the full gate/circuit invariant suite with deterministic internal
/// seeds. `corruption` injects a known defect so callers can verify that
/// failures are detected and named.
pub fn run_gate_checks(corruption: Option<Corruption>) -> Result<Vec<CheckResult>> {
    let mut checks = Vec::new();

    // Decompose-reconstruct and particle conservation, 100 draws per kind.
    for kind in [PCGateKind::A, PCGateKind::B, PCGateKind::G] {
        let mut rng = subseed(0xC0FFEE, 10, kind.arity() as u64);
        let mut reconstruct_residual: f64 = 0.0;
        let mut conservation_residual: f64 = 0.0;
        let mut cnots = 0;
        for draw in 0..100 {
            let params = random_params(kind, &mut rng);
            let mut reference = gate_matrix(kind, &params)?;
            if corruption == Some(Corruption::FlipGateSign) && draw == 0 {
                let flipped = -reference.get(1, 2);
                reference.set(1, 2, flipped);
            }
            let sequence = decompose(kind, &params)?;
            cnots = sequence.cnot_count();
            let rebuilt = sequence.to_matrix()?;
            reconstruct_residual = reconstruct_residual.max(reference.max_abs_diff(&rebuilt));
            conservation_residual =
                conservation_residual.max(particle_conservation_residual(&reference));
        }
        checks.push(CheckResult::new(
            format!("decompose-reconstruct {}", kind.name()),
            reconstruct_residual,
            tol::MATRIX_EQ,
            format!("100 draws, {cnots} CNOT-class placements"),
        ));
        checks.push(CheckResult::new(
            format!("particle conservation {}", kind.name()),
            conservation_residual,
            tol::MATRIX_EQ,
            "commutes with two-qubit number operator",
        ));
    }

    // Long-range gate on wires (1, 3) against a swap-sandwich reference.
    {
        let mut rng = subseed(0xC0FFEE, 11, 0);
        let params = random_params(PCGateKind::A, &mut rng);
        let wide = long_range_gate(PCGateKind::A, &params, 1, 3, 4)?;
        let residual = long_range_swap_residual(PCGateKind::A, &params, &wide)?;
        checks.push(CheckResult::new(
            "long-range A on (1,3)",
            residual,
            tol::MATRIX_EQ,
            "matches swap-conjugated nearest-neighbour action",
        ));
    }

    // Canonical-form round trips over random particle-conserving unitaries.
    {
        let mut rng = subseed(0xC0FFEE, 12, 0);
        let mut residual: f64 = 0.0;
        for _ in 0..500 {
            let u = random_pc_unitary(&mut rng);
            let canonical = canonicalize_pc_unitary(&u)?;
            residual = residual.max(u.max_abs_diff(&canonical.reconstruct()?));
        }
        checks.push(CheckResult::new(
            "canonical form round trip",
            residual,
            tol::CANONICAL,
            "500 random draws: phase layer x general gate",
        ));
    }

    // Brick-wall circuits keep all amplitude mass in the particle sector.
    {
        let mut rng = subseed(0xC0FFEE, 13, 0);
        let mut residual: f64 = 0.0;
        for (l, n) in [(4usize, 2usize), (6, 3), (8, 3)] {
            for extended in [false, true] {
                let circuit = if extended {
                    build_brickwall_extended(l, n, PCGateKind::G, None)?
                } else {
                    build_brickwall(l, n, PCGateKind::G, None)?
                };
                let theta: Vec<f64> = (0..circuit.free_params)
                    .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                    .collect();
                let state = circuit.bind(&theta)?;
                residual = residual.max(state.mass_outside_weight(n));
            }
        }
        checks.push(CheckResult::new(
            "brick-wall sector conservation",
            residual,
            tol::MATRIX_EQ,
            "plain and extended builders, random angles",
        ));
    }

    Ok(checks)
}

/// Reference construction for a long-range gate: swap the distant wire next
/// to the other one, apply the nearest-neighbour decomposition, swap back.
fn long_range_swap_residual(
    kind: PCGateKind,
    params: &[f64],
    candidate: &crate::pcgates::ElementaryGateSequence,
) -> Result<f64> {
    use crate::pcgates::{ElementaryGateSequence, Placement};
    let nn = decompose(kind, params)?;
    // Move wire 3 down to wire 2 so the gate acts on (1, 2), then undo.
    let swap = |a: usize, b: usize| {
        vec![Placement::cnot(a, b), Placement::cnot(b, a), Placement::cnot(a, b)]
    };
    let mut gates = swap(2, 3);
    gates.extend(nn.remap_wires(&|w| w + 1, 4).gates);
    gates.extend(swap(2, 3));
    let reference = ElementaryGateSequence { width: 4, gates };
    Ok(candidate.to_matrix()?.max_abs_diff(&reference.to_matrix()?))
}

/// Renders the checks as an aligned text table.
pub fn format_check_table(checks: &[CheckResult]) -> String {
    let mut out = String::new();
    let width = checks.iter().map(|c| c.name.len()).max().unwrap_or(0);
    for c in checks {
        out.push_str(&format!(
            "{:<width$}  {:>9.2e} < {:>7.1e}  {}  {}\n",
            c.name,
            c.residual,
            c.threshold,
            if c.pass { "PASS" } else { "FAIL" },
            c.detail,
        ));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn clean_run_passes_everything() {
        let checks = run_gate_checks(None).unwrap();
        assert!(!checks.is_empty());
        for c in &checks {
            assert!(c.pass, "{} residual {:.3e} >= {:.1e}", c.name, c.residual, c.threshold);
        }
    }

    #[test]
    fn corruption_is_detected_and_named() {
        let checks = run_gate_checks(Some(Corruption::FlipGateSign)).unwrap();
        let failing: Vec<_> = checks.iter().filter(|c| !c.pass).collect();
        assert!(!failing.is_empty());
        assert!(failing.iter().any(|c| c.name.contains("decompose-reconstruct")));
    }

    #[test]
    fn table_mentions_every_check() {
        let checks = run_gate_checks(None).unwrap();
        let table = format_check_table(&checks);
        for c in &checks {
            assert!(table.contains(&c.name));
        }
    }
}
