//! End-to-end acceptance suite. Each test prints one `ACCEPTANCE n:` line
//! with its verdict; criterion 10 documents a known irreconcilable gap (see
//! its comments) and is expected to stay red.

use pcvqe_core::circuits::{build_brickwall, build_brickwall_extended};
use pcvqe_core::fock::sector_indices;
use pcvqe_core::models::{
    exact_ground_energy, hcbh_hamiltonian, hermitian_eigenvalues, nnn_heisenberg_hamiltonian,
    submatrix, symmetric_eigenvalues, xx_hamiltonian, xxz_hamiltonian,
};
use pcvqe_core::pcgates::PCGateKind;
use pcvqe_core::verify::run_gate_checks;
use pcvqe_core::vqe::{
    eval_budget, median, run_energy_experiment, run_fidelity_experiment, sample_haar_fock_state,
    subseed, CostMode, OptimizerConfig,
};
use rand::Rng;
use std::time::Instant;

fn verdict(n: usize, pass: bool, detail: &str) {
    println!("ACCEPTANCE {n}: {} ({detail})", if pass { "PASS" } else { "FAIL" });
}

#[test]
fn acceptance_01_reference_ground_energies() {
    let start = Instant::now();
    let cases = [
        (xxz_hamiltonian(4, 1.0).unwrap(), -6.4641),
        (xxz_hamiltonian(6, 1.0).unwrap(), -9.9743),
        (xxz_hamiltonian(8, 1.0).unwrap(), -13.4997),
        (xx_hamiltonian(8).unwrap(), -9.5175),
    ];
    let mut worst = 0.0f64;
    for (h, expected) in &cases {
        let e = exact_ground_energy(h, None).unwrap().ground_energy;
        worst = worst.max((e - expected).abs());
    }
    let elapsed = start.elapsed();
    let pass = worst < 5e-5 && elapsed.as_secs_f64() < 10.0;
    verdict(1, pass, &format!("max |dE| = {worst:.2e}, {elapsed:.2?}"));
    assert!(pass);
}

#[test]
fn acceptance_02_next_nearest_neighbour_ground_energy() {
    let h = nnn_heisenberg_hamiltonian(8).unwrap();
    let e = exact_ground_energy(&h, None).unwrap().ground_energy;
    let pass = (e - (-14.7262)).abs() < 5e-5;
    verdict(2, pass, &format!("E0 = {e:.6}"));
    assert!(pass);
}

#[test]
fn acceptance_03_gate_oracle_suite() {
    let checks = run_gate_checks(None).unwrap();
    let expected = [
        "decompose-reconstruct A",
        "decompose-reconstruct B",
        "decompose-reconstruct G",
        "particle conservation A",
        "particle conservation B",
        "particle conservation G",
        "long-range A on (1,3)",
        "canonical form round trip",
    ];
    let mut pass = true;
    for name in expected {
        let check = checks.iter().find(|c| c.name == name);
        pass &= check.map(|c| c.pass).unwrap_or(false);
    }
    let worst = checks.iter().map(|c| c.residual / c.threshold).fold(0.0f64, f64::max);
    verdict(3, pass, &format!("worst residual at {worst:.2e} of threshold"));
    assert!(pass);
}

#[test]
fn acceptance_04_sector_conservation() {
    let mut rng = subseed(404, 0, 0);
    let mut worst = 0.0f64;
    for (l, n) in [(4usize, 2usize), (6, 3), (8, 3), (8, 4)] {
        for extended in [false, true] {
            let circuit = if extended {
                build_brickwall_extended(l, n, PCGateKind::G, None).unwrap()
            } else {
                build_brickwall(l, n, PCGateKind::G, None).unwrap()
            };
            let theta: Vec<f64> = (0..circuit.free_params)
                .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
                .collect();
            let state = circuit.bind(&theta).unwrap();
            worst = worst.max(state.mass_outside_weight(n));
        }
    }
    let pass = worst < 1e-12;
    verdict(4, pass, &format!("max off-sector mass = {worst:.2e}"));
    assert!(pass);
}

#[test]
fn acceptance_05_parameter_accounting() {
    let mut pass = true;
    for kind in [PCGateKind::A, PCGateKind::B] {
        for (layers, expected) in [(2usize, 12usize), (3, 18), (4, 24)] {
            let c = build_brickwall(4, 2, kind, Some(layers)).unwrap();
            pass &= c.free_params == expected;
        }
    }
    let g = build_brickwall(4, 2, PCGateKind::G, Some(2)).unwrap();
    pass &= g.free_params == 24;
    verdict(5, pass, "A/B at 2/3/4 layers expose 12/18/24; G at 2 layers exposes 24");
    assert!(pass);
}

#[test]
fn acceptance_06_energy_minimization_ordering() {
    let start = Instant::now();
    let h = xxz_hamiltonian(4, 1.0).unwrap();
    let exact = exact_ground_energy(&h, Some(2)).unwrap().ground_energy;
    let optimizer = OptimizerConfig { max_evals: 1000, ..Default::default() };
    let mut medians = Vec::new();
    for kind in [PCGateKind::A, PCGateKind::B, PCGateKind::G] {
        let circuit = build_brickwall(4, 2, kind, None).unwrap();
        let result =
            run_energy_experiment(&circuit, &h, 10, CostMode::Exact, &optimizer, 601).unwrap();
        let mut errors: Vec<f64> = result
            .trials
            .iter()
            .map(|t| (t.best_cost - exact).abs() / exact.abs())
            .collect();
        medians.push(median(&mut errors));
    }
    let (err_a, err_b, err_g) = (medians[0], medians[1], medians[2]);
    let elapsed = start.elapsed();
    let pass =
        err_g <= err_a && err_g <= err_b && err_g <= 2e-2 && elapsed.as_secs_f64() < 300.0;
    verdict(
        6,
        pass,
        &format!("median rel. err. A={err_a:.2e} B={err_b:.2e} G={err_g:.2e}, {elapsed:.2?}"),
    );
    assert!(pass);
}

#[test]
fn acceptance_07_fidelity_learning() {
    let optimizer =
        OptimizerConfig { max_evals: eval_budget(4, 2).unwrap(), ..Default::default() };
    let mut epsilons = Vec::new();
    for kind in [PCGateKind::G, PCGateKind::A, PCGateKind::B] {
        let circuit = build_brickwall(4, 2, kind, Some(2)).unwrap();
        let result = run_fidelity_experiment(&circuit, 25, 5, &optimizer, 701).unwrap();
        epsilons.push(result.mean_epsilon);
    }
    let (eps_g, eps_a, eps_b) = (epsilons[0], epsilons[1], epsilons[2]);
    let deep_a = build_brickwall(4, 2, PCGateKind::A, Some(4)).unwrap();
    let deep = run_fidelity_experiment(&deep_a, 25, 5, &optimizer, 701).unwrap();
    let pass = eps_g < eps_a && eps_a < eps_b && deep.mean_epsilon <= 1e-4;
    verdict(
        7,
        pass,
        &format!(
            "2-layer eps G={eps_g:.2e} A={eps_a:.2e} B={eps_b:.2e}; 4-layer A eps={:.2e}",
            deep.mean_epsilon
        ),
    );
    assert!(pass);
}

/// Non-inferiority of the plain nearest-neighbour brick-wall circuit versus
/// its extended variant on the L=8 next-nearest-neighbour Heisenberg chain
/// at equal free-parameter counts.
///
/// KNOWN RED at layers = 3. In this implementation the extended circuit's
/// median relative error is consistently about half the plain circuit's at
/// three layers (at five layers the plain circuit is competitive or better).
/// The gap is not an artifact of any tunable choice made here; it persists
/// under every legitimate variation tried:
///   - more trials (N_T = 15 and 25: nn ~1.0e-1 vs ext ~8.0e-2, a 22% gap,
///     well past the 10% margin),
///   - a far larger evaluation budget (60000 evals: nn 7.9e-2 vs ext 4.0e-2),
///   - different seeds (801, 802, 803),
///   - fixing the trimmed gate slots at pi/2 (a diagonal gate) instead of
///     0.0 (a hopping gate), which made the plain arm strictly worse
///     (1.30e-1 vs ext 6.9e-2),
///   - pooling trials across both depths per arm before taking the median
///     (nn 9.3e-2 vs ext 4.3e-2).
/// Both arms exhaust the full budget with slow continuing progress, share
/// identical starting angles, and use identical free-parameter counts, so
/// the comparison is fair by construction. The check encodes an empirical
/// expectation that does not hold for this optimizer at this budget and
/// depth; the test reports the measured medians honestly.
#[test]
fn acceptance_08_extended_circuit_non_inferiority() {
    let h = nnn_heisenberg_hamiltonian(8).unwrap();
    let exact = exact_ground_energy(&h, Some(4)).unwrap().ground_energy;
    let optimizer =
        OptimizerConfig { max_evals: eval_budget(8, 4).unwrap(), ..Default::default() };
    let mut pass = true;
    let mut details = Vec::new();
    for layers in [3usize, 5] {
        let nn = build_brickwall(8, 4, PCGateKind::A, Some(layers)).unwrap();
        let ext = build_brickwall_extended(8, 4, PCGateKind::A, Some(layers)).unwrap();
        // Equal free-parameter counts: trim the larger circuit; identical
        // counts plus a shared seed give both arms identical starting angles.
        let free = nn.free_params.min(ext.free_params);
        let nn = nn.with_free_params(free, 0.0).unwrap();
        let ext = ext.with_free_params(free, 0.0).unwrap();
        let mut med = |c: &pcvqe_core::circuits::ParamCircuit| {
            let r = run_energy_experiment(c, &h, 5, CostMode::Exact, &optimizer, 801).unwrap();
            let mut errs: Vec<f64> = r
                .trials
                .iter()
                .map(|t| (t.best_cost - exact).abs() / exact.abs())
                .collect();
            median(&mut errs)
        };
        let nn_err = med(&nn);
        let ext_err = med(&ext);
        // The extended variant must not beat the plain one by more than 10%.
        pass &= ext_err >= 0.9 * nn_err;
        details.push(format!("layers={layers}: nn={nn_err:.3e} ext={ext_err:.3e}"));
    }
    verdict(8, pass, &details.join("; "));
    assert!(pass);
}

#[test]
fn acceptance_09_haar_moment() {
    let mut rng = subseed(909, 0, 0);
    let n_pairs = 10_000usize;
    let mut sum = 0.0;
    let mut sum_sq = 0.0;
    for _ in 0..n_pairs {
        let a = sample_haar_fock_state(4, 2, &mut rng).unwrap();
        let b = sample_haar_fock_state(4, 2, &mut rng).unwrap();
        let overlap = a.inner_product(&b).norm_sqr();
        sum += overlap;
        sum_sq += overlap * overlap;
    }
    let mean = sum / n_pairs as f64;
    let variance = (sum_sq / n_pairs as f64 - mean * mean).max(0.0);
    let standard_error = (variance / n_pairs as f64).sqrt();
    let target = 1.0 / 6.0;
    let pass = (mean - target).abs() <= 3.0 * standard_error;
    verdict(9, pass, &format!("mean = {mean:.5}, target {target:.5}, SE = {standard_error:.1e}"));
    assert!(pass);
}

/// Sector-wise spectral match between the spin chain and the hardcore-boson
/// chain after fitting one constant shift per sector.
///
/// KNOWN RED. On an open chain the operator identity is
/// `H_spin = 2 H_boson + gamma (L-1) - 4 gamma N + 2 gamma (n_first + n_last)`
/// (verified exactly by a unit test in the models module). The last term is
/// not constant on a fixed-particle-number sector, so no per-sector affine
/// shift can reconcile the spectra at gamma != 0; the measured deviation at
/// L = 4, gamma = 1 is about 0.6, far above the 1e-10 demanded here. With
/// periodic boundaries, or at gamma = 0, the criterion would hold.
#[test]
fn acceptance_10_boson_spin_spectral_match() {
    let (l, gamma) = (4usize, 1.0f64);
    let spin = xxz_hamiltonian(l, gamma).unwrap().to_dense();
    let boson = hcbh_hamiltonian(l, 2.0 * gamma).unwrap();
    let mut worst = 0.0f64;
    for n in 0..=l {
        let idx = sector_indices(l, n).unwrap();
        let spin_eigs = hermitian_eigenvalues(&submatrix(&spin, &idx));
        let boson_eigs: Vec<f64> = symmetric_eigenvalues(&submatrix(&boson, &idx))
            .iter()
            .map(|e| 2.0 * e)
            .collect();
        let shift: f64 = spin_eigs
            .iter()
            .zip(&boson_eigs)
            .map(|(a, b)| a - b)
            .sum::<f64>()
            / spin_eigs.len() as f64;
        for (a, b) in spin_eigs.iter().zip(&boson_eigs) {
            worst = worst.max((a - (b + shift)).abs());
        }
    }
    let pass = worst < 1e-10;
    verdict(
        10,
        pass,
        &format!(
            "max per-sector deviation = {worst:.3e}; open-boundary term \
             2*gamma*(n_first + n_last) is not sector-constant"
        ),
    );
    assert!(pass);
}
