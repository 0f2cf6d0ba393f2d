//! Variational optimization: derivative-free minimizers, cost functions and
//! the repeated-trial experiment protocols.

use crate::circuits::ParamCircuit;
use crate::error::{Error, Result};
use crate::fock;
use crate::gates::C64;
use crate::models::PauliHamiltonian;
use crate::pauli;
use crate::state::Statevector;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::Serialize;

/// Splitmix64 finalizer: bijective 64-bit hash.
fn mix64(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e3779b97f4a7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
    z ^ (z >> 31)
}

/// Deterministic sub-stream generator: the returned RNG depends only on
/// `(master, stream, index)`, so samples and trials are reproducible
/// independently of execution order.
pub fn subseed(master: u64, stream: u64, index: u64) -> ChaCha8Rng {
    let s = mix64(mix64(master ^ mix64(stream)) ^ mix64(index));
    ChaCha8Rng::seed_from_u64(s)
}

/// Derivative-free method selector.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Cobyla,
    NelderMead,
}

impl std::str::FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "cobyla" => Ok(Method::Cobyla),
            "nelder-mead" | "neldermead" | "nm" => Ok(Method::NelderMead),
            other => Err(Error::InvalidArgument(format!("unknown method '{other}'"))),
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct OptimizerConfig {
    pub method: Method,
    pub max_evals: usize,
    pub initial_step: f64,
    pub convergence_tol: f64,
}

impl Default for OptimizerConfig {
    fn default() -> Self {
        Self { method: Method::Cobyla, max_evals: 1000, initial_step: 0.5, convergence_tol: 1e-6 }
    }
}

impl OptimizerConfig {
    fn validate(&self) -> Result<()> {
        if self.max_evals == 0 {
            return Err(Error::InvalidArgument("max_evals must be at least 1".into()));
        }
        if !(self.initial_step > 0.0) || !(self.convergence_tol > 0.0) {
            return Err(Error::InvalidArgument("steps and tolerances must be positive".into()));
        }
        Ok(())
    }
}

/// Outcome of a single minimization: the best point seen, not the last one
/// evaluated, plus the full cost-per-evaluation trace.
#[derive(Debug, Clone, Serialize)]
pub struct OptimizeOutcome {
    pub best_theta: Vec<f64>,
    pub best_cost: f64,
    pub trace: Vec<f64>,
}

struct Evaluator<'a> {
    f: &'a mut dyn FnMut(&[f64]) -> Result<f64>,
    trace: Vec<f64>,
    best_theta: Vec<f64>,
    best_cost: f64,
    max_evals: usize,
}

impl<'a> Evaluator<'a> {
    fn new(f: &'a mut dyn FnMut(&[f64]) -> Result<f64>, max_evals: usize) -> Self {
        Self { f, trace: Vec::new(), best_theta: Vec::new(), best_cost: f64::INFINITY, max_evals }
    }

    fn exhausted(&self) -> bool {
        self.trace.len() >= self.max_evals
    }

    /// Evaluates the cost, recording the trace and best-seen point.
    /// Returns `None` once the budget is spent.
    fn eval(&mut self, x: &[f64]) -> Result<Option<f64>> {
        if self.exhausted() {
            return Ok(None);
        }
        let value = (self.f)(x)?;
        if !value.is_finite() {
            return Err(Error::NonFiniteCost { eval: self.trace.len() });
        }
        self.trace.push(value);
        if value < self.best_cost {
            self.best_cost = value;
            self.best_theta = x.to_vec();
        }
        Ok(Some(value))
    }

    fn finish(self) -> OptimizeOutcome {
        OptimizeOutcome { best_theta: self.best_theta, best_cost: self.best_cost, trace: self.trace }
    }
}

/// Derivative-free local minimization from `theta0`. Stops at `max_evals`
/// evaluations or once the trust region / simplex contracts below
/// `convergence_tol`.
pub fn minimize(
    f: &mut dyn FnMut(&[f64]) -> Result<f64>,
    theta0: &[f64],
    config: &OptimizerConfig,
) -> Result<OptimizeOutcome> {
    config.validate()?;
    if theta0.iter().any(|x| !x.is_finite()) {
        return Err(Error::InvalidArgument("initial point must be finite".into()));
    }
    let mut evaluator = Evaluator::new(f, config.max_evals);
    match config.method {
        Method::Cobyla => cobyla_like(&mut evaluator, theta0, config)?,
        Method::NelderMead => nelder_mead(&mut evaluator, theta0, config)?,
    }
    let outcome = evaluator.finish();
    if outcome.trace.is_empty() {
        return Err(Error::InvalidArgument("budget too small for a single evaluation".into()));
    }
    Ok(outcome)
}

/// Linear-approximation trust-region search. A simplex of `n + 1` points
/// supports a linear model of the cost; each iteration steps along the
/// model's descent direction with length `rho`, keeps the step when it
/// improves the simplex, and halves `rho` (rebuilding the simplex around the
/// incumbent) when it does not.
fn cobyla_like(ev: &mut Evaluator, theta0: &[f64], config: &OptimizerConfig) -> Result<()> {
    use nalgebra::{DMatrix, DVector};
    let n = theta0.len();
    if n == 0 {
        ev.eval(theta0)?;
        return Ok(());
    }
    let mut rho = config.initial_step;

    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    let build = |ev: &mut Evaluator,
                 center: &[f64],
                 rho: f64,
                 simplex: &mut Vec<(Vec<f64>, f64)>|
     -> Result<bool> {
        simplex.clear();
        match ev.eval(center)? {
            Some(fc) => simplex.push((center.to_vec(), fc)),
            None => return Ok(false),
        }
        for i in 0..n {
            let mut x = center.to_vec();
            x[i] += rho;
            match ev.eval(&x)? {
                Some(fx) => simplex.push((x, fx)),
                None => return Ok(false),
            }
        }
        Ok(true)
    };
    if !build(ev, theta0, rho, &mut simplex)? {
        return Ok(());
    }

    while !ev.exhausted() && rho >= config.convergence_tol {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let (best_x, best_f) = (simplex[0].0.clone(), simplex[0].1);

        // Pull in any vertex that drifted too far from the incumbent, so the
        // linear model stays trustworthy at the current scale.
        let mut pulled = false;
        for k in 1..=n {
            let dist: f64 = simplex[k]
                .0
                .iter()
                .zip(&best_x)
                .map(|(a, b)| (a - b) * (a - b))
                .sum::<f64>()
                .sqrt();
            if dist > 2.1 * rho {
                let mut x = best_x.clone();
                for (xi, (v, b)) in x.iter_mut().zip(simplex[k].0.iter().zip(&best_x)) {
                    *xi = b + rho * (v - b) / dist;
                }
                match ev.eval(&x)? {
                    Some(fx) => simplex[k] = (x, fx),
                    None => return Ok(()),
                }
                pulled = true;
                break;
            }
        }
        if pulled {
            continue;
        }

        // Linear model: rows (x_k - x_best) . g = f_k - f_best.
        let mut d = DMatrix::<f64>::zeros(n, n);
        let mut df = DVector::<f64>::zeros(n);
        for k in 1..=n {
            for j in 0..n {
                d[(k - 1, j)] = simplex[k].0[j] - best_x[j];
            }
            df[k - 1] = simplex[k].1 - best_f;
        }
        let gradient = match d.lu().solve(&df) {
            Some(g) => g,
            None => {
                rho *= 0.5;
                if rho < config.convergence_tol || !build(ev, &best_x, rho, &mut simplex)? {
                    return Ok(());
                }
                continue;
            }
        };
        let gnorm = gradient.norm();
        if gnorm < 1e-14 {
            rho *= 0.5;
            if rho < config.convergence_tol || !build(ev, &best_x, rho, &mut simplex)? {
                return Ok(());
            }
            continue;
        }

        let mut x_trial = best_x.clone();
        for (xi, gi) in x_trial.iter_mut().zip(gradient.iter()) {
            *xi -= rho * gi / gnorm;
        }
        let f_trial = match ev.eval(&x_trial)? {
            Some(v) => v,
            None => return Ok(()),
        };

        let worst = simplex.last().unwrap().1;
        if f_trial < best_f {
            // Pattern extension: keep doubling along the successful
            // direction while it pays off, which lets the search follow
            // curved valleys instead of zigzagging across them.
            let mut kept_x = x_trial.clone();
            let mut kept_f = f_trial;
            let mut step: Vec<f64> =
                x_trial.iter().zip(&best_x).map(|(t, b)| t - b).collect();
            loop {
                let x_ext: Vec<f64> = kept_x.iter().zip(&step).map(|(x, s)| x + s).collect();
                match ev.eval(&x_ext)? {
                    Some(f_ext) if f_ext < kept_f => {
                        kept_x = x_ext;
                        kept_f = f_ext;
                        for s in step.iter_mut() {
                            *s *= 2.0;
                        }
                    }
                    _ => break,
                }
            }
            *simplex.last_mut().unwrap() = (kept_x, kept_f);
            rho = (rho * 1.3).min(config.initial_step * 4.0);
        } else if f_trial < worst {
            *simplex.last_mut().unwrap() = (x_trial, f_trial);
            // Progress on the simplex but not on the incumbent: tighten.
            rho *= 0.9;
        } else {
            rho *= 0.5;
            if rho < config.convergence_tol || !build(ev, &best_x, rho, &mut simplex)? {
                return Ok(());
            }
        }
    }
    Ok(())
}

/// Standard Nelder-Mead with reflection/expansion/contraction/shrink
/// coefficients (1, 2, 0.5, 0.5), provided as a cross-check method.
fn nelder_mead(ev: &mut Evaluator, theta0: &[f64], config: &OptimizerConfig) -> Result<()> {
    let n = theta0.len();
    if n == 0 {
        ev.eval(theta0)?;
        return Ok(());
    }
    let mut simplex: Vec<(Vec<f64>, f64)> = Vec::with_capacity(n + 1);
    match ev.eval(theta0)? {
        Some(f0) => simplex.push((theta0.to_vec(), f0)),
        None => return Ok(()),
    }
    for i in 0..n {
        let mut x = theta0.to_vec();
        x[i] += config.initial_step;
        match ev.eval(&x)? {
            Some(fx) => simplex.push((x, fx)),
            None => return Ok(()),
        }
    }

    while !ev.exhausted() {
        simplex.sort_by(|a, b| a.1.partial_cmp(&b.1).unwrap());
        let spread = simplex[n].1 - simplex[0].1;
        let size: f64 = simplex[n]
            .0
            .iter()
            .zip(&simplex[0].0)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if spread.abs() < config.convergence_tol && size < config.convergence_tol {
            break;
        }

        let mut centroid = vec![0.0; n];
        for vertex in &simplex[..n] {
            for (c, v) in centroid.iter_mut().zip(&vertex.0) {
                *c += v / n as f64;
            }
        }
        let point = |coef: f64| -> Vec<f64> {
            centroid
                .iter()
                .zip(&simplex[n].0)
                .map(|(c, w)| c + coef * (c - w))
                .collect()
        };

        let xr = point(1.0);
        let fr = match ev.eval(&xr)? {
            Some(v) => v,
            None => break,
        };
        if fr < simplex[0].1 {
            let xe = point(2.0);
            match ev.eval(&xe)? {
                Some(fe) if fe < fr => simplex[n] = (xe, fe),
                Some(_) => simplex[n] = (xr, fr),
                None => break,
            }
        } else if fr < simplex[n - 1].1 {
            simplex[n] = (xr, fr);
        } else {
            let xc = if fr < simplex[n].1 { point(0.5) } else { point(-0.5) };
            let fc = match ev.eval(&xc)? {
                Some(v) => v,
                None => break,
            };
            if fc < simplex[n].1.min(fr) {
                simplex[n] = (xc, fc);
            } else {
                // Shrink toward the best vertex.
                let best = simplex[0].0.clone();
                for vertex in simplex.iter_mut().skip(1) {
                    for (v, b) in vertex.0.iter_mut().zip(&best) {
                        *v = b + 0.5 * (*v - b);
                    }
                    match ev.eval(&vertex.0.clone())? {
                        Some(fv) => vertex.1 = fv,
                        None => return Ok(()),
                    }
                }
            }
        }
    }
    Ok(())
}

/// How the energy expectation is evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CostMode {
    Exact,
    Shots(u64),
}

/// Energy of the bound circuit state under `h`.
pub fn energy_cost<R: Rng + ?Sized>(
    circuit: &ParamCircuit,
    theta: &[f64],
    h: &PauliHamiltonian,
    mode: CostMode,
    rng: &mut R,
) -> Result<f64> {
    let state = circuit.bind(theta)?;
    match mode {
        CostMode::Exact => pauli::expectation(&state, h.terms()),
        CostMode::Shots(shots) => pauli::estimate_expectation(&state, h.terms(), shots, rng),
    }
}

/// Fidelity `|<target|psi(theta)>|^2` of the bound circuit state.
pub fn fidelity_cost(circuit: &ParamCircuit, theta: &[f64], target: &Statevector) -> Result<f64> {
    let state = circuit.bind(theta)?;
    if state.num_qubits() != target.num_qubits() {
        return Err(Error::DimensionMismatch {
            expected: target.amplitudes().len(),
            got: state.amplitudes().len(),
        });
    }
    Ok(target.inner_product(&state).norm_sqr())
}

/// Uniform (Haar) random state on the `N`-particle subspace: independent
/// complex standard normals on the weight-`N` basis indices, normalized.
pub fn sample_haar_fock_state<R: Rng + ?Sized>(
    l: usize,
    n: usize,
    rng: &mut R,
) -> Result<Statevector> {
    let indices = fock::sector_indices(l, n)?;
    let mut amps = vec![C64::new(0.0, 0.0); 1usize << l];
    let mut norm_sqr = 0.0;
    for &i in &indices {
        let re: f64 = StandardNormal.sample(rng);
        let im: f64 = StandardNormal.sample(rng);
        amps[i] = C64::new(re, im);
        norm_sqr += amps[i].norm_sqr();
    }
    let norm = norm_sqr.sqrt();
    for a in amps.iter_mut() {
        *a /= norm;
    }
    Statevector::from_amplitudes(l, amps)
}

/// Evaluation budget anchored at 1000 evaluations for a 6-dimensional
/// subspace, scaled by the Fock dimension and rounded.
pub fn eval_budget(l: usize, n: usize) -> Result<usize> {
    let d = fock::fock_dimension(l, n)? as f64;
    Ok((1000.0 * d / 6.0).round() as usize)
}

fn uniform_angles<R: Rng + ?Sized>(count: usize, rng: &mut R) -> Vec<f64> {
    (0..count)
        .map(|_| rng.gen_range(-std::f64::consts::PI..std::f64::consts::PI))
        .collect()
}

/// One optimization run inside an experiment.
#[derive(Debug, Clone, Serialize)]
pub struct TrialRecord {
    pub trial: usize,
    pub theta0: Vec<f64>,
    pub best_theta: Vec<f64>,
    pub best_cost: f64,
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct EnergyExperimentResult {
    pub seed: u64,
    pub trials: Vec<TrialRecord>,
    /// Mean of the per-trial best energies.
    pub mean_energy: f64,
    /// Median of the per-trial best energies.
    pub median_energy: f64,
}

/// Repeated-trial energy minimization. Trial `t` draws its starting angles
/// from `U[-pi, pi)` on a sub-stream keyed by `(seed, t)` alone, so circuit
/// arms compared under the same seed share starting points slot-for-slot
/// (a shorter parameter vector is a prefix of a longer one).
pub fn run_energy_experiment(
    circuit: &ParamCircuit,
    h: &PauliHamiltonian,
    trials: usize,
    mode: CostMode,
    optimizer: &OptimizerConfig,
    seed: u64,
) -> Result<EnergyExperimentResult> {
    if trials == 0 {
        return Err(Error::InvalidArgument("need at least one trial".into()));
    }
    let mut records = Vec::with_capacity(trials);
    for trial in 0..trials {
        let theta0 = uniform_angles(circuit.free_params, &mut subseed(seed, 0, trial as u64));
        let mut shot_rng = subseed(seed, 1, trial as u64);
        let mut cost = |theta: &[f64]| energy_cost(circuit, theta, h, mode, &mut shot_rng);
        let outcome = minimize(&mut cost, &theta0, optimizer)?;
        records.push(TrialRecord {
            trial,
            theta0,
            best_theta: outcome.best_theta,
            best_cost: outcome.best_cost,
            trace: outcome.trace,
        });
    }
    let mut energies: Vec<f64> = records.iter().map(|r| r.best_cost).collect();
    let mean_energy = energies.iter().sum::<f64>() / energies.len() as f64;
    let median_energy = median(&mut energies);
    Ok(EnergyExperimentResult { seed, trials: records, mean_energy, median_energy })
}

/// All trials for one Haar-random target state.
#[derive(Debug, Clone, Serialize)]
pub struct FidelitySampleRecord {
    pub sample: usize,
    /// Per-trial records; `best_cost` and `trace` hold the infidelity `1 - F`.
    pub trials: Vec<TrialRecord>,
    /// Mean over trials of the per-trial best fidelity.
    pub mean_fidelity: f64,
    /// `1 - mean_fidelity`.
    pub epsilon: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct FidelityExperimentResult {
    pub seed: u64,
    pub samples: Vec<FidelitySampleRecord>,
    /// Mean of the per-sample mean fidelities.
    pub mean_fidelity: f64,
    /// `1 - mean_fidelity`.
    pub mean_epsilon: f64,
}

/// Fidelity learning: for each of `n_samples` Haar-random target states in
/// the circuit's particle sector, run `trials` minimizations of `1 - F` and
/// aggregate. Simulation is exact.
pub fn run_fidelity_experiment(
    circuit: &ParamCircuit,
    n_samples: usize,
    trials: usize,
    optimizer: &OptimizerConfig,
    seed: u64,
) -> Result<FidelityExperimentResult> {
    if n_samples == 0 || trials == 0 {
        return Err(Error::InvalidArgument("need at least one sample and one trial".into()));
    }
    let mut samples = Vec::with_capacity(n_samples);
    for sample in 0..n_samples {
        let target = sample_haar_fock_state(
            circuit.num_qubits,
            circuit.num_particles,
            &mut subseed(seed, 2, sample as u64),
        )?;
        let mut records = Vec::with_capacity(trials);
        for trial in 0..trials {
            let index = ((sample as u64) << 32) | trial as u64;
            let theta0 = uniform_angles(circuit.free_params, &mut subseed(seed, 3, index));
            let mut cost =
                |theta: &[f64]| fidelity_cost(circuit, theta, &target).map(|f| 1.0 - f);
            let outcome = minimize(&mut cost, &theta0, optimizer)?;
            records.push(TrialRecord {
                trial,
                theta0,
                best_theta: outcome.best_theta,
                best_cost: outcome.best_cost,
                trace: outcome.trace,
            });
        }
        let mean_fidelity =
            records.iter().map(|r| 1.0 - r.best_cost).sum::<f64>() / trials as f64;
        samples.push(FidelitySampleRecord {
            sample,
            trials: records,
            mean_fidelity,
            epsilon: 1.0 - mean_fidelity,
        });
    }
    let mean_fidelity =
        samples.iter().map(|s| s.mean_fidelity).sum::<f64>() / n_samples as f64;
    Ok(FidelityExperimentResult {
        seed,
        samples,
        mean_fidelity,
        mean_epsilon: 1.0 - mean_fidelity,
    })
}

/// Median of a slice (averaging the middle pair for even lengths).
/// Sorts in place.
pub fn median(values: &mut [f64]) -> f64 {
    assert!(!values.is_empty());
    values.sort_by(|a, b| a.partial_cmp(b).unwrap());
    let m = values.len() / 2;
    if values.len() % 2 == 1 {
        values[m]
    } else {
        0.5 * (values[m - 1] + values[m])
    }
}
