//! Command-line front end: gate verification, exact diagonalization and the
//! variational experiments, with JSON results and CSV cost traces.

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use pcvqe_core::circuits::{build_brickwall, build_brickwall_extended, ParamCircuit};
use pcvqe_core::models::{
    exact_ground_energy, nnn_heisenberg_hamiltonian, xx_hamiltonian, xxz_hamiltonian,
    PauliHamiltonian,
};
use pcvqe_core::pcgates::PCGateKind;
use pcvqe_core::verify::{format_check_table, run_gate_checks};
use pcvqe_core::vqe::{
    self, eval_budget, run_energy_experiment, run_fidelity_experiment, CostMode, Method,
    OptimizerConfig, TrialRecord,
};
use serde::Serialize;
use serde_json::Value;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(name = "pcvqe", about = "Particle-conserving circuit simulation and VQE toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Gate and circuit invariant checks.
    Gates {
        #[command(subcommand)]
        action: GatesAction,
    },
    /// Exact diagonalization of a model Hamiltonian.
    Ed(EdArgs),
    /// Repeated-trial variational energy minimization.
    Vqe(VqeArgs),
    /// Fidelity learning against Haar-random sector states.
    Fidelity(FidelityArgs),
}

#[derive(Subcommand)]
enum GatesAction {
    /// Run every invariant check and print a pass/fail table.
    Verify,
}

#[derive(Args, Clone)]
struct CommonArgs {
    /// Master random seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Write the JSON result here (a .trace.csv sibling is written for
    /// experiment commands). Results always go to stdout as well.
    #[arg(long)]
    output: Option<PathBuf>,
    /// JSON file with default values for any flag of this subcommand;
    /// explicit flags win.
    #[arg(long)]
    config: Option<PathBuf>,
}

#[derive(Args, Clone)]
struct EdArgs {
    /// Model: xxz, xx or nnn.
    #[arg(long)]
    model: Option<String>,
    /// Chain length L.
    #[arg(long)]
    sites: Option<usize>,
    /// ZZ anisotropy (xxz only).
    #[arg(long)]
    gamma: Option<f64>,
    /// Restrict to the N-particle sector.
    #[arg(long)]
    sector: Option<usize>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct VqeArgs {
    /// Model: xxz, xx or nnn.
    #[arg(long)]
    model: Option<String>,
    /// Chain length L.
    #[arg(long)]
    sites: Option<usize>,
    /// Particle number N (also the diagonalization sector).
    #[arg(long)]
    particles: Option<usize>,
    /// ZZ anisotropy (xxz only).
    #[arg(long)]
    gamma: Option<f64>,
    /// Gate kind: A, B or G.
    #[arg(long)]
    gate: Option<PCGateKind>,
    /// Number of brick-wall layers (default: dimension-based formula).
    #[arg(long)]
    layers: Option<usize>,
    /// Use the extended builder with next-nearest-neighbour layers.
    #[arg(long)]
    extended: bool,
    /// Cap on free parameters; trailing slots are fixed to --fixed.
    #[arg(long)]
    params: Option<usize>,
    /// Value bound to trimmed parameter slots.
    #[arg(long, default_value_t = 0.0)]
    fixed: f64,
    /// Number of independent trials N_T.
    #[arg(long)]
    trials: Option<usize>,
    /// Evaluation budget per trial (default: scaled by Fock dimension).
    #[arg(long)]
    budget: Option<usize>,
    /// Shots per expectation estimate; omit for exact expectations.
    #[arg(long)]
    shots: Option<u64>,
    /// Optimizer: cobyla or nelder-mead.
    #[arg(long)]
    method: Option<Method>,
    #[command(flatten)]
    common: CommonArgs,
}

#[derive(Args, Clone)]
struct FidelityArgs {
    /// Chain length L.
    #[arg(long)]
    sites: Option<usize>,
    /// Particle number N.
    #[arg(long)]
    particles: Option<usize>,
    /// Gate kind: A, B or G.
    #[arg(long)]
    gate: Option<PCGateKind>,
    /// Number of brick-wall layers (default: dimension-based formula).
    #[arg(long)]
    layers: Option<usize>,
    /// Use the extended builder with next-nearest-neighbour layers.
    #[arg(long)]
    extended: bool,
    /// Cap on free parameters; trailing slots are fixed to 0.
    #[arg(long)]
    params: Option<usize>,
    /// Number of Haar-random target states N_S.
    #[arg(long)]
    samples: Option<usize>,
    /// Trials per sample N_T.
    #[arg(long)]
    trials: Option<usize>,
    /// Evaluation budget per trial (default: scaled by Fock dimension).
    #[arg(long)]
    budget: Option<usize>,
    /// Optimizer: cobyla or nelder-mead.
    #[arg(long)]
    method: Option<Method>,
    #[command(flatten)]
    common: CommonArgs,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Gates { action: GatesAction::Verify } => cmd_gates_verify(),
        Command::Ed(args) => cmd_ed(args),
        Command::Vqe(args) => cmd_vqe(args),
        Command::Fidelity(args) => cmd_fidelity(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(2)
        }
    }
}

/// Loads the optional JSON config file for flag defaults.
fn load_config(path: &Option<PathBuf>) -> anyhow::Result<Value> {
    match path {
        None => Ok(Value::Null),
        Some(p) => {
            let text = std::fs::read_to_string(p)
                .with_context(|| format!("reading config {}", p.display()))?;
            serde_json::from_str(&text).with_context(|| format!("parsing config {}", p.display()))
        }
    }
}

/// Flag value if given, else the config key, else the fallback.
fn merged<T: serde::de::DeserializeOwned>(
    flag: Option<T>,
    config: &Value,
    key: &str,
    fallback: Option<T>,
) -> anyhow::Result<Option<T>> {
    if flag.is_some() {
        return Ok(flag);
    }
    if let Some(v) = config.get(key) {
        let parsed = serde_json::from_value(v.clone())
            .with_context(|| format!("config key '{key}' has the wrong type"))?;
        return Ok(Some(parsed));
    }
    Ok(fallback)
}

fn parse_gate(config: &Value, flag: Option<PCGateKind>) -> anyhow::Result<PCGateKind> {
    if let Some(g) = flag {
        return Ok(g);
    }
    if let Some(v) = config.get("gate").and_then(|v| v.as_str()) {
        return v.parse::<PCGateKind>().map_err(|e| anyhow!("{e}"));
    }
    Ok(PCGateKind::A)
}

fn build_model(model: &str, sites: usize, gamma: f64) -> anyhow::Result<PauliHamiltonian> {
    match model {
        "xxz" => Ok(xxz_hamiltonian(sites, gamma)?),
        "xx" => Ok(xx_hamiltonian(sites)?),
        "nnn" => Ok(nnn_heisenberg_hamiltonian(sites)?),
        other => Err(anyhow!("unknown model '{other}' (expected xxz, xx or nnn)")),
    }
}

fn build_circuit(
    sites: usize,
    particles: usize,
    gate: PCGateKind,
    layers: Option<usize>,
    extended: bool,
) -> anyhow::Result<ParamCircuit> {
    Ok(if extended {
        build_brickwall_extended(sites, particles, gate, layers)?
    } else {
        build_brickwall(sites, particles, gate, layers)?
    })
}

fn write_outputs<T: Serialize>(
    output: &Option<PathBuf>,
    result: &T,
    traces: Option<&[&TrialRecord]>,
) -> anyhow::Result<()> {
    let json = serde_json::to_string_pretty(result)?;
    println!("{json}");
    if let Some(path) = output {
        std::fs::write(path, &json).with_context(|| format!("writing {}", path.display()))?;
        if let Some(trials) = traces {
            let trace_path = trace_path(path);
            let mut file = std::fs::File::create(&trace_path)
                .with_context(|| format!("writing {}", trace_path.display()))?;
            writeln!(file, "trial,eval,cost")?;
            for (trial_index, record) in trials.iter().enumerate() {
                for (eval, cost) in record.trace.iter().enumerate() {
                    writeln!(file, "{trial_index},{eval},{cost}")?;
                }
            }
        }
    }
    Ok(())
}

fn trace_path(output: &Path) -> PathBuf {
    let mut name = output.file_stem().unwrap_or_default().to_os_string();
    name.push(".trace.csv");
    output.with_file_name(name)
}

fn cmd_gates_verify() -> anyhow::Result<ExitCode> {
    let checks = run_gate_checks(None)?;
    print!("{}", format_check_table(&checks));
    let ok = checks.iter().all(|c| c.pass);
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(1) })
}

#[derive(Serialize)]
struct EdOutput {
    model: String,
    #[serde(rename = "L")]
    sites: usize,
    gamma: f64,
    sector: Option<usize>,
    dim: usize,
    method: &'static str,
    ground_energy: f64,
}

fn cmd_ed(args: EdArgs) -> anyhow::Result<ExitCode> {
    let config = load_config(&args.common.config)?;
    let model = merged(args.model, &config, "model", Some("xxz".to_string()))?.unwrap();
    let sites = merged(args.sites, &config, "sites", None)?
        .ok_or_else(|| anyhow!("--sites is required"))?;
    let gamma = merged(args.gamma, &config, "gamma", Some(1.0))?.unwrap();
    let sector = merged(args.sector, &config, "sector", None)?;
    let h = build_model(&model, sites, gamma)?;
    let spectral = exact_ground_energy(&h, sector)?;
    let out = EdOutput {
        model,
        sites,
        gamma,
        sector,
        dim: spectral.dim,
        method: spectral.method,
        ground_energy: spectral.ground_energy,
    };
    write_outputs(&args.common.output, &out, None)?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct VqeOutput {
    model: String,
    #[serde(rename = "L")]
    sites: usize,
    #[serde(rename = "N")]
    particles: usize,
    gamma: f64,
    gate: PCGateKind,
    layers: usize,
    extended: bool,
    free_params: usize,
    trials: usize,
    budget: usize,
    shots: Option<u64>,
    method: Method,
    seed: u64,
    exact_ground_energy: f64,
    mean_energy: f64,
    median_energy: f64,
    median_relative_error: f64,
    trial_results: Vec<TrialRecord>,
}

fn cmd_vqe(args: VqeArgs) -> anyhow::Result<ExitCode> {
    let config = load_config(&args.common.config)?;
    let model = merged(args.model, &config, "model", Some("xxz".to_string()))?.unwrap();
    let sites = merged(args.sites, &config, "sites", None)?
        .ok_or_else(|| anyhow!("--sites is required"))?;
    let particles = merged(args.particles, &config, "particles", Some(sites / 2))?.unwrap();
    let gamma = merged(args.gamma, &config, "gamma", Some(1.0))?.unwrap();
    let gate = parse_gate(&config, args.gate)?;
    let layers = merged(args.layers, &config, "layers", None)?;
    let extended = args.extended
        || config.get("extended").and_then(|v| v.as_bool()).unwrap_or(false);
    let trials = merged(args.trials, &config, "trials", Some(10))?.unwrap();
    let budget =
        merged(args.budget, &config, "budget", Some(eval_budget(sites, particles)?))?.unwrap();
    let shots = merged(args.shots, &config, "shots", None)?;
    let method = merged(args.method, &config, "method", Some(Method::Cobyla))?.unwrap();
    let seed = merged(args.common.seed, &config, "seed", Some(0))?.unwrap();

    let h = build_model(&model, sites, gamma)?;
    let mut circuit = build_circuit(sites, particles, gate, layers, extended)?;
    if let Some(p) = merged(args.params, &config, "params", None)? {
        circuit = circuit.with_free_params(p, args.fixed)?;
    }
    let mode = match shots {
        None => CostMode::Exact,
        Some(n) => CostMode::Shots(n),
    };
    let optimizer = OptimizerConfig { method, max_evals: budget, ..Default::default() };
    let result = run_energy_experiment(&circuit, &h, trials, mode, &optimizer, seed)?;
    let exact = exact_ground_energy(&h, Some(particles))?.ground_energy;
    let mut errors: Vec<f64> = result
        .trials
        .iter()
        .map(|t| (t.best_cost - exact).abs() / exact.abs())
        .collect();
    let median_relative_error = vqe::median(&mut errors);

    let out = VqeOutput {
        model,
        sites,
        particles,
        gamma,
        gate,
        layers: circuit.layers,
        extended,
        free_params: circuit.free_params,
        trials,
        budget,
        shots,
        method,
        seed,
        exact_ground_energy: exact,
        mean_energy: result.mean_energy,
        median_energy: result.median_energy,
        median_relative_error,
        trial_results: result.trials,
    };
    eprintln!(
        "vqe {} L={sites} N={particles} gate={gate:?}: median E = {:.6} \
         (exact {exact:.6}, median rel. err. {median_relative_error:.3e})",
        out.model, out.median_energy
    );
    let trace_refs: Vec<&TrialRecord> = out.trial_results.iter().collect();
    write_outputs(&args.common.output, &out, Some(&trace_refs))?;
    Ok(ExitCode::SUCCESS)
}

#[derive(Serialize)]
struct FidelityOutput {
    #[serde(rename = "L")]
    sites: usize,
    #[serde(rename = "N")]
    particles: usize,
    gate: PCGateKind,
    layers: usize,
    extended: bool,
    free_params: usize,
    samples: usize,
    trials: usize,
    budget: usize,
    method: Method,
    seed: u64,
    mean_fidelity: f64,
    mean_epsilon: f64,
    sample_epsilons: Vec<f64>,
    sample_results: Vec<vqe::FidelitySampleRecord>,
}

fn cmd_fidelity(args: FidelityArgs) -> anyhow::Result<ExitCode> {
    let config = load_config(&args.common.config)?;
    let sites = merged(args.sites, &config, "sites", None)?
        .ok_or_else(|| anyhow!("--sites is required"))?;
    let particles = merged(args.particles, &config, "particles", Some(sites / 2))?.unwrap();
    let gate = parse_gate(&config, args.gate)?;
    let layers = merged(args.layers, &config, "layers", None)?;
    let extended = args.extended
        || config.get("extended").and_then(|v| v.as_bool()).unwrap_or(false);
    let params = merged(args.params, &config, "params", None)?;
    let samples = merged(args.samples, &config, "samples", Some(25))?.unwrap();
    let trials = merged(args.trials, &config, "trials", Some(5))?.unwrap();
    let budget =
        merged(args.budget, &config, "budget", Some(eval_budget(sites, particles)?))?.unwrap();
    let method = merged(args.method, &config, "method", Some(Method::Cobyla))?.unwrap();
    let seed = merged(args.common.seed, &config, "seed", Some(0))?.unwrap();

    let mut circuit = build_circuit(sites, particles, gate, layers, extended)?;
    if let Some(p) = params {
        circuit = circuit.with_free_params(p, 0.0)?;
    }
    let optimizer = OptimizerConfig { method, max_evals: budget, ..Default::default() };
    let result = run_fidelity_experiment(&circuit, samples, trials, &optimizer, seed)?;

    let out = FidelityOutput {
        sites,
        particles,
        gate,
        layers: circuit.layers,
        extended,
        free_params: circuit.free_params,
        samples,
        trials,
        budget,
        method,
        seed,
        mean_fidelity: result.mean_fidelity,
        mean_epsilon: result.mean_epsilon,
        sample_epsilons: result.samples.iter().map(|s| s.epsilon).collect(),
        sample_results: result.samples,
    };
    eprintln!(
        "fidelity L={sites} N={particles} gate={gate:?} layers={}: mean epsilon = {:.3e}",
        out.layers, out.mean_epsilon
    );
    let trace_refs: Vec<&TrialRecord> =
        out.sample_results.iter().flat_map(|s| s.trials.iter()).collect();
    write_outputs(&args.common.output, &out, Some(&trace_refs))?;
    Ok(ExitCode::SUCCESS)
}
