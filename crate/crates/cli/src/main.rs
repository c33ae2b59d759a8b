//! Command-line front end: seeded sampling and simulation batches, the
//! verification suite, and manifest re-checking.
//!
//! Exit codes: 0 success, 1 test failure (failed suite check or digest
//! mismatch), 2 usage or configuration error, 3 numerical error.

use std::path::PathBuf;

use clap::{Parser, Subcommand};

use dyson_edge_core::limit::{gamma_product_init, run_limit_r};
use dyson_edge_core::mdbm::run_spacing_trajectory;
use dyson_edge_core::verify::{
    registry, render_report_csv, render_report_json, run_suite, test_seed, SuiteConfig,
};
use dyson_edge_core::{ensemble, RngStream};

use dyson_edge_cli::batch::{self, now_ms, run_units, write_manifest, write_outputs, RunManifest};
use dyson_edge_cli::config::{parse_config, ResolvedConfig};
use dyson_edge_cli::{io, CliError};

#[derive(Parser)]
#[command(
    name = "dyson-edge",
    version,
    about = "Samplers, SDE integrators and statistical checks for edge spacings of multilevel beta ensembles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
    /// Configuration file (JSON).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory.
    #[arg(long, global = true, default_value = "out")]
    out: PathBuf,
    /// Worker threads (0 = all cores). Outputs never depend on this.
    #[arg(long, global = true, default_value_t = 0)]
    parallelism: usize,
    /// Master seed override (takes precedence over the config file).
    #[arg(long, global = true)]
    seed: Option<u64>,
}

#[derive(Subcommand, Clone, Copy)]
enum Command {
    /// Draw independent fixed-time spectra at variance n*t0 (one merged CSV).
    SampleEnsemble,
    /// Draw independent interlacing corners arrays at variance n*t0 (one CSV per unit).
    SampleCorners,
    /// Integrate the multilevel dynamics from its warm start; record edge spacings.
    SimulateMdbm,
    /// Integrate the limiting spacing diffusion from its stationary law.
    SimulateLimit,
    /// Run the verification suite and write reports.
    Verify,
    /// Re-hash the outputs recorded in an existing manifest.
    Report,
}

impl Command {
    fn name(self) -> &'static str {
        match self {
            Command::SampleEnsemble => "sample-ensemble",
            Command::SampleCorners => "sample-corners",
            Command::SimulateMdbm => "simulate-mdbm",
            Command::SimulateLimit => "simulate-limit",
            Command::Verify => "verify",
            Command::Report => "report",
        }
    }
}

fn main() {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e}");
            std::process::exit(e.exit_code());
        }
    }
}

fn load_config(cli: &Cli) -> Result<ResolvedConfig, CliError> {
    let path = cli
        .config
        .as_ref()
        .ok_or_else(|| CliError::Config("--config <file> is required for this command".into()))?;
    let mut cfg = parse_config(path)?;
    if let Some(seed) = cli.seed {
        cfg.sim.seed = seed;
    }
    Ok(cfg)
}

fn run(cli: &Cli) -> Result<i32, CliError> {
    let started = now_ms();
    match cli.command {
        Command::Report => {
            let mismatches = batch::verify_manifest(&cli.out)?;
            if mismatches.is_empty() {
                println!("all recorded outputs match their digests");
                Ok(0)
            } else {
                for m in &mismatches {
                    println!("MISMATCH {m}");
                }
                Ok(1)
            }
        }
        Command::Verify => run_verify(cli, started),
        _ => run_batch_command(cli, started),
    }
}

fn run_verify(cli: &Cli, started: u128) -> Result<i32, CliError> {
    let cfg = load_config(cli)?;
    let suite = SuiteConfig { seed: cfg.sim.seed, tests: cfg.suite.clone() };
    let mut builder = rayon::ThreadPoolBuilder::new();
    if cli.parallelism > 0 {
        builder = builder.num_threads(cli.parallelism);
    }
    let pool =
        builder.build().map_err(|e| CliError::Io(format!("cannot build thread pool: {e}")))?;
    let reports = pool.install(|| run_suite(&suite))?;
    for r in &reports {
        println!(
            "{} {:<38} statistic {:.6e} threshold {:.6e}",
            if r.pass { "PASS" } else { "FAIL" },
            r.name,
            r.statistic,
            r.threshold
        );
    }
    let files = vec![
        ("report.json".to_string(), render_report_json(&reports)),
        ("report.csv".to_string(), render_report_csv(&reports)),
    ];
    let outputs = write_outputs(&cli.out, &files)?;
    let n_tests = suite.tests.as_ref().map_or(registry().len(), |t| t.len());
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: "verify".into(),
        config: serde_json::to_value(&cfg).unwrap_or(serde_json::Value::Null),
        master_seed: suite.seed,
        parallelism: cli.parallelism,
        seed_rule: "per-test seed = mix64(suite_seed ^ mix64(0x7E57... | test_index))".into(),
        derived_seeds: (0..n_tests).map(|i| test_seed(suite.seed, i)).collect(),
        started_at_unix_ms: started,
        finished_at_unix_ms: now_ms(),
        outputs,
        failed_units: vec![],
    };
    write_manifest(&cli.out, &manifest)?;
    Ok(if reports.iter().all(|r| r.pass) { 0 } else { 1 })
}

fn run_batch_command(cli: &Cli, started: u128) -> Result<i32, CliError> {
    let cfg = load_config(cli)?;
    if matches!(cli.command, Command::SimulateMdbm | Command::SimulateLimit) {
        cfg.sim.validate_for_dynamics().map_err(|e| CliError::Config(e.to_string()))?;
    }
    let sim = cfg.sim;
    let obs = cfg.obs_times.clone();
    let variance = sim.n as f64 * sim.t0;

    let (files, failures) = match cli.command {
        Command::SampleEnsemble => {
            let (rows, failures) = run_units(sim.n_samples, cli.parallelism, |u| {
                let mut rng = RngStream::new(sim.seed, u as u64);
                let spec = ensemble::sample_beta_hermite(sim.n, sim.beta, variance, &mut rng)?;
                Ok(spec.values().to_vec())
            })?;
            (vec![("spectra.csv".to_string(), io::render_spectra_csv(sim.n, &rows))], failures)
        }
        Command::SampleCorners => {
            let (arrays, failures) = run_units(sim.n_samples, cli.parallelism, |u| {
                let mut rng = RngStream::new(sim.seed, u as u64);
                let arr = ensemble::sample_corners_process(sim.n, sim.beta, variance, &mut rng)?;
                Ok(io::render_array_csv(&arr))
            })?;
            (
                arrays
                    .into_iter()
                    .map(|(u, text)| (format!("array_{u:06}.csv"), text))
                    .collect(),
                failures,
            )
        }
        Command::SimulateMdbm => {
            let (trajs, failures) = run_units(sim.n_samples, cli.parallelism, |u| {
                let mut rng = RngStream::new(sim.seed, u as u64);
                let traj = run_spacing_trajectory(&sim, &obs, &mut rng)?;
                Ok(io::render_trajectory_csv(&obs, &traj))
            })?;
            (
                trajs
                    .into_iter()
                    .map(|(u, text)| (format!("trajectory_{u:06}.csv"), text))
                    .collect(),
                failures,
            )
        }
        Command::SimulateLimit => {
            let (trajs, failures) = run_units(sim.n_samples, cli.parallelism, |u| {
                let mut rng = RngStream::new(sim.seed, u as u64);
                let mut state = gamma_product_init(sim.k, sim.beta, sim.t0, &mut rng)?;
                let mut rows = Vec::with_capacity(obs.len());
                let mut current = 0.0;
                for &t in &obs {
                    state = run_limit_r(&state, t - current, sim.dt, &mut rng)?;
                    current = t;
                    rows.push(state.spacings().to_vec());
                }
                Ok(io::render_path_csv(&obs, &rows))
            })?;
            (
                trajs
                    .into_iter()
                    .map(|(u, text)| (format!("trajectory_{u:06}.csv"), text))
                    .collect(),
                failures,
            )
        }
        _ => unreachable!("verify/report handled above"),
    };
    let outputs = write_outputs(&cli.out, &files)?;
    let any_failed = !failures.is_empty();
    let manifest = RunManifest {
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        command: cli.command.name().into(),
        config: serde_json::to_value(&cfg).unwrap_or(serde_json::Value::Null),
        master_seed: sim.seed,
        parallelism: cli.parallelism,
        seed_rule: "unit i draws from stream (master seed, i)".into(),
        derived_seeds: vec![],
        started_at_unix_ms: started,
        finished_at_unix_ms: now_ms(),
        outputs,
        failed_units: failures,
    };
    write_manifest(&cli.out, &manifest)?;
    if any_failed {
        eprintln!("error: some units failed; see manifest.json");
        Ok(3)
    } else {
        Ok(0)
    }
}
