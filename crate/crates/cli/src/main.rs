use clap::{Args, Parser, Subcommand};
use geoq_cli::config::ScenarioConfig;
use geoq_cli::resolve_out_dir;
use geoq_cli::runs::{checks, classical, quantum, report, RunError};
use std::path::PathBuf;

#[derive(Parser)]
#[command(
    name = "geoq",
    version,
    about = "Guiding-center reduction laboratory: classical scans, quantum band spectra and kinematical checks"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args)]
struct CommonArgs {
    /// Path to a scenario config (JSON).
    #[arg(long, value_name = "PATH")]
    config: Option<PathBuf>,
    /// Built-in scenario id (freeze-flat, quartic-scan, landau-flat,
    /// shifted-harmonic, checks-default).
    #[arg(long, value_name = "ID")]
    scenario: Option<String>,
    /// Output directory (default: $GEOQ_OUT or ./geoq-out).
    #[arg(long, value_name = "DIR")]
    out: Option<PathBuf>,
    /// Override the hbar list, comma separated, strictly decreasing.
    #[arg(long, value_name = "LIST")]
    hbar: Option<String>,
    /// Override the seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Suppress progress output.
    #[arg(long)]
    quiet: bool,
    /// Worker threads for scenario fan-out (default: available parallelism).
    #[arg(long)]
    jobs: Option<usize>,
}

#[derive(Subcommand)]
enum Command {
    /// Integrate the extended flow over the hbar grid and fit the scaling
    /// exponents against the reference Hamiltonian flow.
    ClassicalScan(CommonArgs),
    /// Assemble the phase-plane operator, solve for the low spectrum and
    /// compare the band structure against the effective prediction.
    QuantumSpectrum(CommonArgs),
    /// Run the kinematical validation battery.
    Checks(CommonArgs),
    /// Render report.md from a run directory's manifest.
    Report {
        /// Run directory containing manifest.json.
        #[arg(long, value_name = "DIR")]
        out: PathBuf,
        #[arg(long)]
        quiet: bool,
    },
}

fn load_config(args: &CommonArgs, default_scenario: &str) -> Result<ScenarioConfig, RunError> {
    let mut cfg = match (&args.config, &args.scenario) {
        (Some(path), None) => ScenarioConfig::from_path(path)?,
        (None, Some(id)) => ScenarioConfig::builtin(id)?,
        (None, None) => ScenarioConfig::builtin(default_scenario)?,
        (Some(_), Some(_)) => {
            return Err(RunError::Config(geoq_cli::config::ConfigError::Invalid(
                "pass either --config or --scenario, not both".into(),
            )))
        }
    };
    if let Some(list) = &args.hbar {
        let parsed: Result<Vec<f64>, _> = list.split(',').map(|s| s.trim().parse()).collect();
        cfg.hbar = parsed.map_err(|e| {
            RunError::Config(geoq_cli::config::ConfigError::Invalid(format!(
                "bad --hbar list: {e}"
            )))
        })?;
    }
    if let Some(seed) = args.seed {
        cfg.seed = seed;
    }
    cfg.validate().map_err(RunError::Config)?;
    Ok(cfg)
}

fn configure_pool(jobs: Option<usize>) {
    if let Some(n) = jobs {
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global();
    }
}

fn main() {
    let cli = Cli::parse();
    let outcome: Result<(), RunError> = match cli.command {
        Command::ClassicalScan(args) => {
            configure_pool(args.jobs);
            load_config(&args, "quartic-scan").and_then(|cfg| {
                let dir = resolve_out_dir(args.out.clone(), &cfg.scenario);
                classical::run_classical_scan(&cfg, &dir, args.quiet).map(|_| ())
            })
        }
        Command::QuantumSpectrum(args) => {
            configure_pool(args.jobs);
            load_config(&args, "shifted-harmonic").and_then(|cfg| {
                let dir = resolve_out_dir(args.out.clone(), &cfg.scenario);
                quantum::run_quantum_spectrum(&cfg, &dir, args.quiet).map(|_| ())
            })
        }
        Command::Checks(args) => load_config(&args, "checks-default").and_then(|cfg| {
            let dir = resolve_out_dir(args.out.clone(), &cfg.scenario);
            checks::run_checks(&cfg, &dir, args.quiet).and_then(|manifest| {
                if manifest.all_passed() {
                    Ok(())
                } else {
                    Err(RunError::Integration(geoq::GeoqError::Precondition(
                        "one or more checks failed".into(),
                    )))
                }
            })
        }),
        Command::Report { out, quiet } => report::run_report(&out, quiet).map(|_| ()),
    };
    if let Err(err) = outcome {
        eprintln!("error: {err}");
        std::process::exit(err.exit_code());
    }
}
