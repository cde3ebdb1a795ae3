use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use torus_ap_cli::{emit_plot_data, run_experiment, CliError, CliResult, ExperimentConfig, ExperimentKind, OUT_ENV};

/// Numerical experiments on rotations, skew products and cocycle extensions of tori.
#[derive(Parser)]
#[command(name = "torus-ap", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Proximal / AP / RP / Ind_ap detection on point pairs.
    Relation(RunArgs),
    /// Orbit check of the Weyl map against a vertical translate.
    Counterexample(RunArgs),
    /// Cube points and the degeneracy residual.
    Cubes(RunArgs),
    /// Birkhoff, multiple and recurrence averages.
    Average(RunArgs),
    /// Deviation scan for the cocycle extension.
    Motion(RunArgs),
    /// Transitivity probe on point triples.
    ProbeTransitivity(RunArgs),
    /// Any experiment; the kind is read from the config.
    Run(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// TOML experiment configuration.
    #[arg(long, short)]
    config: PathBuf,
    /// Output directory (default: `$TORUS_AP_OUT/<kind>-<hash>`, root `torus-ap-out`).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long)]
    workers: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Orbit cache directory.
    #[arg(long)]
    cache: Option<PathBuf>,
    /// Skip the plot/ directory.
    #[arg(long)]
    no_plot: bool,
}

fn run(command: Command) -> CliResult<()> {
    let (expected, args) = match command {
        Command::Relation(a) => (Some(ExperimentKind::RelationScan), a),
        Command::Counterexample(a) => (Some(ExperimentKind::Counterexample), a),
        Command::Cubes(a) => (Some(ExperimentKind::CubeResidual), a),
        Command::Average(a) => (Some(ExperimentKind::Averages), a),
        Command::Motion(a) => (Some(ExperimentKind::MotionScan), a),
        Command::ProbeTransitivity(a) => (Some(ExperimentKind::TransitivityProbe), a),
        Command::Run(a) => (None, a),
    };
    let mut cfg = ExperimentConfig::from_path(&args.config)?;
    if let Some(kind) = expected.filter(|k| *k != cfg.kind) {
        return Err(CliError::Config(format!(
            "config describes `{}`, not `{}`",
            cfg.kind.name(),
            kind.name()
        )));
    }
    if args.out.is_some() {
        cfg.out = args.out;
    }
    if let Some(w) = args.workers {
        if w == 0 {
            return Err(CliError::Config("workers must be at least 1".into()));
        }
        cfg.workers = Some(w);
    }
    if let Some(s) = args.seed {
        cfg.seed = s;
    }
    if args.cache.is_some() {
        cfg.cache = args.cache;
    }
    log::info!("running {} (config {}), output root from {OUT_ENV}", cfg.kind.name(), &cfg.hash()[..12]);
    let bundle = run_experiment(&cfg)?;
    for line in &bundle.summary {
        println!("{line}");
    }
    if !args.no_plot {
        emit_plot_data(&bundle)?;
    }
    println!("bundle: {}", bundle.dir.display());
    Ok(())
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
