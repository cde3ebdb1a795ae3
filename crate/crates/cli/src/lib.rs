//! Experiment runner for `torus-ap`: reads a TOML configuration, runs one
//! experiment and writes a report bundle (`results.jsonl`, CSV tables, `MANIFEST`).

mod bundle;
mod cache;
mod config;
mod error;
mod experiments;

use std::path::PathBuf;
use std::time::Instant;

pub use bundle::{emit_plot_data, Manifest, ReportBundle, Table, MANIFEST_FILE, RESULTS_FILE};
pub use cache::OrbitCache;
pub use config::*;
pub use error::{CliError, CliResult};

/// Environment variable naming the default output root.
pub const OUT_ENV: &str = "TORUS_AP_OUT";

/// Output directory: the configured one, else `<root>/<kind>-<hash prefix>` with
/// `root` taken from [`OUT_ENV`] or `torus-ap-out`.
pub fn output_dir(cfg: &ExperimentConfig) -> PathBuf {
    if let Some(out) = &cfg.out {
        return out.clone();
    }
    let root = std::env::var_os(OUT_ENV).map_or_else(|| PathBuf::from("torus-ap-out"), PathBuf::from);
    root.join(format!("{}-{}", cfg.kind.name(), &cfg.hash()[..12]))
}

/// Runs the experiment on a pool of `cfg.workers` threads (the global pool when
/// unset) and writes the bundle. Data files depend only on the config, never
/// on the worker count.
pub fn run_experiment(cfg: &ExperimentConfig) -> CliResult<ReportBundle> {
    let start = Instant::now();
    let mut bundle = ReportBundle::new(output_dir(cfg));
    let workers = match cfg.workers {
        Some(n) => {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(n)
                .build()
                .map_err(|e| CliError::Config(format!("thread pool: {e}")))?;
            pool.install(|| experiments::execute(cfg, &mut bundle))?;
            n
        }
        None => {
            experiments::execute(cfg, &mut bundle)?;
            rayon::current_num_threads()
        }
    };
    let files = bundle.write_data()?;
    bundle.manifest = Some(Manifest {
        experiment: cfg.kind.name().to_string(),
        config_sha256: cfg.hash(),
        version: env!("CARGO_PKG_VERSION").to_string(),
        workers,
        wall_time_s: start.elapsed().as_secs_f64(),
        files,
    });
    bundle.write_manifest()?;
    Ok(bundle)
}
