//! `kappamu` — outage/rate analysis and Monte Carlo validation for
//! interference-limited κ-μ shadowed fading networks.

mod config;
mod run;

use clap::Parser;
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser, Debug)]
#[command(
    name = "kappamu",
    version,
    about = "Outage probability and ergodic rate under kappa-mu shadowed fading, \
             with Monte Carlo cross-validation and FFR/SFR reuse comparison"
)]
struct Cli {
    /// JSON run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Output directory for results.csv, run_manifest.json and friends.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Worker threads (default: all cores).
    #[arg(long)]
    threads: Option<usize>,
    /// Override the Monte Carlo seed from the config.
    #[arg(long)]
    seed: Option<u64>,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(n) = cli.threads {
        // ignore failures: the pool may already be initialised in-process
        let _ = rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build_global();
    }
    let raw = match std::fs::read_to_string(&cli.config) {
        Ok(s) => s,
        Err(e) => {
            eprintln!("cannot read config {}: {e}", cli.config.display());
            return ExitCode::from(1);
        }
    };
    let parsed: config::RunConfig = match serde_json::from_str(&raw) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("config schema violation: {e}");
            return ExitCode::from(2);
        }
    };
    if let Err(msg) = parsed.validate() {
        eprintln!("config schema violation: {msg}");
        return ExitCode::from(2);
    }
    match run::run(&parsed, &cli.out, cli.seed) {
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("{}", e.message);
            ExitCode::from(e.exit_code as u8)
        }
    }
}
