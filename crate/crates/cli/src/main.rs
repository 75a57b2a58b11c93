use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;
use opapprox::run::{run_batch, run_single};
use opapprox::Overrides;

/// Solve weighted least squares, spline and smoothing problems described by
/// JSON manifests.
#[derive(Debug, Parser)]
#[command(name = "opapprox", version)]
struct Cli {
    /// Problem manifest (JSON).
    #[arg(required_unless_present = "batch", conflicts_with = "batch")]
    manifest: Option<PathBuf>,
    /// Relative singular-value cutoff.
    #[arg(long, value_name = "R")]
    tol_rank: Option<f64>,
    /// Relative residual acceptance.
    #[arg(long, value_name = "R")]
    tol_res: Option<f64>,
    /// Seed for sampled checks.
    #[arg(long, value_name = "N")]
    seed: Option<u64>,
    /// Run every manifest in DIR concurrently.
    #[arg(long, value_name = "DIR")]
    batch: Option<PathBuf>,
    /// Report file (a directory with --batch). Defaults to stdout, or to
    /// the batch directory.
    #[arg(long, value_name = "PATH")]
    out: Option<PathBuf>,
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::new().filter_or("OPAPPROX_LOG", "error")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 64 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    let ov = Overrides {
        rank_rtol: cli.tol_rank,
        residual_rtol: cli.tol_res,
        seed: cli.seed,
    };
    let code = match (&cli.batch, &cli.manifest) {
        (Some(dir), _) => match run_batch(dir, cli.out.as_deref(), &ov) {
            Ok(entries) => {
                for e in &entries {
                    println!(
                        "{}\t{}\t{}",
                        e.manifest.display(),
                        e.code,
                        e.report.display()
                    );
                    if let Some(msg) = &e.error {
                        eprintln!("opapprox: {}: {msg}", e.manifest.display());
                    }
                }
                entries.iter().map(|e| e.code).max().unwrap_or(0)
            }
            Err(e) => {
                eprintln!("opapprox: {e}");
                e.exit_code()
            }
        },
        (None, Some(path)) => match run_single(path, cli.out.as_deref(), &ov) {
            Ok(code) => code,
            Err(e) => {
                eprintln!("opapprox: {e}");
                e.exit_code()
            }
        },
        (None, None) => unreachable!("clap requires a manifest or --batch"),
    };
    ExitCode::from(code)
}
