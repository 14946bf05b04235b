use std::path::PathBuf;
use std::process::ExitCode;

use clap::Parser;

use rdars_cli::{run_command, Figure, Overrides, RunOptions};
use rdars_core::Band;

/// Monte-Carlo SNR and energy-efficiency experiments for RIS, active RIS
/// and RDARS assisted uplinks.
#[derive(Debug, Parser)]
#[command(name = "rdars-sim", version)]
struct Args {
    /// Experiment to run.
    #[arg(value_enum)]
    figure: Figure,

    /// TOML experiment definition; defaults apply when omitted.
    #[arg(long)]
    config: Option<PathBuf>,

    /// Output directory.
    #[arg(long, env = "RDARS_OUT_DIR", default_value = "results")]
    out: PathBuf,

    #[arg(long)]
    seed: Option<u64>,

    /// Monte-Carlo trials per point.
    #[arg(long)]
    trials: Option<usize>,

    #[arg(long, value_parser = parse_band)]
    band: Option<Band>,

    /// Worker threads (default: all cores). Results do not depend on it.
    #[arg(long)]
    workers: Option<usize>,
}

fn parse_band(s: &str) -> Result<Band, String> {
    s.parse().map_err(|e: rdars_core::SimError| e.to_string())
}

fn main() -> ExitCode {
    let args = Args::parse();
    let opts = RunOptions {
        config_path: args.config,
        out_dir: args.out,
        overrides: Overrides {
            seed: args.seed,
            trials: args.trials,
            band: args.band,
        },
        workers: args.workers,
    };
    match run_command(args.figure, &opts) {
        Ok(manifest) => {
            if manifest.distance_clamped {
                eprintln!("warning: a link distance was below 10 m and was clamped for path loss");
            }
            for path in &manifest.output_paths {
                println!("{}", path.display());
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
