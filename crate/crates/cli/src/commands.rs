use std::path::{Path, PathBuf};

use rdars_core::{run_cdf, run_sweep, with_workers, ExperimentConfig, SweepResult};

use crate::config::{load_config, ConfigFile, Overrides};
use crate::error::CliError;
use crate::figure::Figure;
use crate::manifest::{config_digest, RunManifest};
use crate::output;

pub struct RunOptions {
    pub config_path: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub overrides: Overrides,
    /// Worker threads; `None` uses every available core.
    pub workers: Option<usize>,
}

pub fn resolve_config(figure: Figure, opts: &RunOptions) -> Result<ExperimentConfig, CliError> {
    match &opts.config_path {
        Some(path) => load_config(path, figure, &opts.overrides),
        None => ConfigFile::default().resolve(figure, &opts.overrides),
    }
}

fn simulate(figure: Figure, cfg: &ExperimentConfig, workers: Option<usize>) -> Result<SweepResult, CliError> {
    let run = || match figure {
        Figure::Cdf => run_cdf(cfg),
        _ => run_sweep(cfg),
    };
    let result = match workers {
        Some(n) => with_workers(n, run)?,
        None => run(),
    };
    Ok(result?)
}

/// Runs `figure` and writes `<figure>_<band>.csv`, the plot script and the
/// manifest into `out_dir`. The CDF figure also writes the per-sample
/// `<figure>_<band>_ecdf.csv`.
pub fn run_command(figure: Figure, opts: &RunOptions) -> Result<RunManifest, CliError> {
    let cfg = resolve_config(figure, opts)?;
    let result = simulate(figure, &cfg, opts.workers)?;
    write_outputs(figure, &cfg, &result, &opts.out_dir)
}

pub fn write_outputs(
    figure: Figure,
    cfg: &ExperimentConfig,
    result: &SweepResult,
    out_dir: &Path,
) -> Result<RunManifest, CliError> {
    std::fs::create_dir_all(out_dir).map_err(|source| CliError::Io {
        path: out_dir.to_path_buf(),
        source,
    })?;
    let band = cfg.radio.band.label();
    let stem = format!("{figure}_{band}");

    let data_name = format!("{stem}.csv");
    let data_path = out_dir.join(&data_name);
    output::write_summary_csv(&data_path, result)?;
    let mut paths = vec![data_path];

    let cdf_name = result.cdf.as_ref().map(|_| format!("{stem}_ecdf.csv"));
    if let Some(name) = &cdf_name {
        let path = out_dir.join(name);
        output::write_cdf_csv(&path, result)?;
        paths.push(path);
    }

    let script_path = out_dir.join(format!("{stem}_plot.py"));
    output::write_text(
        &script_path,
        &output::plot_script(figure, band, &data_name, cdf_name.as_deref()),
    )?;
    paths.push(script_path);

    let manifest_path = out_dir.join(format!("{stem}_manifest.json"));
    paths.push(manifest_path.clone());
    let manifest = RunManifest {
        figure: figure.name().to_string(),
        band: band.to_string(),
        config_digest: config_digest(cfg)?,
        tool_version: env!("CARGO_PKG_VERSION").to_string(),
        timestamp: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
        output_paths: paths,
        distance_clamped: result.distance_clamped,
        config: cfg.clone(),
    };
    output::write_text(&manifest_path, &serde_json::to_string_pretty(&manifest)?)?;
    Ok(manifest)
}
