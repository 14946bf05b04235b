//! CSV tables and plot scripts.
//!
//! Floats are written with Rust's shortest round-trip formatting, so output
//! is byte-stable for a fixed seed.

use std::path::Path;

use rdars_core::units::linear_to_db;
use rdars_core::SweepResult;

use crate::error::CliError;
use crate::figure::Figure;

pub const SUMMARY_HEADER: [&str; 7] = [
    "sweep_value",
    "architecture",
    "mean_snr_db",
    "mean_capacity_bps",
    "mean_ee_bpj",
    "total_power_w",
    "stderr_ee",
];

pub const CDF_HEADER: [&str; 3] = ["architecture", "snr_db", "cumulative_probability"];

fn csv_err(path: &Path) -> impl FnOnce(csv::Error) -> CliError + '_ {
    move |source| CliError::Csv {
        path: path.to_path_buf(),
        source,
    }
}

fn io_err(path: &Path) -> impl FnOnce(std::io::Error) -> CliError + '_ {
    move |source| CliError::Io {
        path: path.to_path_buf(),
        source,
    }
}

pub fn write_summary_csv(path: &Path, result: &SweepResult) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(SUMMARY_HEADER).map_err(csv_err(path))?;
    for row in &result.rows {
        w.write_record([
            row.sweep_value.to_string(),
            row.architecture.clone(),
            linear_to_db(row.mean_snr_linear).to_string(),
            row.mean_capacity.to_string(),
            row.mean_ee.to_string(),
            row.total_power_w.to_string(),
            row.stderr_ee.to_string(),
        ])
        .map_err(csv_err(path))?;
    }
    w.flush().map_err(io_err(path))
}

pub fn write_cdf_csv(path: &Path, result: &SweepResult) -> Result<(), CliError> {
    let mut w = csv::Writer::from_path(path).map_err(csv_err(path))?;
    w.write_record(CDF_HEADER).map_err(csv_err(path))?;
    for curve in result.cdf.iter().flatten() {
        for &(snr_db, p) in &curve.points {
            w.write_record([curve.architecture.clone(), snr_db.to_string(), p.to_string()])
                .map_err(csv_err(path))?;
        }
    }
    w.flush().map_err(io_err(path))
}

/// A matplotlib script that plots `data_file` (and `cdf_file` for the CDF
/// figure). File names are relative to the script's directory.
pub fn plot_script(figure: Figure, band: &str, data_file: &str, cdf_file: Option<&str>) -> String {
    let (source, x, y, ylabel, logy) = match cdf_file {
        Some(cdf) => (cdf, "snr_db", "cumulative_probability", "CDF", "False"),
        None => (data_file, "sweep_value", "mean_ee_bpj", "energy efficiency (bit/J)", "True"),
    };
    format!(
        r#"#!/usr/bin/env python3
# {figure} ({band}); regenerate the data with `rdars-sim {figure}`.
import csv
import os
import sys

import matplotlib
if "--show" not in sys.argv:
    matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))
series = {{}}
with open(os.path.join(here, "{source}"), newline="") as f:
    for row in csv.DictReader(f):
        xs, ys = series.setdefault(row["architecture"], ([], []))
        xs.append(float(row["{x}"]))
        ys.append(float(row["{y}"]))

fig, ax = plt.subplots()
for label, (xs, ys) in series.items():
    if {cdf_flag}:
        ax.step(xs, ys, where="post", label=label)
    else:
        ax.plot(xs, ys, marker="o", label=label)
if {logy}:
    ax.set_yscale("log")
ax.set_xlabel("{xlabel}")
ax.set_ylabel("{ylabel}")
ax.set_title("{figure}, {band}")
ax.grid(True, which="both", alpha=0.3)
ax.legend()
fig.tight_layout()
if "--show" in sys.argv:
    plt.show()
else:
    out = os.path.join(here, "{figure}_{band}.png")
    fig.savefig(out, dpi=150)
    print(out)
"#,
        cdf_flag = if cdf_file.is_some() { "True" } else { "False" },
        xlabel = figure.axis_label(),
    )
}

pub fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    std::fs::write(path, text).map_err(io_err(path))
}
