//! Monte-Carlo engine and sweep drivers.
//!
//! Trial `t` of every sweep point and every architecture uses the channel
//! drawn from `TrialStreams::new(master_seed, t)` (common random numbers).
//! Trials run on the current rayon pool; results are written to per-trial
//! slots and reduced sequentially afterwards, so output does not depend on
//! the number of workers.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::channel::{ChannelModel, ChannelRealization, LinkGains, RadioConfig, Scene, TrialStreams};
use crate::error::{Result, SimError};
use crate::power::{self, EeSample, PowerConfig};
use crate::surfaces::{self, SurfaceKind, SurfaceSpec};
use crate::units::linear_to_db;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SweepVariable {
    /// Single operating point; produces SNR CDFs.
    #[default]
    None,
    NumElements,
    /// x-coordinate of the surface, y and height fixed.
    RsHorizontalX,
    /// Horizontal BS–UE distance along the +x axis from the BS.
    BsUeDistance,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SweepSpec {
    pub variable: SweepVariable,
    #[serde(default)]
    pub points: Vec<f64>,
}

impl SweepSpec {
    pub fn none() -> Self {
        Self::default()
    }

    pub fn new(variable: SweepVariable, points: Vec<f64>) -> Self {
        Self { variable, points }
    }

    pub fn validate(&self) -> Result<()> {
        if self.variable == SweepVariable::None {
            return Ok(());
        }
        if self.points.is_empty() {
            return Err(SimError::InvalidConfig("sweep has no points".into()));
        }
        for &p in &self.points {
            if !p.is_finite() {
                return Err(SimError::InvalidSweepPoint {
                    value: p,
                    reason: "not finite",
                });
            }
            if self.variable == SweepVariable::NumElements && (p < 1.0 || p.fract() != 0.0) {
                return Err(SimError::InvalidSweepPoint {
                    value: p,
                    reason: "element count must be a positive integer",
                });
            }
        }
        if self.points.windows(2).any(|w| w[0] >= w[1]) {
            return Err(SimError::InvalidConfig(
                "sweep points must be strictly increasing".into(),
            ));
        }
        Ok(())
    }
}

/// How per-trial results are turned into the reported EE.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EeAveraging {
    /// Mean over trials of B·log₂(1+γ)/P.
    #[default]
    MeanOfEe,
    /// B·log₂(1+E[γ])/P.
    EeOfMeanSnr,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExperimentConfig {
    pub scene: Scene,
    pub radio: RadioConfig,
    pub channel: ChannelModel,
    pub power: PowerConfig,
    pub architectures: Vec<SurfaceSpec>,
    pub n_trials: usize,
    pub master_seed: u64,
    pub sweep: SweepSpec,
    pub averaging: EeAveraging,
    /// Optional ceiling on active-RIS amplitudes. With `None` the active
    /// surface runs at its unconstrained optimum.
    pub active_amplitude_cap: Option<f64>,
}

impl ExperimentConfig {
    pub fn validate(&self) -> Result<()> {
        self.scene.validate()?;
        self.radio.validate()?;
        self.power.validate()?;
        self.sweep.validate()?;
        if self.n_trials == 0 {
            return Err(SimError::InvalidConfig("n_trials must be at least 1".into()));
        }
        if self.architectures.is_empty() {
            return Err(SimError::InvalidConfig("no architectures configured".into()));
        }
        for spec in &self.architectures {
            spec.validate()?;
        }
        if self.radio.noise_power_bs_dbm != self.radio.noise_power_rs_dbm {
            return Err(SimError::InvalidConfig(
                "BS and surface noise powers must be equal".into(),
            ));
        }
        if let Some(cap) = self.active_amplitude_cap {
            if !(cap > 0.0) {
                return Err(SimError::InvalidConfig(
                    "active amplitude cap must be positive".into(),
                ));
            }
        }
        if let Some(sigma) = self.channel.shadow_sigma_db {
            if !(sigma >= 0.0 && sigma.is_finite()) {
                return Err(SimError::InvalidConfig(
                    "shadowing sigma must be finite and non-negative".into(),
                ));
            }
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SnrSample {
    pub snr_linear: f64,
    pub architecture: SurfaceKind,
    pub trial_index: u64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrialOutcome {
    pub snr: SnrSample,
    pub ee: EeSample,
}

/// One Monte-Carlo trial of a single architecture at the configured scene.
pub fn run_trial(cfg: &ExperimentConfig, spec: &SurfaceSpec, trial_index: u64) -> Result<TrialOutcome> {
    spec.validate()?;
    let gains = cfg.channel.link_gains(&cfg.scene, &cfg.radio)?;
    let ch = cfg.channel.draw(
        &gains,
        &cfg.radio,
        spec.n_elements,
        &TrialStreams::new(cfg.master_seed, trial_index),
    );
    evaluate(cfg, spec, &ch, trial_index)
}

/// Optimal SNR and EE of `spec` on an already drawn channel. The channel
/// may be longer than the surface; only its first `n_elements` are used.
fn evaluate(
    cfg: &ExperimentConfig,
    spec: &SurfaceSpec,
    full: &ChannelRealization,
    trial_index: u64,
) -> Result<TrialOutcome> {
    let owned;
    let ch = if full.n_elements() == spec.n_elements {
        full
    } else {
        owned = full.truncated(spec.n_elements);
        &owned
    };
    let radio = &cfg.radio;
    let gamma_bar = radio.transmit_snr();
    let (snr, total_power) = match spec.kind {
        SurfaceKind::Ris => (
            surfaces::snr_ris(ch, gamma_bar)?,
            power::power_ris(spec.n_elements, &cfg.power),
        ),
        SurfaceKind::Rdars => {
            let mask = spec.mode_mask(ch)?;
            (
                surfaces::snr_rdars_optimal(ch, &mask, gamma_bar)?,
                power::power_rdars(spec.n_elements, spec.n_connected, &cfg.power, radio.band)?,
            )
        }
        SurfaceKind::ActiveRis => (
            active_snr(cfg, ch)?,
            power::power_active(spec.n_elements, &cfg.power),
        ),
    };
    let ee = if total_power > 0.0 {
        power::energy_efficiency(snr, radio.bandwidth_hz, total_power)?
    } else {
        // An empty passive surface draws no power; report zero EE.
        EeSample {
            ee: 0.0,
            capacity: power::capacity(snr, radio.bandwidth_hz),
            total_power,
        }
    };
    Ok(TrialOutcome {
        snr: SnrSample {
            snr_linear: snr,
            architecture: spec.kind,
            trial_index,
        },
        ee,
    })
}

fn active_snr(cfg: &ExperimentConfig, ch: &ChannelRealization) -> Result<f64> {
    let radio = &cfg.radio;
    let Some(cap) = cfg.active_amplitude_cap else {
        return Ok(surfaces::snr_active_optimal(ch, radio.transmit_snr()));
    };
    let (s1, s2) = (radio.noise_bs_w(), radio.noise_rs_w());
    match surfaces::active_ris_optimal_coeffs(ch, s1, s2) {
        Ok(refl) => surfaces::snr_active_general(
            ch,
            &refl.with_amplitude_ceiling(cap),
            radio.transmit_power_w(),
            s1,
            s2,
        ),
        Err(SimError::DegenerateChannel(_)) => Ok(surfaces::snr_active_optimal(ch, radio.transmit_snr())),
        Err(e) => Err(e),
    }
}

/// Summary of one architecture at one sweep point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub sweep_value: f64,
    pub architecture: String,
    pub mean_snr_linear: f64,
    pub median_snr_linear: f64,
    pub mean_capacity: f64,
    pub mean_ee: f64,
    /// Standard error of the per-trial EE samples.
    pub stderr_ee: f64,
    pub total_power_w: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CdfCurve {
    pub architecture: String,
    /// (SNR in dB, cumulative probability), ascending.
    pub points: Vec<(f64, f64)>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepResult {
    pub variable: SweepVariable,
    /// Point-major, then in configured architecture order.
    pub rows: Vec<SweepRow>,
    pub cdf: Option<Vec<CdfCurve>>,
    /// Some link distance fell below the path-loss validity range and was
    /// clamped.
    pub distance_clamped: bool,
}

impl SweepResult {
    pub fn row(&self, sweep_value: f64, architecture: &str) -> Option<&SweepRow> {
        self.rows
            .iter()
            .find(|r| r.sweep_value == sweep_value && r.architecture == architecture)
    }

    /// Rows of one architecture in sweep order.
    pub fn series(&self, architecture: &str) -> Vec<&SweepRow> {
        self.rows.iter().filter(|r| r.architecture == architecture).collect()
    }
}

/// Sorted `(value, k/n)` pairs without interpolation.
pub fn empirical_cdf(samples: &[f64]) -> Vec<(f64, f64)> {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len() as f64;
    sorted
        .into_iter()
        .enumerate()
        .map(|(k, v)| (v, (k + 1) as f64 / n))
        .collect()
}

fn median(samples: &[f64]) -> f64 {
    let mut sorted = samples.to_vec();
    sorted.sort_by(f64::total_cmp);
    let n = sorted.len();
    if n % 2 == 1 {
        sorted[n / 2]
    } else {
        0.5 * (sorted[n / 2 - 1] + sorted[n / 2])
    }
}

/// Per-trial outcomes, indexed `[trial][architecture]`.
fn simulate_point(
    cfg: &ExperimentConfig,
    gains: &LinkGains,
    archs: &[SurfaceSpec],
) -> Result<Vec<Vec<TrialOutcome>>> {
    let n_max = archs.iter().map(|s| s.n_elements).max().unwrap_or(0);
    (0..cfg.n_trials as u64)
        .into_par_iter()
        .map(|t| {
            let ch = cfg.channel.draw(
                gains,
                &cfg.radio,
                n_max,
                &TrialStreams::new(cfg.master_seed, t),
            );
            archs.iter().map(|spec| evaluate(cfg, spec, &ch, t)).collect()
        })
        .collect()
}

fn summarize(
    cfg: &ExperimentConfig,
    sweep_value: f64,
    spec: &SurfaceSpec,
    outcomes: &[Vec<TrialOutcome>],
    column: usize,
) -> (SweepRow, Vec<f64>) {
    let n = outcomes.len() as f64;
    let snrs: Vec<f64> = outcomes.iter().map(|o| o[column].snr.snr_linear).collect();
    let ees: Vec<f64> = outcomes.iter().map(|o| o[column].ee.ee).collect();
    let mean = |v: &[f64]| v.iter().sum::<f64>() / n;
    let mean_snr = mean(&snrs);
    let mean_capacity = outcomes.iter().map(|o| o[column].ee.capacity).sum::<f64>() / n;
    let total_power = outcomes[0][column].ee.total_power;
    let mean_ee_samples = mean(&ees);
    let variance = if outcomes.len() > 1 {
        ees.iter().map(|e| (e - mean_ee_samples).powi(2)).sum::<f64>() / (n - 1.0)
    } else {
        0.0
    };
    let mean_ee = match cfg.averaging {
        EeAveraging::MeanOfEe => mean_ee_samples,
        EeAveraging::EeOfMeanSnr if total_power > 0.0 => {
            power::capacity(mean_snr, cfg.radio.bandwidth_hz) / total_power
        }
        EeAveraging::EeOfMeanSnr => 0.0,
    };
    let row = SweepRow {
        sweep_value,
        architecture: spec.label(),
        mean_snr_linear: mean_snr,
        median_snr_linear: median(&snrs),
        mean_capacity,
        mean_ee,
        stderr_ee: (variance / n).sqrt(),
        total_power_w: total_power,
    };
    (row, snrs)
}

/// SNR distribution of every architecture at the configured operating point.
pub fn run_cdf(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let gains = cfg.channel.link_gains(&cfg.scene, &cfg.radio)?;
    let outcomes = simulate_point(cfg, &gains, &cfg.architectures)?;
    let mut rows = Vec::with_capacity(cfg.architectures.len());
    let mut curves = Vec::with_capacity(cfg.architectures.len());
    for (column, spec) in cfg.architectures.iter().enumerate() {
        let (row, snrs) = summarize(cfg, spec.n_elements as f64, spec, &outcomes, column);
        let db: Vec<f64> = snrs.iter().map(|&s| linear_to_db(s)).collect();
        curves.push(CdfCurve {
            architecture: row.architecture.clone(),
            points: empirical_cdf(&db),
        });
        rows.push(row);
    }
    Ok(SweepResult {
        variable: SweepVariable::None,
        rows,
        cdf: Some(curves),
        distance_clamped: gains.clamped,
    })
}

/// Scene and architectures at one sweep point.
fn apply_point(cfg: &ExperimentConfig, value: f64) -> Result<(Scene, Vec<SurfaceSpec>)> {
    let mut scene = cfg.scene;
    let mut archs = cfg.architectures.clone();
    match cfg.sweep.variable {
        SweepVariable::None => {}
        SweepVariable::NumElements => {
            if value < 1.0 || value.fract() != 0.0 {
                return Err(SimError::InvalidSweepPoint {
                    value,
                    reason: "element count must be a positive integer",
                });
            }
            for spec in &mut archs {
                *spec = spec.with_elements(value as usize);
                if spec.validate().is_err() {
                    return Err(SimError::InvalidSweepPoint {
                        value,
                        reason: "fewer elements than connected modes",
                    });
                }
            }
        }
        SweepVariable::RsHorizontalX => scene.rs.x = value,
        SweepVariable::BsUeDistance => {
            if value <= 0.0 {
                return Err(SimError::InvalidSweepPoint {
                    value,
                    reason: "BS-UE distance must be positive",
                });
            }
            scene.ue.x = scene.bs.x + value;
            scene.ue.y = scene.bs.y;
        }
    }
    scene.validate().map_err(|_| SimError::InvalidSweepPoint {
        value,
        reason: "point produces an invalid scene",
    })?;
    Ok((scene, archs))
}

/// Mean SNR, capacity and EE of every architecture at every sweep point.
/// With `SweepVariable::None` this is the single configured point.
pub fn run_sweep(cfg: &ExperimentConfig) -> Result<SweepResult> {
    cfg.validate()?;
    let points = match cfg.sweep.variable {
        SweepVariable::None => vec![f64::NAN],
        _ => cfg.sweep.points.clone(),
    };
    let mut rows = Vec::with_capacity(points.len() * cfg.architectures.len());
    let mut clamped = false;
    for value in points {
        let (scene, archs) = apply_point(cfg, value)?;
        let gains = cfg.channel.link_gains(&scene, &cfg.radio)?;
        clamped |= gains.clamped;
        let outcomes = simulate_point(cfg, &gains, &archs)?;
        for (column, spec) in archs.iter().enumerate() {
            let reported = if value.is_nan() { spec.n_elements as f64 } else { value };
            rows.push(summarize(cfg, reported, spec, &outcomes, column).0);
        }
    }
    Ok(SweepResult {
        variable: cfg.sweep.variable,
        rows,
        cdf: None,
        distance_clamped: clamped,
    })
}

/// Runs `f` on a dedicated pool of `workers` threads.
pub fn with_workers<T, F>(workers: usize, f: F) -> Result<T>
where
    T: Send,
    F: FnOnce() -> T + Send,
{
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| SimError::InvalidConfig(format!("cannot build thread pool: {e}")))?;
    Ok(pool.install(f))
}
