//! Experiment definition files.
//!
//! Configs are TOML. Every key is optional; anything left out takes the
//! default of the selected band and figure. Powers and noise are given in
//! dBm/dB here and converted once when the experiment runs.
//!
//! ```toml
//! band = "mmwave"          # "sub6" (default) or "mmwave"
//! seed = 7
//! trials = 30000
//! n_elements = 256
//! connected_modes = [1, 2, 3, 4]
//! connected_selection = "first_indices"   # or "largest_ue_gain"
//! averaging = "mean_of_ee"                # or "ee_of_mean_snr"
//! # active_amplitude_cap = 4.0
//!
//! [radio]
//! noise_power_dbm = -87.0   # sets both BS and surface noise
//! rician_k_db = 10.0
//!
//! [geometry]
//! rs = [100.0, 20.0, 10.0]
//!
//! [channel]
//! ue_bs = { path_loss = "uma_nlos", fading = "rayleigh" }
//! shadow_sigma_db = 4.0
//!
//! [power]   # watts
//! p_rf_mmwave = 2.0
//!
//! [sweep]
//! points = [64, 128, 256]
//! ```

use std::path::Path;

use serde::Deserialize;

use rdars_core::{
    Band, ChannelModel, ConnectedSelection, EeAveraging, ExperimentConfig, LinkModel, Position3D,
    PowerConfig, RadioConfig, Scene, SurfaceSpec, SweepSpec,
};

use crate::error::CliError;
use crate::figure::Figure;

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub band: Option<Band>,
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub n_elements: Option<usize>,
    pub connected_modes: Option<Vec<usize>>,
    pub connected_selection: Option<ConnectedSelection>,
    pub averaging: Option<EeAveraging>,
    pub active_amplitude_cap: Option<f64>,
    #[serde(default)]
    pub radio: RadioSection,
    #[serde(default)]
    pub geometry: GeometrySection,
    #[serde(default)]
    pub channel: ChannelSection,
    #[serde(default)]
    pub power: PowerSection,
    #[serde(default)]
    pub sweep: SweepSection,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RadioSection {
    pub carrier_frequency_ghz: Option<f64>,
    pub transmit_power_dbm: Option<f64>,
    pub bandwidth_hz: Option<f64>,
    pub noise_power_dbm: Option<f64>,
    pub noise_power_bs_dbm: Option<f64>,
    pub noise_power_rs_dbm: Option<f64>,
    pub rician_k_db: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GeometrySection {
    pub bs: Option<[f64; 3]>,
    pub rs: Option<[f64; 3]>,
    pub ue: Option<[f64; 3]>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ChannelSection {
    pub ue_bs: Option<LinkModel>,
    pub ue_rs: Option<LinkModel>,
    pub rs_bs: Option<LinkModel>,
    pub shadow_sigma_db: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PowerSection {
    pub p_c: Option<f64>,
    pub p_dc: Option<f64>,
    pub p_rf_sub6: Option<f64>,
    pub p_rf_mmwave: Option<f64>,
    pub zeta: Option<f64>,
    pub p_out: Option<f64>,
}

#[derive(Debug, Clone, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSection {
    pub points: Option<Vec<f64>>,
}

/// Command-line values that take precedence over the file.
#[derive(Debug, Clone, Copy, Default)]
pub struct Overrides {
    pub seed: Option<u64>,
    pub trials: Option<usize>,
    pub band: Option<Band>,
}

pub const DEFAULT_SEED: u64 = 20_240_501;
pub const DEFAULT_TRIALS: usize = 30_000;
pub const DEFAULT_CONNECTED_MODES: [usize; 4] = [1, 2, 3, 4];

fn point(p: [f64; 3]) -> Position3D {
    Position3D::new(p[0], p[1], p[2])
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self, CliError> {
        toml::from_str(text).map_err(|e| CliError::Parse {
            path: None,
            message: e.to_string(),
        })
    }

    /// Fills every unspecified field from band and figure defaults.
    pub fn resolve(&self, figure: Figure, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
        let band = overrides.band.or(self.band).unwrap_or(Band::Sub6);

        let mut radio = RadioConfig::for_band(band);
        let r = &self.radio;
        if let Some(v) = r.carrier_frequency_ghz {
            radio.carrier_frequency_ghz = v;
        }
        if let Some(v) = r.transmit_power_dbm {
            radio.transmit_power_dbm = v;
        }
        if let Some(v) = r.bandwidth_hz {
            radio.bandwidth_hz = v;
        }
        if let Some(v) = r.noise_power_dbm {
            radio.noise_power_bs_dbm = v;
            radio.noise_power_rs_dbm = v;
        }
        if let Some(v) = r.noise_power_bs_dbm {
            radio.noise_power_bs_dbm = v;
        }
        if let Some(v) = r.noise_power_rs_dbm {
            radio.noise_power_rs_dbm = v;
        }
        if let Some(v) = r.rician_k_db {
            radio.rician_k_db = v;
        }

        let mut scene = Scene::reference();
        let g = &self.geometry;
        if let Some(p) = g.bs {
            scene.bs = point(p);
        }
        if let Some(p) = g.rs {
            scene.rs = point(p);
        }
        if let Some(p) = g.ue {
            scene.ue = point(p);
        }

        let mut channel = ChannelModel::default();
        let c = &self.channel;
        channel.ue_bs = c.ue_bs.unwrap_or(channel.ue_bs);
        channel.ue_rs = c.ue_rs.unwrap_or(channel.ue_rs);
        channel.rs_bs = c.rs_bs.unwrap_or(channel.rs_bs);
        channel.shadow_sigma_db = c.shadow_sigma_db;

        let mut power = PowerConfig::default();
        let p = &self.power;
        power.p_c = p.p_c.unwrap_or(power.p_c);
        power.p_dc = p.p_dc.unwrap_or(power.p_dc);
        power.p_rf_sub6 = p.p_rf_sub6.unwrap_or(power.p_rf_sub6);
        power.p_rf_mmwave = p.p_rf_mmwave.unwrap_or(power.p_rf_mmwave);
        power.zeta = p.zeta.unwrap_or(power.zeta);
        power.p_out = p.p_out.unwrap_or(power.p_out);

        let n = self.n_elements.unwrap_or(figure.default_elements());
        let selection = self.connected_selection.unwrap_or_default();
        let modes = self
            .connected_modes
            .clone()
            .unwrap_or_else(|| DEFAULT_CONNECTED_MODES.to_vec());
        let mut architectures = vec![SurfaceSpec::ris(n), SurfaceSpec::active_ris(n)];
        architectures.extend(modes.iter().map(|&a| SurfaceSpec::rdars(n, a, selection)));

        let points = self
            .sweep
            .points
            .clone()
            .unwrap_or_else(|| figure.default_points());
        let sweep = match figure.sweep_variable() {
            rdars_core::SweepVariable::None => SweepSpec::none(),
            variable => SweepSpec::new(variable, points),
        };

        let cfg = ExperimentConfig {
            scene,
            radio,
            channel,
            power,
            architectures,
            n_trials: overrides.trials.or(self.trials).unwrap_or(DEFAULT_TRIALS),
            master_seed: overrides.seed.or(self.seed).unwrap_or(DEFAULT_SEED),
            sweep,
            averaging: self.averaging.unwrap_or_default(),
            active_amplitude_cap: self.active_amplitude_cap,
        };
        cfg.validate().map_err(|e| CliError::Validation(e.to_string()))?;
        Ok(cfg)
    }
}

/// Reads and resolves a config file.
pub fn load_config(path: &Path, figure: Figure, overrides: &Overrides) -> Result<ExperimentConfig, CliError> {
    let text = std::fs::read_to_string(path).map_err(|source| CliError::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let file = ConfigFile::parse(&text).map_err(|e| match e {
        CliError::Parse { message, .. } => CliError::Parse {
            path: Some(path.to_path_buf()),
            message,
        },
        other => other,
    })?;
    file.resolve(figure, overrides)
}
