//! Geometry, large-scale path loss and small-scale fading.
//!
//! A [`ChannelRealization`] is one draw of the three uplink channels: the
//! scalar UE→BS gain and the two per-element vectors UE→RS and RS→BS. Every
//! link has its own random stream keyed by `(master_seed, link)` and indexed
//! by trial, so a realization is a pure function of its [`TrialStreams`].
//! Because element `i` of a vector always consumes the same position in its
//! link stream, the first `n` elements of a larger draw equal an `n`-element
//! draw. Sweeps over the element count rely on this for common random
//! numbers.

use num_complex::Complex64;
use rand::Rng;
use rand_chacha::rand_core::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, TAU};

use crate::error::{Result, SimError};
use crate::units::{db_to_linear, dbm_to_watts};

/// Distances below this are clamped before evaluating a path-loss formula.
pub const MIN_PATH_LOSS_DISTANCE_M: f64 = 10.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Position3D {
    pub x: f64,
    pub y: f64,
    pub z: f64,
}

impl Position3D {
    pub const fn new(x: f64, y: f64, z: f64) -> Self {
        Self { x, y, z }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.x.is_finite() && self.y.is_finite() && self.z.is_finite()) {
            return Err(SimError::InvalidConfig(format!(
                "position {self:?} is not finite"
            )));
        }
        if self.z < 0.0 {
            return Err(SimError::InvalidConfig(format!(
                "position {self:?} lies below the ground plane"
            )));
        }
        Ok(())
    }
}

/// Euclidean distance in meters.
pub fn distance(p: Position3D, q: Position3D) -> f64 {
    let (dx, dy, dz) = (p.x - q.x, p.y - q.y, p.z - q.z);
    (dx * dx + dy * dy + dz * dz).sqrt()
}

/// Node placement: base station, reconfigurable surface and user.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Scene {
    pub bs: Position3D,
    pub rs: Position3D,
    pub ue: Position3D,
}

impl Scene {
    /// BS at (0, 0, 10), RS at (20, 20, 10), UE at (200, 0, 1.5).
    pub const fn reference() -> Self {
        Self {
            bs: Position3D::new(0.0, 0.0, 10.0),
            rs: Position3D::new(20.0, 20.0, 10.0),
            ue: Position3D::new(200.0, 0.0, 1.5),
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.bs.validate()?;
        self.rs.validate()?;
        self.ue.validate()?;
        for (name, d) in [
            ("UE-BS", distance(self.ue, self.bs)),
            ("UE-RS", distance(self.ue, self.rs)),
            ("RS-BS", distance(self.rs, self.bs)),
        ] {
            if d <= 0.0 {
                return Err(SimError::InvalidConfig(format!(
                    "{name} distance must be positive"
                )));
            }
        }
        Ok(())
    }
}

impl Default for Scene {
    fn default() -> Self {
        Self::reference()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Band {
    Sub6,
    #[serde(rename = "mmwave")]
    MmWave,
}

impl Band {
    pub fn label(self) -> &'static str {
        match self {
            Band::Sub6 => "sub6",
            Band::MmWave => "mmwave",
        }
    }
}

impl std::fmt::Display for Band {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.label())
    }
}

impl std::str::FromStr for Band {
    type Err = SimError;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "sub6" | "sub-6" | "sub6ghz" => Ok(Band::Sub6),
            "mmwave" | "mmw" => Ok(Band::MmWave),
            other => Err(SimError::InvalidConfig(format!("unknown band {other:?}"))),
        }
    }
}

/// Radio parameters in the units they are usually quoted in. Use the
/// accessor methods for linear quantities.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct RadioConfig {
    pub band: Band,
    pub carrier_frequency_ghz: f64,
    pub transmit_power_dbm: f64,
    pub bandwidth_hz: f64,
    /// Receiver noise at the BS antenna (σ₁²).
    pub noise_power_bs_dbm: f64,
    /// Noise at the surface, for connected modes or active elements (σ₂²).
    pub noise_power_rs_dbm: f64,
    /// Rician K-factor used by links with [`LinkFading::Rician`].
    pub rician_k_db: f64,
}

impl RadioConfig {
    pub fn sub6() -> Self {
        Self {
            band: Band::Sub6,
            carrier_frequency_ghz: 3.7,
            transmit_power_dbm: 10.0,
            bandwidth_hz: 20e6,
            noise_power_bs_dbm: -100.0,
            noise_power_rs_dbm: -100.0,
            rician_k_db: 10.0,
        }
    }

    pub fn mmwave() -> Self {
        Self {
            band: Band::MmWave,
            carrier_frequency_ghz: 28.0,
            transmit_power_dbm: 20.0,
            bandwidth_hz: 500e6,
            noise_power_bs_dbm: -87.0,
            noise_power_rs_dbm: -87.0,
            rician_k_db: 10.0,
        }
    }

    pub fn for_band(band: Band) -> Self {
        match band {
            Band::Sub6 => Self::sub6(),
            Band::MmWave => Self::mmwave(),
        }
    }

    pub fn transmit_power_w(&self) -> f64 {
        dbm_to_watts(self.transmit_power_dbm)
    }

    pub fn noise_bs_w(&self) -> f64 {
        dbm_to_watts(self.noise_power_bs_dbm)
    }

    pub fn noise_rs_w(&self) -> f64 {
        dbm_to_watts(self.noise_power_rs_dbm)
    }

    /// Transmit SNR γ̄ = P_t / σ², referenced to the BS noise floor.
    pub fn transmit_snr(&self) -> f64 {
        self.transmit_power_w() / self.noise_bs_w()
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.carrier_frequency_ghz > 0.0 && self.carrier_frequency_ghz.is_finite()) {
            return Err(SimError::InvalidConfig(
                "carrier frequency must be positive".into(),
            ));
        }
        if !(self.bandwidth_hz > 0.0 && self.bandwidth_hz.is_finite()) {
            return Err(SimError::InvalidConfig("bandwidth must be positive".into()));
        }
        for (name, v) in [
            ("transmit power", self.transmit_power_dbm),
            ("BS noise power", self.noise_power_bs_dbm),
            ("RS noise power", self.noise_power_rs_dbm),
            ("Rician K-factor", self.rician_k_db),
        ] {
            if !v.is_finite() {
                return Err(SimError::InvalidConfig(format!("{name} must be finite")));
            }
        }
        Ok(())
    }
}

/// 3GPP TR 38.901 urban macro / micro path-loss formulas.
///
/// LOS variants use the pre-breakpoint branch only. NLOS variants take the
/// maximum of the LOS value and the NLOS fit, with the UE height term
/// evaluated at the 1.5 m reference height (where it vanishes).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum PathLossModel {
    #[serde(rename = "uma_los")]
    UmaLos,
    #[serde(rename = "uma_nlos")]
    UmaNlos,
    #[serde(rename = "umi_los")]
    UmiLos,
    #[serde(rename = "umi_nlos")]
    UmiNlos,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PathLoss {
    pub db: f64,
    /// The distance was below [`MIN_PATH_LOSS_DISTANCE_M`] and got clamped.
    pub clamped: bool,
}

impl PathLoss {
    /// Linear power gain 10^(−PL/10).
    pub fn gain(&self) -> f64 {
        db_to_linear(-self.db)
    }
}

pub fn path_loss_db(distance_m: f64, fc_ghz: f64, model: PathLossModel) -> Result<PathLoss> {
    if !(distance_m > 0.0) {
        return Err(SimError::NonPositiveDistance(distance_m));
    }
    if !(fc_ghz > 0.0) {
        return Err(SimError::NonPositiveFrequency(fc_ghz));
    }
    let clamped = distance_m < MIN_PATH_LOSS_DISTANCE_M;
    let d = distance_m.max(MIN_PATH_LOSS_DISTANCE_M);
    let (log_d, log_f) = (d.log10(), fc_ghz.log10());

    let uma_los = 28.0 + 22.0 * log_d + 20.0 * log_f;
    let umi_los = 32.4 + 21.0 * log_d + 20.0 * log_f;
    let db = match model {
        PathLossModel::UmaLos => uma_los,
        PathLossModel::UmiLos => umi_los,
        PathLossModel::UmaNlos => uma_los.max(13.54 + 39.08 * log_d + 20.0 * log_f),
        PathLossModel::UmiNlos => umi_los.max(22.4 + 35.3 * log_d + 21.3 * log_f),
    };
    Ok(PathLoss { db, clamped })
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FadingKind {
    Rayleigh,
    Rician { k_db: f64 },
}

fn complex_gaussian<R: Rng + ?Sized>(rng: &mut R) -> Complex64 {
    let re: f64 = StandardNormal.sample(rng);
    let im: f64 = StandardNormal.sample(rng);
    Complex64::new(re * FRAC_1_SQRT_2, im * FRAC_1_SQRT_2)
}

/// Draws `n` i.i.d. unit-mean-power fading coefficients.
///
/// Rician draws share one LOS phase, drawn first, across the whole vector.
pub fn draw_fading<R: Rng + ?Sized>(n: usize, kind: FadingKind, rng: &mut R) -> Vec<Complex64> {
    match kind {
        FadingKind::Rayleigh => (0..n).map(|_| complex_gaussian(rng)).collect(),
        FadingKind::Rician { k_db } => {
            let k = db_to_linear(k_db);
            let los_amp = (k / (k + 1.0)).sqrt();
            let nlos_amp = (1.0 / (k + 1.0)).sqrt();
            let phi: f64 = rng.random::<f64>() * TAU;
            let los = Complex64::from_polar(los_amp, phi);
            (0..n).map(|_| los + complex_gaussian(rng) * nlos_amp).collect()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum LinkFading {
    Rayleigh,
    /// Rician with the K-factor from [`RadioConfig::rician_k_db`].
    Rician,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LinkModel {
    pub path_loss: PathLossModel,
    pub fading: LinkFading,
}

impl LinkModel {
    fn fading_kind(&self, radio: &RadioConfig) -> FadingKind {
        match self.fading {
            LinkFading::Rayleigh => FadingKind::Rayleigh,
            LinkFading::Rician => FadingKind::Rician {
                k_db: radio.rician_k_db,
            },
        }
    }
}

/// Per-link propagation assumptions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelModel {
    pub ue_bs: LinkModel,
    pub ue_rs: LinkModel,
    pub rs_bs: LinkModel,
    /// Log-normal shadowing standard deviation in dB, applied independently
    /// per link and trial. `None` disables it.
    pub shadow_sigma_db: Option<f64>,
}

impl Default for ChannelModel {
    /// Blocked UE links (UMa NLOS, Rayleigh) and a line-of-sight RS–BS link
    /// (UMa LOS, Rician).
    fn default() -> Self {
        Self {
            ue_bs: LinkModel {
                path_loss: PathLossModel::UmaNlos,
                fading: LinkFading::Rayleigh,
            },
            ue_rs: LinkModel {
                path_loss: PathLossModel::UmaNlos,
                fading: LinkFading::Rayleigh,
            },
            rs_bs: LinkModel {
                path_loss: PathLossModel::UmaLos,
                fading: LinkFading::Rician,
            },
            shadow_sigma_db: None,
        }
    }
}

/// Deterministic linear path gains of the three links.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LinkGains {
    pub ue_bs: f64,
    pub ue_rs: f64,
    pub rs_bs: f64,
    /// At least one link distance was clamped.
    pub clamped: bool,
}

impl ChannelModel {
    pub fn link_gains(&self, scene: &Scene, radio: &RadioConfig) -> Result<LinkGains> {
        let fc = radio.carrier_frequency_ghz;
        let ue_bs = path_loss_db(distance(scene.ue, scene.bs), fc, self.ue_bs.path_loss)?;
        let ue_rs = path_loss_db(distance(scene.ue, scene.rs), fc, self.ue_rs.path_loss)?;
        let rs_bs = path_loss_db(distance(scene.rs, scene.bs), fc, self.rs_bs.path_loss)?;
        Ok(LinkGains {
            ue_bs: ue_bs.gain(),
            ue_rs: ue_rs.gain(),
            rs_bs: rs_bs.gain(),
            clamped: ue_bs.clamped || ue_rs.clamped || rs_bs.clamped,
        })
    }

    /// One realization with precomputed path gains.
    pub fn draw(
        &self,
        gains: &LinkGains,
        radio: &RadioConfig,
        n_elements: usize,
        streams: &TrialStreams,
    ) -> ChannelRealization {
        let (mut g_ub, mut g_ur, mut g_rb) = (gains.ue_bs, gains.ue_rs, gains.rs_bs);
        if let Some(sigma) = self.shadow_sigma_db {
            let mut rng = streams.rng(Stream::Shadowing);
            let mut shadow = || -> f64 {
                let z: f64 = StandardNormal.sample(&mut rng);
                db_to_linear(-sigma * z)
            };
            g_ub *= shadow();
            g_ur *= shadow();
            g_rb *= shadow();
        }

        let h_ub = draw_fading(1, self.ue_bs.fading_kind(radio), &mut streams.rng(Stream::UeBs))[0]
            * g_ub.sqrt();
        let scale = |v: Vec<Complex64>, g: f64| -> Vec<Complex64> {
            let s = g.sqrt();
            v.into_iter().map(|h| h * s).collect()
        };
        let h_ur = scale(
            draw_fading(n_elements, self.ue_rs.fading_kind(radio), &mut streams.rng(Stream::UeRs)),
            g_ur,
        );
        let h_rb = scale(
            draw_fading(n_elements, self.rs_bs.fading_kind(radio), &mut streams.rng(Stream::RsBs)),
            g_rb,
        );
        ChannelRealization { h_ub, h_ur, h_rb }
    }
}

/// Draws one channel realization for `scene`.
pub fn draw_channels(
    scene: &Scene,
    radio: &RadioConfig,
    model: &ChannelModel,
    n_elements: usize,
    streams: &TrialStreams,
) -> Result<ChannelRealization> {
    let gains = model.link_gains(scene, radio)?;
    Ok(model.draw(&gains, radio, n_elements, streams))
}

/// One draw of the uplink channels.
#[derive(Debug, Clone, PartialEq)]
pub struct ChannelRealization {
    /// UE → BS.
    pub h_ub: Complex64,
    /// UE → RS, one entry per element.
    pub h_ur: Vec<Complex64>,
    /// RS → BS, one entry per element.
    pub h_rb: Vec<Complex64>,
}

impl ChannelRealization {
    pub fn new(h_ub: Complex64, h_ur: Vec<Complex64>, h_rb: Vec<Complex64>) -> Result<Self> {
        let ch = Self { h_ub, h_ur, h_rb };
        ch.check_lengths()?;
        Ok(ch)
    }

    pub fn n_elements(&self) -> usize {
        self.h_ur.len()
    }

    pub fn check_lengths(&self) -> Result<()> {
        if self.h_ur.len() != self.h_rb.len() {
            return Err(SimError::LengthMismatch {
                what: "h_rb",
                expected: self.h_ur.len(),
                got: self.h_rb.len(),
            });
        }
        Ok(())
    }

    pub fn is_finite(&self) -> bool {
        let fin = |c: &Complex64| c.re.is_finite() && c.im.is_finite();
        fin(&self.h_ub) && self.h_ur.iter().all(fin) && self.h_rb.iter().all(fin)
    }

    /// The first `n` elements, keeping the direct link.
    pub fn truncated(&self, n: usize) -> Self {
        Self {
            h_ub: self.h_ub,
            h_ur: self.h_ur[..n].to_vec(),
            h_rb: self.h_rb[..n].to_vec(),
        }
    }
}

/// Independent random streams of a single trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Stream {
    UeBs,
    UeRs,
    RsBs,
    Shadowing,
}

impl Stream {
    fn id(self) -> u64 {
        match self {
            Stream::UeBs => 1,
            Stream::UeRs => 2,
            Stream::RsBs => 3,
            Stream::Shadowing => 4,
        }
    }
}

/// Counter-based split of a master seed: the ChaCha key is built from
/// `(master_seed, stream)` and the trial index selects the ChaCha stream, so
/// any trial can be generated without touching the others.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct TrialStreams {
    pub master_seed: u64,
    pub trial_index: u64,
}

impl TrialStreams {
    pub fn new(master_seed: u64, trial_index: u64) -> Self {
        Self {
            master_seed,
            trial_index,
        }
    }

    pub fn rng(&self, stream: Stream) -> ChaCha8Rng {
        let mut key = [0u8; 32];
        key[..8].copy_from_slice(&self.master_seed.to_le_bytes());
        key[8..16].copy_from_slice(&stream.id().to_le_bytes());
        let mut rng = ChaCha8Rng::from_seed(key);
        rng.set_stream(self.trial_index);
        rng
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: f64, b: f64, tol: f64) -> bool {
        (a - b).abs() <= tol
    }

    #[test]
    fn distance_examples() {
        let o = Position3D::new(0.0, 0.0, 0.0);
        assert_eq!(distance(o, o), 0.0);
        let bs = Position3D::new(0.0, 0.0, 10.0);
        assert!(close(distance(bs, Position3D::new(20.0, 20.0, 10.0)), 28.2843, 1e-4));
        assert!(close(distance(bs, Position3D::new(200.0, 0.0, 1.5)), 200.1806, 1e-4));
    }

    #[test]
    fn distance_is_symmetric() {
        let p = Position3D::new(3.0, -4.0, 1.0);
        let q = Position3D::new(-7.5, 2.0, 12.0);
        assert_eq!(distance(p, q), distance(q, p));
    }

    #[test]
    fn uma_los_examples() {
        // 28 + 22·log10(d) + 20·log10(fc), evaluated by hand.
        let pl = path_loss_db(100.0, 3.7, PathLossModel::UmaLos).unwrap();
        assert!(close(pl.db, 83.3636, 1e-3), "{}", pl.db);
        assert!(!pl.clamped);
        let pl = path_loss_db(100.0, 28.0, PathLossModel::UmaLos).unwrap();
        assert!(close(pl.db, 100.9432, 1e-3), "{}", pl.db);
    }

    #[test]
    fn short_distances_are_clamped() {
        let near = path_loss_db(1.0, 3.7, PathLossModel::UmaLos).unwrap();
        let at_min = path_loss_db(10.0, 3.7, PathLossModel::UmaLos).unwrap();
        assert!(near.clamped);
        assert!(!at_min.clamped);
        assert_eq!(near.db, at_min.db);
    }

    #[test]
    fn non_positive_distance_is_an_error() {
        for d in [0.0, -3.0, f64::NAN] {
            assert!(matches!(
                path_loss_db(d, 3.7, PathLossModel::UmiNlos),
                Err(SimError::NonPositiveDistance(_))
            ));
        }
    }

    #[test]
    fn nlos_never_below_los() {
        for d in [10.0, 35.0, 200.0, 1000.0] {
            for fc in [3.7, 28.0] {
                let los = path_loss_db(d, fc, PathLossModel::UmaLos).unwrap().db;
                let nlos = path_loss_db(d, fc, PathLossModel::UmaNlos).unwrap().db;
                assert!(nlos >= los);
                let los = path_loss_db(d, fc, PathLossModel::UmiLos).unwrap().db;
                let nlos = path_loss_db(d, fc, PathLossModel::UmiNlos).unwrap().db;
                assert!(nlos >= los);
            }
        }
    }

    #[test]
    fn empty_fading_vector() {
        let mut rng = TrialStreams::new(1, 0).rng(Stream::UeRs);
        assert!(draw_fading(0, FadingKind::Rayleigh, &mut rng).is_empty());
        assert!(draw_fading(0, FadingKind::Rician { k_db: 10.0 }, &mut rng).is_empty());
    }

    #[test]
    fn rician_pure_los_limit() {
        let mut rng = TrialStreams::new(7, 3).rng(Stream::RsBs);
        for g in draw_fading(256, FadingKind::Rician { k_db: 200.0 }, &mut rng) {
            assert!(close(g.norm(), 1.0, 1e-6));
        }
    }

    #[test]
    fn rayleigh_unit_power() {
        let mut rng = TrialStreams::new(11, 0).rng(Stream::UeBs);
        let n = 1_000_000;
        let mean = draw_fading(n, FadingKind::Rayleigh, &mut rng)
            .iter()
            .map(|g| g.norm_sqr())
            .sum::<f64>()
            / n as f64;
        assert!((0.99..=1.01).contains(&mean), "{mean}");
    }

    #[test]
    fn empty_surface_keeps_direct_link() {
        let streams = TrialStreams::new(5, 9);
        let ch = draw_channels(
            &Scene::reference(),
            &RadioConfig::sub6(),
            &ChannelModel::default(),
            0,
            &streams,
        )
        .unwrap();
        assert!(ch.h_ur.is_empty() && ch.h_rb.is_empty());
        assert!(ch.h_ub.norm() > 0.0 && ch.is_finite());
    }

    #[test]
    fn realization_is_deterministic_and_prefix_consistent() {
        let scene = Scene::reference();
        let radio = RadioConfig::mmwave();
        let model = ChannelModel::default();
        let streams = TrialStreams::new(42, 17);
        let a = draw_channels(&scene, &radio, &model, 64, &streams).unwrap();
        let b = draw_channels(&scene, &radio, &model, 64, &streams).unwrap();
        assert_eq!(a, b);
        let small = draw_channels(&scene, &radio, &model, 16, &streams).unwrap();
        assert_eq!(small, a.truncated(16));
        let other = draw_channels(&scene, &radio, &model, 64, &TrialStreams::new(42, 18)).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn coincident_nodes_are_rejected() {
        let mut scene = Scene::reference();
        scene.rs = scene.bs;
        assert!(scene.validate().is_err());
        let mut radio = RadioConfig::sub6();
        assert!(draw_channels(&scene, &radio, &ChannelModel::default(), 4, &TrialStreams::new(0, 0)).is_err());
        radio.bandwidth_hz = 0.0;
        assert!(radio.validate().is_err());
    }

    #[test]
    fn shadowing_changes_gain_but_not_fading_streams() {
        let scene = Scene::reference();
        let radio = RadioConfig::sub6();
        let plain = ChannelModel::default();
        let shadowed = ChannelModel {
            shadow_sigma_db: Some(6.0),
            ..plain
        };
        let streams = TrialStreams::new(3, 4);
        let a = draw_channels(&scene, &radio, &plain, 8, &streams).unwrap();
        let b = draw_channels(&scene, &radio, &shadowed, 8, &streams).unwrap();
        // Same fading phases, different amplitudes.
        assert!((a.h_ub.arg() - b.h_ub.arg()).abs() < 1e-12);
        assert!((a.h_ub.norm() - b.h_ub.norm()).abs() > 0.0);
    }

    #[test]
    fn band_parsing() {
        assert_eq!("sub6".parse::<Band>().unwrap(), Band::Sub6);
        assert_eq!("mmWave".parse::<Band>().unwrap(), Band::MmWave);
        assert!("lte".parse::<Band>().is_err());
    }
}
