//! Received SNR after maximum ratio combining for passive RIS, RDARS and
//! active RIS.
//!
//! An RDARS element is either reflecting (unit-modulus phase shift) or
//! connected, in which case it acts as a remote receive antenna of the BS.
//! Connected elements are described by a boolean mode mask (`true` =
//! connected). A passive RIS is an RDARS with an all-false mask.
//!
//! All SNR values here are linear. `gamma_bar` is the transmit SNR P_t/σ².

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::TAU;

use crate::channel::ChannelRealization;
use crate::error::{Result, SimError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum SurfaceKind {
    #[serde(rename = "ris")]
    Ris,
    #[serde(rename = "active_ris")]
    ActiveRis,
    #[serde(rename = "rdars")]
    Rdars,
}

/// How the support of the mode-indicating matrix is chosen.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum ConnectedSelection {
    /// Elements `0..a`.
    #[default]
    FirstIndices,
    /// The `a` elements with the strongest UE→RS gain, ties to the lower index.
    LargestUeGain,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct SurfaceSpec {
    pub kind: SurfaceKind,
    pub n_elements: usize,
    /// Connected-mode count `a`. Always zero for RIS and active RIS.
    pub n_connected: usize,
    pub selection: ConnectedSelection,
}

impl SurfaceSpec {
    pub fn ris(n_elements: usize) -> Self {
        Self {
            kind: SurfaceKind::Ris,
            n_elements,
            n_connected: 0,
            selection: ConnectedSelection::FirstIndices,
        }
    }

    pub fn active_ris(n_elements: usize) -> Self {
        Self {
            kind: SurfaceKind::ActiveRis,
            ..Self::ris(n_elements)
        }
    }

    pub fn rdars(n_elements: usize, n_connected: usize, selection: ConnectedSelection) -> Self {
        Self {
            kind: SurfaceKind::Rdars,
            n_elements,
            n_connected,
            selection,
        }
    }

    pub fn with_elements(self, n_elements: usize) -> Self {
        Self { n_elements, ..self }
    }

    pub fn validate(&self) -> Result<()> {
        match self.kind {
            SurfaceKind::Ris | SurfaceKind::ActiveRis if self.n_connected != 0 => Err(
                SimError::InvalidConfig(format!("{} cannot have connected elements", self.label())),
            ),
            _ if self.n_connected > self.n_elements => Err(SimError::ConnectedExceedsTotal {
                connected: self.n_connected,
                total: self.n_elements,
            }),
            _ => Ok(()),
        }
    }

    /// Label used in result tables.
    pub fn label(&self) -> String {
        match self.kind {
            SurfaceKind::Ris => "RIS".to_string(),
            SurfaceKind::ActiveRis => "ARIS".to_string(),
            SurfaceKind::Rdars => format!("RDARS a={}", self.n_connected),
        }
    }

    /// Mode mask for this realization.
    pub fn mode_mask(&self, ch: &ChannelRealization) -> Result<Vec<bool>> {
        match self.kind {
            SurfaceKind::Rdars => select_connected_modes(ch, self.n_connected, self.selection),
            _ => Ok(vec![false; ch.n_elements()]),
        }
    }
}

/// Per-element reflection coefficients `amplitude · e^{j·phase}`.
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionConfig {
    pub phases: Vec<f64>,
    pub amplitudes: Vec<f64>,
}

impl ReflectionConfig {
    /// Unit-modulus coefficients.
    pub fn passive(phases: Vec<f64>) -> Self {
        let amplitudes = vec![1.0; phases.len()];
        Self { phases, amplitudes }
    }

    pub fn len(&self) -> usize {
        self.phases.len()
    }

    pub fn is_empty(&self) -> bool {
        self.phases.is_empty()
    }

    /// Clips every amplitude to `ceiling`.
    pub fn with_amplitude_ceiling(mut self, ceiling: f64) -> Self {
        for a in &mut self.amplitudes {
            *a = a.min(ceiling);
        }
        self
    }

    fn coefficient(&self, i: usize) -> Complex64 {
        Complex64::from_polar(self.amplitudes[i], self.phases[i])
    }

    fn check(&self, n: usize) -> Result<()> {
        if self.phases.len() != n {
            return Err(SimError::LengthMismatch {
                what: "phases",
                expected: n,
                got: self.phases.len(),
            });
        }
        if self.amplitudes.len() != n {
            return Err(SimError::LengthMismatch {
                what: "amplitudes",
                expected: n,
                got: self.amplitudes.len(),
            });
        }
        Ok(())
    }
}

fn check_mask(ch: &ChannelRealization, mask: &[bool]) -> Result<()> {
    ch.check_lengths()?;
    if mask.len() != ch.n_elements() {
        return Err(SimError::LengthMismatch {
            what: "mode mask",
            expected: ch.n_elements(),
            got: mask.len(),
        });
    }
    Ok(())
}

fn phase_of(h: Complex64) -> f64 {
    if h == Complex64::new(0.0, 0.0) {
        0.0
    } else {
        h.arg()
    }
}

/// RDARS SNR for arbitrary phases of the reflecting elements:
/// γ̄·(|h_UB + Σ_reflecting e^{jφ_i} h_RB,i h_UR,i|² + Σ_connected |h_UR,i|²).
///
/// Amplitudes in `refl` are ignored since passive elements are unit-modulus.
pub fn snr_rdars_general(
    ch: &ChannelRealization,
    mask: &[bool],
    refl: &ReflectionConfig,
    gamma_bar: f64,
) -> Result<f64> {
    check_mask(ch, mask)?;
    refl.check(ch.n_elements())?;
    let mut combined = ch.h_ub;
    let mut connected = 0.0;
    for i in 0..ch.n_elements() {
        if mask[i] {
            connected += ch.h_ur[i].norm_sqr();
        } else {
            combined += Complex64::from_polar(1.0, refl.phases[i]) * ch.h_rb[i] * ch.h_ur[i];
        }
    }
    Ok(gamma_bar * (combined.norm_sqr() + connected))
}

/// Co-phases every reflected path with the direct link. Connected elements
/// get phase 0; they do not reflect.
pub fn optimal_phases_rdars(ch: &ChannelRealization, mask: &[bool]) -> Result<ReflectionConfig> {
    check_mask(ch, mask)?;
    let reference = phase_of(ch.h_ub);
    let phases = (0..ch.n_elements())
        .map(|i| {
            if mask[i] {
                0.0
            } else {
                reference - phase_of(ch.h_rb[i] * ch.h_ur[i])
            }
        })
        .collect();
    Ok(ReflectionConfig::passive(phases))
}

/// RDARS SNR at the optimal phases:
/// γ̄·[(|h_UB| + Σ_i (1−a_i)|h_RB,i||h_UR,i|)² + Σ_i a_i|h_UR,i|²].
pub fn snr_rdars_optimal(ch: &ChannelRealization, mask: &[bool], gamma_bar: f64) -> Result<f64> {
    check_mask(ch, mask)?;
    let mut amplitude = ch.h_ub.norm();
    let mut connected = 0.0;
    for i in 0..ch.n_elements() {
        if mask[i] {
            connected += ch.h_ur[i].norm_sqr();
        } else {
            amplitude += ch.h_rb[i].norm() * ch.h_ur[i].norm();
        }
    }
    Ok(gamma_bar * (amplitude * amplitude + connected))
}

/// Passive RIS: RDARS without connected elements.
pub fn snr_ris(ch: &ChannelRealization, gamma_bar: f64) -> Result<f64> {
    snr_rdars_optimal(ch, &vec![false; ch.n_elements()], gamma_bar)
}

/// Optimal active-RIS coefficients for noise powers σ₁² (BS) and σ₂²
/// (surface): phase_i = arg(h_UB) − arg(h_UR,i·h_RB,i) and
/// amplitude_i = σ₁²|h_UR,i| / (σ₂²|h_UB||h_RB,i|).
///
/// Amplitudes are unbounded; see [`ReflectionConfig::with_amplitude_ceiling`].
pub fn active_ris_optimal_coeffs(
    ch: &ChannelRealization,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> Result<ReflectionConfig> {
    ch.check_lengths()?;
    if !(sigma1_sq > 0.0 && sigma2_sq > 0.0) {
        return Err(SimError::InvalidConfig("noise powers must be positive".into()));
    }
    let direct = ch.h_ub.norm();
    if direct == 0.0 {
        return Err(SimError::DegenerateChannel("direct link is zero"));
    }
    let reference = ch.h_ub.arg();
    let mut phases = Vec::with_capacity(ch.n_elements());
    let mut amplitudes = Vec::with_capacity(ch.n_elements());
    for (h_ur, h_rb) in ch.h_ur.iter().zip(&ch.h_rb) {
        let rb = h_rb.norm();
        if rb == 0.0 {
            return Err(SimError::DegenerateChannel("RS-BS element gain is zero"));
        }
        phases.push(reference - phase_of(h_ur * h_rb));
        amplitudes.push(sigma1_sq * h_ur.norm() / (sigma2_sq * direct * rb));
    }
    Ok(ReflectionConfig { phases, amplitudes })
}

/// Active-RIS SNR including the amplified surface noise:
/// P_t|h_UB + Σ α_i e^{jφ_i} h_RB,i h_UR,i|² / (σ₂² Σ α_i²|h_RB,i|² + σ₁²).
pub fn snr_active_general(
    ch: &ChannelRealization,
    refl: &ReflectionConfig,
    p_t: f64,
    sigma1_sq: f64,
    sigma2_sq: f64,
) -> Result<f64> {
    ch.check_lengths()?;
    refl.check(ch.n_elements())?;
    let mut signal = ch.h_ub;
    let mut forwarded_noise = 0.0;
    for i in 0..ch.n_elements() {
        signal += refl.coefficient(i) * ch.h_rb[i] * ch.h_ur[i];
        forwarded_noise += refl.amplitudes[i].powi(2) * ch.h_rb[i].norm_sqr();
    }
    Ok(p_t * signal.norm_sqr() / (sigma2_sq * forwarded_noise + sigma1_sq))
}

/// Active-RIS SNR at the optimal coefficients with equal noise powers:
/// γ̄·(|h_UB|² + ‖h_UR‖²).
pub fn snr_active_optimal(ch: &ChannelRealization, gamma_bar: f64) -> f64 {
    let ue_rs: f64 = ch.h_ur.iter().map(|h| h.norm_sqr()).sum();
    gamma_bar * (ch.h_ub.norm_sqr() + ue_rs)
}

pub fn select_connected_modes(
    ch: &ChannelRealization,
    n_connected: usize,
    rule: ConnectedSelection,
) -> Result<Vec<bool>> {
    let n = ch.n_elements();
    if n_connected > n {
        return Err(SimError::ConnectedExceedsTotal {
            connected: n_connected,
            total: n,
        });
    }
    let mut mask = vec![false; n];
    match rule {
        ConnectedSelection::FirstIndices => mask[..n_connected].fill(true),
        ConnectedSelection::LargestUeGain if n_connected > 0 => {
            let gains: Vec<f64> = ch.h_ur.iter().map(|h| h.norm_sqr()).collect();
            let mut order: Vec<usize> = (0..n).collect();
            // Strongest first, lower index first among equal gains.
            order.select_nth_unstable_by(n_connected - 1, |&a, &b| {
                gains[b].total_cmp(&gains[a]).then(a.cmp(&b))
            });
            for &i in &order[..n_connected] {
                mask[i] = true;
            }
        }
        ConnectedSelection::LargestUeGain => {}
    }
    Ok(mask)
}

pub const MAX_BRUTE_FORCE_ELEMENTS: usize = 8;
pub const MAX_BRUTE_FORCE_LEVELS: usize = 64;
/// Upper bound on evaluated grid points.
pub const MAX_BRUTE_FORCE_GRID: u64 = 1 << 30;

/// Exhaustive search of [`snr_rdars_general`] over the phase grid
/// {2πk/L}ᴺ for the reflecting elements. Validation oracle only.
pub fn brute_force_best_snr(
    ch: &ChannelRealization,
    mask: &[bool],
    phase_levels: usize,
    gamma_bar: f64,
) -> Result<f64> {
    check_mask(ch, mask)?;
    let n = ch.n_elements();
    if n > MAX_BRUTE_FORCE_ELEMENTS || phase_levels > MAX_BRUTE_FORCE_LEVELS {
        return Err(SimError::TooLarge(format!(
            "{n} elements x {phase_levels} levels (limits {MAX_BRUTE_FORCE_ELEMENTS} x {MAX_BRUTE_FORCE_LEVELS})"
        )));
    }
    if phase_levels == 0 {
        return Err(SimError::TooLarge("phase grid must have at least one level".into()));
    }

    let connected: f64 = (0..n).filter(|&i| mask[i]).map(|i| ch.h_ur[i].norm_sqr()).sum();
    // Every grid rotation of each reflected path, precomputed.
    let rotations: Vec<Complex64> = (0..phase_levels)
        .map(|k| Complex64::from_polar(1.0, TAU * k as f64 / phase_levels as f64))
        .collect();
    let paths: Vec<Vec<Complex64>> = (0..n)
        .filter(|&i| !mask[i])
        .map(|i| {
            let cascade = ch.h_rb[i] * ch.h_ur[i];
            rotations.iter().map(|r| r * cascade).collect()
        })
        .collect();

    let grid = (phase_levels as u64).checked_pow(paths.len() as u32);
    if grid.is_none_or(|g| g > MAX_BRUTE_FORCE_GRID) {
        return Err(SimError::TooLarge(format!(
            "{phase_levels}^{} grid points",
            paths.len()
        )));
    }

    fn search(partial: Complex64, rest: &[Vec<Complex64>]) -> f64 {
        match rest.split_first() {
            None => partial.norm_sqr(),
            Some((options, tail)) => options
                .iter()
                .map(|&p| search(partial + p, tail))
                .fold(0.0, f64::max),
        }
    }
    Ok(gamma_bar * (search(ch.h_ub, &paths) + connected))
}
