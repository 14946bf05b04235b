//! Link-level Monte-Carlo simulation of uplinks assisted by a passive RIS,
//! an active RIS, or an RDARS (reconfigurable distributed antenna and
//! reflecting surface) at sub-6 GHz and mmWave.
//!
//! - [`channel`]: geometry, 3GPP path loss, fading, seeded per-trial streams.
//! - [`surfaces`]: MRC SNR expressions and optimal surface configurations.
//! - [`power`]: circuit power models and energy efficiency.
//! - [`experiments`]: Monte-Carlo engine, CDF and sweep drivers.

pub mod channel;
pub mod error;
pub mod experiments;
pub mod power;
pub mod surfaces;
pub mod units;

pub use channel::{
    distance, draw_channels, draw_fading, path_loss_db, Band, ChannelModel, ChannelRealization,
    FadingKind, LinkFading, LinkModel, PathLossModel, Position3D, RadioConfig, Scene, TrialStreams,
};
pub use error::{Result, SimError};
pub use experiments::{
    empirical_cdf, run_cdf, run_sweep, run_trial, with_workers, EeAveraging, ExperimentConfig,
    SweepResult, SweepRow, SweepSpec, SweepVariable,
};
pub use power::{EeSample, PowerConfig};
pub use surfaces::{ConnectedSelection, ReflectionConfig, SurfaceKind, SurfaceSpec};
