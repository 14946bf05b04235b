use rdars_core::SweepVariable;

/// One experiment per subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, clap::ValueEnum)]
pub enum Figure {
    /// CDF of the received SNR.
    Cdf,
    /// EE versus number of surface elements.
    EeVsN,
    /// EE versus BS–RS horizontal distance.
    EeVsXrs,
    /// EE versus BS–UE distance.
    EeVsUe,
}

impl Figure {
    pub fn name(self) -> &'static str {
        match self {
            Figure::Cdf => "cdf",
            Figure::EeVsN => "ee_vs_n",
            Figure::EeVsXrs => "ee_vs_xrs",
            Figure::EeVsUe => "ee_vs_ue",
        }
    }

    pub fn sweep_variable(self) -> SweepVariable {
        match self {
            Figure::Cdf => SweepVariable::None,
            Figure::EeVsN => SweepVariable::NumElements,
            Figure::EeVsXrs => SweepVariable::RsHorizontalX,
            Figure::EeVsUe => SweepVariable::BsUeDistance,
        }
    }

    pub fn default_elements(self) -> usize {
        match self {
            Figure::Cdf | Figure::EeVsN => 1024,
            Figure::EeVsXrs | Figure::EeVsUe => 256,
        }
    }

    /// Sweep grid used when the config does not list points.
    pub fn default_points(self) -> Vec<f64> {
        match self {
            Figure::Cdf => Vec::new(),
            Figure::EeVsN => [16, 32, 64, 128, 256, 512, 1024, 2048]
                .map(f64::from)
                .to_vec(),
            Figure::EeVsXrs => (1..=9).map(|k| 20.0 * k as f64).collect(),
            Figure::EeVsUe => (1..=12).map(|k| 25.0 * k as f64).collect(),
        }
    }

    pub fn axis_label(self) -> &'static str {
        match self {
            Figure::Cdf => "received SNR (dB)",
            Figure::EeVsN => "number of surface elements N",
            Figure::EeVsXrs => "BS-RS horizontal distance x_RS (m)",
            Figure::EeVsUe => "BS-UE distance (m)",
        }
    }
}

impl std::fmt::Display for Figure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(self.name())
    }
}
