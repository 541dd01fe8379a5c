//! Experiment configuration: one JSON document per run.

use crate::biphoton::Detection;
use crate::dispersion::{CrystalSpec, GeometrySpec, PumpSpec, Scenario, Setup};
use crate::error::{Error, Result};
use crate::io::units;
use crate::oam::{MRange, PolarGridSpec, RadialRule};
use crate::pipeline::SweepSpec;
use serde::{Deserialize, Serialize};
use std::path::{Path, PathBuf};

/// Radial extent of the single-photon grid, in units of `1 / min(w0, w1)`.
pub const AUTO_RHO_MAX_FACTOR: f64 = 8.0;
/// Radial aperture of the joint grid, in units of `1 / w0`.
pub const JOINT_APERTURE_FACTOR: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GridConfig {
    pub n_phi: usize,
    pub n_rho: usize,
    /// Outer radius (rad/m). `None` picks it from the beam widths.
    pub rho_max: Option<f64>,
    pub radial_rule: RadialRule,
}

impl GridConfig {
    fn spectrum_default() -> Self {
        Self {
            n_phi: 128,
            n_rho: 256,
            rho_max: None,
            radial_rule: RadialRule::GaussLegendre,
        }
    }

    fn joint_default() -> Self {
        Self {
            n_phi: 32,
            n_rho: 16,
            rho_max: None,
            radial_rule: RadialRule::GaussLegendre,
        }
    }

    fn resolve(&self, auto_rho_max: f64) -> PolarGridSpec {
        PolarGridSpec {
            n_phi: self.n_phi,
            n_rho: self.n_rho,
            rho_max: self.rho_max.unwrap_or(auto_rho_max),
            radial_rule: self.radial_rule,
        }
    }
}

impl Default for GridConfig {
    fn default() -> Self {
        Self::spectrum_default()
    }
}

fn joint_grid_default() -> GridConfig {
    GridConfig::joint_default()
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ConvergenceConfig {
    pub tol: f64,
    pub max_doublings: usize,
}

impl Default for ConvergenceConfig {
    fn default() -> Self {
        Self {
            tol: 1e-4,
            max_doublings: 3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisConfig {
    pub m_range: MRange,
    pub joint_m_range: MRange,
    /// Largest weight tolerated at either end of an m window.
    pub tail_tolerance: f64,
    /// Depth inside the crystal for pump walk-off runs (m).
    #[serde(deserialize_with = "units::length")]
    pub z_position: f64,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        Self {
            m_range: MRange::symmetric(20),
            joint_m_range: MRange::symmetric(10),
            tail_tolerance: 1e-4,
            z_position: 5e-3,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OutputFormat {
    #[default]
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputConfig {
    pub path: Option<PathBuf>,
    pub format: OutputFormat,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub pump: PumpSpec,
    pub crystal: CrystalSpec,
    pub geometry: GeometrySpec,
    pub detection: Detection,
    pub grid: GridConfig,
    #[serde(default = "joint_grid_default")]
    pub joint_grid: GridConfig,
    pub convergence: ConvergenceConfig,
    pub analysis: AnalysisConfig,
    pub output: OutputConfig,
    /// Used by the `sweep` subcommand when no parameter is given on the command line.
    pub sweep: Option<SweepSpec>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            pump: PumpSpec::default(),
            crystal: CrystalSpec::default(),
            geometry: GeometrySpec::default(),
            detection: Detection::IdlerAtZero,
            grid: GridConfig::spectrum_default(),
            joint_grid: GridConfig::joint_default(),
            convergence: ConvergenceConfig::default(),
            analysis: AnalysisConfig::default(),
            output: OutputConfig::default(),
            sweep: None,
        }
    }
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self =
            serde_json::from_str(text).map_err(|e| Error::config("<document>", e.to_string()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Quantities in plain SI numbers, so that the document reads back identically.
    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("config serializes")
    }

    pub fn validate(&self) -> Result<()> {
        self.setup()?;
        if self.pump.amplitude_e0 == 0.0 || !self.pump.amplitude_e0.is_finite() {
            return Err(Error::config(
                "pump.amplitude_e0",
                "must be finite and nonzero",
            ));
        }
        match self.geometry.scenario {
            Scenario::NonCollinear if !(self.geometry.theta > 0.0) => {
                return Err(Error::config(
                    "geometry.theta",
                    "non_collinear needs theta > 0",
                ));
            }
            Scenario::FullConeWalkoff if !(self.crystal.walkoff_rho0 > 0.0) => {
                return Err(Error::config(
                    "crystal.walkoff_rho0",
                    "full_cone_walkoff needs rho0 > 0",
                ));
            }
            _ => {}
        }
        if let Detection::IdlerGaussian { w1 } = self.detection {
            if !(w1 > 0.0 && w1.is_finite()) {
                return Err(Error::config("detection.w1", "must be > 0"));
            }
        }
        let z = self.analysis.z_position;
        if !(0.0..=self.crystal.length_l).contains(&z) {
            return Err(Error::config("analysis.z_position", "must lie in [0, L]"));
        }
        for (name, g) in [("grid", &self.grid), ("joint_grid", &self.joint_grid)] {
            if let Some(r) = g.rho_max {
                if !(r > 0.0 && r.is_finite()) {
                    return Err(Error::config(name, "rho_max must be > 0"));
                }
            }
        }
        self.spectrum_grid()
            .validate()
            .map_err(|e| Error::config("grid", e.to_string()))?;
        self.joint_grid()
            .validate()
            .map_err(|e| Error::config("joint_grid", e.to_string()))?;
        for (name, r) in [
            ("analysis.m_range", self.analysis.m_range),
            ("analysis.joint_m_range", self.analysis.joint_m_range),
        ] {
            if r.min > r.max {
                return Err(Error::config(name, "min must not exceed max"));
            }
        }
        self.analysis
            .m_range
            .check_nyquist(self.grid.n_phi)
            .map_err(|e| Error::config("analysis.m_range", e.to_string()))?;
        self.analysis
            .joint_m_range
            .check_nyquist(self.joint_grid.n_phi)
            .map_err(|e| Error::config("analysis.joint_m_range", e.to_string()))?;
        if !(self.analysis.tail_tolerance > 0.0) {
            return Err(Error::config("analysis.tail_tolerance", "must be > 0"));
        }
        if !(self.convergence.tol > 0.0) {
            return Err(Error::config("convergence.tol", "must be > 0"));
        }
        if self.convergence.max_doublings == 0 {
            return Err(Error::config("convergence.max_doublings", "must be >= 1"));
        }
        Ok(())
    }

    pub fn setup(&self) -> Result<Setup> {
        Setup::new(self.pump, self.crystal, self.geometry)
    }

    /// Narrowest transverse scale among the pump and the idler projection.
    pub fn effective_waist(&self) -> f64 {
        match self.detection {
            Detection::IdlerAtZero => self.pump.waist_w0,
            Detection::IdlerGaussian { w1 } => self.pump.waist_w0.min(w1),
        }
    }

    pub fn spectrum_grid(&self) -> PolarGridSpec {
        self.grid
            .resolve(AUTO_RHO_MAX_FACTOR / self.effective_waist())
    }

    pub fn pump_grid(&self) -> PolarGridSpec {
        self.grid.resolve(AUTO_RHO_MAX_FACTOR / self.pump.waist_w0)
    }

    pub fn joint_grid(&self) -> PolarGridSpec {
        self.joint_grid
            .resolve(JOINT_APERTURE_FACTOR / self.pump.waist_w0)
    }
}
