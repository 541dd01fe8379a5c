//! End-to-end runs: config in, converged spectra and tables out.

use crate::biphoton::{reduced_signal_field, BiphotonSample};
use crate::dispersion::{noncollinear_length, walkoff_length, Photon, Scenario};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::io::config::ExperimentConfig;
use crate::io::units;
use crate::numerics::convergence::{converge_by_doubling, ConvergenceReport};
use crate::oam::{
    joint_oam_weights, oam_weights, selection_rule_violation, JointOamSpectrum, OamSpectrum,
    PolarGridSpec,
};
use crate::pump::{pump_oam_distribution, PumpWalkoffProfile};
use serde::{Deserialize, Serialize};

/// Weight above which a pump mode counts as populated.
pub const SIGNIFICANT_MODE_WEIGHT: f64 = 0.01;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SpectrumRun {
    pub scenario: Scenario,
    pub expected_m: i32,
    pub spectrum: OamSpectrum,
    pub violation_weight: f64,
    pub convergence: ConvergenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct JointRun {
    pub scenario: Scenario,
    pub m_pump: i32,
    pub spectrum: JointOamSpectrum,
    pub off_rule_weight: f64,
    pub convergence: ConvergenceReport,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PumpWalkoffRun {
    pub z: f64,
    pub spectrum: OamSpectrum,
    pub participation_number: f64,
    pub significant_modes: usize,
    pub convergence: ConvergenceReport,
}

/// Signal spectrum on one grid, idler projected as configured.
pub fn signal_spectrum_on(
    cfg: &ExperimentConfig,
    grid: &PolarGridSpec,
    exec: Execution,
) -> Result<OamSpectrum> {
    let field = reduced_signal_field(&cfg.setup()?, cfg.detection)?;
    oam_weights(&|r, p| field.polar(r, p), grid, cfg.analysis.m_range, exec)
}

pub fn joint_spectrum_on(
    cfg: &ExperimentConfig,
    grid: &PolarGridSpec,
    exec: Execution,
) -> Result<JointOamSpectrum> {
    let biphoton = BiphotonSample::new(cfg.setup()?);
    let rings = grid.radial_nodes();
    let m = cfg.analysis.joint_m_range;
    joint_oam_weights(
        &|rs, ps, ri, pi| biphoton.polar(rs, ps, ri, pi),
        &rings,
        &rings,
        grid.n_phi,
        m,
        m,
        exec,
    )
}

pub fn pump_spectrum_on(
    cfg: &ExperimentConfig,
    z: f64,
    grid: &PolarGridSpec,
    exec: Execution,
) -> Result<OamSpectrum> {
    pump_oam_distribution(&pump_profile(cfg, z)?, grid, cfg.analysis.m_range, exec)
}

fn pump_profile(cfg: &ExperimentConfig, z: f64) -> Result<PumpWalkoffProfile> {
    if !(0.0..=cfg.crystal.length_l).contains(&z) {
        return Err(Error::config("analysis.z_position", "must lie in [0, L]"));
    }
    let setup = cfg.setup()?;
    PumpWalkoffProfile::new(cfg.pump, cfg.crystal.walkoff_rho0, z, setup.k(Photon::Pump))
}

pub fn run_spectrum(cfg: &ExperimentConfig, exec: Execution) -> Result<SpectrumRun> {
    cfg.validate()?;
    let field = reduced_signal_field(&cfg.setup()?, cfg.detection)?;
    let m = cfg.analysis.m_range;
    let (spectrum, convergence) = converge_by_doubling(
        |g| oam_weights(&|r, p| field.polar(r, p), g, m, exec),
        cfg.spectrum_grid(),
        cfg.convergence.tol,
        cfg.convergence.max_doublings,
    )?;
    spectrum.ensure_tails(cfg.analysis.tail_tolerance)?;
    let expected_m = cfg.pump.oam_mp as i32;
    Ok(SpectrumRun {
        scenario: cfg.geometry.scenario,
        expected_m,
        violation_weight: selection_rule_violation(&spectrum, expected_m),
        spectrum,
        convergence,
    })
}

/// Joint spectrum over the configured aperture. Doubling refines the
/// sampling of that aperture; the aperture itself stays fixed.
pub fn run_joint(cfg: &ExperimentConfig, exec: Execution) -> Result<JointRun> {
    cfg.validate()?;
    let biphoton = BiphotonSample::new(cfg.setup()?);
    let m = cfg.analysis.joint_m_range;
    let (spectrum, convergence) = converge_by_doubling(
        |g| {
            let rings = g.radial_nodes();
            joint_oam_weights(
                &|rs, ps, ri, pi| biphoton.polar(rs, ps, ri, pi),
                &rings,
                &rings,
                g.n_phi,
                m,
                m,
                exec,
            )
        },
        cfg.joint_grid(),
        cfg.convergence.tol,
        cfg.convergence.max_doublings,
    )?;
    spectrum.ensure_tails(cfg.analysis.tail_tolerance)?;
    let m_pump = cfg.pump.oam_mp as i32;
    Ok(JointRun {
        scenario: cfg.geometry.scenario,
        m_pump,
        off_rule_weight: spectrum.off_rule_weight(m_pump),
        spectrum,
        convergence,
    })
}

pub fn run_pump_walkoff(cfg: &ExperimentConfig, z: f64, exec: Execution) -> Result<PumpWalkoffRun> {
    cfg.validate()?;
    let profile = pump_profile(cfg, z)?;
    let m = cfg.analysis.m_range;
    let (spectrum, convergence) = converge_by_doubling(
        |g| pump_oam_distribution(&profile, g, m, exec),
        cfg.pump_grid(),
        cfg.convergence.tol,
        cfg.convergence.max_doublings,
    )?;
    spectrum.ensure_tails(cfg.analysis.tail_tolerance)?;
    Ok(PumpWalkoffRun {
        z,
        participation_number: spectrum.participation_number(),
        significant_modes: spectrum.modes_above(SIGNIFICANT_MODE_WEIGHT),
        spectrum,
        convergence,
    })
}

/// A length that may be unbounded, written as `"inf"` when it is.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum CharacteristicLength {
    Finite(f64),
    Infinite,
}

impl CharacteristicLength {
    fn from_result(r: Result<f64>) -> Result<Self> {
        match r {
            Ok(v) => Ok(Self::Finite(v)),
            Err(Error::DegenerateAngle { .. }) => Ok(Self::Infinite),
            Err(e) => Err(e),
        }
    }

    pub fn value(self) -> f64 {
        match self {
            Self::Finite(v) => v,
            Self::Infinite => f64::INFINITY,
        }
    }
}

impl Serialize for CharacteristicLength {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Self::Finite(v) => s.serialize_f64(*v),
            Self::Infinite => s.serialize_str("inf"),
        }
    }
}

/// Ratio `L / L_nc` below which the crystal counts as short.
pub const SHORT_CRYSTAL_RATIO: f64 = 0.5;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Regimes {
    /// `L ≪ L_nc`: the non-collinear spectrum stays near the selection rule.
    pub short_against_noncollinear: bool,
    /// `L >= L_nc`: spiral broadening from the tilted geometry.
    pub beyond_noncollinear: bool,
    /// `L > L_w`: the pump drifts more than a waist inside the crystal.
    pub beyond_walkoff: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LengthsReport {
    pub length_l: f64,
    pub l_nc: CharacteristicLength,
    pub l_w: CharacteristicLength,
    pub regimes: Regimes,
}

pub fn run_lengths(cfg: &ExperimentConfig) -> Result<LengthsReport> {
    cfg.setup()?;
    let w0 = cfg.pump.waist_w0;
    let l = cfg.crystal.length_l;
    let l_nc = CharacteristicLength::from_result(noncollinear_length(w0, cfg.geometry.theta))?;
    let l_w = CharacteristicLength::from_result(walkoff_length(w0, cfg.crystal.walkoff_rho0))?;
    Ok(LengthsReport {
        length_l: l,
        l_nc,
        l_w,
        regimes: Regimes {
            short_against_noncollinear: l / l_nc.value() < SHORT_CRYSTAL_RATIO,
            beyond_noncollinear: l >= l_nc.value(),
            beyond_walkoff: l > l_w.value(),
        },
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepParameter {
    WaistW0,
    Theta,
    LengthL,
    WalkoffRho0,
    ZPosition,
}

impl SweepParameter {
    pub fn name(self) -> &'static str {
        match self {
            Self::WaistW0 => "waist_w0",
            Self::Theta => "theta",
            Self::LengthL => "length_l",
            Self::WalkoffRho0 => "walkoff_rho0",
            Self::ZPosition => "z_position",
        }
    }

    pub fn apply(self, cfg: &mut ExperimentConfig, value: f64) {
        match self {
            Self::WaistW0 => cfg.pump.waist_w0 = value,
            Self::Theta => cfg.geometry.theta = value,
            Self::LengthL => cfg.crystal.length_l = value,
            Self::WalkoffRho0 => cfg.crystal.walkoff_rho0 = value,
            Self::ZPosition => cfg.analysis.z_position = value,
        }
    }

    /// Grid used when a sweep names no values.
    pub fn default_values(self) -> Option<Vec<f64>> {
        match self {
            Self::Theta => Some([0.5, 1.0, 2.0].map(f64::to_radians).to_vec()),
            Self::WaistW0 => Some([100e-6, 200e-6, 400e-6, 700e-6, 1000e-6].to_vec()),
            _ => None,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepMetric {
    #[default]
    ViolationWeight,
    FullSpectrum,
    PumpOamWidth,
}

impl SweepMetric {
    pub fn name(self) -> &'static str {
        match self {
            Self::ViolationWeight => "violation_weight",
            Self::FullSpectrum => "full_spectrum",
            Self::PumpOamWidth => "pump_oam_width",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum SweepScale {
    #[default]
    Linear,
    Log,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum SweepValues {
    List(#[serde(deserialize_with = "units::quantity_list")] Vec<f64>),
    Range {
        #[serde(deserialize_with = "units::quantity")]
        from: f64,
        #[serde(deserialize_with = "units::quantity")]
        to: f64,
        steps: usize,
        #[serde(default)]
        scale: SweepScale,
    },
}

impl SweepValues {
    pub fn expand(&self) -> Result<Vec<f64>> {
        let v = match *self {
            Self::List(ref v) => v.clone(),
            Self::Range {
                from,
                to,
                steps,
                scale,
            } => {
                if steps < 2 {
                    return Err(Error::config("sweep.values.steps", "must be >= 2"));
                }
                let t = |k: usize| k as f64 / (steps - 1) as f64;
                match scale {
                    SweepScale::Linear => (0..steps).map(|k| from + (to - from) * t(k)).collect(),
                    SweepScale::Log => {
                        if !(from > 0.0 && to > 0.0) {
                            return Err(Error::config(
                                "sweep.values",
                                "log scale needs positive bounds",
                            ));
                        }
                        let (a, b) = (from.ln(), to.ln());
                        (0..steps).map(|k| (a + (b - a) * t(k)).exp()).collect()
                    }
                }
            }
        };
        if v.is_empty() {
            return Err(Error::config("sweep.values", "no values"));
        }
        if v.iter().any(|x| !x.is_finite()) {
            return Err(Error::config("sweep.values", "values must be finite"));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepSpec {
    pub parameter: SweepParameter,
    #[serde(default)]
    pub values: Option<SweepValues>,
    #[serde(default)]
    pub metric: SweepMetric,
}

impl SweepSpec {
    pub fn values(&self) -> Result<Vec<f64>> {
        match &self.values {
            Some(v) => v.expand(),
            None => self
                .parameter
                .default_values()
                .ok_or_else(|| Error::config("sweep.values", "required for this parameter")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(untagged)]
pub enum RowMetric {
    Scalar(f64),
    Spectrum(OamSpectrum),
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepRow {
    pub value: f64,
    pub converged: bool,
    pub metric: Option<RowMetric>,
    /// Why the row has no metric.
    pub error: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepTable {
    pub parameter: SweepParameter,
    pub metric: SweepMetric,
    pub rows: Vec<SweepRow>,
}

impl SweepTable {
    pub fn all_converged(&self) -> bool {
        self.rows.iter().all(|r| r.converged)
    }
}

/// One row per value, evaluated independently. Rows run in parallel under
/// `exec`; each row is sequential inside. A failing row keeps its error and
/// does not stop the others.
pub fn run_sweep(cfg: &ExperimentConfig, sweep: &SweepSpec, exec: Execution) -> Result<SweepTable> {
    let values = sweep.values()?;
    let rows = exec.map(values.len(), |i| sweep_row(cfg, sweep, values[i]));
    Ok(SweepTable {
        parameter: sweep.parameter,
        metric: sweep.metric,
        rows,
    })
}

fn sweep_row(base: &ExperimentConfig, sweep: &SweepSpec, value: f64) -> SweepRow {
    let mut cfg = base.clone();
    sweep.parameter.apply(&mut cfg, value);
    let inner = Execution::Sequential;
    let outcome = match sweep.metric {
        SweepMetric::ViolationWeight => run_spectrum(&cfg, inner).map(|r| {
            (
                RowMetric::Scalar(r.violation_weight),
                r.convergence.converged,
            )
        }),
        SweepMetric::FullSpectrum => run_spectrum(&cfg, inner)
            .map(|r| (RowMetric::Spectrum(r.spectrum), r.convergence.converged)),
        SweepMetric::PumpOamWidth => {
            run_pump_walkoff(&cfg, cfg.analysis.z_position, inner).map(|r| {
                (
                    RowMetric::Scalar(r.participation_number),
                    r.convergence.converged,
                )
            })
        }
    };
    match outcome {
        Ok((metric, converged)) => SweepRow {
            value,
            converged,
            metric: Some(metric),
            error: None,
        },
        Err(e) => SweepRow {
            value,
            converged: false,
            metric: None,
            error: Some(e.to_string()),
        },
    }
}
