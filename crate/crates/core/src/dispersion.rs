//! Physical configuration, dispersion relations, frame mappings and phase mismatch.
//!
//! Everything is SI: metres, radians, rad/m, rad/s. Signal and idler are
//! frequency degenerate, `ω_s = ω_i = ω_p / 2`.

use crate::error::{Error, Result};
use crate::io::units;
use serde::{Deserialize, Serialize};
use std::ops::{Add, Neg, Sub};

pub const SPEED_OF_LIGHT: f64 = 299_792_458.0;

/// Transverse wavevector (rad/m).
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct Wavevector2 {
    pub x: f64,
    pub y: f64,
}

impl Wavevector2 {
    pub const ZERO: Self = Self { x: 0.0, y: 0.0 };

    pub fn new(x: f64, y: f64) -> Self {
        Self { x, y }
    }

    pub fn from_polar(rho: f64, phi: f64) -> Self {
        let (s, c) = phi.sin_cos();
        Self::new(rho * c, rho * s)
    }

    pub fn norm_sqr(self) -> f64 {
        self.x * self.x + self.y * self.y
    }

    pub fn norm(self) -> f64 {
        self.x.hypot(self.y)
    }

    pub fn rotated(self, alpha: f64) -> Self {
        let (s, c) = alpha.sin_cos();
        Self::new(c * self.x - s * self.y, s * self.x + c * self.y)
    }
}

impl Add for Wavevector2 {
    type Output = Self;
    fn add(self, o: Self) -> Self {
        Self::new(self.x + o.x, self.y + o.y)
    }
}

impl Sub for Wavevector2 {
    type Output = Self;
    fn sub(self, o: Self) -> Self {
        Self::new(self.x - o.x, self.y - o.y)
    }
}

impl Neg for Wavevector2 {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.x, -self.y)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PumpSpec {
    /// Vacuum wavelength (m).
    #[serde(deserialize_with = "units::length")]
    pub wavelength: f64,
    /// Waist `w0` (m); the angular spectrum falls as `exp(-|p|² w0² / 4)`.
    #[serde(deserialize_with = "units::length")]
    pub waist_w0: f64,
    /// Pump winding number `m_p >= 0`.
    pub oam_mp: u32,
    pub amplitude_e0: f64,
}

impl Default for PumpSpec {
    fn default() -> Self {
        Self {
            wavelength: 405e-9,
            waist_w0: 100e-6,
            oam_mp: 0,
            amplitude_e0: 1.0,
        }
    }
}

/// Quasi-phase-matching grating wavevector handling.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum QpmMode {
    /// Grating that zeroes the mismatch at the centre of the emission bundle.
    AutoCenter,
    ExplicitGrating {
        k_g: f64,
    },
    None,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CrystalSpec {
    #[serde(deserialize_with = "units::length")]
    pub length_l: f64,
    pub n_pump: f64,
    pub n_signal: f64,
    pub n_idler: f64,
    /// Pump Poynting-vector walk-off angle (rad); 0 for noncritical.
    #[serde(deserialize_with = "units::angle")]
    pub walkoff_rho0: f64,
    pub qpm_mode: QpmMode,
}

impl Default for CrystalSpec {
    fn default() -> Self {
        Self {
            length_l: 10e-3,
            n_pump: 1.8,
            n_signal: 1.8,
            n_idler: 1.8,
            walkoff_rho0: 0.0,
            qpm_mode: QpmMode::AutoCenter,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Scenario {
    FullConeNoncritical,
    NonCollinear,
    FullConeWalkoff,
}

impl Scenario {
    pub fn name(self) -> &'static str {
        match self {
            Scenario::FullConeNoncritical => "full_cone_noncritical",
            Scenario::NonCollinear => "non_collinear",
            Scenario::FullConeWalkoff => "full_cone_walkoff",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct GeometrySpec {
    /// Non-collinear half-angle; signal at `+θ`, idler at `-θ`. Ignored by full-cone scenarios.
    #[serde(deserialize_with = "units::angle")]
    pub theta: f64,
    pub scenario: Scenario,
}

impl Default for GeometrySpec {
    fn default() -> Self {
        Self {
            theta: 1f64.to_radians(),
            scenario: Scenario::NonCollinear,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PhotonFrequencies {
    pub omega_p: f64,
    pub omega_s: f64,
    pub omega_i: f64,
}

impl PhotonFrequencies {
    pub fn degenerate(pump_wavelength: f64) -> Self {
        let omega_p = 2.0 * std::f64::consts::PI * SPEED_OF_LIGHT / pump_wavelength;
        let omega_s = omega_p / 2.0;
        Self {
            omega_p,
            omega_s,
            omega_i: omega_p - omega_s,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Photon {
    Pump,
    Signal,
    Idler,
}

impl Photon {
    fn name(self) -> &'static str {
        match self {
            Photon::Pump => "pump",
            Photon::Signal => "signal",
            Photon::Idler => "idler",
        }
    }
}

/// Which down-converted photon a local frame belongs to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arm {
    Signal,
    Idler,
}

/// Validated physical configuration with cached on-axis wavevectors.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Setup {
    pub pump: PumpSpec,
    pub crystal: CrystalSpec,
    pub geometry: GeometrySpec,
    pub frequencies: PhotonFrequencies,
    k_pump: f64,
    k_signal: f64,
    k_idler: f64,
    grating: f64,
}

impl Setup {
    pub fn new(pump: PumpSpec, crystal: CrystalSpec, geometry: GeometrySpec) -> Result<Self> {
        if !(pump.wavelength > 0.0) {
            return Err(Error::config("pump.wavelength", "must be > 0"));
        }
        if !(pump.waist_w0 > 0.0) {
            return Err(Error::config("pump.waist_w0", "must be > 0"));
        }
        if !(crystal.length_l > 0.0) {
            return Err(Error::config("crystal.length_l", "must be > 0"));
        }
        for (name, n) in [
            ("crystal.n_pump", crystal.n_pump),
            ("crystal.n_signal", crystal.n_signal),
            ("crystal.n_idler", crystal.n_idler),
        ] {
            if !(n > 1.0) {
                return Err(Error::config(name, "refractive index must be > 1"));
            }
        }
        let half_pi = std::f64::consts::FRAC_PI_2;
        if !(0.0..half_pi).contains(&crystal.walkoff_rho0) {
            return Err(Error::config(
                "crystal.walkoff_rho0",
                "must lie in [0, π/2)",
            ));
        }
        if !(0.0..half_pi).contains(&geometry.theta) {
            return Err(Error::config("geometry.theta", "must lie in [0, π/2)"));
        }

        let frequencies = PhotonFrequencies::degenerate(pump.wavelength);
        let mut setup = Self {
            pump,
            crystal,
            geometry,
            frequencies,
            k_pump: frequencies.omega_p * crystal.n_pump / SPEED_OF_LIGHT,
            k_signal: frequencies.omega_s * crystal.n_signal / SPEED_OF_LIGHT,
            k_idler: frequencies.omega_i * crystal.n_idler / SPEED_OF_LIGHT,
            grating: 0.0,
        };
        setup.grating = match crystal.qpm_mode {
            QpmMode::AutoCenter => qpm_grating_for_center(&setup),
            QpmMode::ExplicitGrating { k_g } => k_g,
            QpmMode::None => 0.0,
        };
        Ok(setup)
    }

    /// `ω_j n_j / c`.
    pub fn k(&self, photon: Photon) -> f64 {
        match photon {
            Photon::Pump => self.k_pump,
            Photon::Signal => self.k_signal,
            Photon::Idler => self.k_idler,
        }
    }

    /// Grating wavevector actually subtracted from every mismatch.
    pub fn grating(&self) -> f64 {
        self.grating
    }

    pub fn with_scenario(&self, scenario: Scenario) -> Result<Self> {
        let mut g = self.geometry;
        g.scenario = scenario;
        Setup::new(self.pump, self.crystal, g)
    }
}

/// `K_j(P) = [(ω_j n_j / c)² - |P|²]^{1/2}`.
pub fn longitudinal_wavevector(
    photon: Photon,
    transverse: Wavevector2,
    setup: &Setup,
) -> Result<f64> {
    let k = setup.k(photon);
    let t2 = transverse.norm_sqr();
    if t2 > k * k {
        return Err(Error::EvanescentWave {
            photon: photon.name(),
            transverse: t2.sqrt(),
            k_max: k,
        });
    }
    Ok((k * k - t2).sqrt())
}

/// Lab-frame transverse wavevector of a photon described in its own frame,
/// tilted by `+θ` (signal) or `-θ` (idler) about the x axis.
pub fn local_to_lab(arm: Arm, p_local: Wavevector2, k_long: f64, theta: f64) -> Wavevector2 {
    let t = match arm {
        Arm::Signal => theta,
        Arm::Idler => -theta,
    };
    let (s, c) = t.sin_cos();
    Wavevector2::new(p_local.x, c * p_local.y - s * k_long)
}

/// Lab-frame longitudinal component for the same rotation as [`local_to_lab`].
pub fn local_to_lab_longitudinal(arm: Arm, p_local: Wavevector2, k_long: f64, theta: f64) -> f64 {
    let t = match arm {
        Arm::Signal => theta,
        Arm::Idler => -theta,
    };
    let (s, c) = t.sin_cos();
    s * p_local.y + c * k_long
}

/// `Δk = K_p(P+Q) - K_s(P) - K_i(Q) - k_G`.
pub fn delta_k_collinear(p: Wavevector2, q: Wavevector2, setup: &Setup) -> Result<f64> {
    let kp = longitudinal_wavevector(Photon::Pump, p + q, setup)?;
    let ks = longitudinal_wavevector(Photon::Signal, p, setup)?;
    let ki = longitudinal_wavevector(Photon::Idler, q, setup)?;
    Ok(kp - ks - ki - setup.grating())
}

/// `(δ_k, δ_0)` for the non-collinear bundle.
///
/// `δ_k = k_p - (k_s + k_i) cos θ - (p_y - q_y) sin θ - k_G` is the lab-frame
/// longitudinal mismatch. `δ_0` is the lab-frame y component of the total
/// down-converted transverse wavevector, `(p_y + q_y) cos θ - (k_s - k_i) sin θ`,
/// which is the y argument of the pump.
pub fn delta_k_noncollinear(p: Wavevector2, q: Wavevector2, setup: &Setup) -> Result<(f64, f64)> {
    let theta = setup.geometry.theta;
    let ks = longitudinal_wavevector(Photon::Signal, p, setup)?;
    let ki = longitudinal_wavevector(Photon::Idler, q, setup)?;
    let z_sum = local_to_lab_longitudinal(Arm::Signal, p, ks, theta)
        + local_to_lab_longitudinal(Arm::Idler, q, ki, theta);
    let delta_k = setup.k(Photon::Pump) - z_sum - setup.grating();
    let delta_0 =
        local_to_lab(Arm::Signal, p, ks, theta).y + local_to_lab(Arm::Idler, q, ki, theta).y;
    Ok((delta_k, delta_0))
}

/// Collinear mismatch plus the pump walk-off tilt `(P_x + Q_x) tan ρ0`.
pub fn delta_k_walkoff(p: Wavevector2, q: Wavevector2, setup: &Setup) -> Result<f64> {
    Ok(delta_k_collinear(p, q, setup)? + (p.x + q.x) * setup.crystal.walkoff_rho0.tan())
}

/// Grating wavevector that makes the scenario's mismatch vanish at `P = Q = 0`.
pub fn qpm_grating_for_center(setup: &Setup) -> f64 {
    let kp = setup.k(Photon::Pump);
    let ks = setup.k(Photon::Signal);
    let ki = setup.k(Photon::Idler);
    match setup.geometry.scenario {
        Scenario::NonCollinear => kp - (ks + ki) * setup.geometry.theta.cos(),
        Scenario::FullConeNoncritical | Scenario::FullConeWalkoff => kp - ks - ki,
    }
}

/// `L_nc = w0 / sin θ`.
pub fn noncollinear_length(w0: f64, theta: f64) -> Result<f64> {
    if theta == 0.0 {
        return Err(Error::DegenerateAngle {
            quantity: "non-collinear length",
        });
    }
    Ok(w0 / theta.sin())
}

/// `L_w = w0 / tan ρ0`.
pub fn walkoff_length(w0: f64, rho0: f64) -> Result<f64> {
    if rho0 == 0.0 {
        return Err(Error::DegenerateAngle {
            quantity: "walk-off length",
        });
    }
    Ok(w0 / rho0.tan())
}
