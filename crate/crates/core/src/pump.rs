//! Pump angular spectrum, its binomial spiral form, and walk-off evolution.
//!
//! Inside a birefringent crystal the pump energy drifts along x by `z tan ρ0`.
//! In the transverse-wavevector domain that drift is the pure phase
//! `exp(i ρ z tan ρ0 cos φ)`, which Jacobi–Anger turns into the spiral sum
//! `Σ_n i^n J_n(ρ z tan ρ0) e^{i n φ}`. Diffraction adds the radial phase
//! `exp(-i ρ² z / (2 k_p))`.

use crate::dispersion::{PumpSpec, Wavevector2};
use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::bessel::{bessel_j_ladder, MAX_ORDER};
use crate::oam::{oam_weights, MRange, OamSpectrum, PolarGridSpec};
use num_complex::Complex64;

/// Spiral-sum terms are kept until `|J_n(a_max)|` drops below this.
pub const SPIRAL_TAIL_TOLERANCE: f64 = 1e-12;

/// `E_0 (p_x + i p_y)^{m_p} exp(-|p|² w0² / 4)`.
pub fn pump_angular_amplitude(p: Wavevector2, spec: &PumpSpec) -> Complex64 {
    let envelope = spec.amplitude_e0 * (-p.norm_sqr() * spec.waist_w0 * spec.waist_w0 / 4.0).exp();
    Complex64::new(p.x, p.y).powu(spec.oam_mp) * envelope
}

/// Pump at `P + Q` from the polar coordinates of `P` and `Q`, through
/// `|P+Q|² = ρ_s² + ρ_i² + 2 ρ_s ρ_i cos(φ_s - φ_i)` and
/// `(ρ_s e^{iφ_s} + ρ_i e^{iφ_i})^{m_p}`, the summed form of [`binomial_spiral_terms`].
pub fn pump_sum_argument(
    rho_s: f64,
    phi_s: f64,
    rho_i: f64,
    phi_i: f64,
    spec: &PumpSpec,
) -> Complex64 {
    let sum = Complex64::from_polar(rho_s, phi_s) + Complex64::from_polar(rho_i, phi_i);
    sum.powu(spec.oam_mp) * sum_envelope(rho_s, phi_s, rho_i, phi_i, spec)
}

fn sum_envelope(rho_s: f64, phi_s: f64, rho_i: f64, phi_i: f64, spec: &PumpSpec) -> f64 {
    let w2 = spec.waist_w0 * spec.waist_w0;
    let modulus2 = rho_s * rho_s + rho_i * rho_i + 2.0 * rho_s * rho_i * (phi_s - phi_i).cos();
    spec.amplitude_e0 * (-modulus2.max(0.0) * w2 / 4.0).exp()
}

/// Binomial terms `C(m_p, l) ρ_s^l ρ_i^{m_p-l} e^{i l φ_s} e^{i (m_p-l) φ_i}`, envelope included,
/// indexed by the signal winding `l`. Their sum is [`pump_sum_argument`]; summing
/// them directly loses relative accuracy where `P + Q` nearly cancels.
pub fn binomial_spiral_terms(
    rho_s: f64,
    phi_s: f64,
    rho_i: f64,
    phi_i: f64,
    spec: &PumpSpec,
) -> Vec<Complex64> {
    let envelope = sum_envelope(rho_s, phi_s, rho_i, phi_i, spec);
    let m = spec.oam_mp;
    let mut binom = 1.0f64;
    (0..=m)
        .map(|l| {
            if l > 0 {
                binom = binom * (m - l + 1) as f64 / l as f64;
            }
            let radial = rho_s.powi(l as i32) * rho_i.powi((m - l) as i32);
            let phase = l as f64 * phi_s + (m - l) as f64 * phi_i;
            Complex64::from_polar(binom * radial * envelope, phase)
        })
        .collect()
}

/// Pump angular spectrum at depth `z` inside a walk-off crystal.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PumpWalkoffProfile {
    pub spec: PumpSpec,
    pub rho0: f64,
    pub z: f64,
    /// On-axis pump wavevector in the crystal (rad/m).
    pub k_p0: f64,
}

impl PumpWalkoffProfile {
    pub fn new(spec: PumpSpec, rho0: f64, z: f64, k_p0: f64) -> Result<Self> {
        if !(z >= 0.0) || !z.is_finite() {
            return Err(Error::config("z", "position must be >= 0"));
        }
        if !(0.0..std::f64::consts::FRAC_PI_2).contains(&rho0) {
            return Err(Error::config("walkoff_rho0", "must lie in [0, π/2)"));
        }
        Ok(Self {
            spec,
            rho0,
            z,
            k_p0,
        })
    }

    /// Transverse drift `z tan ρ0` (m).
    pub fn displacement(&self) -> f64 {
        self.z * self.rho0.tan()
    }

    /// Radially symmetric part: Gaussian, vortex modulus and diffraction phase.
    pub fn envelope(&self, rho: f64) -> Complex64 {
        let w2 = self.spec.waist_w0 * self.spec.waist_w0;
        let exponent = Complex64::new(
            -rho * rho * w2 / 4.0,
            -rho * rho * self.z / (2.0 * self.k_p0),
        );
        exponent.exp() * self.spec.amplitude_e0 * rho.powi(self.spec.oam_mp as i32)
    }

    /// Spiral sum truncated for Bessel arguments up to `rho_max · z tan ρ0`.
    pub fn expansion(&self, rho_max: f64) -> Result<SpiralExpansion> {
        let a_max = rho_max * self.displacement();
        Ok(SpiralExpansion {
            profile: *self,
            order: spiral_order(a_max)?,
        })
    }
}

/// Smallest order `N >= a` with `|J_N(a)| < SPIRAL_TAIL_TOLERANCE`.
pub fn spiral_order(a: f64) -> Result<usize> {
    if a == 0.0 {
        return Ok(0);
    }
    let ladder = bessel_j_ladder(MAX_ORDER as usize, a);
    let first = a.ceil() as usize;
    (first..ladder.len())
        .find(|&n| ladder[n].abs() < SPIRAL_TAIL_TOLERANCE)
        .ok_or(Error::TruncationNotConverged {
            argument: a,
            max_order: MAX_ORDER as usize,
            tolerance: SPIRAL_TAIL_TOLERANCE,
        })
}

/// Truncated spiral-harmonic representation of a [`PumpWalkoffProfile`].
#[derive(Debug, Clone, Copy)]
pub struct SpiralExpansion {
    profile: PumpWalkoffProfile,
    order: usize,
}

impl SpiralExpansion {
    pub fn order(&self) -> usize {
        self.order
    }

    /// Field at wavevector `(ρ, φ)` summed over `n ∈ [-order, order]`.
    pub fn evaluate(&self, rho: f64, phi: f64) -> Complex64 {
        let env = self.profile.envelope(rho);
        let vortex = Complex64::from_polar(1.0, self.profile.spec.oam_mp as f64 * phi);
        if self.order == 0 {
            return env * vortex;
        }
        let a = rho * self.profile.displacement();
        let j = bessel_j_ladder(self.order, a);
        // Σ_n i^n J_n e^{inφ} = J_0 + Σ_{n>0} 2 i^n J_n cos(nφ)
        let step = Complex64::from_polar(1.0, phi);
        let mut up = Complex64::new(1.0, 0.0);
        let mut i_pow = Complex64::new(1.0, 0.0);
        let mut sum = Complex64::new(j[0], 0.0);
        for &jn in j.iter().skip(1) {
            up *= step;
            i_pow *= Complex64::i();
            sum += i_pow * (2.0 * jn * up.re);
        }
        env * vortex * sum
    }

    /// `c_n(ρ)`, the coefficient of `e^{i (m_p + n) φ}`.
    pub fn coefficient(&self, n: i32, rho: f64) -> Complex64 {
        if n.unsigned_abs() as usize > self.order {
            return Complex64::new(0.0, 0.0);
        }
        let a = rho * self.profile.displacement();
        let jn = bessel_j_ladder(n.unsigned_abs() as usize, a)[n.unsigned_abs() as usize];
        let jn = if n < 0 && n % 2 != 0 { -jn } else { jn };
        self.profile.envelope(rho) * Complex64::i().powi(n) * jn
    }
}

/// Walk-off pump field at one wavevector point, truncated for that point's Bessel argument.
pub fn pump_walkoff_field(rho: f64, phi: f64, profile: &PumpWalkoffProfile) -> Result<Complex64> {
    Ok(profile.expansion(rho)?.evaluate(rho, phi))
}

/// Normalized spiral spectrum of the pump at the profile's depth.
pub fn pump_oam_distribution(
    profile: &PumpWalkoffProfile,
    grid: &PolarGridSpec,
    m_range: MRange,
    exec: Execution,
) -> Result<OamSpectrum> {
    let expansion = profile.expansion(grid.rho_max)?;
    oam_weights(
        &|rho, phi| Ok(expansion.evaluate(rho, phi)),
        grid,
        m_range,
        exec,
    )
}
