//! Two-photon mode functions and the reduced signal field.

use crate::dispersion::{
    delta_k_collinear, delta_k_noncollinear, delta_k_walkoff, longitudinal_wavevector, Photon,
    Scenario, Setup, Wavevector2,
};
use crate::error::{Error, Result};
use crate::numerics::dft::{index_of, AzimuthalTransform};
use crate::numerics::quadrature::gauss_legendre;
use crate::numerics::sinc::sinc_with_phase;
use crate::oam::{azimuths, MRange};
use crate::pump::pump_angular_amplitude;
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

fn phase(x: f64) -> Complex64 {
    Complex64::from_polar(1.0, x)
}

/// `E_p(P+Q) sinc(Δ_k L/2) exp{i Δ_k L/2 + i [K_s(P) + K_i(Q)] L}`.
pub fn mode_function_fullcone(p: Wavevector2, q: Wavevector2, setup: &Setup) -> Result<Complex64> {
    let dk = delta_k_collinear(p, q, setup)?;
    fullcone_with_mismatch(p, q, dk, setup)
}

/// Full-cone amplitude whose mismatch carries the pump walk-off tilt.
pub fn mode_function_walkoff(p: Wavevector2, q: Wavevector2, setup: &Setup) -> Result<Complex64> {
    let dk = delta_k_walkoff(p, q, setup)?;
    fullcone_with_mismatch(p, q, dk, setup)
}

fn fullcone_with_mismatch(
    p: Wavevector2,
    q: Wavevector2,
    dk: f64,
    setup: &Setup,
) -> Result<Complex64> {
    let l = setup.crystal.length_l;
    let ks = longitudinal_wavevector(Photon::Signal, p, setup)?;
    let ki = longitudinal_wavevector(Photon::Idler, q, setup)?;
    Ok(pump_angular_amplitude(p + q, &setup.pump)
        * sinc_with_phase(dk * l / 2.0)
        * phase((ks + ki) * l))
}

/// Restricted-cone amplitude in the signal and idler local frames:
/// `E_p(p_x + q_x, δ_0) sinc(δ_k L/2) exp{i δ_k L/2 + i [k_s + k_i] L / cos θ}`.
pub fn mode_function_noncollinear(
    p: Wavevector2,
    q: Wavevector2,
    setup: &Setup,
) -> Result<Complex64> {
    let l = setup.crystal.length_l;
    let (dk, d0) = delta_k_noncollinear(p, q, setup)?;
    let ks = longitudinal_wavevector(Photon::Signal, p, setup)?;
    let ki = longitudinal_wavevector(Photon::Idler, q, setup)?;
    let pump = pump_angular_amplitude(Wavevector2::new(p.x + q.x, d0), &setup.pump);
    Ok(pump * sinc_with_phase(dk * l / 2.0) * phase((ks + ki) * l / setup.geometry.theta.cos()))
}

/// Biphoton amplitude for the configured scenario.
#[derive(Debug, Clone, Copy)]
pub struct BiphotonSample {
    pub setup: Setup,
}

impl BiphotonSample {
    pub fn new(setup: Setup) -> Self {
        Self { setup }
    }

    pub fn scenario(&self) -> Scenario {
        self.setup.geometry.scenario
    }

    pub fn amplitude(&self, p: Wavevector2, q: Wavevector2) -> Result<Complex64> {
        match self.scenario() {
            Scenario::FullConeNoncritical => mode_function_fullcone(p, q, &self.setup),
            Scenario::NonCollinear => mode_function_noncollinear(p, q, &self.setup),
            Scenario::FullConeWalkoff => mode_function_walkoff(p, q, &self.setup),
        }
    }

    /// Amplitude at polar signal/idler coordinates.
    pub fn polar(&self, rho_s: f64, phi_s: f64, rho_i: f64, phi_i: f64) -> Result<Complex64> {
        self.amplitude(
            Wavevector2::from_polar(rho_s, phi_s),
            Wavevector2::from_polar(rho_i, phi_i),
        )
    }
}

/// `H_l(ρ_s, ρ_i)` from `sinc(Δ_k L/2) e^{iΔ_k L/2} = Σ_l H_l e^{i l (φ_s − φ_i)}`,
/// sampled on `n_dphi` uniform values of `φ_s − φ_i`.
pub fn phasematch_azimuthal_coeffs(
    rho_s: f64,
    rho_i: f64,
    setup: &Setup,
    l_range: MRange,
    n_dphi: usize,
) -> Result<Vec<(i32, Complex64)>> {
    if setup.geometry.scenario != Scenario::FullConeNoncritical {
        return Err(Error::ScenarioMismatch {
            expected: Scenario::FullConeNoncritical.name(),
            actual: setup.geometry.scenario.name(),
        });
    }
    let max_l = l_range.min.abs().max(l_range.max.abs());
    if !n_dphi.is_power_of_two() || max_l > (n_dphi / 2) as i32 - 1 {
        return Err(Error::NyquistViolation {
            max_m: max_l,
            n_phi: n_dphi,
            required: 2 * max_l as usize + 2,
        });
    }
    let l = setup.crystal.length_l;
    let q = Wavevector2::new(rho_i, 0.0);
    let mut samples = azimuths(n_dphi)
        .into_iter()
        .map(|d| {
            let dk = delta_k_collinear(Wavevector2::from_polar(rho_s, d), q, setup)?;
            Ok(sinc_with_phase(dk * l / 2.0))
        })
        .collect::<Result<Vec<_>>>()?;
    AzimuthalTransform::new(n_dphi).forward_in_place(&mut samples);
    Ok(l_range
        .iter()
        .map(|m| (m, samples[index_of(m, n_dphi)]))
        .collect())
}

/// How the idler photon is projected before looking at the signal.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum Detection {
    /// Idler detected at `q = 0`.
    IdlerAtZero,
    /// Idler projected onto a Gaussian of width `w1` (m).
    IdlerGaussian {
        #[serde(deserialize_with = "crate::io::units::length")]
        w1: f64,
    },
}

/// Relative change allowed when the idler quadrature grid is doubled.
pub const IDLER_QUADRATURE_TOLERANCE: f64 = 1e-9;
const IDLER_MAX_DOUBLINGS: usize = 4;

/// Signal-photon amplitude after the idler projection.
#[derive(Debug, Clone)]
pub struct ReducedSignalField {
    biphoton: BiphotonSample,
    detection: Detection,
    /// `(q, weight)` with the Gaussian projection folded into the weight.
    idler_nodes: Vec<(Wavevector2, f64)>,
}

impl ReducedSignalField {
    pub fn detection(&self) -> Detection {
        self.detection
    }

    pub fn idler_node_count(&self) -> usize {
        self.idler_nodes.len()
    }

    pub fn amplitude(&self, p: Wavevector2) -> Result<Complex64> {
        match self.detection {
            Detection::IdlerAtZero => self.biphoton.amplitude(p, Wavevector2::ZERO),
            Detection::IdlerGaussian { .. } => integrate(&self.biphoton, &self.idler_nodes, p),
        }
    }

    pub fn polar(&self, rho: f64, phi: f64) -> Result<Complex64> {
        self.amplitude(Wavevector2::from_polar(rho, phi))
    }
}

fn integrate(
    b: &BiphotonSample,
    nodes: &[(Wavevector2, f64)],
    p: Wavevector2,
) -> Result<Complex64> {
    let mut acc = Complex64::new(0.0, 0.0);
    for &(q, w) in nodes {
        acc += b.amplitude(p, q)? * w;
    }
    Ok(acc)
}

/// Tensor polar rule in `q` on `[0, 8/w1]` with the weight `e^{-|q|² w1²/4}` folded in.
fn idler_nodes(w1: f64, n_rho: usize, n_phi: usize) -> Vec<(Wavevector2, f64)> {
    let radial = gauss_legendre(n_rho, 0.0, 8.0 / w1);
    let dphi = 2.0 * std::f64::consts::PI / n_phi as f64;
    let phis = azimuths(n_phi);
    radial
        .iter()
        .flat_map(|(rho, w)| {
            let g = (-rho * rho * w1 * w1 / 4.0).exp();
            phis.iter()
                .map(move |&phi| (Wavevector2::from_polar(rho, phi), w * rho * dphi * g))
        })
        .collect()
}

/// Builds `Φ_s(p) ∝ ∫ dq Φ(p, q) exp(−|q|² w1²/4)` or `Φ(p, 0)`.
///
/// For a Gaussian projection the idler grid is doubled from 16 x 16 until the
/// field at a handful of probe points moves by less than
/// [`IDLER_QUADRATURE_TOLERANCE`] in relative norm.
pub fn reduced_signal_field(setup: &Setup, detection: Detection) -> Result<ReducedSignalField> {
    let biphoton = BiphotonSample::new(*setup);
    let w1 = match detection {
        Detection::IdlerAtZero => {
            return Ok(ReducedSignalField {
                biphoton,
                detection,
                idler_nodes: Vec::new(),
            })
        }
        Detection::IdlerGaussian { w1 } => w1,
    };
    if !(w1 > 0.0) {
        return Err(Error::config("detection.w1", "must be > 0"));
    }

    let w0 = setup.pump.waist_w0;
    let probes: Vec<Wavevector2> = [
        (0.0, 0.0),
        (1.0, 0.0),
        (0.0, 1.0),
        (-2.0, 1.0),
        (0.5, -2.0),
        (3.0, 3.0),
    ]
    .iter()
    .map(|&(x, y)| Wavevector2::new(x / w0, y / w0))
    .collect();
    let eval = |nodes: &[(Wavevector2, f64)]| -> Result<Vec<Complex64>> {
        probes
            .iter()
            .map(|&p| integrate(&biphoton, nodes, p))
            .collect()
    };

    let (mut n_rho, mut n_phi) = (16, 16);
    let mut nodes = idler_nodes(w1, n_rho, n_phi);
    let mut values = eval(&nodes)?;
    let mut change = f64::INFINITY;
    for _ in 0..IDLER_MAX_DOUBLINGS {
        n_rho *= 2;
        n_phi *= 2;
        let finer = idler_nodes(w1, n_rho, n_phi);
        let next = eval(&finer)?;
        let num: f64 = values
            .iter()
            .zip(&next)
            .map(|(a, b)| (a - b).norm_sqr())
            .sum();
        let den: f64 = next.iter().map(|b| b.norm_sqr()).sum();
        change = if den > 0.0 { (num / den).sqrt() } else { 0.0 };
        nodes = finer;
        values = next;
        if change < IDLER_QUADRATURE_TOLERANCE {
            return Ok(ReducedSignalField {
                biphoton,
                detection,
                idler_nodes: nodes,
            });
        }
    }
    Err(Error::QuadratureNotConverged {
        change,
        tolerance: IDLER_QUADRATURE_TOLERANCE,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::dispersion::{CrystalSpec, GeometrySpec, PumpSpec, QpmMode};
    use crate::numerics::sinc::sinc;
    use std::f64::consts::PI;

    fn setup(scenario: Scenario, theta_deg: f64, mp: u32, w0: f64, rho0_deg: f64) -> Setup {
        let pump = PumpSpec {
            waist_w0: w0,
            oam_mp: mp,
            ..PumpSpec::default()
        };
        let crystal = CrystalSpec {
            walkoff_rho0: rho0_deg.to_radians(),
            ..CrystalSpec::default()
        };
        Setup::new(
            pump,
            crystal,
            GeometrySpec {
                theta: theta_deg.to_radians(),
                scenario,
            },
        )
        .unwrap()
    }

    fn rel(a: Complex64, b: Complex64) -> f64 {
        (a - b).norm() / b.norm().max(1e-300)
    }

    #[test]
    fn fullcone_center() {
        let s = setup(Scenario::FullConeNoncritical, 0.0, 0, 1e-4, 0.0);
        let v = mode_function_fullcone(Wavevector2::ZERO, Wavevector2::ZERO, &s).unwrap();
        assert!((v.norm() - 1.0).abs() < 1e-14);
        let ks = s.k(Photon::Signal);
        let want = phase(2.0 * ks * s.crystal.length_l);
        assert!(rel(v, want) < 1e-6);
    }

    #[test]
    fn fullcone_vortex_zero() {
        let s = setup(Scenario::FullConeNoncritical, 0.0, 1, 1e-4, 0.0);
        let p = Wavevector2::new(2e4, -1e4);
        assert_eq!(mode_function_fullcone(p, -p, &s).unwrap().norm(), 0.0);
    }

    #[test]
    fn fullcone_modulus_factorizes() {
        let s = setup(Scenario::FullConeNoncritical, 0.0, 2, 1e-4, 0.0);
        let p = Wavevector2::new(3e4, 1e4);
        let q = Wavevector2::new(-2e4, 0.5e4);
        let v = mode_function_fullcone(p, q, &s).unwrap();
        let k = |n: f64, t: Wavevector2| (n * n - t.norm_sqr()).sqrt();
        let dk = k(s.k(Photon::Pump), p + q)
            - k(s.k(Photon::Signal), p)
            - k(s.k(Photon::Idler), q)
            - s.grating();
        let sum = p + q;
        let pump = sum.norm_sqr() * (-sum.norm_sqr() * 1e-8 / 4.0).exp();
        let want = pump * sinc(dk * s.crystal.length_l / 2.0).abs();
        assert!((v.norm() - want).abs() < 1e-12 * want);
    }

    #[test]
    fn noncollinear_collinear_limit() {
        let nc = setup(Scenario::NonCollinear, 0.0, 0, 1e-4, 0.0);
        let fc = setup(Scenario::FullConeNoncritical, 0.0, 0, 1e-4, 0.0);
        let a = mode_function_noncollinear(Wavevector2::ZERO, Wavevector2::ZERO, &nc).unwrap();
        let b = mode_function_fullcone(Wavevector2::ZERO, Wavevector2::ZERO, &fc).unwrap();
        assert!(rel(a, b) < 1e-12);
    }

    #[test]
    fn noncollinear_vortex_pump_structure() {
        let s = setup(Scenario::NonCollinear, 1.0, 1, 1e-4, 0.0);
        let p = Wavevector2::new(1.3e4, 0.4e4);
        let q = Wavevector2::new(-1.3e4, -0.9e4);
        let (dk, d0) = delta_k_noncollinear(p, q, &s).unwrap();
        let v = mode_function_noncollinear(p, q, &s).unwrap();
        let sinc_mod = sinc(dk * s.crystal.length_l / 2.0).abs();
        let gauss = (-d0 * d0 * 1e-8 / 4.0).exp();
        assert!((v.norm() - d0.abs() * gauss * sinc_mod).abs() < 1e-12 * v.norm());
    }

    #[test]
    fn noncollinear_ring_is_elliptic_when_crystal_exceeds_nc_length() {
        let s = setup(Scenario::NonCollinear, 1.0, 0, 100e-6, 0.0);
        let rho = 1.0e4;
        let mods: Vec<f64> = (0..64)
            .map(|k| {
                let p = Wavevector2::from_polar(rho, 2.0 * PI * k as f64 / 64.0);
                mode_function_noncollinear(p, Wavevector2::ZERO, &s)
                    .unwrap()
                    .norm()
            })
            .collect();
        let max = mods.iter().cloned().fold(0.0, f64::max);
        let min = mods.iter().cloned().fold(f64::INFINITY, f64::min);
        assert!(max / min - 1.0 > 0.01, "{max} {min}");
    }

    #[test]
    fn walkoff_reduces_to_fullcone() {
        let w = setup(Scenario::FullConeWalkoff, 0.0, 1, 1e-4, 0.0);
        let f = setup(Scenario::FullConeNoncritical, 0.0, 1, 1e-4, 0.0);
        for &(px, py, qx, qy) in &[
            (1e4, 2e4, -3e4, 0.0),
            (0.0, 0.0, 5e3, -5e3),
            (4e4, -1e4, 1e4, 1e4),
        ] {
            let p = Wavevector2::new(px, py);
            let q = Wavevector2::new(qx, qy);
            assert_eq!(
                mode_function_walkoff(p, q, &w).unwrap(),
                mode_function_fullcone(p, q, &f).unwrap()
            );
        }
        let w5 = setup(Scenario::FullConeWalkoff, 0.0, 0, 1e-4, 5.0);
        let c = mode_function_walkoff(Wavevector2::ZERO, Wavevector2::ZERO, &w5).unwrap();
        assert!((c.norm() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn walkoff_shifts_sinc_argument() {
        let s = setup(Scenario::FullConeWalkoff, 0.0, 0, 1e-4, 5.0);
        let p = Wavevector2::new(2e4, 1e4);
        let q = Wavevector2::new(1e4, -0.5e4);
        let dk = delta_k_collinear(p, q, &s).unwrap() + 3e4 * 5f64.to_radians().tan();
        let sum = p + q;
        let want = (-sum.norm_sqr() * 1e-8 / 4.0).exp() * sinc(dk * s.crystal.length_l / 2.0).abs();
        let got = mode_function_walkoff(p, q, &s).unwrap().norm();
        assert!((got - want).abs() < 1e-12 * want);
        let plain = mode_function_fullcone(p, q, &s).unwrap().norm();
        assert!((got - plain).abs() > 1e-3 * plain);
    }

    #[test]
    fn rotational_covariance_full_cone() {
        for mp in 0..3 {
            let s = setup(Scenario::FullConeNoncritical, 0.0, mp, 1e-4, 0.0);
            let p = Wavevector2::new(2.1e4, -0.3e4);
            let q = Wavevector2::new(-1.5e4, 1.1e4);
            let a = mode_function_fullcone(p, q, &s).unwrap();
            for alpha in [0.3, 1.7, -2.2] {
                let b = mode_function_fullcone(p.rotated(alpha), q.rotated(alpha), &s).unwrap();
                assert!(rel(b, a * phase(mp as f64 * alpha)) < 1e-10);
            }
        }
    }

    #[test]
    fn phasematch_coefficients() {
        let s = setup(Scenario::FullConeNoncritical, 0.0, 0, 1e-4, 0.0);
        let l_range = MRange::symmetric(15);
        let h = phasematch_azimuthal_coeffs(0.0, 3e4, &s, l_range, 64).unwrap();
        let dk = delta_k_collinear(Wavevector2::ZERO, Wavevector2::new(3e4, 0.0), &s).unwrap();
        let h0 = sinc_with_phase(dk * s.crystal.length_l / 2.0);
        for (l, v) in h {
            let want = if l == 0 { h0 } else { Complex64::new(0.0, 0.0) };
            assert!((v - want).norm() < 1e-14);
        }

        let mut short = s;
        short.crystal.length_l = 1e-12;
        let short = Setup::new(short.pump, short.crystal, short.geometry).unwrap();
        for (l, v) in phasematch_azimuthal_coeffs(5e4, 4e4, &short, l_range, 64).unwrap() {
            let want = if l == 0 { 1.0 } else { 0.0 };
            assert!((v - want).norm() < 1e-9);
        }
    }

    #[test]
    fn phasematch_parseval() {
        let s = setup(Scenario::FullConeNoncritical, 0.0, 0, 1e-4, 0.0);
        let (rs, ri) = (8e4, 7e4);
        let n = 256;
        let h = phasematch_azimuthal_coeffs(rs, ri, &s, MRange::symmetric(127), n).unwrap();
        let lhs: f64 = h.iter().map(|(_, v)| v.norm_sqr()).sum();
        // direct average of |sinc|² over a fine Δφ grid
        let m = 4096;
        let rhs: f64 = (0..m)
            .map(|k| {
                let d = 2.0 * PI * k as f64 / m as f64;
                let dk = delta_k_collinear(
                    Wavevector2::from_polar(rs, d),
                    Wavevector2::new(ri, 0.0),
                    &s,
                )
                .unwrap();
                sinc(dk * s.crystal.length_l / 2.0).powi(2)
            })
            .sum::<f64>()
            / m as f64;
        assert!((lhs - rhs).abs() < 1e-10, "{lhs} vs {rhs}");
    }

    #[test]
    fn phasematch_rejects_walkoff() {
        let s = setup(Scenario::FullConeWalkoff, 0.0, 0, 1e-4, 5.0);
        assert!(matches!(
            phasematch_azimuthal_coeffs(1e4, 1e4, &s, MRange::symmetric(3), 16),
            Err(Error::ScenarioMismatch { .. })
        ));
    }

    #[test]
    fn idler_at_zero_is_pointwise_biphoton() {
        for sc in [
            Scenario::NonCollinear,
            Scenario::FullConeNoncritical,
            Scenario::FullConeWalkoff,
        ] {
            let s = setup(sc, 1.0, 0, 1e-4, 2.0);
            let r = reduced_signal_field(&s, Detection::IdlerAtZero).unwrap();
            let b = BiphotonSample::new(s);
            let p = Wavevector2::new(1e4, -2e4);
            assert_eq!(
                r.amplitude(p).unwrap(),
                b.amplitude(p, Wavevector2::ZERO).unwrap()
            );
        }
    }

    #[test]
    fn wide_idler_mode_approaches_point_detection() {
        let s = setup(Scenario::NonCollinear, 1.0, 0, 1e-4, 0.0);
        let w1 = 0.5;
        let g = reduced_signal_field(&s, Detection::IdlerGaussian { w1 }).unwrap();
        let z = reduced_signal_field(&s, Detection::IdlerAtZero).unwrap();
        let scale = 4.0 * PI / (w1 * w1);
        for &(x, y) in &[(0.0, 0.0), (1e4, 0.0), (-0.5e4, 2e4)] {
            let p = Wavevector2::new(x, y);
            let a = g.amplitude(p).unwrap() / scale;
            let b = z.amplitude(p).unwrap();
            assert!(rel(a, b) < 1e-4, "{a} vs {b}");
        }
    }

    #[test]
    fn gaussian_idler_matches_fine_cartesian_quadrature() {
        let s = setup(Scenario::NonCollinear, 1.0, 0, 1e-4, 0.0);
        let w1 = 500e-6;
        let r = reduced_signal_field(&s, Detection::IdlerGaussian { w1 }).unwrap();
        let b = BiphotonSample::new(s);
        // trapezoid over a Cartesian box of half-width 9/w1
        let n = 181;
        let half = 9.0 / w1;
        let h = 2.0 * half / (n - 1) as f64;
        let probes = [(0.0, 0.0), (1.2e4, -0.4e4), (-0.3e4, 2.1e4), (2e4, 2e4)];
        let mut num = 0.0;
        let mut den = 0.0;
        for &(x, y) in &probes {
            let p = Wavevector2::new(x, y);
            let mut acc = Complex64::new(0.0, 0.0);
            for i in 0..n {
                for j in 0..n {
                    let q = Wavevector2::new(-half + i as f64 * h, -half + j as f64 * h);
                    let g = (-q.norm_sqr() * w1 * w1 / 4.0).exp();
                    acc += b.amplitude(p, q).unwrap() * g * h * h;
                }
            }
            let got = r.amplitude(p).unwrap();
            num += (got - acc).norm_sqr();
            den += acc.norm_sqr();
        }
        assert!((num / den).sqrt() < 1e-6, "{}", (num / den).sqrt());
    }

    #[test]
    fn rejects_nonpositive_idler_width() {
        let s = setup(Scenario::NonCollinear, 1.0, 0, 1e-4, 0.0);
        assert!(reduced_signal_field(&s, Detection::IdlerGaussian { w1: 0.0 }).is_err());
    }

    #[test]
    fn qpm_none_noncollinear_is_not_matched() {
        let c = CrystalSpec {
            qpm_mode: QpmMode::None,
            ..CrystalSpec::default()
        };
        let g = GeometrySpec {
            theta: 1f64.to_radians(),
            scenario: Scenario::NonCollinear,
        };
        let s = Setup::new(PumpSpec::default(), c, g).unwrap();
        let v = mode_function_noncollinear(Wavevector2::ZERO, Wavevector2::ZERO, &s).unwrap();
        assert!(v.norm() < 0.1);
    }
}
