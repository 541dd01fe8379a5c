//! Spiral-harmonic decomposition of fields on polar grids.
//!
//! A field `f(ρ, φ)` is sampled on `n_phi` uniform azimuths at every radial
//! node, transformed to `a_m(ρ)`, and the weight of winding number `m` is
//! `2π ∫ |a_m(ρ)|² ρ dρ`. Weights are normalized over the requested `m`
//! window; the unnormalized total over every transform bin is kept for
//! Parseval checks.

use crate::error::{Error, Result};
use crate::exec::Execution;
use crate::numerics::dft::{index_of, AzimuthalTransform};
use crate::numerics::quadrature::{gauss_legendre, uniform_midpoint, QuadratureRule};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RadialRule {
    GaussLegendre,
    Uniform,
}

/// Tensor grid in `(ρ, φ)`: `n_rho` radial nodes on `[0, rho_max]`, `n_phi` azimuths.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PolarGridSpec {
    pub n_phi: usize,
    pub n_rho: usize,
    pub rho_max: f64,
    pub radial_rule: RadialRule,
}

impl PolarGridSpec {
    pub fn new(n_phi: usize, n_rho: usize, rho_max: f64) -> Self {
        Self {
            n_phi,
            n_rho,
            rho_max,
            radial_rule: RadialRule::GaussLegendre,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_phi < 16 || !self.n_phi.is_power_of_two() {
            return Err(Error::InvalidGrid(format!(
                "n_phi = {} must be a power of two >= 16",
                self.n_phi
            )));
        }
        if self.n_rho < 16 {
            return Err(Error::InvalidGrid(format!(
                "n_rho = {} must be >= 16",
                self.n_rho
            )));
        }
        if !(self.rho_max > 0.0 && self.rho_max.is_finite()) {
            return Err(Error::InvalidGrid(format!(
                "rho_max = {} must be > 0",
                self.rho_max
            )));
        }
        Ok(())
    }

    /// Twice the samples in both directions over the same extent.
    pub fn doubled(&self) -> Self {
        Self {
            n_phi: self.n_phi * 2,
            n_rho: self.n_rho * 2,
            ..*self
        }
    }

    /// Twice the radial extent at the same radial node density.
    pub fn extended(&self) -> Self {
        Self {
            n_rho: self.n_rho * 2,
            rho_max: self.rho_max * 2.0,
            ..*self
        }
    }

    pub fn radial_nodes(&self) -> QuadratureRule {
        match self.radial_rule {
            RadialRule::GaussLegendre => gauss_legendre(self.n_rho, 0.0, self.rho_max),
            RadialRule::Uniform => uniform_midpoint(self.n_rho, 0.0, self.rho_max),
        }
    }

    pub fn azimuths(&self) -> Vec<f64> {
        azimuths(self.n_phi)
    }
}

pub fn azimuths(n_phi: usize) -> Vec<f64> {
    (0..n_phi)
        .map(|k| 2.0 * PI * k as f64 / n_phi as f64)
        .collect()
}

/// Inclusive window of winding numbers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct MRange {
    pub min: i32,
    pub max: i32,
}

impl MRange {
    pub fn new(min: i32, max: i32) -> Self {
        assert!(min <= max, "empty m range");
        Self { min, max }
    }

    pub fn symmetric(half: i32) -> Self {
        Self::new(-half, half)
    }

    pub fn len(&self) -> usize {
        (self.max - self.min + 1) as usize
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn iter(&self) -> std::ops::RangeInclusive<i32> {
        self.min..=self.max
    }

    fn largest_magnitude(&self) -> i32 {
        self.min.abs().max(self.max.abs())
    }

    pub fn check_nyquist(&self, n_phi: usize) -> Result<()> {
        let max_m = self.largest_magnitude();
        if max_m > (n_phi / 2) as i32 - 1 {
            return Err(Error::NyquistViolation {
                max_m,
                n_phi,
                required: 2 * max_m as usize + 2,
            });
        }
        Ok(())
    }
}

impl Default for MRange {
    fn default() -> Self {
        Self::symmetric(20)
    }
}

/// `a_m(ρ_k)` for every radial node, full transform length per node.
#[derive(Debug, Clone)]
pub struct RadialCoefficients {
    pub radial: QuadratureRule,
    pub n_phi: usize,
    coeffs: Vec<Vec<Complex64>>,
}

impl RadialCoefficients {
    pub fn at(&self, node: usize, m: i32) -> Complex64 {
        self.coeffs[node][index_of(m, self.n_phi)]
    }

    /// `2π ∫ |a_m|² ρ dρ` before normalization.
    pub fn power(&self, m: i32) -> f64 {
        let idx = index_of(m, self.n_phi);
        2.0 * PI
            * self
                .radial
                .iter()
                .zip(&self.coeffs)
                .map(|((rho, w), c)| w * rho * c[idx].norm_sqr())
                .sum::<f64>()
    }

    /// Sum of [`power`](Self::power) over every transform bin.
    pub fn total_power(&self) -> f64 {
        2.0 * PI
            * self
                .radial
                .iter()
                .zip(&self.coeffs)
                .map(|((rho, w), c)| w * rho * c.iter().map(|v| v.norm_sqr()).sum::<f64>())
                .sum::<f64>()
    }
}

/// Azimuthal Fourier coefficients of `field` at every radial node of `grid`.
pub fn azimuthal_decompose<F>(
    field: &F,
    grid: &PolarGridSpec,
    m_range: MRange,
    exec: Execution,
) -> Result<RadialCoefficients>
where
    F: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    grid.validate()?;
    m_range.check_nyquist(grid.n_phi)?;
    let radial = grid.radial_nodes();
    let phis = grid.azimuths();
    let transform = AzimuthalTransform::new(grid.n_phi);

    let coeffs = exec.try_map(radial.len(), |k| {
        let rho = radial.nodes[k];
        let mut ring = phis
            .iter()
            .map(|&phi| field(rho, phi))
            .collect::<Result<Vec<_>>>()?;
        transform.forward_in_place(&mut ring);
        Ok::<_, Error>(ring)
    })?;

    Ok(RadialCoefficients {
        radial,
        n_phi: grid.n_phi,
        coeffs,
    })
}

/// Normalized OAM weights over a window of winding numbers.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OamSpectrum {
    pub m_min: i32,
    pub weights: Vec<f64>,
    /// Unnormalized power summed over every transform bin.
    pub total_power: f64,
    /// Fraction of `total_power` that falls inside the window.
    pub captured: f64,
}

impl OamSpectrum {
    /// Build from unnormalized per-m powers.
    pub fn from_powers(m_min: i32, powers: Vec<f64>, total_power: f64) -> Result<Self> {
        let inside: f64 = powers.iter().sum();
        if !(inside > 1e-300) || !inside.is_finite() {
            return Err(Error::ZeroField { power: inside });
        }
        Ok(Self {
            m_min,
            weights: powers.iter().map(|p| p / inside).collect(),
            total_power,
            captured: if total_power > 0.0 {
                inside / total_power
            } else {
                1.0
            },
        })
    }

    pub fn m_range(&self) -> MRange {
        MRange::new(self.m_min, self.m_max())
    }

    pub fn m_max(&self) -> i32 {
        self.m_min + self.weights.len() as i32 - 1
    }

    pub fn weight(&self, m: i32) -> f64 {
        if m < self.m_min || m > self.m_max() {
            0.0
        } else {
            self.weights[(m - self.m_min) as usize]
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, f64)> + '_ {
        self.weights
            .iter()
            .enumerate()
            .map(move |(i, &w)| (self.m_min + i as i32, w))
    }

    /// `1/Σ P_m²`: 1 for a single mode, larger for broader spectra.
    pub fn participation_number(&self) -> f64 {
        1.0 / self.weights.iter().map(|w| w * w).sum::<f64>()
    }

    pub fn modes_above(&self, threshold: f64) -> usize {
        self.weights.iter().filter(|&&w| w > threshold).count()
    }

    /// Fails when an edge of the window still carries weight above `tolerance`.
    pub fn ensure_tails(&self, tolerance: f64) -> Result<()> {
        for m in [self.m_min, self.m_max()] {
            let w = self.weight(m);
            if w >= tolerance {
                return Err(Error::SpectrumTruncated {
                    m,
                    weight: w,
                    tolerance,
                });
            }
        }
        Ok(())
    }
}

/// Spiral-spectrum of a scalar field on a polar grid.
pub fn oam_weights<F>(
    field: &F,
    grid: &PolarGridSpec,
    m_range: MRange,
    exec: Execution,
) -> Result<OamSpectrum>
where
    F: Fn(f64, f64) -> Result<Complex64> + Sync,
{
    let coeffs = azimuthal_decompose(field, grid, m_range, exec)?;
    let total = coeffs.total_power();
    if !(total >= 1e-300) {
        return Err(Error::ZeroField { power: total });
    }
    let powers = m_range.iter().map(|m| coeffs.power(m)).collect();
    OamSpectrum::from_powers(m_range.min, powers, total)
}

/// `1 - P_expected`: the weight outside the mode the selection rule predicts.
pub fn selection_rule_violation(spectrum: &OamSpectrum, expected_m: i32) -> f64 {
    1.0 - spectrum.weight(expected_m)
}

/// Normalized weights over pairs of winding numbers, row-major in `m1`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct JointOamSpectrum {
    pub m1: MRange,
    pub m2: MRange,
    pub weights: Vec<f64>,
    pub total_power: f64,
    pub captured: f64,
}

impl JointOamSpectrum {
    pub fn weight(&self, m1: i32, m2: i32) -> f64 {
        if m1 < self.m1.min || m1 > self.m1.max || m2 < self.m2.min || m2 > self.m2.max {
            return 0.0;
        }
        let r = (m1 - self.m1.min) as usize;
        let c = (m2 - self.m2.min) as usize;
        self.weights[r * self.m2.len() + c]
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, i32, f64)> + '_ {
        self.m1
            .iter()
            .flat_map(move |a| self.m2.iter().map(move |b| (a, b, self.weight(a, b))))
    }

    /// Total weight on pairs with `m1 + m2 != m_pump`.
    pub fn off_rule_weight(&self, m_pump: i32) -> f64 {
        self.iter()
            .filter(|&(a, b, _)| a + b != m_pump)
            .map(|(_, _, w)| w)
            .sum()
    }

    pub fn signal_marginal(&self) -> Vec<f64> {
        self.m1
            .iter()
            .map(|a| self.m2.iter().map(|b| self.weight(a, b)).sum())
            .collect()
    }

    pub fn idler_marginal(&self) -> Vec<f64> {
        self.m2
            .iter()
            .map(|b| self.m1.iter().map(|a| self.weight(a, b)).sum())
            .collect()
    }

    /// Fails when a marginal still carries weight above `tolerance` at either window edge.
    pub fn ensure_tails(&self, tolerance: f64) -> Result<()> {
        let s = self.signal_marginal();
        let i = self.idler_marginal();
        let edges = [
            (self.m1.min, s[0]),
            (self.m1.max, *s.last().unwrap()),
            (self.m2.min, i[0]),
            (self.m2.max, *i.last().unwrap()),
        ];
        for (m, w) in edges {
            if w >= tolerance {
                return Err(Error::SpectrumTruncated {
                    m,
                    weight: w,
                    tolerance,
                });
            }
        }
        Ok(())
    }
}

/// Joint spiral spectrum of a two-photon amplitude `field(ρ_s, φ_s, ρ_i, φ_i)`.
///
/// Signal and idler are sampled on their own radial rings with a common
/// azimuthal grid of `n_phi` points.
pub fn joint_oam_weights<F>(
    field: &F,
    signal_rings: &QuadratureRule,
    idler_rings: &QuadratureRule,
    n_phi: usize,
    m1: MRange,
    m2: MRange,
    exec: Execution,
) -> Result<JointOamSpectrum>
where
    F: Fn(f64, f64, f64, f64) -> Result<Complex64> + Sync,
{
    if n_phi < 16 || !n_phi.is_power_of_two() {
        return Err(Error::InvalidGrid(format!(
            "n_phi = {n_phi} must be a power of two >= 16"
        )));
    }
    m1.check_nyquist(n_phi)?;
    m2.check_nyquist(n_phi)?;
    let phis = azimuths(n_phi);
    let transform = AzimuthalTransform::new(n_phi);
    let box_len = m1.len() * m2.len();

    // One task per signal ring; each returns (box powers, total power).
    let partial = exec.try_map(signal_rings.len(), |ks| {
        let (rho_s, w_s) = (signal_rings.nodes[ks], signal_rings.weights[ks]);
        let mut acc = vec![0.0; box_len + 1];
        let mut buf = vec![Complex64::new(0.0, 0.0); n_phi * n_phi];
        let mut scratch = Vec::with_capacity(n_phi);
        for (rho_i, w_i) in idler_rings.iter() {
            for (r, &phi_s) in phis.iter().enumerate() {
                for (c, &phi_i) in phis.iter().enumerate() {
                    buf[r * n_phi + c] = field(rho_s, phi_s, rho_i, phi_i)?;
                }
            }
            transform.forward_2d_in_place(&mut buf, &mut scratch);
            let measure = (2.0 * PI).powi(2) * w_s * rho_s * w_i * rho_i;
            let mut slot = 0;
            for a in m1.iter() {
                let row = index_of(a, n_phi) * n_phi;
                for b in m2.iter() {
                    acc[slot] += measure * buf[row + index_of(b, n_phi)].norm_sqr();
                    slot += 1;
                }
            }
            acc[box_len] += measure * buf.iter().map(|v| v.norm_sqr()).sum::<f64>();
        }
        Ok::<_, Error>(acc)
    })?;

    let mut sums = vec![0.0; box_len + 1];
    for p in &partial {
        for (s, v) in sums.iter_mut().zip(p) {
            *s += v;
        }
    }
    let total = sums.pop().unwrap();
    let inside: f64 = sums.iter().sum();
    if !(inside > 1e-300) || !inside.is_finite() {
        return Err(Error::ZeroField { power: inside });
    }
    Ok(JointOamSpectrum {
        m1,
        m2,
        weights: sums.iter().map(|p| p / inside).collect(),
        total_power: total,
        captured: inside / total,
    })
}
