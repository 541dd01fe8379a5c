//! Grid refinement by doubling until spectral weights stop moving.

use crate::error::Result;
use crate::oam::{JointOamSpectrum, OamSpectrum, PolarGridSpec};
use serde::{Deserialize, Serialize};

/// Anything whose accuracy is judged by a flat vector of weights.
pub trait SpectralWeights {
    fn weight_vector(&self) -> &[f64];

    fn checksum(&self) -> f64 {
        self.weight_vector()
            .iter()
            .enumerate()
            .map(|(i, w)| (i + 1) as f64 * w)
            .sum()
    }
}

impl SpectralWeights for OamSpectrum {
    fn weight_vector(&self) -> &[f64] {
        &self.weights
    }
}

impl SpectralWeights for JointOamSpectrum {
    fn weight_vector(&self) -> &[f64] {
        &self.weights
    }
}

impl SpectralWeights for Vec<f64> {
    fn weight_vector(&self) -> &[f64] {
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceLevel {
    pub grid: PolarGridSpec,
    pub checksum: f64,
    /// Largest absolute weight change against the previous level; `None` on the first.
    pub max_weight_delta: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConvergenceReport {
    pub levels: Vec<ConvergenceLevel>,
    pub converged: bool,
    pub final_tolerance: f64,
}

impl ConvergenceReport {
    pub fn final_grid(&self) -> PolarGridSpec {
        self.levels.last().expect("at least one level").grid
    }

    pub fn last_delta(&self) -> Option<f64> {
        self.levels.last().and_then(|l| l.max_weight_delta)
    }
}

pub fn max_abs_delta(a: &[f64], b: &[f64]) -> f64 {
    assert_eq!(a.len(), b.len(), "weight vectors must share a layout");
    a.iter()
        .zip(b)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max)
}

/// Evaluates `compute` on `initial`, then on successively doubled grids, and
/// returns the first result whose weights moved by less than `tol` against the
/// previous level. After `max_doublings` without that, returns the finest
/// result with `converged = false`.
pub fn converge_by_doubling<R, F>(
    mut compute: F,
    initial: PolarGridSpec,
    tol: f64,
    max_doublings: usize,
) -> Result<(R, ConvergenceReport)>
where
    R: SpectralWeights,
    F: FnMut(&PolarGridSpec) -> Result<R>,
{
    assert!(
        max_doublings >= 1,
        "need at least one doubling to judge convergence"
    );
    let mut grid = initial;
    let mut current = compute(&grid)?;
    let mut levels = vec![ConvergenceLevel {
        grid,
        checksum: current.checksum(),
        max_weight_delta: None,
    }];

    for _ in 0..max_doublings {
        grid = grid.doubled();
        let next = compute(&grid)?;
        let delta = max_abs_delta(current.weight_vector(), next.weight_vector());
        levels.push(ConvergenceLevel {
            grid,
            checksum: next.checksum(),
            max_weight_delta: Some(delta),
        });
        current = next;
        if delta < tol {
            return Ok((
                current,
                ConvergenceReport {
                    levels,
                    converged: true,
                    final_tolerance: tol,
                },
            ));
        }
    }

    Ok((
        current,
        ConvergenceReport {
            levels,
            converged: false,
            final_tolerance: tol,
        },
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exec::Execution;
    use crate::oam::{oam_weights, MRange};
    use num_complex::Complex64;

    #[test]
    fn constant_computation_converges_at_second_level() {
        let (r, rep) = converge_by_doubling(
            |_| Ok(vec![0.25, 0.75]),
            PolarGridSpec::new(16, 16, 1.0),
            1e-4,
            3,
        )
        .unwrap();
        assert_eq!(r, vec![0.25, 0.75]);
        assert!(rep.converged);
        assert_eq!(rep.levels.len(), 2);
        assert_eq!(rep.last_delta(), Some(0.0));
        assert_eq!(rep.final_grid().n_phi, 32);
    }

    #[test]
    fn smooth_spectrum_converges_quickly() {
        let field = |rho: f64, phi: f64| {
            let (x, y) = (rho * phi.cos(), rho * phi.sin());
            Ok(Complex64::new((-(x - 0.4).powi(2) - y * y).exp(), 0.0))
        };
        let (s, rep) = converge_by_doubling(
            |g| oam_weights(&field, g, MRange::symmetric(7), Execution::default()),
            PolarGridSpec::new(16, 16, 8.0),
            1e-4,
            3,
        )
        .unwrap();
        assert!(rep.converged);
        assert!(rep.levels.len() <= 4);
        assert!(s.weight(0) > 0.5);
    }

    #[test]
    fn noise_field_does_not_converge() {
        // deterministic hash noise: discontinuous everywhere
        let field = |rho: f64, phi: f64| {
            let h = ((rho * 1.0e6).to_bits() ^ (phi * 7.7e5).to_bits().rotate_left(17))
                .wrapping_mul(0x9E37_79B9_7F4A_7C15);
            Ok(Complex64::new((h >> 11) as f64 / (1u64 << 53) as f64, 0.0))
        };
        let (_, rep) = converge_by_doubling(
            |g| oam_weights(&field, g, MRange::symmetric(7), Execution::default()),
            PolarGridSpec::new(16, 16, 1.0),
            1e-4,
            2,
        )
        .unwrap();
        assert!(!rep.converged);
        assert_eq!(rep.levels.len(), 3);
        assert!(rep.last_delta().unwrap() >= 1e-4);
    }
}
