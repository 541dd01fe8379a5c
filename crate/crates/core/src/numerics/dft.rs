//! Discrete Fourier transform over a uniform azimuthal grid.

use num_complex::Complex64;
use rustfft::{Fft, FftPlanner};
use std::sync::Arc;

/// Forward/inverse transform of a fixed power-of-two length, shareable across threads.
#[derive(Clone)]
pub struct AzimuthalTransform {
    n: usize,
    forward: Arc<dyn Fft<f64>>,
    inverse: Arc<dyn Fft<f64>>,
}

impl std::fmt::Debug for AzimuthalTransform {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AzimuthalTransform")
            .field("n", &self.n)
            .finish()
    }
}

impl AzimuthalTransform {
    pub fn new(n: usize) -> Self {
        assert!(
            n.is_power_of_two(),
            "azimuthal grid size must be a power of two"
        );
        let mut planner = FftPlanner::new();
        Self {
            n,
            forward: planner.plan_fft_forward(n),
            inverse: planner.plan_fft_inverse(n),
        }
    }

    pub fn len(&self) -> usize {
        self.n
    }

    pub fn is_empty(&self) -> bool {
        self.n == 0
    }

    /// In place: samples become `a_m = (1/n) Σ_k f_k e^{-i m 2πk/n}`, stored in FFT order.
    pub fn forward_in_place(&self, buf: &mut [Complex64]) {
        self.forward.process(buf);
        let s = 1.0 / self.n as f64;
        for v in buf.iter_mut() {
            *v *= s;
        }
    }

    /// In place inverse of [`forward_in_place`](Self::forward_in_place).
    pub fn inverse_in_place(&self, buf: &mut [Complex64]) {
        self.inverse.process(buf);
    }

    /// Forward transform of rows then columns of a row-major `n x n` block.
    /// Row index is the first azimuth, column index the second.
    pub fn forward_2d_in_place(&self, buf: &mut [Complex64], scratch: &mut Vec<Complex64>) {
        let n = self.n;
        debug_assert_eq!(buf.len(), n * n);
        for row in buf.chunks_exact_mut(n) {
            self.forward_in_place(row);
        }
        scratch.resize(n, Complex64::new(0.0, 0.0));
        for c in 0..n {
            for r in 0..n {
                scratch[r] = buf[r * n + c];
            }
            self.forward_in_place(scratch);
            for r in 0..n {
                buf[r * n + c] = scratch[r];
            }
        }
    }
}

/// Coefficient array index of winding number `m` for a length-`n` transform.
#[inline]
pub fn index_of(m: i32, n: usize) -> usize {
    m.rem_euclid(n as i32) as usize
}

/// Winding numbers covered by a length-`n` transform: `-n/2+1 ..= n/2`.
pub fn winding_range(n: usize) -> std::ops::RangeInclusive<i32> {
    let h = (n / 2) as i32;
    (1 - h)..=h
}

/// Azimuthal coefficients indexed by winding number.
#[derive(Debug, Clone, PartialEq)]
pub struct AzimuthalCoefficients {
    raw: Vec<Complex64>,
}

impl AzimuthalCoefficients {
    pub fn get(&self, m: i32) -> Complex64 {
        self.raw[index_of(m, self.raw.len())]
    }

    pub fn len(&self) -> usize {
        self.raw.len()
    }

    pub fn is_empty(&self) -> bool {
        self.raw.is_empty()
    }

    pub fn raw(&self) -> &[Complex64] {
        &self.raw
    }

    pub fn iter(&self) -> impl Iterator<Item = (i32, Complex64)> + '_ {
        winding_range(self.raw.len()).map(move |m| (m, self.get(m)))
    }
}

/// One-shot forward transform of uniformly spaced azimuthal samples.
pub fn azimuthal_dft(samples: &[Complex64]) -> AzimuthalCoefficients {
    let t = AzimuthalTransform::new(samples.len());
    let mut raw = samples.to_vec();
    t.forward_in_place(&mut raw);
    AzimuthalCoefficients { raw }
}

/// Samples reconstructed from coefficients.
pub fn inverse_azimuthal_dft(coeffs: &AzimuthalCoefficients) -> Vec<Complex64> {
    let t = AzimuthalTransform::new(coeffs.len());
    let mut raw = coeffs.raw.clone();
    t.inverse_in_place(&mut raw);
    raw
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn direct(samples: &[Complex64]) -> Vec<Complex64> {
        let n = samples.len();
        (0..n)
            .map(|m| {
                samples
                    .iter()
                    .enumerate()
                    .map(|(k, &f)| {
                        f * Complex64::from_polar(1.0, -2.0 * PI * (m * k) as f64 / n as f64)
                    })
                    .sum::<Complex64>()
                    / n as f64
            })
            .collect()
    }

    fn pseudo_random(n: usize) -> Vec<Complex64> {
        let mut s = 0x9E37_79B9_7F4A_7C15u64;
        (0..n)
            .map(|_| {
                let mut next = || {
                    s ^= s << 13;
                    s ^= s >> 7;
                    s ^= s << 17;
                    (s >> 11) as f64 / (1u64 << 53) as f64 - 0.5
                };
                Complex64::new(next(), next())
            })
            .collect()
    }

    #[test]
    fn constant_samples() {
        let c = azimuthal_dft(&vec![Complex64::new(2.5, -1.0); 32]);
        assert!((c.get(0) - Complex64::new(2.5, -1.0)).norm() < 1e-15);
        for m in winding_range(32).filter(|&m| m != 0) {
            assert!(c.get(m).norm() < 1e-15);
        }
    }

    #[test]
    fn single_harmonic() {
        let n = 64;
        let s: Vec<_> = (0..n)
            .map(|k| Complex64::from_polar(1.0, 2.0 * PI * (3 * k) as f64 / n as f64))
            .collect();
        let c = azimuthal_dft(&s);
        for (m, a) in c.iter() {
            let want = if m == 3 { 1.0 } else { 0.0 };
            assert!((a - want).norm() < 1e-14, "m={m}");
        }
    }

    #[test]
    fn matches_direct_transform_and_round_trips() {
        let s = pseudo_random(128);
        let c = azimuthal_dft(&s);
        for (a, b) in c.raw().iter().zip(direct(&s)) {
            assert!((a - b).norm() < 1e-12);
        }
        let back = inverse_azimuthal_dft(&c);
        let err = back
            .iter()
            .zip(&s)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max);
        assert!(err < 1e-12);
    }

    #[test]
    fn parseval() {
        let s = pseudo_random(256);
        let c = azimuthal_dft(&s);
        let lhs: f64 = s.iter().map(|v| v.norm_sqr()).sum::<f64>() / 256.0;
        let rhs: f64 = c.raw().iter().map(|v| v.norm_sqr()).sum();
        assert!((lhs - rhs).abs() < 1e-12 * lhs);
    }

    #[test]
    fn two_dimensional_separable() {
        let n = 16;
        let t = AzimuthalTransform::new(n);
        let mut buf: Vec<_> = (0..n * n)
            .map(|i| {
                let (r, c) = (i / n, i % n);
                let ph = 2.0 * PI * (2 * r) as f64 / n as f64 - 2.0 * PI * c as f64 / n as f64;
                Complex64::from_polar(1.0, ph)
            })
            .collect();
        let mut scratch = Vec::new();
        t.forward_2d_in_place(&mut buf, &mut scratch);
        for r in 0..n {
            for c in 0..n {
                let want = if r == index_of(2, n) && c == index_of(-1, n) {
                    1.0
                } else {
                    0.0
                };
                assert!((buf[r * n + c] - want).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn winding_range_is_nyquist_window() {
        assert_eq!(winding_range(16), -7..=8);
        assert_eq!(index_of(-1, 16), 15);
    }
}
