//! Bessel functions of the first kind for integer order.
//!
//! All orders `0..=n` at a fixed argument come out of one run of Miller's
//! downward recurrence, normalized through `J_0 + 2 Σ J_2k = 1`. Spiral
//! expansions need the whole ladder at every radius, so the ladder is the
//! primary entry point and [`bessel_j`] is a thin wrapper.

use crate::error::{Error, Result};

pub const MAX_ORDER: i32 = 200;
pub const MAX_ARGUMENT: f64 = 1.0e4;

const RESCALE_AT: f64 = 1.0e250;

/// `J_n(x)` for integer `n`, with `J_{-n} = (-1)^n J_n`.
pub fn bessel_j(n: i32, x: f64) -> Result<f64> {
    if n.abs() > MAX_ORDER || !x.is_finite() || x.abs() > MAX_ARGUMENT {
        return Err(Error::OutOfSupportedRange { order: n, x });
    }
    let order = n.unsigned_abs() as usize;
    let j = bessel_j_ladder(order, x.abs())[order];
    // parity from the order reflection and from the argument reflection
    let flips = (n < 0 && order % 2 == 1) as u8 + (x < 0.0 && order % 2 == 1) as u8;
    Ok(if flips % 2 == 1 { -j } else { j })
}

/// `[J_0(x), J_1(x), ..., J_nmax(x)]` for `x >= 0`.
///
/// No range check: callers that stay inside the supported envelope get
/// 1e-12 absolute accuracy.
pub fn bessel_j_ladder(nmax: usize, x: f64) -> Vec<f64> {
    debug_assert!(x >= 0.0);
    let mut out = vec![0.0; nmax + 1];
    if x == 0.0 {
        out[0] = 1.0;
        return out;
    }

    let top = (nmax as f64).max(x.ceil());
    let mut start = (top + 24.0 + (80.0 * top).sqrt()) as usize;
    start += start % 2;

    let two_over_x = 2.0 / x;
    let mut j_next = 0.0; // J_{k+1}
    let mut j_here = 1.0e-30; // J_k, arbitrary seed
    let mut even_sum = 0.0;

    for k in (1..=start).rev() {
        let j_prev = k as f64 * two_over_x * j_here - j_next;
        j_next = j_here;
        j_here = j_prev;
        // j_here now holds J_{k-1}
        let idx = k - 1;
        if idx <= nmax {
            out[idx] = j_here;
        }
        if idx % 2 == 0 && idx > 0 {
            even_sum += j_here;
        }
        if j_here.abs() > RESCALE_AT {
            let s = 1.0 / RESCALE_AT;
            j_here *= s;
            j_next *= s;
            even_sum *= s;
            for v in out.iter_mut().skip(idx) {
                *v *= s;
            }
        }
    }

    let norm = 1.0 / (out[0] + 2.0 * even_sum);
    for v in &mut out {
        *v *= norm;
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    /// Bessel's integral by the periodic trapezoid rule.
    fn integral_oracle(n: i32, x: f64) -> f64 {
        let m = (2.0 * (x.abs() + n.abs() as f64) + 512.0).ceil() as usize;
        let h = 2.0 * PI / m as f64;
        let s: f64 = (0..m)
            .map(|k| {
                let t = k as f64 * h;
                (n as f64 * t - x * t.sin()).cos()
            })
            .sum();
        s * h / (2.0 * PI)
    }

    fn power_series(n: u32, x: f64) -> f64 {
        let half = x / 2.0;
        let mut term = half.powi(n as i32) / (1..=n).map(f64::from).product::<f64>();
        let mut sum = term;
        for k in 1..60 {
            term *= -half * half / (k as f64 * (k + n) as f64);
            sum += term;
        }
        sum
    }

    #[test]
    fn j0_at_origin() {
        assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
        assert_eq!(bessel_j(3, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn j1_of_one_matches_series() {
        let oracle = power_series(1, 1.0);
        assert!((oracle - 0.440_050_585_744_933_5).abs() < 1e-15);
        assert!((bessel_j(1, 1.0).unwrap() - oracle).abs() < 1e-14);
    }

    #[test]
    fn ladder_matches_integral_representation() {
        for &x in &[0.01, 0.5, 1.0, 2.0, 7.3, 20.0, 35.0, 80.0, 250.0] {
            let ladder = bessel_j_ladder(60, x);
            for (n, &j) in ladder.iter().enumerate() {
                let o = integral_oracle(n as i32, x);
                assert!((j - o).abs() < 1e-12, "J_{n}({x}) = {j} vs {o}");
            }
        }
    }

    #[test]
    fn large_argument_stays_accurate() {
        for &x in &[999.5, 5000.0, 1.0e4] {
            for n in [0, 1, 17, 200] {
                let o = integral_oracle(n, x);
                let j = bessel_j(n, x).unwrap();
                assert!((j - o).abs() < 1e-12, "J_{n}({x}) = {j} vs {o}");
            }
        }
    }

    #[test]
    fn reflection_rules() {
        for n in -7..=7 {
            let a = bessel_j(n, 3.1).unwrap();
            let b = bessel_j(-n, 3.1).unwrap();
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            assert!((a - sign * b).abs() < 1e-15);
            let c = bessel_j(n, -3.1).unwrap();
            assert!((c - sign * a).abs() < 1e-15);
        }
    }

    #[test]
    fn sum_rule_at_two() {
        let s: f64 = (-40..=40).map(|n| bessel_j(n, 2.0).unwrap().powi(2)).sum();
        assert!((s - 1.0).abs() < 1e-12);
    }

    #[test]
    fn recurrence_holds() {
        for i in 0..=20 {
            let x = 0.5 + i as f64 * 2.475;
            for n in -50..=50 {
                let lhs = bessel_j(n - 1, x).unwrap() + bessel_j(n + 1, x).unwrap();
                let rhs = 2.0 * n as f64 / x * bessel_j(n, x).unwrap();
                assert!((lhs - rhs).abs() < 1e-10, "n={n} x={x}");
            }
        }
    }

    #[test]
    fn out_of_range_is_an_error() {
        assert!(matches!(
            bessel_j(201, 1.0),
            Err(Error::OutOfSupportedRange { .. })
        ));
        assert!(bessel_j(0, 2.0e4).is_err());
        assert!(bessel_j(0, f64::NAN).is_err());
    }
}
