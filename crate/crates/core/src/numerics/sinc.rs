use num_complex::Complex64;

/// `sinc(x) e^{ix}` with `sinc(x) = sin(x)/x`, continuous through `x = 0`.
pub fn sinc_with_phase(x: f64) -> Complex64 {
    let s = sinc(x);
    let (sin, cos) = x.sin_cos();
    Complex64::new(s * cos, s * sin)
}

pub fn sinc(x: f64) -> f64 {
    if x.abs() < 1e-4 {
        let x2 = x * x;
        1.0 - x2 / 6.0 * (1.0 - x2 / 20.0)
    } else {
        x.sin() / x
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn removable_singularity() {
        assert_eq!(sinc_with_phase(0.0), Complex64::new(1.0, 0.0));
    }

    #[test]
    fn first_zero() {
        assert!(sinc_with_phase(PI).norm() < 1e-16);
    }

    #[test]
    fn taylor_near_zero() {
        let x = 1e-9;
        let v = sinc_with_phase(x);
        assert!((v.re - (1.0 - x * x / 6.0)).abs() < 1e-15);
        assert!((v.im - x).abs() < 1e-15);
    }

    #[test]
    fn series_branch_joins_direct_branch() {
        for &x in &[9.9e-5, 1.0e-4, 1.01e-4] {
            assert!((sinc(x) - x.sin() / x).abs() < 4e-16);
        }
    }
}
