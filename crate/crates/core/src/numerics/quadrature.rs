use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// Nodes and positive weights on an interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.iter().map(|(x, w)| w * f(x)).sum()
    }
}

/// Gauss–Legendre rule with `n` nodes on `[a, b]`, exact through degree `2n - 1`.
pub fn gauss_legendre(n: usize, a: f64, b: f64) -> QuadratureRule {
    assert!(n >= 1, "gauss_legendre needs at least one node");
    assert!(a < b, "gauss_legendre needs a < b");

    let mut x = vec![0.0; n];
    let mut w = vec![0.0; n];
    let half = (b - a) / 2.0;
    let mid = (b + a) / 2.0;

    for i in 0..n.div_ceil(2) {
        // Tricomi-style starting guess for the i-th root, descending from +1.
        let mut z = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, z);
            dp = d;
            let dz = p / d;
            z -= dz;
            if dz.abs() < 1e-16 {
                break;
            }
        }
        let (_, d) = legendre_with_derivative(n, z);
        if d != 0.0 {
            dp = d;
        }
        let weight = 2.0 / ((1.0 - z * z) * dp * dp);
        x[i] = mid - half * z;
        x[n - 1 - i] = mid + half * z;
        w[i] = weight * half;
        w[n - 1 - i] = weight * half;
    }
    if n % 2 == 1 {
        x[n / 2] = mid;
    }

    QuadratureRule {
        nodes: x,
        weights: w,
    }
}

/// `n` midpoints of equal cells on `[a, b]`.
pub fn uniform_midpoint(n: usize, a: f64, b: f64) -> QuadratureRule {
    assert!(n >= 1 && a < b);
    let h = (b - a) / n as f64;
    QuadratureRule {
        nodes: (0..n).map(|i| a + (i as f64 + 0.5) * h).collect(),
        weights: vec![h; n],
    }
}

fn legendre_with_derivative(n: usize, z: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = z;
    if n == 0 {
        return (1.0, 0.0);
    }
    for k in 2..=n {
        let kf = k as f64;
        let p2 = ((2.0 * kf - 1.0) * z * p1 - (kf - 1.0) * p0) / kf;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (z * p1 - p0) / (z * z - 1.0);
    (p1, d)
}
