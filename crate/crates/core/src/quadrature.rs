//! Gauss–Chebyshev quadrature of the second kind.

use std::f64::consts::PI;
use std::iter::Sum;
use std::ops::Mul;

/// Nodes and weights integrating `f(u)·(1 − u²)^{1/2}` over `[−1, 1]`.
///
/// Exact for polynomials of degree `≤ 2n − 1`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    nodes: Vec<f64>,
    weights: Vec<f64>,
}

impl QuadratureRule {
    /// Rule of order `n ≥ 1`.
    pub fn new(n: usize) -> Self {
        assert!(n >= 1, "quadrature order must be positive");
        let h = PI / (n + 1) as f64;
        let (nodes, weights) = (1..=n)
            .map(|j| {
                let theta = j as f64 * h;
                let s = theta.sin();
                (theta.cos(), h * s * s)
            })
            .unzip();
        Self { nodes, weights }
    }

    pub fn order(&self) -> usize {
        self.nodes.len()
    }

    pub fn nodes(&self) -> &[f64] {
        &self.nodes
    }

    pub fn weights(&self) -> &[f64] {
        &self.weights
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, f64)> + '_ {
        self.nodes.iter().copied().zip(self.weights.iter().copied())
    }

    /// `Σ w_j f(u_j)`.
    pub fn integrate<T, F>(&self, mut f: F) -> T
    where
        T: Mul<f64, Output = T> + Sum<T>,
        F: FnMut(f64) -> T,
    {
        self.iter().map(|(u, w)| f(u) * w).sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn weights_sum_to_half_pi() {
        for n in [1, 2, 7, 64, 1000] {
            let r = QuadratureRule::new(n);
            assert_abs_diff_eq!(r.weights().iter().sum::<f64>(), PI / 2.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn exact_on_low_degree_polynomials() {
        // ∫ u^{2m} (1−u²)^{1/2} du = π (2m)! / (2^{2m} m! (m+1)!) over [−1, 1].
        let moment = |m: u32| {
            let mut v = PI / 2.0;
            for i in 1..=m {
                v *= (2 * i - 1) as f64 / (2 * i + 2) as f64;
            }
            v
        };
        let n = 6;
        let r = QuadratureRule::new(n);
        for deg in 0..2 * n as u32 {
            let got: f64 = r.integrate(|u| u.powi(deg as i32));
            let want = if deg % 2 == 1 { 0.0 } else { moment(deg / 2) };
            assert_abs_diff_eq!(got, want, epsilon = 1e-14);
        }
        let over: f64 = r.integrate(|u| u.powi(2 * n as i32));
        assert!((over - moment(n as u32)).abs() > 1e-6);
    }
}
