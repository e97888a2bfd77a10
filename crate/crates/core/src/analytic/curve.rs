use num_complex::Complex64;
use serde::Serialize;

use super::{AnalyticError, BranchPoints, KernelPolynomials};

/// Points of the closed curve `Y0([x1, x2] ± i0, z)`.
///
/// `points[i]` is the upper-edge image of `abscissae[i]` and
/// `points[n + i]` the lower-edge image of the same abscissa.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CurveSample {
    pub z: f64,
    pub abscissae: Vec<f64>,
    pub points: Vec<Complex64>,
}

impl CurveSample {
    pub fn upper(&self) -> &[Complex64] {
        &self.points[..self.abscissae.len()]
    }

    pub fn lower(&self) -> &[Complex64] {
        &self.points[self.abscissae.len()..]
    }

    /// `(abscissa, point)` over both edges.
    pub fn pairs(&self) -> impl Iterator<Item = (f64, Complex64)> + '_ {
        self.abscissae
            .iter()
            .chain(self.abscissae.iter())
            .copied()
            .zip(self.points.iter().copied())
    }
}

/// `Y0(u ± i0, z)` for `u` on the slit: upper edge is `(−b − i(−d)^{1/2})/(2a)`.
pub fn y0_on_slit(u: f64, z: f64, upper: bool) -> Complex64 {
    let k = KernelPolynomials::new(z);
    let x = Complex64::new(u, 0.0);
    let sq = (-k.d(x).re).max(0.0).sqrt();
    let sq = if upper { -sq } else { sq };
    (-k.b(x) + Complex64::new(0.0, sq)) / (2.0 * k.a(x))
}

/// Samples the curve at `n` Chebyshev–Lobatto abscissae of `[x1, x2]`.
pub fn curve_sample(z: f64, n: usize) -> Result<CurveSample, AnalyticError> {
    if n < 2 {
        return Err(AnalyticError::TooFewSamples(n));
    }
    let bp = BranchPoints::new(z)?;
    if z >= 1.0 {
        return Err(AnalyticError::ZOutOfRange(z));
    }
    let (mid, half) = ((bp.x1 + bp.x2) / 2.0, (bp.x2 - bp.x1) / 2.0);
    let abscissae: Vec<f64> = (0..n)
        .map(|j| {
            let v = (std::f64::consts::PI * j as f64 / (n - 1) as f64).cos();
            (mid + half * v).clamp(bp.x1, bp.x2)
        })
        .collect();
    let points = [true, false]
        .into_iter()
        .flat_map(|upper| abscissae.iter().map(move |&u| y0_on_slit(u, z, upper)))
        .collect();
    Ok(CurveSample { z, abscissae, points })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn sample_properties() {
        for z in [0.2, 0.5, 0.9] {
            let bp = BranchPoints::new(z).unwrap();
            let c = curve_sample(z, 33).unwrap();
            assert_eq!(c.points.len(), 66);
            for (u, p) in c.pairs() {
                assert!((p.norm_sqr() - u).abs() <= 1e-14);
                assert!(p.norm() <= 1.0 && u <= bp.x2);
            }
            for (a, b) in c.upper().iter().zip(c.lower()) {
                assert_eq!(*a, b.conj());
            }
            let first = c.upper()[0];
            let last = c.upper()[32];
            assert!(first.im.abs() <= 1e-6 && last.im.abs() <= 1e-6);
        }
        assert!(curve_sample(0.5, 1).is_err());
        assert!(curve_sample(1.0, 8).is_err());
    }
}
