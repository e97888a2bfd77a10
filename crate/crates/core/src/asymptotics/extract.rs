use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use rustfft::FftPlanner;
use serde::Serialize;

use super::AsymptoticsError;
use crate::genfun::h_total;
use crate::walk::LatticePoint;

/// Error bound beyond which a coefficient is flagged unreliable.
pub const RELIABLE_BOUND: f64 = 1e-10;

/// Taylor coefficients of `h(1, ·)` recovered from samples on `|z| = r`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CoefficientSeries {
    pub start: LatticePoint,
    pub radius: f64,
    pub samples: usize,
    /// Real parts of the recovered coefficients, `k < samples`.
    pub coefficients: Vec<f64>,
    /// Largest imaginary residue among the reliable coefficients.
    pub max_imag: f64,
    /// `r^M sup|h|`.
    pub aliasing_bound: f64,
    /// Per-coefficient bound `(aliasing + noise)/r^k`.
    pub error_bounds: Vec<f64>,
}

impl CoefficientSeries {
    pub fn is_reliable(&self, k: usize) -> bool {
        self.error_bounds.get(k).is_some_and(|&b| b <= RELIABLE_BOUND)
    }

    /// `c_k`, or an error when its bound exceeds [`RELIABLE_BOUND`].
    pub fn coefficient(&self, k: usize) -> Result<f64, AsymptoticsError> {
        match self.error_bounds.get(k) {
            Some(&bound) if bound <= RELIABLE_BOUND => Ok(self.coefficients[k]),
            Some(&bound) => Err(AsymptoticsError::Unreliable { k, bound }),
            None => Err(AsymptoticsError::Unreliable { k, bound: f64::INFINITY }),
        }
    }

    /// Largest `k` such that every coefficient up to it is reliable.
    pub fn reliable_range(&self) -> usize {
        self.error_bounds
            .iter()
            .take_while(|&&b| b <= RELIABLE_BOUND)
            .count()
            .saturating_sub(1)
    }
}

/// `c_k = (1/M) Σ_j h(1, r ω^j) ω^{−jk} / r^k` with `ω = e^{2πi/M}`.
pub fn extract_coefficients(
    start: LatticePoint,
    radius: f64,
    samples: usize,
) -> Result<CoefficientSeries, AsymptoticsError> {
    if !(radius > 0.0 && radius < 1.0) {
        return Err(AsymptoticsError::Radius(radius));
    }
    if !samples.is_power_of_two() || samples < 2 {
        return Err(AsymptoticsError::NotPowerOfTwo(samples));
    }
    let one = Complex64::new(1.0, 0.0);
    // h has real coefficients, so the lower half circle is the conjugate of
    // the upper half.
    let half: Vec<(Complex64, f64)> = (0..=samples / 2)
        .into_par_iter()
        .map(|j| {
            let z = Complex64::from_polar(radius, 2.0 * PI * j as f64 / samples as f64);
            let z = if j == 0 || 2 * j == samples { Complex64::new(z.re, 0.0) } else { z };
            h_total(one, z, start).map(|e| (e.value, e.error_estimate))
        })
        .collect::<Result<_, _>>()?;
    let mut buf = vec![Complex64::new(0.0, 0.0); samples];
    let mut sup = 0.0f64;
    let mut noise = 0.0f64;
    for (j, &(v, err)) in half.iter().enumerate() {
        buf[j] = v;
        if j > 0 && j < samples / 2 {
            buf[samples - j] = v.conj();
        }
        sup = sup.max(v.norm());
        noise = noise.max(err);
    }
    noise = noise.max(f64::EPSILON * sup);
    FftPlanner::new().plan_fft_forward(samples).process(&mut buf);
    let m = samples as f64;
    let aliasing_bound = radius.powi(samples as i32) * sup;
    let mut scale = 1.0;
    let mut coefficients = Vec::with_capacity(samples);
    let mut error_bounds = Vec::with_capacity(samples);
    let mut max_imag = 0.0f64;
    for v in &buf {
        let c = v / (m * scale);
        let bound = (aliasing_bound + noise) / scale;
        coefficients.push(c.re);
        if bound <= RELIABLE_BOUND {
            max_imag = max_imag.max(c.im.abs());
        }
        error_bounds.push(bound);
        scale *= radius;
    }
    Ok(CoefficientSeries {
        start,
        radius,
        samples,
        coefficients,
        max_imag,
        aliasing_bound,
        error_bounds,
    })
}
