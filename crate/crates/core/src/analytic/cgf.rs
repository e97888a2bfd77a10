use num_complex::Complex64;

use super::{AnalyticError, BranchPoints};

/// Rational gluing function `w_z(t) = t(1 + t) / ((t − x2)(t − √x3)²)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Cgf {
    pub z: f64,
    pub x2: f64,
    pub sqrt_x3: f64,
}

impl Cgf {
    pub fn new(z: f64) -> Result<Self, AnalyticError> {
        let bp = BranchPoints::new(z)?;
        Ok(Self {
            z,
            x2: bp.x2,
            sqrt_x3: bp.x3.sqrt(),
        })
    }

    pub fn eval(&self, t: Complex64) -> Result<Complex64, AnalyticError> {
        let e = t - self.sqrt_x3;
        let den = (t - self.x2) * e * e;
        if den == Complex64::new(0.0, 0.0) {
            return Err(AnalyticError::Pole(t));
        }
        Ok(t * (t + 1.0) / den)
    }
}

/// `w_z(t)`; see [`Cgf`].
pub fn cgf(t: Complex64, z: f64) -> Result<Complex64, AnalyticError> {
    Cgf::new(z)?.eval(t)
}
