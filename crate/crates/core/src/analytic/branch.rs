use num_complex::Complex64;
use serde::Serialize;

use super::{AnalyticError, KernelPolynomials};

/// Real roots `x1 < x2 ≤ x3 < x4` of `d(·, z)` for `z ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BranchPoints {
    pub z: f64,
    pub x1: f64,
    pub x2: f64,
    pub x3: f64,
    pub x4: f64,
}

impl BranchPoints {
    /// With `s1 = 3/z + 1` and `s2 = (6/z + 3)^{1/2}`, the inner pair is
    /// `A − (A² − 1)^{1/2}` for `A = s1 ± s2` and the outer pair its reciprocal.
    pub fn new(z: f64) -> Result<Self, AnalyticError> {
        if !(z > 0.0 && z <= 1.0) {
            return Err(AnalyticError::ZOutOfRange(z));
        }
        let s1 = 3.0 / z + 1.0;
        let s2 = (6.0 / z + 3.0).sqrt();
        // A − √(A²−1) written as 1/(A + √(A²−1)) to avoid cancellation.
        let big = |a: f64| a + (a * a - 1.0).max(0.0).sqrt();
        let x4 = big(s1 + s2);
        let x3 = big(s1 - s2);
        Ok(Self {
            z,
            x1: 1.0 / x4,
            x2: 1.0 / x3,
            x3,
            x4,
        })
    }

    pub fn as_array(&self) -> [f64; 4] {
        [self.x1, self.x2, self.x3, self.x4]
    }

    /// True when `x` lies on the cut `[x1, x2]` of the real axis.
    pub fn on_inner_slit(&self, x: Complex64) -> bool {
        x.im == 0.0 && x.re >= self.x1 && x.re <= self.x2
    }
}

/// Which root of `Q(x, ·, z)`: branch 0 carries `−√d`, branch 1 `+√d`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Branch {
    Zero,
    One,
}

/// `Y_branch(x, z) = (−b ∓ √d)/(2a)` with the principal square root.
///
/// Both roots come from the cancellation-free pair `q/a`, `c/q`, which is
/// algebraically the quadratic formula. `X_branch` is the same function.
pub fn y_branch(x: Complex64, z: Complex64, branch: Branch) -> Result<Complex64, AnalyticError> {
    let (minus, plus) = principal_roots(x, z)?;
    Ok(match branch {
        Branch::Zero => minus,
        Branch::One => plus,
    })
}

/// Both roots ordered by modulus: the analytic `Y0` inside the unit disc
/// first, then `Y1`.
pub fn y_pair(x: Complex64, z: Complex64) -> Result<(Complex64, Complex64), AnalyticError> {
    let (r0, r1) = principal_roots(x, z)?;
    Ok(if r0.norm_sqr() <= r1.norm_sqr() {
        (r0, r1)
    } else {
        (r1, r0)
    })
}

fn principal_roots(x: Complex64, z: Complex64) -> Result<(Complex64, Complex64), AnalyticError> {
    let k = KernelPolynomials::new(z);
    let (a, b, c) = (k.a(x), k.b(x), k.c(x));
    if a == Complex64::new(0.0, 0.0) {
        return Err(AnalyticError::LeadingCoefficientZero { x, z });
    }
    let sd = k.d(x).sqrt();
    let zero = Complex64::new(0.0, 0.0);
    if (b + sd).norm_sqr() >= (b - sd).norm_sqr() {
        // −b − √d has no cancellation.
        let q = -(b + sd) / 2.0;
        let other = if q == zero { zero } else { c / q };
        Ok((q / a, other))
    } else {
        let q = -(b - sd) / 2.0;
        let other = if q == zero { zero } else { c / q };
        Ok((other, q / a))
    }
}
