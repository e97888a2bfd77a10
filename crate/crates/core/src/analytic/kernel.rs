use num_complex::Complex64;

/// `Q(x, y, z) = a(x, z) y² + b(x, z) y + c(x, z)` for the voter kernel.
///
/// The roles of `x` and `y` are interchangeable, so the same coefficients
/// serve for the expansion in `x`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct KernelPolynomials {
    pub z: Complex64,
}

impl KernelPolynomials {
    pub fn new(z: impl Into<Complex64>) -> Self {
        Self { z: z.into() }
    }

    pub fn a(&self, x: Complex64) -> Complex64 {
        self.z * (x + 1.0) / 6.0
    }

    pub fn b(&self, x: Complex64) -> Complex64 {
        self.z * x * x / 6.0 - x + self.z / 6.0
    }

    pub fn c(&self, x: Complex64) -> Complex64 {
        self.z * x * (x + 1.0) / 6.0
    }

    /// Discriminant `b² − 4ac`.
    pub fn d(&self, x: Complex64) -> Complex64 {
        let b = self.b(x);
        b * b - 4.0 * self.a(x) * self.c(x)
    }

    pub fn q(&self, x: Complex64, y: Complex64) -> Complex64 {
        (self.a(x) * y + self.b(x)) * y + self.c(x)
    }

    /// `xy(z Σ p_ij x^i y^j − 1)` written out term by term.
    pub fn q_from_steps(&self, x: Complex64, y: Complex64) -> Complex64 {
        let s: Complex64 = crate::walk::STEPS
            .iter()
            .map(|&(i, j)| (x.powi(i + 1) * y.powi(j + 1)) / 6.0)
            .sum();
        self.z * s - x * y
    }
}
