use std::f64::consts::PI;

use statrs::function::gamma::gamma;

use super::AsymptoticsError;

/// `(9/16)(3/π)^{1/2} x0 y0 (x0 + y0)`: `P[S = k] k^{5/2}` tends to this.
pub fn asymptotic_constant(x0: u32, y0: u32) -> f64 {
    let (x, y) = (x0 as f64, y0 as f64);
    9.0 / 16.0 * (3.0 / PI).sqrt() * x * y * (x + y)
}

/// `(27/16)(3/π)^{1/2} x0 y0 (x0 + y0)`, three times [`asymptotic_constant`],
/// as the claimed limit of `P[τ ≥ k] k^{3/2}`.
///
/// Summing the transferred `P[S = k]` and `P[T = k]` tails gives
/// [`tau_tail_constant_from_transfer`] instead; the two differ by 9/4.
pub fn tau_tail_constant(x0: u32, y0: u32) -> f64 {
    3.0 * asymptotic_constant(x0, y0)
}

/// `Σ_{j ≥ k} 2C j^{−5/2} ~ (4/3) C k^{−3/2}` with `C` = [`asymptotic_constant`].
pub fn tau_tail_constant_from_transfer(x0: u32, y0: u32) -> f64 {
    4.0 / 3.0 * asymptotic_constant(x0, y0)
}

/// `k ↦ c / (Γ(−θ) k^{θ+1})`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PowerLaw {
    pub theta: f64,
    pub c: f64,
    pub gamma_neg_theta: f64,
}

impl PowerLaw {
    pub fn prefactor(&self) -> f64 {
        self.c / self.gamma_neg_theta
    }

    pub fn eval(&self, k: f64) -> f64 {
        if self.c == 0.0 {
            return 0.0;
        }
        self.prefactor() / k.powf(self.theta + 1.0)
    }
}

/// Coefficient asymptote of `c (1 − z)^θ`.
pub fn pringsheim_transfer(theta: f64, c: f64) -> Result<PowerLaw, AsymptoticsError> {
    if theta >= 0.0 && theta.fract() == 0.0 {
        return Err(AsymptoticsError::IntegerTheta(theta));
    }
    Ok(PowerLaw {
        theta,
        c,
        gamma_neg_theta: gamma(-theta),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn constants_at_one_one() {
        assert_relative_eq!(asymptotic_constant(1, 1), 1.0993557, max_relative = 1e-7);
        assert_relative_eq!(tau_tail_constant(1, 1), 3.2980670, max_relative = 1e-7);
        assert_eq!(asymptotic_constant(2, 1), asymptotic_constant(1, 2));
    }

    #[test]
    fn transfer_of_the_three_halves_term() {
        let s3 = 3f64.sqrt();
        let law = pringsheim_transfer(1.5, 1.5 * s3).unwrap();
        assert_relative_eq!(law.gamma_neg_theta, 4.0 * PI.sqrt() / 3.0, max_relative = 1e-12);
        assert_relative_eq!(law.prefactor(), asymptotic_constant(1, 1), max_relative = 1e-12);
        assert_relative_eq!(law.eval(10.0), 1.0993557 * 10f64.powf(-2.5), max_relative = 1e-7);
        for (x0, y0) in [(2, 1), (2, 3), (4, 1)] {
            let c = 0.75 * s3 * (x0 * y0 * (x0 + y0)) as f64;
            let law = pringsheim_transfer(1.5, c).unwrap();
            assert_relative_eq!(law.prefactor(), asymptotic_constant(x0, y0), max_relative = 1e-12);
        }
        assert_eq!(pringsheim_transfer(1.5, 0.0).unwrap().eval(3.0), 0.0);
        assert!(pringsheim_transfer(2.0, 1.0).is_err());
        assert!(pringsheim_transfer(-0.5, 1.0).is_ok());
    }
}
