use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;

use super::fit::{least_squares, LeastSquares};
use super::AsymptoticsError;
use crate::genfun::{h_parts_adaptive, HOptions};
use crate::quadrature::QuadratureRule;
use crate::walk::LatticePoint;

/// `n` points from `hi` down to `lo`, equally spaced in `log`.
pub fn geometric_ladder(hi: f64, lo: f64, n: usize) -> Vec<f64> {
    let (a, b) = (hi.ln(), lo.ln());
    (0..n)
        .map(|i| (a + (b - a) * i as f64 / (n - 1) as f64).exp())
        .collect()
}

/// Names of the fit basis in `δ = 1 − z`, in column order.
pub const SINGULAR_BASIS: [&str; 7] = [
    "1",
    "(1-z)",
    "(1-z)^2",
    "(1-z)^1/2",
    "(1-z)^3/2",
    "ln(1-z)(1-z)",
    "ln(1-z)(1-z)^2",
];

/// Column index of `(1 − z)^{1/2}`.
pub const SQRT_TERM: usize = 3;
/// Column index of `(1 − z)^{3/2}`.
pub const THREE_HALVES_TERM: usize = 4;
/// Column index of `ln(1 − z)(1 − z)`.
pub const LOG_TERM: usize = 5;

fn singular_row(d: f64) -> Vec<f64> {
    let l = d.ln();
    vec![1.0, d, d * d, d.sqrt(), d * d.sqrt(), l * d, l * d * d]
}

#[derive(Debug, Clone, PartialEq)]
pub struct SingularOptions {
    pub deltas: Vec<f64>,
    pub quadrature: HOptions,
}

impl Default for SingularOptions {
    /// Sixteen points from `1 − z = 1e−3` to `1e−6`. Further out, the terms
    /// left out of the basis bias the `(1 − z)^{3/2}` coefficient by several
    /// percent.
    fn default() -> Self {
        Self {
            deltas: geometric_ladder(1e-3, 1e-6, 16),
            quadrature: HOptions {
                min_order: 256,
                max_order: 1 << 18,
                rel_tol: 1e-12,
            },
        }
    }
}

/// Fitted expansions of `h1`, `h2`, `h3` at `z = 1` and of their sum.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SingularFit {
    pub start: LatticePoint,
    pub basis: Vec<&'static str>,
    pub deltas: Vec<f64>,
    pub parts: [LeastSquares; 3],
    /// Coefficients of `h1 + h2 + h3` (the fit is linear in the data).
    pub total: Vec<f64>,
}

impl SingularFit {
    pub fn part_coefficient(&self, part: usize, term: usize) -> f64 {
        self.parts[part].coefficients[term]
    }

    pub fn condition(&self) -> f64 {
        self.parts[0].condition
    }
}

/// Fits `h_i(1, 1 − δ)` on the δ-ladder against [`SINGULAR_BASIS`].
pub fn singular_coefficient_fit(
    start: LatticePoint,
    opts: &SingularOptions,
) -> Result<SingularFit, AsymptoticsError> {
    let one = Complex64::new(1.0, 0.0);
    let values: Vec<[f64; 3]> = opts
        .deltas
        .par_iter()
        .map(|&d| {
            let p = h_parts_adaptive(one, Complex64::new(1.0 - d, 0.0), start, &opts.quadrature)?;
            Ok([p.h1.value.re, p.h2.value.re, p.h3.value.re])
        })
        .collect::<Result<_, AsymptoticsError>>()?;
    let rows: Vec<Vec<f64>> = opts.deltas.iter().map(|&d| singular_row(d)).collect();
    let fit_part = |i: usize| {
        let rhs: Vec<f64> = values.iter().map(|v| v[i]).collect();
        least_squares(&rows, &rhs)
    };
    let parts = [fit_part(0)?, fit_part(1)?, fit_part(2)?];
    let total = (0..SINGULAR_BASIS.len())
        .map(|j| parts.iter().map(|p| p.coefficients[j]).sum())
        .collect();
    Ok(SingularFit {
        start,
        basis: SINGULAR_BASIS.to_vec(),
        deltas: opts.deltas.clone(),
        parts,
        total,
    })
}

/// Both sides of the residue identity for `∫(1−u)^k (1−u²)^{1/2}/(1 − z(1+2u)/3) du`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LemmaCheck {
    pub k: u32,
    pub z: f64,
    pub lhs: f64,
    pub rhs: f64,
    pub gap: f64,
}

/// Coefficients (ascending powers of `Z`) of the polynomial part at infinity
/// of `(Z² − 1)^{1/2} (1 − Z)^k`.
pub fn principal_part_at_infinity(k: u32) -> Vec<f64> {
    // (Z²−1)^{1/2} = Σ_j s_j Z^{1−2j} with s_j = C(1/2, j)(−1)^j.
    let k = k as usize;
    let mut s = vec![1.0f64];
    for j in 1..=k / 2 + 1 {
        let prev = s[j - 1];
        s.push(prev * (j as f64 - 1.5) / j as f64);
    }
    let mut binom = vec![1.0f64; k + 1];
    for m in 1..=k {
        binom[m] = binom[m - 1] * (k + 1 - m) as f64 / m as f64;
    }
    let mut poly = vec![0.0; k + 2];
    for (j, &sj) in s.iter().enumerate() {
        for (m, &bm) in binom.iter().enumerate() {
            let power = 1 + m as i64 - 2 * j as i64;
            if power >= 0 {
                let sign = if m % 2 == 0 { 1.0 } else { -1.0 };
                poly[power as usize] += sj * bm * sign;
            }
        }
    }
    poly
}

pub fn lemma1_identity(k: u32, z: f64) -> Result<LemmaCheck, AsymptoticsError> {
    if k > 2 {
        return Err(AsymptoticsError::LemmaIndex(k));
    }
    let rule = QuadratureRule::new(4096);
    let lhs: f64 = rule.integrate(|u| (1.0 - u).powi(k as i32) / (1.0 - z * (1.0 + 2.0 * u) / 3.0));
    let big_z = 3.0 / (2.0 * z) - 0.5;
    let p = principal_part_at_infinity(k);
    let pk: f64 = p.iter().rev().fold(0.0, |acc, &c| acc * big_z + c);
    let singular = (1.0 + z / 3.0).sqrt()
        * (-3.0 / (2.0 * z)).powi(k as i32 + 1)
        * (1.0 - z).powf(k as f64 + 0.5);
    let rhs = 3.0 * PI / (2.0 * z) * (singular + pk);
    Ok(LemmaCheck {
        k,
        z,
        lhs,
        rhs,
        gap: (lhs - rhs).abs(),
    })
}

/// Power of the denominator in the logarithmic-singularity integrals.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum LogExponent {
    Half,
    ThreeHalves,
}

impl LogExponent {
    fn value(self) -> f64 {
        match self {
            Self::Half => 0.5,
            Self::ThreeHalves => 1.5,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LogFit {
    pub exponent: LogExponent,
    pub k: u32,
    /// Coefficient of the leading `ln(1 − z)(1 − z)^p` term.
    pub coefficient: f64,
    pub fit: LeastSquares,
}

/// `∫(1−u)^k (1−u²)^{1/2} / (1 − z(1+2u)/3)^e du`.
pub fn log_integral(z: f64, k: u32, exponent: LogExponent, rule: &QuadratureRule) -> f64 {
    let e = exponent.value();
    rule.integrate(|u| {
        let den = 1.0 - z * (1.0 + 2.0 * u) / 3.0;
        (1.0 - u).powi(k as i32) / den.powf(e)
    })
}

/// Fits the integral near `z = 1` as `Σ_{j<3} a_j ln δ · δ^{p+j} + Σ_{j<4} b_j δ^j`
/// with `p = k + 1` for `e = 1/2` and `p = k` for `e = 3/2`, returning `a_0`.
pub fn log_singularity_fit(exponent: LogExponent, k: u32) -> Result<LogFit, AsymptoticsError> {
    let rule = QuadratureRule::new(200_000);
    let deltas = geometric_ladder(1e-2, 1e-6, 24);
    let p = match exponent {
        LogExponent::Half => k + 1,
        LogExponent::ThreeHalves => k,
    } as i32;
    let values: Vec<f64> = deltas
        .par_iter()
        .map(|&d| log_integral(1.0 - d, k, exponent, &rule))
        .collect();
    let rows: Vec<Vec<f64>> = deltas
        .iter()
        .map(|&d| {
            let l = d.ln();
            (0..3)
                .map(|j| l * d.powi(p + j))
                .chain((0..4).map(|j| d.powi(j)))
                .collect()
        })
        .collect();
    let fit = least_squares(&rows, &values)?;
    Ok(LogFit {
        exponent,
        k,
        coefficient: fit.coefficients[0],
        fit,
    })
}
