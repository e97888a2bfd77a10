use num_complex::Complex64;

use super::{AnalyticError, KernelPolynomials};

/// `U_n(u)` by the three-term recurrence.
pub fn chebyshev_u(n: usize, u: Complex64) -> Complex64 {
    let mut prev = Complex64::new(1.0, 0.0);
    if n == 0 {
        return prev;
    }
    let mut cur = 2.0 * u;
    for _ in 1..n {
        let next = 2.0 * u * cur - prev;
        prev = cur;
        cur = next;
    }
    cur
}

/// Odd-index binomial sum `(2a)^{−y0} Σ_k C(y0, 2k+1) d^k (−b)^{y0−2k−1}`.
pub fn mu(t: Complex64, z: Complex64, y0: u32) -> Result<Complex64, AnalyticError> {
    let k = KernelPolynomials::new(z);
    let a = k.a(t);
    if a == Complex64::new(0.0, 0.0) {
        return Err(AnalyticError::LeadingCoefficientZero { x: t, z });
    }
    let (b, d) = (k.b(t), k.d(t));
    let mut binom = y0 as f64; // C(y0, 1)
    let mut sum = Complex64::new(0.0, 0.0);
    let mut j = 1u32;
    while j <= y0 {
        sum += binom * d.powu((j - 1) / 2) * (-b).powu(y0 - j);
        // C(y0, j+2) from C(y0, j).
        binom *= (y0 - j) as f64 * (y0.saturating_sub(j + 1)) as f64
            / ((j + 1) as f64 * (j + 2) as f64);
        j += 2;
    }
    Ok(sum / (2.0 * a).powu(y0))
}

/// `b̂(t, z) = b / (4ac)^{1/2}`.
pub fn b_hat(t: Complex64, z: Complex64) -> Complex64 {
    let k = KernelPolynomials::new(z);
    k.b(t) / (4.0 * k.a(t) * k.c(t)).sqrt()
}

/// The root `t2(u, z)` of `b² − 4u²ac` in the unit disc, with `∂u t2`.
///
/// Writing `t2 = s²` turns the quartic into `s² − W s + 1 = 0` with
/// `W = (6/z + u² + 2)^{1/2} − u`; the root `|s| ≤ 1` is taken. For complex
/// `z` the square root is formed as `(√6/√z)(1 + (u² + 2)z/6)^{1/2}`, which
/// stays continuous across the negative real axis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SubstitutionNode {
    pub s: Complex64,
    pub t2: Complex64,
    pub dt2: Complex64,
}

impl SubstitutionNode {
    pub fn new(u: f64, z: Complex64) -> Self {
        let v = (6f64.sqrt() / z.sqrt()) * (1.0 + (u * u + 2.0) * z / 6.0).sqrt();
        let w = v - u;
        let disc = (w * w - 4.0).sqrt();
        let (r1, r2) = ((w - disc) / 2.0, (w + disc) / 2.0);
        let s = if r1.norm_sqr() <= r2.norm_sqr() { r1 } else { r2 };
        let dw = u / v - 1.0;
        let ds = dw * s / (2.0 * s - w);
        Self {
            s,
            t2: s * s,
            dt2: 2.0 * s * ds,
        }
    }
}

fn t_formula(u: f64, z: f64) -> Complex64 {
    let t = 3.0 / z + u * u - u * (2.0 + u * u + 6.0 / z).sqrt();
    let t = Complex64::new(t, 0.0);
    t - (t * t - 1.0).sqrt()
}

/// Roots `t_i(u, z)`, `i = 1..4`, of `b(t,z)² − 4u² a(t,z) c(t,z)`.
///
/// Real `z ∈ (0, 1]` uses `T(u,z) ∓ (T² − 1)^{1/2}` directly; other `z` go
/// through [`SubstitutionNode`].
pub fn t_root(u: f64, z: Complex64, index: usize) -> Result<Complex64, AnalyticError> {
    if !(-1.0..=1.0).contains(&u) {
        return Err(AnalyticError::UOutOfRange(u));
    }
    let t2 = |u: f64| {
        if z.im == 0.0 && z.re > 0.0 && z.re <= 1.0 {
            t_formula(u, z.re)
        } else {
            SubstitutionNode::new(u, z).t2
        }
    };
    match index {
        1 => Ok(t2(-u)),
        2 => Ok(t2(u)),
        3 => Ok(t2(u).inv()),
        4 => Ok(t2(-u).inv()),
        i => Err(AnalyticError::RootIndex(i)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::BranchPoints;
    use approx::assert_abs_diff_eq;
    use proptest::prelude::*;

    fn re(v: f64) -> Complex64 {
        Complex64::new(v, 0.0)
    }

    #[test]
    fn chebyshev_values() {
        assert_abs_diff_eq!(chebyshev_u(3, re(0.5)).re, -1.0, epsilon = 1e-15);
        for n in 0..20 {
            assert_abs_diff_eq!(chebyshev_u(n, re(1.0)).re, (n + 1) as f64, epsilon = 1e-12);
        }
    }

    #[test]
    fn chebyshev_matches_trigonometric_form() {
        for n in 0..12 {
            for theta in [0.3, 1.1, 2.5] {
                let want = ((n + 1) as f64 * theta).sin() / f64::sin(theta);
                assert_abs_diff_eq!(chebyshev_u(n, re(f64::cos(theta))).re, want, epsilon = 1e-12);
            }
        }
    }

    #[test]
    fn mu_small_orders() {
        let z = re(0.6);
        let k = KernelPolynomials::new(z);
        let t = Complex64::new(0.3, -0.2);
        let (a, b, d) = (k.a(t), k.b(t), k.d(t));
        assert!((mu(t, z, 1).unwrap() - 1.0 / (2.0 * a)).norm() < 1e-14);
        assert!((mu(t, z, 2).unwrap() + b / (2.0 * a * a)).norm() < 1e-13);
        let mu3 = (3.0 * b * b + d) / (8.0 * a * a * a);
        assert!((mu(t, z, 3).unwrap() - mu3).norm() < 1e-12 * mu3.norm());
        assert!(mu(re(-1.0), z, 2).is_err());
    }

    #[test]
    fn mu_jump_across_the_slit() {
        for z in [0.3, 0.5, 0.8] {
            let bp = BranchPoints::new(z).unwrap();
            let k = KernelPolynomials::new(z);
            for i in 1..20 {
                let t = bp.x1 + (bp.x2 - bp.x1) * i as f64 / 20.0;
                let sq = (-k.d(re(t)).re).sqrt();
                // Boundary value from above the slit.
                let y0 = (-k.b(re(t)) - Complex64::new(0.0, sq)) / (2.0 * k.a(re(t)));
                for y in 1..6u32 {
                    let lhs = y0.powu(y) - y0.conj().powu(y);
                    let rhs = Complex64::new(0.0, -2.0 * sq) * mu(re(t), re(z), y).unwrap();
                    assert!((lhs - rhs).norm() <= 1e-10 * (1.0 + lhs.norm()));
                }
            }
        }
    }

    #[test]
    fn t_root_endpoints_are_branch_points() {
        for z in [0.2, 0.5, 0.9, 1.0] {
            let bp = BranchPoints::new(z).unwrap();
            for (i, x) in bp.as_array().into_iter().enumerate() {
                let t = t_root(1.0, re(z), i + 1).unwrap();
                assert!((t.re - x).abs() <= 1e-7 * x, "z={z} i={i}: {t} vs {x}");
            }
        }
        let t = t_root(0.0, re(0.5), 2).unwrap();
        assert_abs_diff_eq!(t.re, 6.0 - 35f64.sqrt(), epsilon = 1e-14);
        assert!(t_root(1.5, re(0.5), 2).is_err());
        assert!(t_root(0.5, re(0.5), 5).is_err());
    }

    #[test]
    fn substitution_matches_closed_form_for_real_z() {
        for z in [0.1, 0.5, 0.95] {
            for j in 0..=20 {
                let u = -1.0 + j as f64 / 10.0;
                let node = SubstitutionNode::new(u, re(z));
                let t = t_formula(u, z);
                assert!((node.t2 - t).norm() <= 1e-13);
                // Finite-difference derivative.
                if u.abs() < 0.99 {
                    let h = 1e-6;
                    let fd = (t_formula(u + h, z) - t_formula(u - h, z)) / (2.0 * h);
                    assert!((node.dt2 - fd).norm() <= 1e-7 * (1.0 + fd.norm()));
                }
            }
        }
    }

    proptest! {
        #[test]
        fn roots_solve_the_quartic(u in -1.0..1.0f64, zr in -0.95..0.95f64, zi in -0.95..0.95f64) {
            let z = Complex64::new(zr, zi);
            prop_assume!(z.norm() > 0.05 && z.norm() < 0.99);
            let k = KernelPolynomials::new(z);
            for i in 1..=4 {
                let t = t_root(u, z, i).unwrap();
                let (a, b, c) = (k.a(t), k.b(t), k.c(t));
                let res = b * b - 4.0 * u * u * a * c;
                prop_assert!(res.norm() <= 1e-10 * ((b * b).norm() + (4.0 * a * c).norm()));
            }
            let t2 = t_root(u, z, 2).unwrap();
            prop_assert!(t2.norm() <= 1.0 + 1e-12);
        }

        #[test]
        fn b_hat_inverts_t2(u in -1.0..1.0f64, z in 0.05..1.0f64) {
            let t2 = t_root(u, re(z), 2).unwrap();
            prop_assert!((b_hat(t2, re(z)) + u).norm() <= 1e-10);
        }

        #[test]
        fn chebyshev_parity(n in 0usize..30, ur in -2.0..2.0f64, ui in -2.0..2.0f64) {
            let u = Complex64::new(ur, ui);
            let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
            let a = chebyshev_u(n, -u);
            let b = sign * chebyshev_u(n, u);
            prop_assert!((a - b).norm() <= 1e-12 * (1.0 + a.norm()));
        }
    }
}
