//! Generating functions `h(x, z) = Σ_k Σ_i P[hit (i,0) at k] x^i z^k`, its
//! mirror `h̃`, and the interior occupation series `G`.
//!
//! `h` is evaluated as `h1 + h2 + h3`: `h1` is algebraic, `h2` and `h3` are
//! Cauchy-type integrals over the slit `[x1, x2]` that become smooth
//! `(1 − u²)^{1/2}`-weighted integrals after the substitution `t = t2(u, z)`.

use std::f64::consts::PI;

use num_complex::Complex64;
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::analytic::{
    chebyshev_u, curve_sample, mu, y_pair, AnalyticError, BranchPoints, KernelPolynomials,
    SubstitutionNode,
};
use crate::quadrature::QuadratureRule;
use crate::walk::{dp_absorption, AbsorptionTable, LatticePoint, Propagator, WalkError};

/// Closest approach to `z = 1` accepted by the integral representation.
pub const MIN_DISTANCE_TO_ONE: f64 = 1e-6;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum GenFunError {
    #[error("x = {x} lies on the slit [{x1}, {x2}] for z = {z}")]
    OnSlit { x: Complex64, z: f64, x1: f64, x2: f64 },
    #[error("z = {0} is within {MIN_DISTANCE_TO_ONE:e} of 1")]
    NearOne(Complex64),
    #[error("z = {0} is outside the open unit disc")]
    OutsideDisc(Complex64),
    #[error("quadrature did not converge by order {order} (error estimate {error_estimate:e})")]
    NotConverged { order: usize, error_estimate: f64 },
    #[error(transparent)]
    Analytic(#[from] AnalyticError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}

/// A value with the change observed on doubling the quadrature order.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HEvaluation {
    pub value: Complex64,
    pub error_estimate: f64,
    /// Quadrature order of `value` (0 when no quadrature was needed).
    pub order: usize,
}

impl HEvaluation {
    fn exact(value: Complex64) -> Self {
        Self {
            value,
            error_estimate: 0.0,
            order: 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct HParts {
    pub h1: HEvaluation,
    pub h2: HEvaluation,
    pub h3: HEvaluation,
}

impl HParts {
    pub fn total(&self) -> HEvaluation {
        HEvaluation {
            value: self.h1.value + self.h2.value + self.h3.value,
            error_estimate: self.h2.error_estimate + self.h3.error_estimate,
            order: self.h2.order.max(self.h3.order),
        }
    }
}

/// Order schedule of the adaptive evaluation.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HOptions {
    pub min_order: usize,
    pub max_order: usize,
    /// Stop when doubling changes `h2 + h3` by less than this, relative to
    /// `max(|h|, |h2|, |h3|)`.
    pub rel_tol: f64,
}

impl Default for HOptions {
    fn default() -> Self {
        Self {
            min_order: 64,
            max_order: 4096,
            rel_tol: 1e-12,
        }
    }
}

const ZERO: Complex64 = Complex64 { re: 0.0, im: 0.0 };

fn check_domain(x: Complex64, z: Complex64) -> Result<(), GenFunError> {
    if z.norm() >= 1.0 {
        return Err(GenFunError::OutsideDisc(z));
    }
    if (1.0 - z).norm() < MIN_DISTANCE_TO_ONE {
        return Err(GenFunError::NearOne(z));
    }
    if z.im == 0.0 && z.re > 0.0 {
        let bp = BranchPoints::new(z.re)?;
        if bp.on_inner_slit(x) {
            return Err(GenFunError::OnSlit {
                x,
                z: z.re,
                x1: bp.x1,
                x2: bp.x2,
            });
        }
    }
    Ok(())
}

/// `[h1, h2, h3]` at a fixed quadrature rule, after the `t2` substitution.
///
/// `X1(Y_i(x), z)` is `Y_i(x)/x`, so the `h3` kernel is written as
/// `x/(t x − Y_i)`, which stays finite as `x → 0`.
pub fn h_parts_at(
    x: Complex64,
    z: Complex64,
    start: LatticePoint,
    rule: &QuadratureRule,
) -> Result<[Complex64; 3], GenFunError> {
    check_domain(x, z)?;
    if z == ZERO || x == ZERO {
        return Ok([ZERO; 3]);
    }
    let (x0, y0) = (start.x as i32, start.y as i32);
    let (y_small, y_large) = y_pair(x, z)?;
    let h1 = x.powi(x0) * y_small.powi(y0);
    let (mut s2, mut s3) = (ZERO, ZERO);
    for (u, w) in rule.iter() {
        let node = SubstitutionNode::new(u, z);
        let t = node.t2;
        let common = chebyshev_u(start.y as usize - 1, Complex64::new(u, 0.0)) * node.dt2 * w;
        let p = node.s.powi(2 * x0 - 2 + y0);
        s2 += p / (t - x) * common;
        let bracket = x / (t * x - y_small) + x / (t * x - y_large) - 1.0 / (t + 1.0);
        s3 += p * t * bracket * common;
    }
    Ok([h1, x * s2 / PI, s3 / PI])
}

/// `[h1, h2, h3]` by integrating directly in `t` over `[x1, x2]` with the
/// odd binomial sum `μ` (real `z ∈ (0, 1)` only).
pub fn h_parts_direct(
    x: Complex64,
    z: f64,
    start: LatticePoint,
    rule: &QuadratureRule,
) -> Result<[Complex64; 3], GenFunError> {
    let zc = Complex64::new(z, 0.0);
    check_domain(x, zc)?;
    if z == 0.0 || x == ZERO {
        return Ok([ZERO; 3]);
    }
    let bp = BranchPoints::new(z)?;
    let (x0, y0) = (start.x as i32, start.y as i32);
    let (y_small, y_large) = y_pair(x, zc)?;
    let h1 = x.powi(x0) * y_small.powi(y0);
    let (mid, half) = ((bp.x1 + bp.x2) / 2.0, (bp.x2 - bp.x1) / 2.0);
    let (mut s2, mut s3) = (ZERO, ZERO);
    for (v, w) in rule.iter() {
        let t = mid + half * v;
        // (−d)^{1/2} = (z/6)·((t−x1)(x2−t))^{1/2}·((x3−t)(x4−t))^{1/2}; the
        // first root is half·(1−v²)^{1/2}, carried by the rule.
        let outer = ((bp.x3 - t) * (bp.x4 - t)).sqrt();
        let f = mu(Complex64::new(t, 0.0), zc, start.y)? * (z / 6.0 * half * half * outer * w);
        let tc = Complex64::new(t, 0.0);
        s2 += tc.powi(x0 - 1) / (tc - x) * f;
        let bracket = x / (tc * x - y_small) + x / (tc * x - y_large) - 1.0 / (tc + 1.0);
        s3 += tc.powi(x0) * bracket * f;
    }
    Ok([h1, x * s2 / PI, s3 / PI])
}

/// Parts at order `n` with error estimates from comparison against `2n`.
pub fn h_parts(
    x: Complex64,
    z: Complex64,
    start: LatticePoint,
    order: usize,
) -> Result<HParts, GenFunError> {
    let coarse = h_parts_at(x, z, start, &QuadratureRule::new(order))?;
    let fine = h_parts_at(x, z, start, &QuadratureRule::new(2 * order))?;
    let ev = |i: usize| HEvaluation {
        value: fine[i],
        error_estimate: (fine[i] - coarse[i]).norm(),
        order: 2 * order,
    };
    Ok(HParts {
        h1: HEvaluation::exact(fine[0]),
        h2: ev(1),
        h3: ev(2),
    })
}

/// Parts with the quadrature order doubled until `opts.rel_tol` is met.
pub fn h_parts_adaptive(
    x: Complex64,
    z: Complex64,
    start: LatticePoint,
    opts: &HOptions,
) -> Result<HParts, GenFunError> {
    let mut order = opts.min_order.max(1);
    let mut prev = h_parts_at(x, z, start, &QuadratureRule::new(order))?;
    loop {
        let next_order = 2 * order;
        let cur = h_parts_at(x, z, start, &QuadratureRule::new(next_order))?;
        let err2 = (cur[1] - prev[1]).norm();
        let err3 = (cur[2] - prev[2]).norm();
        let scale = (cur[0] + cur[1] + cur[2])
            .norm()
            .max(cur[1].norm())
            .max(cur[2].norm());
        let err = err2 + err3;
        if err <= opts.rel_tol * scale || scale == 0.0 {
            let ev = |v: Complex64, e: f64| HEvaluation {
                value: v,
                error_estimate: e,
                order: next_order,
            };
            return Ok(HParts {
                h1: HEvaluation::exact(cur[0]),
                h2: ev(cur[1], err2),
                h3: ev(cur[2], err3),
            });
        }
        if next_order >= opts.max_order {
            return Err(GenFunError::NotConverged {
                order: next_order,
                error_estimate: err,
            });
        }
        prev = cur;
        order = next_order;
    }
}

/// `h(x, z)` with the default schedule (orders 64 to 4096, tolerance 1e−12).
pub fn h_total(
    x: Complex64,
    z: Complex64,
    start: LatticePoint,
) -> Result<HEvaluation, GenFunError> {
    h_total_with(x, z, start, &HOptions::default())
}

pub fn h_total_with(
    x: Complex64,
    z: Complex64,
    start: LatticePoint,
    opts: &HOptions,
) -> Result<HEvaluation, GenFunError> {
    Ok(h_parts_adaptive(x, z, start, opts)?.total())
}

/// `h̃(y, z)` from `(x0, y0)`, which is `h(y, z)` from `(y0, x0)`.
pub fn h_tilde_total(
    y: Complex64,
    z: Complex64,
    start: LatticePoint,
) -> Result<HEvaluation, GenFunError> {
    h_total(y, z, start.swapped())
}

/// `Σ_k Σ_i P[hit (i,0) at k] x^i z^k` from a site-resolved table.
///
/// Returns `None` when the table was built without site records.
pub fn h_series(x: Complex64, z: Complex64, table: &AbsorptionTable<f64>) -> Option<Complex64> {
    let sites = table.sites.as_ref()?;
    let mut zk = Complex64::new(1.0, 0.0);
    let mut acc = ZERO;
    for row in &sites.x_axis {
        // Horner in x over the row.
        let mut poly = ZERO;
        for &p in row.iter().rev() {
            poly = poly * x + p;
        }
        acc += zk * poly;
        zk *= z;
    }
    Some(acc)
}

/// Partial sums `Σ_{k ≤ K} Σ_{i,j} P[(X,Y)(k) = (i,j), τ > k] x^{i−1} y^{j−1} z^k`
/// for several `(x, y, z)` from one DP run.
pub fn g_truncated_many(
    points: &[(Complex64, Complex64, Complex64)],
    start: LatticePoint,
    horizon: usize,
) -> Result<Vec<Complex64>, GenFunError> {
    let mut prop = Propagator::new(start, horizon, 1.0f64)?;
    let mut acc = vec![ZERO; points.len()];
    let mut zk = vec![Complex64::new(1.0, 0.0); points.len()];
    loop {
        let xmax = prop.x_extent();
        acc.par_iter_mut()
            .zip(points.par_iter())
            .zip(zk.par_iter())
            .for_each(|((a, &(x, y, _)), &zp)| {
                let mut outer = ZERO;
                for i in (1..=xmax).rev() {
                    let row = prop.row(i);
                    let mut inner = ZERO;
                    for &m in row[1..].iter().rev() {
                        inner = inner * y + m;
                    }
                    outer = outer * x + inner;
                }
                *a += zp * outer;
            });
        if prop.time() == horizon {
            break;
        }
        for (zp, p) in zk.iter_mut().zip(points) {
            *zp *= p.2;
        }
        prop.step();
    }
    Ok(acc)
}

pub fn g_truncated(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    start: LatticePoint,
    horizon: usize,
) -> Result<Complex64, GenFunError> {
    Ok(g_truncated_many(&[(x, y, z)], start, horizon)?[0])
}

/// `|Q(x,y,z) G − h(x,z) − h̃(y,z) + x^{x0} y^{y0}|` with `G` truncated at `horizon`.
pub fn functional_eq_residual(
    x: Complex64,
    y: Complex64,
    z: Complex64,
    start: LatticePoint,
    horizon: usize,
) -> Result<f64, GenFunError> {
    Ok(functional_eq_residuals(&[(x, y, z)], start, horizon)?[0])
}

/// [`functional_eq_residual`] over several points sharing one DP run.
pub fn functional_eq_residuals(
    points: &[(Complex64, Complex64, Complex64)],
    start: LatticePoint,
    horizon: usize,
) -> Result<Vec<f64>, GenFunError> {
    let g = g_truncated_many(points, start, horizon)?;
    points
        .par_iter()
        .zip(g.par_iter())
        .map(|(&(x, y, z), &g)| {
            let q = KernelPolynomials::new(z).q(x, y);
            let h = h_total(x, z, start)?.value;
            let ht = h_tilde_total(y, z, start)?.value;
            let mono = x.powu(start.x) * y.powu(start.y);
            Ok((q * g - h - ht + mono).norm())
        })
        .collect()
}

/// Max over curve points `t` of `|h(t) − h(t̄) − (t^{x0} − t̄^{x0}) u^{y0}|`,
/// where `u = Y0(t)` is the slit abscissa of `t` and `h` is the DP series.
pub fn boundary_residual(
    z: f64,
    start: LatticePoint,
    samples: usize,
    horizon: usize,
) -> Result<f64, GenFunError> {
    let curve = curve_sample(z, samples)?;
    let table = dp_absorption(start, horizon, true)?;
    let zc = Complex64::new(z, 0.0);
    let mut worst = 0.0f64;
    for (u, t) in curve.pairs() {
        let lhs = h_series(t, zc, &table).expect("sites recorded")
            - h_series(t.conj(), zc, &table).expect("sites recorded");
        let rhs = (t.powu(start.x) - t.conj().powu(start.x)) * u.powi(start.y as i32);
        worst = worst.max((lhs - rhs).norm());
    }
    Ok(worst)
}

/// `Σ_{k ≤ K} p_S[k] z^k`.
pub fn dp_partial_sum(table: &AbsorptionTable<f64>, z: Complex64) -> Complex64 {
    let mut acc = ZERO;
    for &p in table.p_s.iter().rev() {
        acc = acc * z + p;
    }
    acc
}
