use nalgebra::{DMatrix, DVector};
use serde::Serialize;

use super::AsymptoticsError;

/// Least-squares solution of `A c ≈ b`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LeastSquares {
    pub coefficients: Vec<f64>,
    /// Ratio of extreme singular values after scaling columns to unit norm.
    pub condition: f64,
    /// Root-mean-square residual.
    pub residual: f64,
}

/// Solves a dense least-squares problem by SVD; `rows` holds the rows of `A`.
pub fn least_squares(rows: &[Vec<f64>], rhs: &[f64]) -> Result<LeastSquares, AsymptoticsError> {
    let m = rows.len();
    let n = rows.first().map_or(0, Vec::len);
    let mut a = DMatrix::from_fn(m, n, |i, j| rows[i][j]);
    let norms: Vec<f64> = (0..n).map(|j| a.column(j).norm()).collect();
    for (j, &s) in norms.iter().enumerate() {
        if s > 0.0 {
            a.column_mut(j).scale_mut(1.0 / s);
        }
    }
    let b = DVector::from_column_slice(rhs);
    let svd = a.clone().svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if !condition.is_finite() {
        return Err(AsymptoticsError::RankDeficient(condition));
    }
    let x = svd
        .solve(&b, smax * f64::EPSILON)
        .map_err(|_| AsymptoticsError::RankDeficient(condition))?;
    let r = &a * &x - &b;
    let coefficients = x
        .iter()
        .zip(&norms)
        .map(|(&v, &s)| if s > 0.0 { v / s } else { 0.0 })
        .collect();
    Ok(LeastSquares {
        coefficients,
        condition,
        residual: r.norm() / (m as f64).sqrt(),
    })
}

/// Log-log regression of a sequence over `[k_min, k_max]`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TailFit {
    pub k_min: usize,
    pub k_max: usize,
    pub slope: f64,
    /// `exp(intercept)`, the constant `c` in `c k^{slope}`.
    pub constant: f64,
    /// RMS residual of the regression in log space.
    pub residual: f64,
}

fn check_window(series: &[f64], k_min: usize, k_max: usize) -> Result<(), AsymptoticsError> {
    if k_min == 0 || k_max < k_min + 9 || k_max >= series.len() {
        return Err(AsymptoticsError::Window {
            k_min,
            k_max,
            len: series.len(),
        });
    }
    for (k, &v) in series.iter().enumerate().take(k_max + 1).skip(k_min) {
        if v <= 0.0 || !v.is_finite() {
            return Err(AsymptoticsError::NonPositive { k, value: v });
        }
    }
    Ok(())
}

/// Fits `log p_k = log c + slope · log k` on the window.
pub fn tail_fit(series: &[f64], k_min: usize, k_max: usize) -> Result<TailFit, AsymptoticsError> {
    check_window(series, k_min, k_max)?;
    let pts: Vec<(f64, f64)> = (k_min..=k_max)
        .map(|k| ((k as f64).ln(), series[k].ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let slope = sxy / sxx;
    let intercept = my - slope * mx;
    let ss: f64 = pts
        .iter()
        .map(|p| (p.1 - intercept - slope * p.0).powi(2))
        .sum();
    Ok(TailFit {
        k_min,
        k_max,
        slope,
        constant: intercept.exp(),
        residual: (ss / n).sqrt(),
    })
}

/// Geometric mean of `p_k k^{exponent}` over the window: the constant of a
/// power law whose exponent is held fixed.
pub fn pinned_constant(
    series: &[f64],
    k_min: usize,
    k_max: usize,
    exponent: f64,
) -> Result<f64, AsymptoticsError> {
    check_window(series, k_min, k_max)?;
    let n = (k_max - k_min + 1) as f64;
    let mean: f64 = (k_min..=k_max)
        .map(|k| series[k].ln() + exponent * (k as f64).ln())
        .sum::<f64>()
        / n;
    Ok(mean.exp())
}
