//! Numbered acceptance checks shared by the test suite and `qwalk validate`.

use std::fmt;
use std::time::Instant;

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::analytic::{group_order_check, y_pair, BranchPoints, Cgf};
use crate::asymptotics::{
    asymptotic_constant, extract_coefficients, lemma1_identity, log_singularity_fit,
    singular_coefficient_fit, tail_fit, tau_tail_constant, SingularOptions,
};
use crate::asymptotics::constants::tau_tail_constant_from_transfer;
use crate::asymptotics::singular::{LogExponent, LOG_TERM, SQRT_TERM, THREE_HALVES_TERM};
use crate::genfun::{boundary_residual, dp_partial_sum, functional_eq_residuals, h_total};
use crate::voter::{estimate_distribution, BlockConfig, DEFAULT_CAP};
use crate::walk::{dp_absorption, LatticePoint};

/// Seed of the Monte Carlo check.
pub const MC_SEED: u64 = 20_240_601;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CriterionOutcome {
    pub id: u8,
    pub title: &'static str,
    pub passed: bool,
    pub detail: String,
    pub seconds: f64,
}

impl fmt::Display for CriterionOutcome {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "criterion {:>2} {} {} ({:.1}s): {}",
            self.id,
            if self.passed { "PASS" } else { "FAIL" },
            self.title,
            self.seconds,
            self.detail
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    All,
    Analytic,
    Oracle,
    Mc,
}

impl Suite {
    pub fn criteria(self) -> Vec<u8> {
        match self {
            Suite::All => (1..=11).collect(),
            Suite::Analytic => vec![6, 7, 10],
            Suite::Oracle => vec![1, 2, 3, 4, 5, 8, 9],
            Suite::Mc => vec![11],
        }
    }
}

pub const TITLES: [&str; 11] = [
    "P[S=k] k^5/2 asymptotic",
    "P[tau>=k] k^3/2 constant",
    "h(1,z) against DP partial sums",
    "functional equation residual",
    "coefficient extraction",
    "branch-point identities",
    "gluing function and group order",
    "boundary condition on the curve",
    "singular-term cancellation",
    "integral lemmas",
    "Monte Carlo against DP",
];

type Check = Result<(bool, String), String>;

fn err<E: fmt::Display>(e: E) -> String {
    e.to_string()
}

/// Runs criterion `id` (1..=11).
pub fn run_criterion(id: u8) -> CriterionOutcome {
    assert!((1..=11).contains(&id), "no criterion {id}");
    let t0 = Instant::now();
    let result = match id {
        1 => main_asymptotic(),
        2 => tau_tail(),
        3 => analytic_vs_dp(),
        4 => functional_equation(),
        5 => extraction(),
        6 => branch_points(),
        7 => gluing(),
        8 => boundary(),
        9 => cancellation(),
        10 => integral_lemmas(),
        _ => monte_carlo(),
    };
    let (passed, detail) = result.unwrap_or_else(|e| (false, format!("error: {e}")));
    CriterionOutcome {
        id,
        title: TITLES[id as usize - 1],
        passed,
        detail,
        seconds: t0.elapsed().as_secs_f64(),
    }
}

pub fn run_suite(suite: Suite) -> Vec<CriterionOutcome> {
    suite.criteria().into_iter().map(run_criterion).collect()
}

const P11: LatticePoint = LatticePoint::new(1, 1);

fn main_asymptotic() -> Check {
    let table = dp_absorption(P11, 2000, false).map_err(err)?;
    let c = asymptotic_constant(1, 1);
    let gaps: Vec<f64> = [500usize, 1000, 2000]
        .iter()
        .map(|&k| (table.p_s[k] * (k as f64).powf(2.5) / c - 1.0).abs())
        .collect();
    let fit = tail_fit(&table.p_s, 500, 2000).map_err(err)?;
    let ok = gaps[2] <= 0.10
        && gaps[0] > gaps[1]
        && gaps[1] > gaps[2]
        && (-2.6..=-2.4).contains(&fit.slope);
    Ok((
        ok,
        format!(
            "|ratio-1| at k=500,1000,2000: {:.2e}, {:.2e}, {:.2e}; slope {:.4}",
            gaps[0], gaps[1], gaps[2], fit.slope
        ),
    ))
}

fn tau_tail() -> Check {
    let table = dp_absorption(P11, 2000, false).map_err(err)?;
    let v = table.tail()[2000] * 2000f64.powf(1.5);
    let claimed = tau_tail_constant(1, 1);
    let transferred = tau_tail_constant_from_transfer(1, 1);
    let gap = (v / claimed - 1.0).abs();
    Ok((
        gap <= 0.10,
        format!(
            "P[tau>=2000]*2000^1.5 = {v:.6}, target {claimed:.6} (gap {:.1}%); \
             (4/3)*{:.6} = {transferred:.6} (gap {:.2}%)",
            100.0 * gap,
            asymptotic_constant(1, 1),
            100.0 * (v / transferred - 1.0).abs()
        ),
    ))
}

fn analytic_vs_dp() -> Check {
    let mut worst = 0.0f64;
    for start in [P11, LatticePoint::new(2, 1), LatticePoint::new(2, 3)] {
        let table = dp_absorption(start, 1000, false).map_err(err)?;
        for z in [0.25, 0.5, 0.75, 0.9] {
            let zc = Complex64::new(z, 0.0);
            let h = h_total(Complex64::new(1.0, 0.0), zc, start).map_err(err)?.value;
            let want = dp_partial_sum(&table, zc);
            worst = worst.max((h - want).norm() / want.norm());
        }
    }
    Ok((worst <= 1e-8, format!("max relative gap {worst:.2e}")))
}

/// `(x, y, z)` grid with `|x|, |y| ≤ 0.8`, `|z| ≤ 0.8`, off the real slits.
pub fn functional_grid() -> Vec<(Complex64, Complex64, Complex64)> {
    let c = Complex64::new;
    let xs = [c(-0.8, 0.0), c(0.3, 0.7), c(0.8, 0.0)];
    let ys = [c(-0.6, 0.4), c(0.75, 0.0), c(0.0, -0.5)];
    let zs = [c(0.2, 0.0), c(-0.5, 0.4), c(0.8, 0.0)];
    let mut grid = Vec::with_capacity(27);
    for &x in &xs {
        for &y in &ys {
            for &z in &zs {
                grid.push((x, y, z));
            }
        }
    }
    grid
}

fn functional_equation() -> Check {
    let grid = functional_grid();
    let mut worst = 0.0f64;
    for start in [P11, LatticePoint::new(2, 1)] {
        let r = functional_eq_residuals(&grid, start, 300).map_err(err)?;
        worst = r.into_iter().fold(worst, f64::max);
    }
    Ok((worst <= 1e-9, format!("max residual {worst:.2e} over 27 points, starts (1,1),(2,1)")))
}

fn extraction() -> Check {
    let series = extract_coefficients(P11, 0.9, 4096).map_err(err)?;
    let table = dp_absorption(P11, 64, false).map_err(err)?;
    let mut worst = 0.0f64;
    let mut compared = 0;
    for k in 0..=64 {
        let p = table.p_s[k];
        if p > 1e-8 {
            worst = worst.max((series.coefficients[k] - p).abs() / p);
            compared += 1;
        } else {
            worst = worst.max((series.coefficients[k] - p).abs() / 1e-8);
        }
    }
    Ok((
        worst <= 1e-6,
        format!("max relative error {worst:.2e} over {compared} coefficients (k<=64)"),
    ))
}

fn branch_points() -> Check {
    let mut worst = 0.0f64;
    let mut ordered = true;
    for i in 1..=50 {
        let bp = BranchPoints::new(i as f64 / 50.0).map_err(err)?;
        worst = worst.max((bp.x1 * bp.x4 - 1.0).abs()).max((bp.x2 * bp.x3 - 1.0).abs());
        ordered &= 0.0 < bp.x1 && bp.x1 < bp.x2 && bp.x2 <= bp.x3 && bp.x3 < bp.x4 && bp.x2 <= 1.0;
    }
    let one = BranchPoints::new(1.0).map_err(err)?;
    let s3 = 3f64.sqrt();
    let end = (one.x1 - (7.0 - 4.0 * s3)).abs().max((one.x4 - (7.0 + 4.0 * s3)).abs());
    Ok((
        worst <= 1e-12 && end <= 1e-12 && ordered,
        format!("max |x1x4-1|,|x2x3-1| = {worst:.1e}; z=1 endpoint error {end:.1e}; ordered {ordered}"),
    ))
}

fn gluing() -> Check {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut worst = 0.0f64;
    for z in [0.3, 0.5, 0.7] {
        let w = Cgf::new(z).map_err(err)?;
        let bp = BranchPoints::new(z).map_err(err)?;
        let mut n = 0;
        while n < 100 {
            let y = Complex64::new(rng.random_range(-3.0..3.0), rng.random_range(-3.0..3.0));
            if bp.on_inner_slit(y) {
                continue;
            }
            let (x0, x1) = y_pair(y, Complex64::new(z, 0.0)).map_err(err)?;
            let (a, b) = (w.eval(x0).map_err(err)?, w.eval(x1).map_err(err)?);
            worst = worst.max((a - b).norm() / a.norm().max(b.norm()));
            n += 1;
        }
    }
    let group = group_order_check(100).map_err(err)?;
    Ok((
        worst <= 1e-10 && group,
        format!("max relative gap {worst:.2e}; order six exact: {group}"),
    ))
}

fn boundary() -> Check {
    let r = boundary_residual(0.5, P11, 64, 300).map_err(err)?;
    Ok((r <= 5e-9, format!("max residual {r:.2e}")))
}

fn cancellation() -> Check {
    let mut ok = true;
    let mut detail = Vec::new();
    let s3 = 3f64.sqrt();
    for start in [P11, LatticePoint::new(2, 3)] {
        let fit = singular_coefficient_fit(start, &SingularOptions::default()).map_err(err)?;
        let (x0, y0) = (start.x as f64, start.y as f64);
        let want = [-s3 * y0, s3 * y0 / 2.0, s3 * y0 / 2.0];
        let parts: Vec<f64> = (0..3).map(|i| fit.part_coefficient(i, SQRT_TERM)).collect();
        let part_gap = parts
            .iter()
            .zip(want)
            .map(|(g, w)| (g / w - 1.0).abs())
            .fold(0.0, f64::max);
        let sqrt_total = fit.total[SQRT_TERM].abs() / (s3 * y0);
        let log_scale = s3 * y0 / (2.0 * std::f64::consts::PI) * (x0 + y0 / 2.0 - 0.5);
        let log_total = fit.total[LOG_TERM].abs() / log_scale;
        let three_halves = fit.total[THREE_HALVES_TERM];
        let th_want = 0.75 * s3 * x0 * y0 * (x0 + y0);
        let th_gap = (three_halves / th_want - 1.0).abs();
        ok &= part_gap <= 0.05 && sqrt_total <= 0.01 && log_total <= 0.01;
        if start == P11 {
            ok &= th_gap <= 0.05;
        }
        detail.push(format!(
            "({},{}): sqrt parts {:.5}/{:.5}/{:.5}, total {:.1e} of scale, log total {:.1e} of scale, 3/2 total {:.5} vs {:.5}, cond {:.1e}",
            start.x, start.y, parts[0], parts[1], parts[2], sqrt_total, log_total, three_halves, th_want,
            fit.condition()
        ));
    }
    Ok((ok, detail.join("; ")))
}

fn integral_lemmas() -> Check {
    let mut gap = 0.0f64;
    for k in 0..=2 {
        for z in [0.3, 0.5, 0.7] {
            gap = gap.max(lemma1_identity(k, z).map_err(err)?.gap);
        }
    }
    let s3 = 3f64.sqrt();
    let a0 = log_singularity_fit(LogExponent::Half, 0).map_err(err)?.coefficient;
    let g0 = log_singularity_fit(LogExponent::ThreeHalves, 0).map_err(err)?.coefficient;
    let g1 = log_singularity_fit(LogExponent::ThreeHalves, 1).map_err(err)?.coefficient;
    let rel = |v: f64, w: f64| (v / w - 1.0).abs();
    let (ea, e0, e1) = (rel(a0, 0.75 * s3), rel(g0, -1.5 * s3), rel(g1, 27.0 * s3 / 8.0));
    Ok((
        gap <= 1e-10 && ea <= 0.02 && e0 <= 0.03 && e1 <= 0.03,
        format!(
            "lemma gap {gap:.1e}; alpha0 {a0:.6} ({:.2e}), gamma0 {g0:.6} ({:.2e}), gamma1 {g1:.6} ({:.2e})",
            ea, e0, e1
        ),
    ))
}

fn monte_carlo() -> Check {
    let config = BlockConfig::new(vec![(1, 1)]).map_err(err)?;
    let trials = 1_000_000;
    let run = || estimate_distribution(&config, trials, MC_SEED, 20, DEFAULT_CAP).map_err(err);
    let first = run()?;
    let second = run()?;
    let bytes = |e: &crate::voter::HittingEstimate| serde_json::to_vec(&e.summary()).map_err(err);
    let identical = bytes(&first)? == bytes(&second)?;
    let table = dp_absorption(P11, 20, false).map_err(err)?;
    let sup = first
        .pmf()
        .iter()
        .zip(&table.p_tau)
        .map(|(a, b)| (a - b).abs())
        .fold(0.0, f64::max);
    Ok((
        sup <= 0.002 && identical,
        format!(
            "sup_k<=20 |pmf - p_tau| = {sup:.2e}; truncated {}; identical reruns {identical}",
            first.truncated
        ),
    ))
}
