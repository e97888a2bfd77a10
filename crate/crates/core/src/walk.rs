//! Exact law of the absorbed six-step walk.
//!
//! The walk lives on the quarter plane and is killed on the axes. Mass is
//! propagated time-major over a dense grid sized to the reachable support;
//! whatever crosses onto an axis is booked as absorption at that step.
//!
//! Two arithmetic modes share one propagator: `f64` for long horizons and
//! integer numerators over the implicit common denominator `6^k` for exact
//! tables.

use std::ops::AddAssign;

use num_bigint::BigUint;
use num_rational::{BigRational, Ratio};
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

/// Largest horizon accepted by the exact mode.
pub const EXACT_HORIZON_LIMIT: usize = 200;

/// Interior displacements of the walk, each taken with probability 1/6.
pub const STEPS: [(i32, i32); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum WalkError {
    #[error("start point ({x}, {y}) is not in the open quadrant")]
    NotInterior { x: u32, y: u32 },
    #[error("exact mode is limited to horizon {limit}, got {horizon}")]
    HorizonOverflow { horizon: usize, limit: usize },
}

/// Arithmetic mode of a DP run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exact,
    Float,
}

/// The six interior transitions with their probabilities.
#[derive(Debug, Clone, PartialEq)]
pub struct StepKernel {
    steps: Vec<(i32, i32, Ratio<u32>)>,
}

impl StepKernel {
    pub fn voter() -> Self {
        Self {
            steps: STEPS
                .iter()
                .map(|&(dx, dy)| (dx, dy, Ratio::new(1, 6)))
                .collect(),
        }
    }

    pub fn steps(&self) -> &[(i32, i32, Ratio<u32>)] {
        &self.steps
    }

    pub fn total_exact(&self) -> Ratio<u32> {
        self.steps.iter().map(|s| s.2).sum()
    }

    pub fn total_float(&self) -> f64 {
        self.steps
            .iter()
            .map(|s| *s.2.numer() as f64 / *s.2.denom() as f64)
            .sum()
    }

    /// Mean displacement; zero for this kernel.
    pub fn drift(&self) -> (Ratio<i64>, Ratio<i64>) {
        self.steps.iter().fold(
            (Ratio::zero(), Ratio::zero()),
            |(mx, my), &(dx, dy, p)| {
                let p = Ratio::new(*p.numer() as i64, *p.denom() as i64);
                (mx + p * dx as i64, my + p * dy as i64)
            },
        )
    }
}

impl Default for StepKernel {
    fn default() -> Self {
        Self::voter()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct LatticePoint {
    pub x: u32,
    pub y: u32,
}

impl LatticePoint {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    /// An interior starting point, `x ≥ 1` and `y ≥ 1`.
    pub fn interior(x: u32, y: u32) -> Result<Self, WalkError> {
        let p = Self { x, y };
        if p.is_interior() {
            Ok(p)
        } else {
            Err(WalkError::NotInterior { x, y })
        }
    }

    pub fn is_interior(&self) -> bool {
        self.x >= 1 && self.y >= 1
    }

    pub fn is_boundary(&self) -> bool {
        self.x == 0 || self.y == 0
    }

    /// The mirrored start `(y, x)`.
    pub fn swapped(&self) -> Self {
        Self {
            x: self.y,
            y: self.x,
        }
    }
}

/// Exact probability `numerator / 6^scale_exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ExactProb {
    pub numerator: BigUint,
    pub scale_exponent: u32,
}

impl ExactProb {
    pub fn new(numerator: BigUint, scale_exponent: u32) -> Self {
        Self {
            numerator,
            scale_exponent,
        }
    }

    pub fn one() -> Self {
        Self::new(BigUint::one(), 0)
    }

    pub fn denominator(&self) -> BigUint {
        BigUint::from(6u32).pow(self.scale_exponent)
    }

    /// Reduced rational value.
    pub fn to_ratio(&self) -> BigRational {
        BigRational::new(self.numerator.clone().into(), self.denominator().into())
    }

    pub fn to_f64(&self) -> f64 {
        self.to_ratio().to_f64().unwrap_or(f64::NAN)
    }
}

impl std::fmt::Display for ExactProb {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.to_ratio())
    }
}

/// Per-step values the propagator can carry.
///
/// `settle` turns the raw sum of the six predecessor cells into the mass at
/// the next step: a division by six for floats, identity for numerators over
/// `6^k` (the denominator advances implicitly).
pub trait Mass: Clone + Send + Sync + Zero + for<'a> AddAssign<&'a Self> {
    fn settle(self) -> Self;
}

impl Mass for f64 {
    #[inline]
    fn settle(self) -> Self {
        self / 6.0
    }
}

impl Mass for BigUint {
    #[inline]
    fn settle(self) -> Self {
        self
    }
}

/// Mass that crossed onto each axis during one step, indexed by the site
/// coordinate (`x_axis[i]` is the hit of `(i, 0)`).
#[derive(Debug, Clone)]
pub struct StepAbsorption<M> {
    pub x_axis: Vec<M>,
    pub y_axis: Vec<M>,
}

impl<M: Mass> StepAbsorption<M> {
    pub fn total_x(&self) -> M {
        sum_refs(&self.x_axis)
    }

    pub fn total_y(&self) -> M {
        sum_refs(&self.y_axis)
    }
}

fn sum_refs<M: Mass>(values: &[M]) -> M {
    let mut acc = M::zero();
    for v in values {
        acc += v;
    }
    acc
}

/// Time-major propagator of the killed walk.
///
/// Cells are stored row-major as `[x][y]` over `0..rows × 0..cols`; axis cells
/// stay zero. At time `k` the interior mass is confined to
/// `x ≤ x0 + k`, `y ≤ y0 + k`, `x + y ≤ x0 + y0 + k`, and only that diamond is
/// swept.
#[derive(Debug, Clone)]
pub struct Propagator<M> {
    start: LatticePoint,
    horizon: usize,
    time: usize,
    cols: usize,
    current: Vec<M>,
    scratch: Vec<M>,
}

impl<M: Mass> Propagator<M> {
    pub fn new(start: LatticePoint, horizon: usize, unit: M) -> Result<Self, WalkError> {
        if !start.is_interior() {
            return Err(WalkError::NotInterior {
                x: start.x,
                y: start.y,
            });
        }
        let rows = start.x as usize + horizon + 2;
        let cols = start.y as usize + horizon + 2;
        let mut current = vec![M::zero(); rows * cols];
        current[start.x as usize * cols + start.y as usize] = unit;
        Ok(Self {
            start,
            horizon,
            time: 0,
            cols,
            scratch: current.clone(),
            current,
        })
    }

    pub fn time(&self) -> usize {
        self.time
    }

    pub fn horizon(&self) -> usize {
        self.horizon
    }

    pub fn start(&self) -> LatticePoint {
        self.start
    }

    /// Largest `x` (and per-row largest `y`) that can hold mass at the
    /// current time.
    pub fn x_extent(&self) -> usize {
        self.start.x as usize + self.time
    }

    pub fn y_extent(&self, x: usize) -> usize {
        let k = self.time;
        let by_y = self.start.y as usize + k;
        let by_sum = (self.start.x + self.start.y) as usize + k;
        by_y.min(by_sum.saturating_sub(x))
    }

    pub fn mass(&self, x: usize, y: usize) -> &M {
        &self.current[x * self.cols + y]
    }

    /// Interior row `x`, columns `0..=y_extent(x)`.
    pub fn row(&self, x: usize) -> &[M] {
        let base = x * self.cols;
        &self.current[base..base + self.y_extent(x) + 1]
    }

    pub fn interior_total(&self) -> M {
        let mut acc = M::zero();
        for x in 1..=self.x_extent() {
            for v in &self.row(x)[1..] {
                acc += v;
            }
        }
        acc
    }

    /// Advances one time step and returns the mass absorbed on each axis.
    ///
    /// Returns `None` once the horizon is reached.
    pub fn step(&mut self) -> Option<StepAbsorption<M>> {
        if self.time >= self.horizon {
            return None;
        }
        let cols = self.cols;
        let old = &self.current;

        // Absorption: (i,0) is reached from (i,1) by (0,-1) and from
        // (i-1,1) by (1,-1); (0,j) from (1,j) by (-1,0) and (1,j-1) by (-1,1).
        let xmax = self.x_extent();
        let mut x_axis = vec![M::zero(); xmax + 2];
        for (i, slot) in x_axis.iter_mut().enumerate().skip(1) {
            let mut acc = M::zero();
            if i < xmax + 1 {
                acc += &old[i * cols + 1];
            }
            acc += &old[(i - 1) * cols + 1];
            *slot = acc.settle();
        }
        let ymax = self.y_extent(1);
        let mut y_axis = vec![M::zero(); ymax + 2];
        for (j, slot) in y_axis.iter_mut().enumerate().skip(1) {
            let mut acc = M::zero();
            if j < ymax + 1 {
                acc += &old[cols + j];
            }
            acc += &old[cols + j - 1];
            *slot = acc.settle();
        }

        self.time += 1;
        let k = self.time;
        let (x0, y0) = (self.start.x as usize, self.start.y as usize);
        let new_xmax = x0 + k;
        self.scratch
            .par_chunks_mut(cols)
            .enumerate()
            .skip(1)
            .take(new_xmax)
            .for_each(|(x, row)| {
                let ymax = (y0 + k).min((x0 + y0 + k).saturating_sub(x));
                let up = (x - 1) * cols;
                let mid = x * cols;
                let down = (x + 1) * cols;
                for (y, cell) in row.iter_mut().enumerate().take(ymax + 1).skip(1) {
                    let mut acc = M::zero();
                    acc += &old[up + y]; // (1,0)
                    acc += &old[up + y + 1]; // (1,-1)
                    acc += &old[mid + y + 1]; // (0,-1)
                    acc += &old[down + y]; // (-1,0)
                    acc += &old[down + y - 1]; // (-1,1)
                    acc += &old[mid + y - 1]; // (0,1)
                    *cell = acc.settle();
                }
            });
        // Axis cells of scratch were never written and remain zero.
        std::mem::swap(&mut self.current, &mut self.scratch);
        Some(StepAbsorption { x_axis, y_axis })
    }
}

/// Site-resolved absorption, `x_axis[k][i]` = P[hit (i,0) at time k].
#[derive(Debug, Clone, PartialEq)]
pub struct SiteHits<P> {
    pub x_axis: Vec<Vec<P>>,
    pub y_axis: Vec<Vec<P>>,
}

/// Which axis an absorption site lies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Axis {
    #[serde(rename = "x")]
    X,
    #[serde(rename = "y")]
    Y,
}

impl<P> SiteHits<P> {
    /// Flattened `(k, axis, index, prob)` records, x-axis first at each k.
    pub fn records(&self) -> impl Iterator<Item = (usize, Axis, usize, &P)> {
        self.x_axis
            .iter()
            .zip(&self.y_axis)
            .enumerate()
            .flat_map(|(k, (xs, ys))| {
                xs.iter()
                    .enumerate()
                    .skip(1)
                    .map(move |(i, p)| (k, Axis::X, i, p))
                    .chain(
                        ys.iter()
                            .enumerate()
                            .skip(1)
                            .map(move |(j, p)| (k, Axis::Y, j, p)),
                    )
            })
    }
}

/// Truncated law of `(S, T, τ)` and optionally of the absorption site.
#[derive(Debug, Clone, PartialEq)]
pub struct AbsorptionTable<P = f64> {
    pub start: LatticePoint,
    pub horizon: usize,
    pub p_s: Vec<P>,
    pub p_t: Vec<P>,
    pub p_tau: Vec<P>,
    /// `survival[k]` = P[τ > k].
    pub survival: Vec<P>,
    pub sites: Option<SiteHits<P>>,
}

impl<P: Clone> AbsorptionTable<P> {
    /// `P[τ ≥ k]` for `k = 0..=horizon + 1`.
    pub fn survival_tail(&self, one: P) -> Vec<P> {
        std::iter::once(one).chain(self.survival.iter().cloned()).collect()
    }
}

impl AbsorptionTable<f64> {
    pub fn tail(&self) -> Vec<f64> {
        self.survival_tail(1.0)
    }
}

impl AbsorptionTable<ExactProb> {
    pub fn tail(&self) -> Vec<ExactProb> {
        self.survival_tail(ExactProb::one())
    }

    pub fn to_float(&self) -> AbsorptionTable<f64> {
        let conv = |v: &Vec<ExactProb>| v.iter().map(ExactProb::to_f64).collect::<Vec<_>>();
        AbsorptionTable {
            start: self.start,
            horizon: self.horizon,
            p_s: conv(&self.p_s),
            p_t: conv(&self.p_t),
            p_tau: conv(&self.p_tau),
            survival: conv(&self.survival),
            sites: self.sites.as_ref().map(|s| SiteHits {
                x_axis: s.x_axis.iter().map(conv).collect(),
                y_axis: s.y_axis.iter().map(conv).collect(),
            }),
        }
    }
}

fn run<M: Mass, P>(
    start: LatticePoint,
    horizon: usize,
    unit: M,
    record_sites: bool,
    wrap: impl Fn(M, u32) -> P,
) -> Result<AbsorptionTable<P>, WalkError> {
    let mut prop = Propagator::new(start, horizon, unit.clone())?;
    let mut p_s = vec![wrap(M::zero(), 0)];
    let mut p_t = vec![wrap(M::zero(), 0)];
    let mut p_tau = vec![wrap(M::zero(), 0)];
    let mut survival = vec![wrap(unit, 0)];
    let mut sites = record_sites.then(|| SiteHits {
        x_axis: vec![Vec::new()],
        y_axis: vec![Vec::new()],
    });
    while let Some(hit) = prop.step() {
        let k = prop.time() as u32;
        let s = hit.total_x();
        let t = hit.total_y();
        let mut tau = s.clone();
        tau += &t;
        p_s.push(wrap(s, k));
        p_t.push(wrap(t, k));
        p_tau.push(wrap(tau, k));
        survival.push(wrap(prop.interior_total(), k));
        if let Some(sites) = sites.as_mut() {
            sites
                .x_axis
                .push(hit.x_axis.into_iter().map(|m| wrap(m, k)).collect());
            sites
                .y_axis
                .push(hit.y_axis.into_iter().map(|m| wrap(m, k)).collect());
        }
    }
    Ok(AbsorptionTable {
        start,
        horizon,
        p_s,
        p_t,
        p_tau,
        survival,
        sites,
    })
}

/// Floating-point absorption table up to `horizon`.
pub fn dp_absorption(
    start: LatticePoint,
    horizon: usize,
    record_sites: bool,
) -> Result<AbsorptionTable<f64>, WalkError> {
    run(start, horizon, 1.0f64, record_sites, |m, _| m)
}

/// Exact absorption table; every entry at step `k` is a numerator over `6^k`.
pub fn dp_absorption_exact(
    start: LatticePoint,
    horizon: usize,
    record_sites: bool,
) -> Result<AbsorptionTable<ExactProb>, WalkError> {
    if horizon > EXACT_HORIZON_LIMIT {
        return Err(WalkError::HorizonOverflow {
            horizon,
            limit: EXACT_HORIZON_LIMIT,
        });
    }
    run(start, horizon, BigUint::one(), record_sites, ExactProb::new)
}

/// `P_{(x0,y0)}[T = k] = P_{(y0,x0)}[S = k]` for every `k ≤ horizon`.
pub fn swap_symmetry_check(
    start: LatticePoint,
    horizon: usize,
    mode: Mode,
) -> Result<bool, WalkError> {
    let mirrored = start.swapped();
    Ok(match mode {
        Mode::Exact => {
            let a = dp_absorption_exact(start, horizon, false)?;
            let b = dp_absorption_exact(mirrored, horizon, false)?;
            a.p_t == b.p_s
        }
        Mode::Float => {
            let a = dp_absorption(start, horizon, false)?;
            let b = dp_absorption(mirrored, horizon, false)?;
            a.p_t
                .iter()
                .zip(&b.p_s)
                .all(|(u, v)| (u - v).abs() <= 1e-14)
        }
    })
}
