//! Coefficient extraction from `h(1, z)`, power-law tail fits, and numerical
//! checks of the singular behavior at `z = 1`.

pub mod constants;
pub mod extract;
pub mod fit;
pub mod singular;

use thiserror::Error;

use crate::genfun::GenFunError;
use crate::walk::WalkError;

pub use constants::{
    asymptotic_constant, pringsheim_transfer, tau_tail_constant, tau_tail_constant_from_transfer,
    PowerLaw,
};
pub use extract::{extract_coefficients, CoefficientSeries};
pub use fit::{least_squares, pinned_constant, tail_fit, LeastSquares, TailFit};
pub use singular::{
    lemma1_identity, log_singularity_fit, singular_coefficient_fit, LemmaCheck, LogFit,
    SingularFit, SingularOptions,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AsymptoticsError {
    #[error("radius {0} is outside (0, 1)")]
    Radius(f64),
    #[error("sample count {0} is not a power of two")]
    NotPowerOfTwo(usize),
    #[error("coefficient {k} is beyond the reliable range (error bound {bound:e})")]
    Unreliable { k: usize, bound: f64 },
    #[error("fit window [{k_min}, {k_max}] needs at least 10 points inside the data (length {len})")]
    Window { k_min: usize, k_max: usize, len: usize },
    #[error("non-positive value {value} at k = {k}")]
    NonPositive { k: usize, value: f64 },
    #[error("θ = {0} is a non-negative integer")]
    IntegerTheta(f64),
    #[error("lemma index k = {0} is not in 0..=2")]
    LemmaIndex(u32),
    #[error("least-squares system is rank deficient (condition {0:e})")]
    RankDeficient(f64),
    #[error(transparent)]
    GenFun(#[from] GenFunError),
    #[error(transparent)]
    Walk(#[from] WalkError),
}
