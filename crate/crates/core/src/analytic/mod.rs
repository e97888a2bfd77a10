//! Kernel polynomial, algebraic branches, gluing function and the Chebyshev
//! substitution used by the integral representations.

pub mod branch;
pub mod cgf;
pub mod chebyshev;
pub mod curve;
pub mod group;
pub mod kernel;

use num_complex::Complex64;
use thiserror::Error;

pub use branch::{y_branch, y_pair, Branch, BranchPoints};
pub use cgf::Cgf;
pub use chebyshev::{b_hat, chebyshev_u, mu, t_root, SubstitutionNode};
pub use curve::{curve_sample, CurveSample};
pub use group::{compose_xi_eta, eta, group_order_check, xi};
pub use kernel::KernelPolynomials;

/// Complex numbers used throughout the analytic layer.
pub type ComplexValue = Complex64;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum AnalyticError {
    #[error("z = {0} is outside (0, 1]")]
    ZOutOfRange(f64),
    #[error("a(x, z) vanishes at x = {x}, z = {z}")]
    LeadingCoefficientZero { x: Complex64, z: Complex64 },
    #[error("gluing function has a pole at t = {0}")]
    Pole(Complex64),
    #[error("root index must be 1..=4, got {0}")]
    RootIndex(usize),
    #[error("u = {0} is outside [-1, 1]")]
    UOutOfRange(f64),
    #[error("curve sample needs at least two abscissae, got {0}")]
    TooFewSamples(usize),
    #[error("sample count must be positive")]
    NoSamples,
}
