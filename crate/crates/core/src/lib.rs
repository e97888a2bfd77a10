//! Absorption laws of the quarter-plane walk induced by the discrete-time
//! voter model: exact dynamic programming, generating functions evaluated
//! through their integral representations, block-dynamics Monte Carlo, and
//! the asymptotic checks tying them together.

pub mod analytic;
pub mod asymptotics;
pub mod genfun;
pub mod quadrature;
pub mod validate;
pub mod voter;
pub mod walk;

pub use analytic::{AnalyticError, BranchPoints, ComplexValue, CurveSample, KernelPolynomials};
pub use asymptotics::{AsymptoticsError, CoefficientSeries, TailFit};
pub use genfun::{GenFunError, HEvaluation, HOptions, HParts};
pub use quadrature::QuadratureRule;
pub use validate::{run_criterion, run_suite, CriterionOutcome, Suite};
pub use voter::{BlockConfig, McSummary, PassageRecord, RngStream, VoterError};
pub use walk::{
    dp_absorption, dp_absorption_exact, AbsorptionTable, Axis, ExactProb, LatticePoint, Mode,
    StepKernel, WalkError,
};
