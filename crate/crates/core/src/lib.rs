//! Mittag-Leffler functions on the imaginary and negative real axes, oscillatory
//! integrals built from them, fractional operators with respect to a function,
//! and numerical checks of van der Corput-type decay estimates.

pub mod error;
pub mod fit;
pub mod frac;
pub mod gamma;
pub mod gauss;
pub mod hypotheses;
pub mod mlf;
pub mod problem;
pub mod quad;
pub mod scalar;
pub mod special;
pub mod tfpde;
pub mod verify;

pub use error::{Error, Result};
pub use hypotheses::{check_hypotheses, HypothesisOptions, HypothesisReport, TheoremId};
pub use mlf::{
    euler_decompose, ml_closed_form, ml_eval, ml_neg_real, ml_series, Backend, EvalPolicy,
    ImagAxisEvaluator, MlOrder, NegRealEvaluator,
};
pub use scalar::Real;
pub use verify::{run_case, CaseReport, CheckMode, TheoremCase};

/// Complex values returned by the evaluators.
pub type ComplexValue = num_complex::Complex64;

pub type FunctionSpec = problem::FunctionSpec<f64>;
pub type FunctionSpec32 = problem::FunctionSpec<f32>;
pub type Interval = problem::Interval<f64>;
pub type Interval32 = problem::Interval<f32>;
pub type DomainStats = problem::DomainStats<f64>;
pub type DomainStats32 = problem::DomainStats<f32>;
