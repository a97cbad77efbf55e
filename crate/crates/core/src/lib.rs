//! Worst-case and best-case bounds for Value-at-Risk and Expected Shortfall
//! over classes of alternative distributions, together with absolute,
//! relative and local measures of model risk.
//!
//! The crate is organised around a small set of building blocks:
//!
//! * [`dist`] — evaluable probability laws (normal, Student-t, two-point,
//!   mixtures, affine transforms) with cdf / lower-quantile / moments.
//! * [`riskmeasure`] — VaR and ES evaluation, closed forms plus a generic
//!   quantile-integration path.
//! * [`envelope`] — maximal/minimal functions of a distribution class and
//!   extremal quantile extraction.
//! * [`bounds`] — closed-form Chebyshev / Cantelli / sharp tail bounds and
//!   the multiplier ratio curves.
//! * [`measures`] — absolute (AM), relative (RM) and local (LM) measures of
//!   model risk over the supported perturbation families.
//! * [`oracle`] — brute-force sweeps over two- and three-point laws that
//!   independently confirm the sharp identities.
//! * [`basel`] — the regulatory capital charge from a VaR history.

pub mod basel;
pub mod bounds;
pub mod dist;
pub mod envelope;
pub mod measures;
pub mod numerics;
pub mod oracle;
pub mod riskmeasure;
pub mod special;

/// Crate-wide error type.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),
    #[error("moment error: {0}")]
    Moment(String),
    #[error("integrability error: {0}")]
    Integrability(String),
    #[error("envelope not invertible: {0}")]
    NonInvertibleEnvelope(String),
    #[error("alpha out of range: {0}")]
    AlphaOutOfRange(String),
    #[error("radius too large: {0}")]
    RadiusTooLarge(String),
    #[error("root bracketing failed: {0}")]
    RootBracket(String),
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("reference risk must be positive: {0}")]
    NonPositiveReference(String),
    #[error("degenerate risk range: {0}")]
    DegenerateRange(String),
    #[error("reference risk outside attainable range: {0}")]
    OutOfRange(String),
    #[error("validation error: {0}")]
    Validation(String),
    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("infeasible constraints: {0}")]
    InfeasibleConstraints(String),
}

pub type Result<T> = std::result::Result<T, Error>;
