//! Deterministic numerical kernel: adaptive quadrature on finite and
//! semi-infinite intervals, bracketed root finding, sign-change scanning,
//! and the gamma function.
//!
//! Everything here is a pure function of its inputs; no randomness, no
//! shared state, so results are reproducible bit for bit across runs.

mod gamma;
mod quad;
mod root;
mod sign;

pub use gamma::gamma_fn;
pub use quad::{
    integrate, integrate_semi_infinite, integrate_semi_infinite_with_breakpoints,
    integrate_with_breakpoints, QuadResult,
};
pub use root::{find_root, Bracket};
pub use sign::{scan_sign_pattern, sign_pattern_of_samples, Sign, SignPattern, SignRun};

pub(crate) use quad::integrate_rel;

/// Default absolute tolerance for quadrature.
pub const DEFAULT_QUAD_TOL: f64 = 1e-10;
/// Default tolerance for root finding.
pub const DEFAULT_ROOT_TOL: f64 = 1e-10;
/// Default tolerance for sign classification (scaled by `max(1, sup|f|)`).
pub const DEFAULT_SIGN_TOL: f64 = 1e-9;

/// Errors produced by the numerical kernel.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum NumericsError {
    /// A precondition on the arguments was violated.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// The adaptive subdivision budget ran out before the tolerance was met.
    #[error("quadrature did not converge: best estimate {best}, error estimate {abs_error_estimate}")]
    NonConvergence { best: f64, abs_error_estimate: f64 },
    /// The integrand or target function returned NaN or infinity.
    #[error("function returned a non-finite value at x = {x}")]
    NonFinite { x: f64 },
    /// `find_root` was given a bracket without a sign change.
    #[error("no sign change on [{lo}, {hi}]: f(lo) = {f_lo}, f(hi) = {f_hi}")]
    NoSignChange { lo: f64, hi: f64, f_lo: f64, f_hi: f64 },
}
