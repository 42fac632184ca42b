//! Numerical analysis of lifetime distributions by ageing class.
//!
//! The crate converts between mean-residual-life (MRL) and survival
//! representations, computes moments, verifies NBUE/NWBUE moment and tail
//! bounds, classifies distributions (NBUE / NWUE / NWBUE / IDMRL) with
//! numerically located change points, and demonstrates moment and weak
//! convergence along NBUE sequences.
//!
//! Modules:
//! - [`numerics`]: adaptive quadrature, root finding, sign scanning, gamma.
//! - [`distributions`]: life distributions, MRL inversion, moments, catalog.
//! - [`ageing`]: MRL validity checks and ageing-class classification.
//! - [`bounds`]: tail, phi, and moment-bound verification with margins.
//! - [`convergence`]: mean/moment convergence demos along NBUE sequences.
//! - [`cli`]: command-line surface over all of the above.

// `!(x > 0.0)` deliberately treats NaN as invalid alongside nonpositive
// values; spelling that out everywhere hides the intent.
#![allow(clippy::neg_cmp_op_on_partial_ord)]
// Mathematical constants are kept at the precision of their source tables.
#![allow(clippy::excessive_precision)]

pub mod ageing;
pub mod bounds;
pub mod cli;
pub mod convergence;
pub mod distributions;
pub mod numerics;
