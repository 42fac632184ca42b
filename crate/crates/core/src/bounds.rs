//! Moment and tail inequalities with satisfaction margins.
//!
//! Covers the exponential tail bound `∫_x^∞ F̄ <= μ e^(-x/μ)` for NBUE
//! distributions, the phi-inequality `∫ φ F̄ <= ∫ φ e^(-y/μ)` for
//! nondecreasing nonnegative `φ`, the NBUE moment bound `Γ(r+1) μ^r`
//! (upper for `r >= 1`, lower for `r < 1`), the three change-point moment
//! bounds for NWBUE distributions, and the deficiency
//! `D(t) = μ^t Γ(t+1) - μ_t`.

use crate::distributions::{moment, DistError, LifeDistribution};
use crate::numerics::{
    gamma_fn, integrate_semi_infinite, integrate_semi_infinite_with_breakpoints, NumericsError,
};

#[derive(Debug, Clone, thiserror::Error)]
pub enum BoundsError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Which inequality a check refers to.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BoundId {
    NbueUpper,
    NbueLower,
    NwbueA,
    NwbueB,
    NwbueC,
    Tail,
    Phi,
}

impl std::fmt::Display for BoundId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            BoundId::NbueUpper => "NBUE_UPPER",
            BoundId::NbueLower => "NBUE_LOWER",
            BoundId::NwbueA => "NWBUE_A",
            BoundId::NwbueB => "NWBUE_B",
            BoundId::NwbueC => "NWBUE_C",
            BoundId::Tail => "TAIL",
            BoundId::Phi => "PHI",
        };
        f.write_str(s)
    }
}

/// Direction of the inequality `quantity <dir> value`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    Le,
    Ge,
}

impl std::fmt::Display for Direction {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Direction::Le => "<=",
            Direction::Ge => ">=",
        })
    }
}

/// One verified inequality: `quantity <dir> value`, with the signed margin
/// (positive when satisfied with room to spare).
#[derive(Debug, Clone)]
pub struct BoundCheck {
    pub id: BoundId,
    pub value: f64,
    pub direction: Direction,
    pub satisfied: bool,
    pub margin: f64,
}

impl BoundCheck {
    fn new(id: BoundId, quantity: f64, value: f64, direction: Direction) -> Self {
        // Quadrature noise must not flip verdicts at equality cases.
        let satisfied = match direction {
            Direction::Le => quantity <= value + value.abs() * 1e-8 + 1e-10,
            Direction::Ge => quantity >= value - value.abs() * 1e-8 - 1e-10,
        };
        let margin = match direction {
            Direction::Le => value - quantity,
            Direction::Ge => quantity - value,
        };
        Self {
            id,
            value,
            direction,
            satisfied,
            margin,
        }
    }
}

/// A computed quantity together with every applicable bound on it.
#[derive(Debug, Clone)]
pub struct BoundReport {
    /// The measured quantity (a moment or an integral).
    pub quantity: f64,
    pub checks: Vec<BoundCheck>,
}

impl BoundReport {
    pub fn all_satisfied(&self) -> bool {
        self.checks.iter().all(|c| c.satisfied)
    }

    pub fn check(&self, id: BoundId) -> Option<&BoundCheck> {
        self.checks.iter().find(|c| c.id == id)
    }
}

/// Verifies `∫_x^∞ F̄(t) dt <= μ e^(-x/μ)` at each requested age.
///
/// The bound is guaranteed only for NBUE distributions; for other inputs the
/// reports simply record where it fails. Returns one report per age, with
/// `quantity` the residual integral.
pub fn tail_bound_check(
    d: &LifeDistribution,
    xs: &[f64],
) -> Result<Vec<BoundReport>, BoundsError> {
    let mu = d.mean();
    let mut out = Vec::with_capacity(xs.len());
    for &x in xs {
        if !x.is_finite() || x < 0.0 {
            return Err(BoundsError::InvalidArgument(format!(
                "ages must be finite and nonnegative, got {x}"
            )));
        }
        let lhs = residual_integral(d, x)?;
        let rhs = mu * (-x / mu).exp();
        out.push(BoundReport {
            quantity: lhs,
            checks: vec![BoundCheck::new(BoundId::Tail, lhs, rhs, Direction::Le)],
        });
    }
    Ok(out)
}

fn residual_integral(d: &LifeDistribution, x: f64) -> Result<f64, BoundsError> {
    let coarse =
        integrate_semi_infinite_with_breakpoints(|t| d.survival(t), x, d.tail_rate(), d.knots(), 1e-6)?;
    let tol = (coarse.value.abs() * 1e-12).max(1e-13);
    let fine =
        integrate_semi_infinite_with_breakpoints(|t| d.survival(t), x, d.tail_rate(), d.knots(), tol)?;
    Ok(fine.value)
}

/// The NBUE moment bound value `Γ(r+1) μ^r`.
///
/// It is an upper bound on `μ_r` for `r >= 1` and a lower bound for
/// `0 < r < 1`; the caller pairs it with the direction.
pub fn nbue_moment_bound(mu: f64, r: f64) -> Result<f64, BoundsError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "mean must be positive, got {mu}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "order must be positive, got {r}"
        )));
    }
    Ok(gamma_fn(r + 1.0)? * mu.powf(r))
}

/// Verifies `∫_0^∞ φ(y) F̄(y) dy <= ∫_0^∞ φ(y) e^(-y/μ) dy` for a
/// caller-certified nonnegative nondecreasing `φ`.
///
/// Holds with equality for the exponential; guaranteed for NBUE inputs.
pub fn check_phi_inequality(
    d: &LifeDistribution,
    phi: impl Fn(f64) -> f64,
    tol: f64,
) -> Result<BoundReport, BoundsError> {
    if !(tol > 0.0) {
        return Err(BoundsError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let mu = d.mean();
    let lhs = integrate_semi_infinite_with_breakpoints(
        |y| phi(y) * d.survival(y),
        0.0,
        d.tail_rate(),
        d.knots(),
        tol,
    )?
    .value;
    let rhs = integrate_semi_infinite(|y| phi(y) * (-y / mu).exp(), 0.0, mu, tol)?.value;
    Ok(BoundReport {
        quantity: lhs,
        checks: vec![BoundCheck::new(BoundId::Phi, lhs, rhs, Direction::Le)],
    })
}

/// Poisson-style partial sum `Σ_{j=0}^{r-1} z^j / j!` for integer `r >= 1`.
fn poisson_partial_sum(z: f64, r: u32) -> f64 {
    let mut term = 1.0;
    let mut sum = 0.0;
    for j in 0..r {
        if j > 0 {
            term *= z / j as f64;
        }
        sum += term;
    }
    sum
}

fn factorial(n: u32) -> f64 {
    (2..=n).fold(1.0, |acc, k| acc * k as f64)
}

fn as_integer_order(r: f64) -> Option<u32> {
    let rounded = r.round();
    (r >= 1.0 && (r - rounded).abs() <= 1e-9 && rounded <= u32::MAX as f64)
        .then_some(rounded as u32)
}

/// Change-point moment bound (a): `r e^(x0/μ) ∫_{x0}^∞ x^(r-1) e^(-x/μ) dx`.
///
/// Upper bound for `r >= 1`, lower bound for `r < 1`. Integer orders use the
/// incomplete-gamma closed form `r! μ^r Σ_{j<r} (x0/μ)^j / j!` (factorials
/// only, keeping it independent of `gamma_fn`); other orders are integrated
/// numerically.
pub fn nwbue_bound_a(mu: f64, x0: f64, r: f64) -> Result<f64, BoundsError> {
    validate_bound_args(mu, x0, r)?;
    if let Some(ri) = as_integer_order(r) {
        let z = x0 / mu;
        return Ok(factorial(ri) * mu.powi(ri as i32) * poisson_partial_sum(z, ri));
    }
    let integral = if x0 == 0.0 && r < 1.0 {
        // u = x^r removes the endpoint singularity
        let inv_r = 1.0 / r;
        integrate_semi_infinite(|u| (-(u.powf(inv_r)) / mu).exp(), 0.0, mu, 1e-12)?.value / r
    } else {
        integrate_semi_infinite(|x| x.powf(r - 1.0) * (-x / mu).exp(), x0, mu, 1e-12)?.value
    };
    Ok(r * (x0 / mu).exp() * integral)
}

/// Change-point moment bound (b) for integer `r >= 1`:
/// `x0^r + μ^r Γ(r+1) Σ_{j=0}^{r-1} (x0/μ)^j / j!`.
pub fn nwbue_bound_b(mu: f64, x0: f64, r: u32) -> Result<f64, BoundsError> {
    validate_bound_args(mu, x0, r as f64)?;
    if r < 1 {
        return Err(BoundsError::InvalidArgument(
            "bound (b) needs an integer order r >= 1".into(),
        ));
    }
    let z = x0 / mu;
    Ok(x0.powi(r as i32) + mu.powi(r as i32) * factorial(r) * poisson_partial_sum(z, r))
}

/// Literal transcription variant of bound (b), where the summand is
/// `(x0/μ)^r / r!` for every `j` (a printed-index slip in the source bound;
/// reported alongside the standard form, never asserted).
pub fn nwbue_bound_b_literal(mu: f64, x0: f64, r: u32) -> Result<f64, BoundsError> {
    validate_bound_args(mu, x0, r as f64)?;
    if r < 1 {
        return Err(BoundsError::InvalidArgument(
            "bound (b) needs an integer order r >= 1".into(),
        ));
    }
    let z = x0 / mu;
    let summand = z.powi(r as i32) / factorial(r);
    Ok(x0.powi(r as i32) + mu.powi(r as i32) * factorial(r) * r as f64 * summand)
}

/// Change-point moment bound (c): `μ^r Γ(r+1) e^(x0/μ)` for `r >= 1`.
pub fn nwbue_bound_c(mu: f64, x0: f64, r: f64) -> Result<f64, BoundsError> {
    validate_bound_args(mu, x0, r)?;
    if r < 1.0 {
        return Err(BoundsError::InvalidArgument(
            "bound (c) applies for r >= 1".into(),
        ));
    }
    Ok(mu.powf(r) * gamma_fn(r + 1.0)? * (x0 / mu).exp())
}

fn validate_bound_args(mu: f64, x0: f64, r: f64) -> Result<(), BoundsError> {
    if !(mu > 0.0) || !mu.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "mean must be positive, got {mu}"
        )));
    }
    if !(x0 >= 0.0) || !x0.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "change point must be finite and nonnegative, got {x0}"
        )));
    }
    if !(r > 0.0) || !r.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "order must be positive, got {r}"
        )));
    }
    Ok(())
}

/// Computes `μ_r` and every applicable change-point bound at `x0`.
///
/// Bound (a) applies for all `r` (direction flips below 1), bound (b) only
/// for integer `r >= 1`, bound (c) for all `r >= 1`. At `x0 = 0` bounds (a)
/// and (c) collapse to the plain NBUE bound `Γ(r+1) μ^r`.
pub fn nwbue_bounds(d: &LifeDistribution, x0: f64, r: f64) -> Result<BoundReport, BoundsError> {
    let mu = d.mean();
    validate_bound_args(mu, x0, r)?;
    let mu_r = moment(d, r)?;

    let mut checks = Vec::new();
    let dir_a = if r >= 1.0 { Direction::Le } else { Direction::Ge };
    checks.push(BoundCheck::new(
        BoundId::NwbueA,
        mu_r,
        nwbue_bound_a(mu, x0, r)?,
        dir_a,
    ));
    if let Some(ri) = as_integer_order(r) {
        checks.push(BoundCheck::new(
            BoundId::NwbueB,
            mu_r,
            nwbue_bound_b(mu, x0, ri)?,
            Direction::Le,
        ));
    }
    if r >= 1.0 {
        checks.push(BoundCheck::new(
            BoundId::NwbueC,
            mu_r,
            nwbue_bound_c(mu, x0, r)?,
            Direction::Le,
        ));
    }
    Ok(BoundReport {
        quantity: mu_r,
        checks,
    })
}

/// Full moment-bound report: the NBUE bound plus, when a change point is
/// given, the three NWBUE bounds.
pub fn moment_bound_report(
    d: &LifeDistribution,
    r: f64,
    x0: Option<f64>,
) -> Result<BoundReport, BoundsError> {
    let mu = d.mean();
    let mu_r = moment(d, r)?;
    let nbue_value = nbue_moment_bound(mu, r)?;
    let mut checks = vec![if r >= 1.0 {
        BoundCheck::new(BoundId::NbueUpper, mu_r, nbue_value, Direction::Le)
    } else {
        BoundCheck::new(BoundId::NbueLower, mu_r, nbue_value, Direction::Ge)
    }];
    if let Some(x0) = x0 {
        checks.extend(nwbue_bounds(d, x0, r)?.checks);
    }
    Ok(BoundReport {
        quantity: mu_r,
        checks,
    })
}

/// Deficiency value `D(t)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Deficiency {
    pub t: f64,
    /// `μ^t Γ(t+1) - μ_t`; negative values witness failure of the NBUE
    /// upper moment bound.
    pub value: f64,
}

/// `D(t) = μ^t Γ(t+1) - E(X^t)`.
pub fn deficiency(d: &LifeDistribution, t: f64) -> Result<Deficiency, BoundsError> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(BoundsError::InvalidArgument(format!(
            "deficiency order must be positive, got {t}"
        )));
    }
    let bound = nbue_moment_bound(d.mean(), t)?;
    let mu_t = moment(d, t)?;
    Ok(Deficiency {
        t,
        value: bound - mu_t,
    })
}
