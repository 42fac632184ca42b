//! Life distributions: survival evaluators, MRL evaluation, moments, the
//! MRL-to-survival inversion, and the built-in catalog.
//!
//! A [`LifeDistribution`] is immutable after construction and wraps a pure
//! survival evaluator `F̄(x)` on `[0, ∞)` together with its analytic
//! breakpoints, declared mean, and a certified exponential tail scale used
//! to truncate semi-infinite integrals.

pub mod catalog;
mod mrl;

pub use mrl::{from_mrl, MrlSpec, Segment, SegmentKind};

use std::sync::Arc;

use crate::ageing::MrlValidityReport;
use crate::numerics::{
    self, integrate_semi_infinite_with_breakpoints, NumericsError,
};

/// Errors from distribution construction and evaluation.
#[derive(Debug, Clone, thiserror::Error)]
pub enum DistError {
    /// Structural problem in an MRL spec (ordering, contiguity, finiteness).
    #[error("invalid MRL spec: {0}")]
    InvalidSpec(String),
    /// The MRL spec failed the validity conditions (V1-V4).
    #[error("MRL function is not valid: {0}")]
    InvalidMrl(MrlValidityReport),
    /// Survival is numerically zero; residual life is undefined there.
    #[error("support exceeded at x = {x}: survival vanished")]
    SupportExceeded { x: f64 },
    /// Catalog lookup failed.
    #[error("unknown catalog distribution `{name}`; available: {available}")]
    UnknownCatalog { name: String, available: String },
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    /// A moment integral left too much estimated error to trust.
    #[error("moment integral did not converge: estimate {estimate}, error estimate {abs_error}")]
    MomentNonConvergence { estimate: f64, abs_error: f64 },
    /// The survival tail is not exponentially dominated (unbounded growing
    /// MRL), so truncated semi-infinite quadrature cannot be trusted.
    #[error("survival tail is not exponentially dominated; residual-life and moment quadrature are unsupported for unbounded growing MRL functions")]
    UncertifiedTail,
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// How a distribution was constructed.
#[derive(Debug, Clone)]
pub enum Origin {
    FromSurvival,
    FromMrl(MrlSpec),
    Builtin { name: String, params: Vec<(String, f64)> },
}

/// An immutable life distribution given by its survival function.
#[derive(Clone)]
pub struct LifeDistribution {
    survival: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
    knots: Vec<f64>,
    mean: f64,
    tail_rate: f64,
    support_end: Option<f64>,
    /// False only when the tail decays slower than every exponential
    /// (an MRL growing without bound); quadrature-based operations refuse
    /// such inputs rather than truncate incorrectly.
    certified_tail: bool,
    origin: Origin,
}

impl std::fmt::Debug for LifeDistribution {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("LifeDistribution")
            .field("mean", &self.mean)
            .field("tail_rate", &self.tail_rate)
            .field("knots", &self.knots)
            .field("support_end", &self.support_end)
            .field("origin", &self.origin)
            .finish()
    }
}

impl LifeDistribution {
    /// Wraps a survival evaluator. `knots` are analytic breakpoints passed to
    /// the quadrature; `tail_rate` certifies that `F̄` is eventually dominated
    /// by `C e^(-x/tail_rate)`.
    pub fn from_survival(
        survival: impl Fn(f64) -> f64 + Send + Sync + 'static,
        knots: Vec<f64>,
        mean: f64,
        tail_rate: f64,
    ) -> Result<Self, DistError> {
        Self::build(
            Arc::new(survival),
            knots,
            mean,
            tail_rate,
            None,
            true,
            Origin::FromSurvival,
        )
    }

    pub(crate) fn build(
        survival: Arc<dyn Fn(f64) -> f64 + Send + Sync>,
        mut knots: Vec<f64>,
        mean: f64,
        tail_rate: f64,
        support_end: Option<f64>,
        certified_tail: bool,
        origin: Origin,
    ) -> Result<Self, DistError> {
        if !(mean > 0.0) || !mean.is_finite() {
            return Err(DistError::InvalidParameter(format!(
                "mean must be positive and finite, got {mean}"
            )));
        }
        if !(tail_rate > 0.0) || !tail_rate.is_finite() {
            return Err(DistError::InvalidParameter(format!(
                "tail_rate must be positive and finite, got {tail_rate}"
            )));
        }
        if knots.iter().any(|k| !k.is_finite() || *k < 0.0) {
            return Err(DistError::InvalidParameter(
                "knots must be finite and nonnegative".into(),
            ));
        }
        knots.sort_by(|a, b| a.partial_cmp(b).expect("finite knots"));
        knots.dedup();
        let s0 = survival(0.0);
        if (s0 - 1.0).abs() > 1e-9 {
            return Err(DistError::InvalidParameter(format!(
                "survival(0) must be 1, got {s0}"
            )));
        }
        if let Some(end) = support_end {
            if !(end > 0.0) || !end.is_finite() {
                return Err(DistError::InvalidParameter(format!(
                    "support end must be positive and finite, got {end}"
                )));
            }
        }
        Ok(Self {
            survival,
            knots,
            mean,
            tail_rate,
            support_end,
            certified_tail,
            origin,
        })
    }

    /// Survival `F̄(x) = P(X > x)`; returns 1 for negative ages.
    pub fn survival(&self, x: f64) -> f64 {
        if x < 0.0 {
            1.0
        } else {
            (self.survival)(x)
        }
    }

    /// Declared mean `μ = e(0)`.
    pub fn mean(&self) -> f64 {
        self.mean
    }

    /// Analytic breakpoints of the survival function.
    pub fn knots(&self) -> &[f64] {
        &self.knots
    }

    /// Certified exponential tail scale.
    pub fn tail_rate(&self) -> f64 {
        self.tail_rate
    }

    /// Right endpoint of the support, when finite.
    pub fn support_end(&self) -> Option<f64> {
        self.support_end
    }

    pub fn origin(&self) -> &Origin {
        &self.origin
    }

    /// Whether the survival tail is certified exponentially dominated.
    pub fn has_certified_tail(&self) -> bool {
        self.certified_tail
    }

    /// The distribution of `cX` for `c > 0` (time rescaling `x ↦ x/c`).
    pub fn scale_time(&self, c: f64) -> Result<Self, DistError> {
        if !(c > 0.0) || !c.is_finite() {
            return Err(DistError::InvalidParameter(format!(
                "scale factor must be positive and finite, got {c}"
            )));
        }
        let inner = Arc::clone(&self.survival);
        Self::build(
            Arc::new(move |x: f64| inner(x / c)),
            self.knots.iter().map(|k| k * c).collect(),
            self.mean * c,
            self.tail_rate * c,
            self.support_end.map(|s| s * c),
            self.certified_tail,
            Origin::FromSurvival,
        )
    }
}

/// The equilibrium (first derived) distribution: density `F̄(x) / μ`.
#[derive(Debug, Clone)]
pub struct EquilibriumDensity {
    base: LifeDistribution,
}

impl EquilibriumDensity {
    pub fn new(base: LifeDistribution) -> Self {
        Self { base }
    }

    pub fn density(&self, x: f64) -> f64 {
        if x < 0.0 {
            0.0
        } else {
            self.base.survival(x) / self.base.mean()
        }
    }

    pub fn base(&self) -> &LifeDistribution {
        &self.base
    }
}

/// Relative accuracy of each step when accumulating residual-life integrals.
const STEP_REL_TOL: f64 = 1e-13;
/// Unbounded tails are followed for this many tail scales past the last
/// requested point; the neglected remainder is ~e^-60 in relative terms.
const TAIL_SPAN_RATES: f64 = 60.0;
/// Survival below this is treated as "past the end of the support".
const SURVIVAL_FLOOR: f64 = 1e-300;

/// Computes `J(x) = ∫_x^∞ F̄` for each requested point with uniform relative
/// accuracy, by accumulating positive pieces right to left over a grid that
/// includes the requested points, the knots, and geometric tail padding.
fn residual_integrals(d: &LifeDistribution, xs: &[f64]) -> Result<Vec<f64>, DistError> {
    assert!(!xs.is_empty(), "residual_integrals requires at least one point");
    for w in xs.windows(2) {
        assert!(w[0] <= w[1], "requested points must be sorted ascending");
    }
    if !d.has_certified_tail() && d.support_end().is_none() {
        return Err(DistError::UncertifiedTail);
    }
    for &x in xs {
        if !x.is_finite() || x < 0.0 {
            return Err(DistError::InvalidParameter(format!(
                "age must be finite and nonnegative, got {x}"
            )));
        }
        if d.survival(x) < SURVIVAL_FLOOR {
            return Err(DistError::SupportExceeded { x });
        }
    }

    let start = xs[0];
    let last_x = *xs.last().expect("nonempty");
    let rate = d.tail_rate();
    let far = match d.support_end() {
        Some(s) => s,
        None => {
            let anchor = d
                .knots()
                .last()
                .copied()
                .unwrap_or(last_x)
                .max(last_x);
            anchor + TAIL_SPAN_RATES * rate
        }
    };

    let mut grid: Vec<f64> = xs.to_vec();
    for &k in d.knots() {
        if k > start && k < far {
            grid.push(k);
        }
    }
    // Geometric padding from the last fixed point out to the truncation point.
    let base = grid
        .iter()
        .fold(start, |m, &v| m.max(v));
    let mut h = 0.25 * rate;
    let mut p = base;
    loop {
        p += h;
        if p >= far - 1e-12 * far.abs().max(1.0) {
            break;
        }
        grid.push(p);
        h = (h * 1.4).min(4.0 * rate);
    }
    if far > base {
        grid.push(far);
    }
    grid.sort_by(|a, b| a.partial_cmp(b).expect("finite grid"));
    grid.dedup();

    let mut tail = vec![0.0; grid.len()];
    let mut acc = 0.0;
    for i in (0..grid.len().saturating_sub(1)).rev() {
        let piece = numerics::integrate_rel(|t| d.survival(t), grid[i], grid[i + 1], STEP_REL_TOL)?;
        acc += piece.value;
        tail[i] = acc;
    }

    Ok(xs
        .iter()
        .map(|&x| {
            let idx = grid.partition_point(|&g| g < x);
            tail[idx]
        })
        .collect())
}

/// Mean residual life `e(x) = (1/F̄(x)) ∫_x^∞ F̄(t) dt`, computed from the
/// survival evaluator by quadrature.
pub fn mrl_of(d: &LifeDistribution, x: f64) -> Result<f64, DistError> {
    Ok(mrl_on_grid(d, &[x])?[0])
}

/// [`mrl_of`] over a sorted batch of ages, sharing one cumulative sweep.
pub fn mrl_on_grid(d: &LifeDistribution, xs: &[f64]) -> Result<Vec<f64>, DistError> {
    let tails = residual_integrals(d, xs)?;
    Ok(xs
        .iter()
        .zip(tails)
        .map(|(&x, j)| j / d.survival(x))
        .collect())
}

/// Two-pass semi-infinite quadrature: a coarse pass fixes the magnitude, the
/// second pass runs at a tolerance relative to it.
fn semi_infinite_two_pass(
    f: impl Fn(f64) -> f64,
    a: f64,
    tail_rate: f64,
    breakpoints: &[f64],
) -> Result<(f64, f64), DistError> {
    let coarse = integrate_semi_infinite_with_breakpoints(&f, a, tail_rate, breakpoints, 1e-6)?;
    let tol = (coarse.value.abs() * 1e-12).max(1e-13);
    let fine = integrate_semi_infinite_with_breakpoints(&f, a, tail_rate, breakpoints, tol)?;
    Ok((fine.value, fine.abs_error_estimate))
}

/// The r-th raw moment `μ_r = r ∫_0^∞ x^(r-1) F̄(x) dx`, `r > 0`.
///
/// For `0 < r < 1` the substitution `u = x^r` removes the endpoint
/// singularity, giving `μ_r = ∫_0^∞ F̄(u^(1/r)) du`; both branches run the
/// same quadrature path.
pub fn moment(d: &LifeDistribution, r: f64) -> Result<f64, DistError> {
    if !(r > 0.0) || !r.is_finite() {
        return Err(DistError::InvalidParameter(format!(
            "moment order must be positive and finite, got {r}"
        )));
    }
    if !d.has_certified_tail() && d.support_end().is_none() {
        return Err(DistError::UncertifiedTail);
    }
    let (value, err) = if r >= 1.0 {
        let f = |x: f64| x.powf(r - 1.0) * d.survival(x);
        let (v, e) = semi_infinite_two_pass(f, 0.0, d.tail_rate(), d.knots())?;
        (r * v, r * e)
    } else {
        let inv_r = 1.0 / r;
        let f = |u: f64| d.survival(u.powf(inv_r));
        let knots_u: Vec<f64> = d.knots().iter().map(|k| k.powf(r)).collect();
        semi_infinite_two_pass(f, 0.0, d.tail_rate(), &knots_u)?
    };
    if err > value.abs() * 1e-8 + 1e-9 {
        return Err(DistError::MomentNonConvergence {
            estimate: value,
            abs_error: err,
        });
    }
    Ok(value)
}

/// The mean computed as `∫_0^∞ F̄`, independent of the declared mean.
pub fn mean_of(d: &LifeDistribution) -> Result<f64, DistError> {
    if !d.has_certified_tail() && d.support_end().is_none() {
        return Err(DistError::UncertifiedTail);
    }
    let (value, err) = semi_infinite_two_pass(|x| d.survival(x), 0.0, d.tail_rate(), d.knots())?;
    if err > value.abs() * 1e-8 + 1e-9 {
        return Err(DistError::MomentNonConvergence {
            estimate: value,
            abs_error: err,
        });
    }
    Ok(value)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::distributions::catalog;

    fn assert_close(a: f64, b: f64, tol: f64, what: &str) {
        assert!((a - b).abs() <= tol, "{what}: {a} vs {b}");
    }

    #[test]
    fn exponential_mrl_is_memoryless() {
        let d = catalog::exponential(5.0).unwrap();
        for x in [0.0, 1.0, 4.0, 12.5, 30.0] {
            assert_close(mrl_of(&d, x).unwrap(), 5.0, 1e-9, "exp mrl");
        }
    }

    #[test]
    fn piecewise_sample_mrl_values() {
        let d = catalog::example_3_1();
        assert_close(mrl_of(&d, 30.0).unwrap(), 3.0, 1e-8, "mrl at 30");
        assert_close(mrl_of(&d, 0.0).unwrap(), 5.0, 1e-8, "mrl at 0");
        let d4 = catalog::example_3_4();
        assert_close(mrl_of(&d4, 4.0).unwrap(), 1.75, 1e-8, "mrl at 4");
    }

    #[test]
    fn means_match_declared() {
        for (d, mu) in [
            (catalog::example_3_1(), 5.0),
            (catalog::example_3_3(), 2.0),
            (catalog::example_3_4(), 2.0),
        ] {
            assert_close(mean_of(&d).unwrap(), mu, 1e-8, "mean");
            assert_close(d.mean(), mu, 0.0, "declared mean");
        }
        let w = catalog::weibull(2.0, 1.0).unwrap();
        assert_close(
            mean_of(&w).unwrap(),
            0.886226925452758,
            1e-9,
            "weibull mean",
        );
    }

    #[test]
    fn moments_against_closed_forms() {
        let w = catalog::weibull(2.0, 1.0).unwrap();
        assert_close(moment(&w, 2.0).unwrap(), 1.0, 1e-8, "weibull mu2");
        let e = catalog::exponential(1.0).unwrap();
        assert_close(moment(&e, 3.0).unwrap(), 6.0, 1e-7, "exp mu3");
        // frozen from an independent high-precision evaluation
        let d = catalog::example_3_1();
        assert_close(moment(&d, 2.0).unwrap(), 54.1209606521977, 1e-4, "mu2");
    }

    #[test]
    fn fractional_moments_of_exponential() {
        // Γ(1 + r) μ^r with r = 1/2
        let d = catalog::exponential(5.0).unwrap();
        let expect = 1.9816636488030055; // Γ(1.5) √5
        let got = moment(&d, 0.5).unwrap();
        assert!((got - expect).abs() / expect < 1e-9, "got {got}");
    }

    #[test]
    fn moment_rejects_bad_order() {
        let d = catalog::exponential(1.0).unwrap();
        assert!(moment(&d, 0.0).is_err());
        assert!(moment(&d, -2.0).is_err());
    }

    #[test]
    fn mrl_beyond_support_errors() {
        // degenerate-at-a distribution: MRL a - x on [0, a]
        let spec = MrlSpec::new(vec![Segment {
            from: 0.0,
            to: 2.0,
            kind: SegmentKind::Affine { a: 2.0, b: -1.0 },
        }])
        .unwrap();
        let d = from_mrl(&spec, 1e-9).unwrap();
        assert!(matches!(
            mrl_of(&d, 2.5),
            Err(DistError::SupportExceeded { .. })
        ));
    }

    #[test]
    fn growing_mrl_supports_survival_but_not_tail_quadrature() {
        // e(x) = 1 + x/2 grows without bound: the survival tail is
        // polynomial, (1 + x/2)^-3, so quadrature-based operations refuse it
        let spec = MrlSpec::new(vec![Segment {
            from: 0.0,
            to: f64::INFINITY,
            kind: SegmentKind::Affine { a: 1.0, b: 0.5 },
        }])
        .unwrap();
        let d = from_mrl(&spec, 1e-9).unwrap();
        assert!(!d.has_certified_tail());
        assert!((d.survival(2.0) - 0.125).abs() < 1e-12, "{}", d.survival(2.0));
        assert!(matches!(moment(&d, 3.0), Err(DistError::UncertifiedTail)));
        assert!(matches!(mean_of(&d), Err(DistError::UncertifiedTail)));
        assert!(matches!(mrl_of(&d, 1.0), Err(DistError::UncertifiedTail)));
    }

    #[test]
    fn equilibrium_density_integrates_to_one() {
        for d in [
            catalog::exponential(2.0).unwrap(),
            catalog::weibull(2.0, 1.0).unwrap(),
            catalog::example_3_1(),
            catalog::example_3_3(),
            catalog::example_3_4(),
        ] {
            let eq = EquilibriumDensity::new(d.clone());
            let total = integrate_semi_infinite_with_breakpoints(
                |x| eq.density(x),
                0.0,
                d.tail_rate(),
                d.knots(),
                1e-10,
            )
            .unwrap();
            assert_close(total.value, 1.0, 1e-8, "equilibrium mass");
        }
    }

    #[test]
    fn time_scaling_scales_mean() {
        let d = catalog::example_3_1().scale_time(2.0).unwrap();
        assert_close(d.mean(), 10.0, 0.0, "scaled mean");
        assert_close(mean_of(&d).unwrap(), 10.0, 1e-7, "scaled integral mean");
        assert_close(d.survival(2.0), catalog::example_3_1().survival(1.0), 0.0, "scaled survival");
    }

    #[test]
    fn survival_nonincreasing_on_pseudorandom_pairs() {
        // deterministic LCG; 1000 sorted pairs per distribution
        for d in [
            catalog::example_3_1(),
            catalog::example_3_4(),
            catalog::weibull(3.0, 1.0).unwrap(),
        ] {
            let mut state: u64 = 0x9E3779B97F4A7C15;
            let mut next = move || {
                state = state.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
                (state >> 11) as f64 / (1u64 << 53) as f64
            };
            let horizon = 40.0 * d.tail_rate();
            for _ in 0..1000 {
                let (u, v) = (next() * horizon, next() * horizon);
                let (x, y) = if u < v { (u, v) } else { (v, u) };
                assert!(
                    d.survival(x) >= d.survival(y) - 1e-12,
                    "survival increased between {x} and {y}"
                );
            }
        }
    }
}
