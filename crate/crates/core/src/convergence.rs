//! Numerical demonstrations of convergence along NBUE sequences: means and
//! r-th moments of the members approach those of the limit while the
//! survival functions converge uniformly on a grid, and the limit itself
//! classifies as NBUE (or exponential).

use crate::ageing::{classify_crossing, AgeingClass, AgeingError, ClassVerdict};
use crate::distributions::{catalog, mean_of, moment, DistError, LifeDistribution};

#[derive(Debug, Clone, thiserror::Error)]
pub enum ConvergenceError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// A sequence member failed the NBUE hypothesis.
    #[error("sequence member n = {n} classifies as {label}, not NBUE")]
    HypothesisViolation { n: u32, label: AgeingClass },
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Ageing(#[from] AgeingError),
}

/// Family of NBUE sequences the runner knows how to build.
#[derive(Debug, Clone)]
pub enum SequenceFamily {
    /// Weibull with shape `1 + 1/n`, scale 1; the limit is exponential(1).
    WeibullShape,
    /// Exponential with mean `1 + 1/n`; the limit is exponential(1).
    ExponentialMean,
    /// Explicit members, paired with `index_set` by position.
    Custom(Vec<LifeDistribution>),
}

/// A distribution sequence with its index set and declared limit.
#[derive(Debug, Clone)]
pub struct SequenceSpec {
    pub family: SequenceFamily,
    pub index_set: Vec<u32>,
    pub limit: LifeDistribution,
}

impl SequenceSpec {
    pub fn weibull_shape(index_set: Vec<u32>) -> Result<Self, ConvergenceError> {
        Self::check_indices(&index_set)?;
        Ok(Self {
            family: SequenceFamily::WeibullShape,
            index_set,
            limit: catalog::exponential(1.0)?,
        })
    }

    pub fn exponential_mean(index_set: Vec<u32>) -> Result<Self, ConvergenceError> {
        Self::check_indices(&index_set)?;
        Ok(Self {
            family: SequenceFamily::ExponentialMean,
            index_set,
            limit: catalog::exponential(1.0)?,
        })
    }

    pub fn custom(
        members: Vec<LifeDistribution>,
        limit: LifeDistribution,
    ) -> Result<Self, ConvergenceError> {
        if members.is_empty() {
            return Err(ConvergenceError::InvalidArgument(
                "custom sequence needs at least one member".into(),
            ));
        }
        let index_set = (1..=members.len() as u32).collect();
        Ok(Self {
            family: SequenceFamily::Custom(members),
            index_set,
            limit,
        })
    }

    fn check_indices(index_set: &[u32]) -> Result<(), ConvergenceError> {
        if index_set.is_empty() {
            return Err(ConvergenceError::InvalidArgument(
                "index set must be nonempty".into(),
            ));
        }
        if index_set.windows(2).any(|w| w[0] >= w[1]) || index_set[0] == 0 {
            return Err(ConvergenceError::InvalidArgument(
                "index set must be strictly increasing positive integers".into(),
            ));
        }
        Ok(())
    }

    /// The member at position `pos` of the index set.
    pub fn member(&self, pos: usize) -> Result<LifeDistribution, ConvergenceError> {
        let n = self.index_set[pos];
        match &self.family {
            SequenceFamily::WeibullShape => {
                Ok(catalog::weibull(1.0 + 1.0 / n as f64, 1.0)?)
            }
            SequenceFamily::ExponentialMean => {
                Ok(catalog::exponential(1.0 + 1.0 / n as f64)?)
            }
            SequenceFamily::Custom(members) => Ok(members[pos].clone()),
        }
    }
}

/// Per-member convergence measurements.
#[derive(Debug, Clone)]
pub struct ConvergenceRow {
    pub n: u32,
    /// Computed mean of the member.
    pub mu_n: f64,
    /// `(r, |μ_{n;r} - μ_r(limit)|)` per requested order.
    pub moment_errors: Vec<(f64, f64)>,
    /// `sup |F̄_n - F̄|` over a shared 512-point grid on `[0, horizon]`.
    pub cdf_sup_distance: f64,
}

/// Full report: one row per index, plus the classification of the limit.
#[derive(Debug, Clone)]
pub struct ConvergenceReport {
    pub rows: Vec<ConvergenceRow>,
    pub limit_verdict: ClassVerdict,
    pub limit_mean: f64,
    /// `(r, μ_r(limit))` for the requested orders.
    pub limit_moments: Vec<(f64, f64)>,
}

/// Grid size for the sup-distance proxy of weak convergence.
const SUP_GRID_N: usize = 512;
/// Grid sizes for the per-member NBUE hypothesis check.
const MEMBER_CHECK_GRID_N: usize = 1024;

/// Runs the convergence demonstration: checks each member is NBUE, computes
/// means, moment errors against the limit, and survival sup-distances.
pub fn run_convergence(
    spec: &SequenceSpec,
    orders: &[f64],
) -> Result<ConvergenceReport, ConvergenceError> {
    if orders.iter().any(|r| !(*r > 0.0) || !r.is_finite()) {
        return Err(ConvergenceError::InvalidArgument(
            "moment orders must be positive and finite".into(),
        ));
    }
    if spec.index_set.is_empty() {
        return Err(ConvergenceError::InvalidArgument(
            "index set must be nonempty".into(),
        ));
    }

    let limit_verdict = classify_crossing(
        &spec.limit,
        0.0,
        crate::ageing::DEFAULT_GRID_N,
        crate::ageing::DEFAULT_CLASS_TOL,
    )?;
    let horizon = limit_verdict.horizon;
    let grid: Vec<f64> = (0..SUP_GRID_N)
        .map(|i| horizon * i as f64 / (SUP_GRID_N - 1) as f64)
        .collect();

    let limit_moments: Vec<(f64, f64)> = orders
        .iter()
        .map(|&r| Ok((r, moment(&spec.limit, r)?)))
        .collect::<Result<_, DistError>>()?;
    let limit_mean = mean_of(&spec.limit)?;

    let mut rows = Vec::with_capacity(spec.index_set.len());
    for pos in 0..spec.index_set.len() {
        let n = spec.index_set[pos];
        let member = spec.member(pos)?;

        let verdict = classify_crossing(
            &member,
            0.0,
            MEMBER_CHECK_GRID_N,
            crate::ageing::DEFAULT_CLASS_TOL,
        )?;
        if !matches!(verdict.label, AgeingClass::Nbue | AgeingClass::Exponential) {
            return Err(ConvergenceError::HypothesisViolation {
                n,
                label: verdict.label,
            });
        }

        let mu_n = mean_of(&member)?;
        let moment_errors = limit_moments
            .iter()
            .map(|&(r, target)| Ok((r, (moment(&member, r)? - target).abs())))
            .collect::<Result<Vec<_>, DistError>>()?;
        let cdf_sup_distance = grid
            .iter()
            .map(|&x| (member.survival(x) - spec.limit.survival(x)).abs())
            .fold(0.0_f64, f64::max);

        rows.push(ConvergenceRow {
            n,
            mu_n,
            moment_errors,
            cdf_sup_distance,
        });
    }

    Ok(ConvergenceReport {
        rows,
        limit_verdict,
        limit_mean,
        limit_moments,
    })
}

/// The index set `{1, 2, 4, ..., 2^k <= n_max}`.
pub fn doubling_indices(n_max: u32) -> Vec<u32> {
    let mut out = Vec::new();
    let mut n = 1u32;
    while n <= n_max {
        out.push(n);
        match n.checked_mul(2) {
            Some(next) => n = next,
            None => break,
        }
    }
    out
}
