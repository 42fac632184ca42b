//! MRL validity checking and ageing-class classification.
//!
//! Classification works on the sign pattern of `g(x) = e(x) - μ` over a grid
//! reaching out to where the survival function has essentially vanished:
//! all zero is exponential, all `≤ 0` is NBUE, all `≥ 0` is NWUE, a single
//! `+` to `-` crossing is NWBUE with the crossing located by root finding
//! (and `-` to `+` its dual). Shape classification applies the same pattern
//! machinery to a numerical derivative of the MRL.

use crate::distributions::{
    mrl_of, mrl_on_grid, DistError, LifeDistribution, MrlSpec, Segment, SegmentKind,
};
use crate::numerics::{find_root, sign_pattern_of_samples, NumericsError, Sign};

/// Default classification grid size.
pub const DEFAULT_GRID_N: usize = 4096;
/// Default sign-classification tolerance (scaled by `max(1, sup|g|)`).
pub const DEFAULT_CLASS_TOL: f64 = 1e-9;
/// The default horizon is the smallest age where survival drops below this.
pub const HORIZON_SURVIVAL_TARGET: f64 = 1e-9;

/// Errors from classification.
#[derive(Debug, Clone, thiserror::Error)]
pub enum AgeingError {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error(transparent)]
    Dist(#[from] DistError),
    #[error(transparent)]
    Numerics(#[from] NumericsError),
}

/// Ageing class determined by how the MRL sits relative to the mean.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum AgeingClass {
    Exponential,
    Nbue,
    Nwue,
    Nwbue,
    Nbwue,
    Other,
}

impl std::fmt::Display for AgeingClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            AgeingClass::Exponential => "EXPONENTIAL",
            AgeingClass::Nbue => "NBUE",
            AgeingClass::Nwue => "NWUE",
            AgeingClass::Nwbue => "NWBUE",
            AgeingClass::Nbwue => "NBWUE",
            AgeingClass::Other => "OTHER",
        };
        f.write_str(s)
    }
}

/// Classification result with located crossing(s) of the mean.
///
/// `change_point` is present exactly for NWBUE/NBWUE and is the leftmost
/// root of `e(x) - μ` in the transition bracket. When the MRL touches the
/// mean along a plateau, the leftmost crossing is reported.
#[derive(Debug, Clone)]
pub struct ClassVerdict {
    pub label: AgeingClass,
    pub change_point: Option<f64>,
    pub mu: f64,
    pub horizon: f64,
    pub crossings: Vec<f64>,
}

/// Monotonicity shape of the MRL function.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrlShape {
    Increasing,
    Decreasing,
    Idmrl,
    Dimrl,
    Constant,
    Other,
}

impl std::fmt::Display for MrlShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MrlShape::Increasing => "INCREASING",
            MrlShape::Decreasing => "DECREASING",
            MrlShape::Idmrl => "IDMRL",
            MrlShape::Dimrl => "DIMRL",
            MrlShape::Constant => "CONSTANT",
            MrlShape::Other => "OTHER",
        };
        f.write_str(s)
    }
}

/// Shape verdict; `turning_point` present exactly for IDMRL/DIMRL.
#[derive(Debug, Clone)]
pub struct MrlShapeVerdict {
    pub label: MrlShape,
    pub turning_point: Option<f64>,
}

/// The necessary conditions a candidate MRL function must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MrlCondition {
    /// Positivity on the interior of the support; finite positive value at 0.
    V1Positivity,
    /// Drift: `x + e(x)` nondecreasing, i.e. right-derivative `e' >= -1`.
    V2Drift,
    /// Continuity at segment knots.
    V3Continuity,
    /// Tail behavior: `∫ 1/e` must diverge, or the support must terminate
    /// exactly where the MRL reaches 0.
    V4TailDivergence,
}

impl std::fmt::Display for MrlCondition {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            MrlCondition::V1Positivity => "V1",
            MrlCondition::V2Drift => "V2",
            MrlCondition::V3Continuity => "V3",
            MrlCondition::V4TailDivergence => "V4",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone)]
pub struct MrlViolation {
    pub condition: MrlCondition,
    pub location: f64,
    pub detail: String,
}

/// Outcome of [`validate_mrl`]; valid iff no violations.
#[derive(Debug, Clone, Default)]
pub struct MrlValidityReport {
    pub violations: Vec<MrlViolation>,
}

impl MrlValidityReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }

    /// True if some violation cites the given condition.
    pub fn cites(&self, condition: MrlCondition) -> bool {
        self.violations.iter().any(|v| v.condition == condition)
    }
}

impl std::fmt::Display for MrlValidityReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            return f.write_str("valid");
        }
        let parts: Vec<String> = self
            .violations
            .iter()
            .map(|v| format!("{} at x={}: {}", v.condition, v.location, v.detail))
            .collect();
        f.write_str(&parts.join("; "))
    }
}

/// Checks the necessary conditions V1-V4 on a candidate MRL function.
pub fn validate_mrl(spec: &MrlSpec) -> MrlValidityReport {
    validate_mrl_with_tol(spec, DEFAULT_CLASS_TOL)
}

pub(crate) fn validate_mrl_with_tol(spec: &MrlSpec, tol: f64) -> MrlValidityReport {
    let tol = if tol > 0.0 { tol } else { DEFAULT_CLASS_TOL };
    let mut report = MrlValidityReport::default();
    let segs = spec.segments();
    let n = segs.len();

    // Scale for absolute comparisons: magnitude of e at the knots.
    let mut scale: f64 = 1.0;
    for s in segs {
        let probe = if s.from > 0.0 { s.from } else { 0.0 };
        let v = s.eval(probe);
        if v.is_finite() {
            scale = scale.max(v.abs());
        }
    }
    let cutoff = tol * scale;

    // V1: finite positive at 0, positive on the interior.
    let e0 = segs[0].eval(0.0);
    if !e0.is_finite() || e0 <= 0.0 {
        report.violations.push(MrlViolation {
            condition: MrlCondition::V1Positivity,
            location: 0.0,
            detail: format!("e(0) must be finite and positive, got {e0}"),
        });
    }
    for (i, s) in segs.iter().enumerate() {
        let final_seg = i + 1 == n;
        let min_val = segment_min(s);
        let limit = if final_seg { -cutoff } else { cutoff };
        if !(min_val > limit) {
            let at = segment_min_location(s);
            report.violations.push(MrlViolation {
                condition: MrlCondition::V1Positivity,
                location: at,
                detail: format!(
                    "MRL must stay positive on the segment interior, minimum {min_val}"
                ),
            });
        }
    }

    // V2: right-derivative >= -1 at knots and on a per-segment grid.
    for s in segs {
        let mut worst = (f64::INFINITY, s.from);
        let probes = segment_probes(s);
        for x in probes {
            let d = s.derivative(x);
            if d < worst.0 {
                worst = (d, x);
            }
        }
        if worst.0 < -1.0 - tol {
            report.violations.push(MrlViolation {
                condition: MrlCondition::V2Drift,
                location: worst.1,
                detail: format!(
                    "x + e(x) must be nondecreasing: e'({}) = {} < -1",
                    worst.1, worst.0
                ),
            });
        }
    }

    // V3: continuity at interior knots.
    for i in 1..n {
        let knot = segs[i].from;
        let left = segs[i - 1].eval(knot);
        let right = segs[i].eval(knot);
        if !left.is_finite() || !right.is_finite() || (left - right).abs() > cutoff {
            report.violations.push(MrlViolation {
                condition: MrlCondition::V3Continuity,
                location: knot,
                detail: format!("MRL jumps from {left} to {right}"),
            });
        }
    }

    // V4: the tail must make ∫ 1/e diverge, or the support must end with e = 0.
    let last = &segs[n - 1];
    if last.to.is_infinite() {
        match last.kind {
            SegmentKind::Affine { b, .. } => {
                if b < 0.0 {
                    report.violations.push(MrlViolation {
                        condition: MrlCondition::V4TailDivergence,
                        location: last.from,
                        detail: format!(
                            "unbounded final segment needs slope >= 0, got {b}"
                        ),
                    });
                }
            }
            SegmentKind::Reciprocal { a, .. } => {
                if !(a > 0.0) {
                    report.violations.push(MrlViolation {
                        condition: MrlCondition::V4TailDivergence,
                        location: last.from,
                        detail: format!(
                            "unbounded reciprocal final segment needs a > 0, got {a}"
                        ),
                    });
                }
            }
        }
    } else {
        let terminal = last.eval(last.to);
        if !terminal.is_finite() || terminal.abs() > cutoff {
            report.violations.push(MrlViolation {
                condition: MrlCondition::V4TailDivergence,
                location: last.to,
                detail: format!(
                    "bounded MRL must reach 0 at the support end, got {terminal}"
                ),
            });
        }
    }

    report
}

/// Analytic minimum of a segment over its (closed) interval.
fn segment_min(s: &Segment) -> f64 {
    match s.kind {
        SegmentKind::Affine { b, .. } => {
            if b >= 0.0 {
                s.eval(s.from)
            } else if s.to.is_finite() {
                s.eval(s.to)
            } else {
                f64::NEG_INFINITY
            }
        }
        SegmentKind::Reciprocal { a, b } => {
            if b == 0.0 {
                a
            } else if b > 0.0 {
                // decreasing toward a
                if s.to.is_finite() {
                    s.eval(s.to)
                } else {
                    a
                }
            } else {
                // increasing; worst at the left end (infinite if from == 0)
                s.eval(s.from)
            }
        }
    }
}

fn segment_min_location(s: &Segment) -> f64 {
    match s.kind {
        SegmentKind::Affine { b, .. } => {
            if b >= 0.0 || !s.to.is_finite() {
                s.from
            } else {
                s.to
            }
        }
        SegmentKind::Reciprocal { b, .. } => {
            if b > 0.0 && s.to.is_finite() {
                s.to
            } else {
                s.from
            }
        }
    }
}

/// Derivative probe points: the left knot plus a short grid into the segment.
fn segment_probes(s: &Segment) -> Vec<f64> {
    let lo = s.from;
    let hi = if s.to.is_finite() {
        s.to
    } else {
        s.from + 100.0 * (s.from.abs().max(1.0))
    };
    let mut pts = Vec::with_capacity(33);
    for j in 0..33 {
        pts.push(lo + (hi - lo) * j as f64 / 32.0);
    }
    // Reciprocal derivatives blow up toward 0; avoid dividing by zero there.
    pts.retain(|x| {
        *x > 0.0 || !matches!(s.kind, SegmentKind::Reciprocal { b, .. } if b != 0.0)
    });
    if pts.is_empty() {
        pts.push(s.to.min(s.from + 1.0));
    }
    pts
}

/// Smallest age where survival drops below `target`, by doubling then
/// bisection. Deterministic.
fn horizon_for_target(d: &LifeDistribution, start: f64, target: f64) -> f64 {
    let mut hi = start.max(d.tail_rate()).max(1e-6);
    let mut lo = 0.0;
    while d.survival(hi) >= target {
        lo = hi;
        hi *= 2.0;
        if hi > 1e15 {
            return hi;
        }
    }
    for _ in 0..100 {
        let mid = 0.5 * (lo + hi);
        if d.survival(mid) >= target {
            lo = mid;
        } else {
            hi = mid;
        }
        if hi - lo <= 1e-12 * hi.max(1.0) {
            break;
        }
    }
    hi
}

/// Default classification horizon: smallest age with survival below 1e-9.
pub fn default_horizon(d: &LifeDistribution) -> f64 {
    horizon_for_target(d, d.tail_rate(), HORIZON_SURVIVAL_TARGET)
}

/// Auto-extends a requested horizon so survival(horizon) < 1e-9, and clips
/// it where survival falls below 1e-12 so the MRL stays well conditioned.
fn effective_horizon(d: &LifeDistribution, requested: f64) -> f64 {
    let lo = default_horizon(d);
    let hi = horizon_for_target(d, lo, 1e-12).max(lo);
    if !requested.is_finite() || requested <= 0.0 {
        return lo;
    }
    requested.clamp(lo, hi)
}

/// Uniform grid over `[0, horizon]` with the distribution's knots inserted
/// exactly as grid points (spans between knots are filled proportionally).
fn classification_grid(d: &LifeDistribution, horizon: f64, grid_n: usize) -> Vec<f64> {
    let n = grid_n.max(16);
    let mut anchors = vec![0.0];
    for &k in d.knots() {
        if k > 0.0 && k < horizon {
            anchors.push(k);
        }
    }
    anchors.push(horizon);
    anchors.sort_by(|a, b| a.partial_cmp(b).expect("finite anchors"));
    anchors.dedup();

    let mut grid = Vec::with_capacity(n + anchors.len());
    for w in anchors.windows(2) {
        let span = w[1] - w[0];
        let m = ((n as f64 * span / horizon).ceil() as usize).max(1);
        for j in 0..m {
            grid.push(w[0] + span * j as f64 / m as f64);
        }
    }
    grid.push(horizon);
    grid
}

/// Locates the roots of `e(x) - μ` inside the given brackets.
fn locate_crossings(
    d: &LifeDistribution,
    mu: f64,
    brackets: &[crate::numerics::Bracket],
) -> Result<Vec<f64>, AgeingError> {
    let g = |x: f64| match mrl_of(d, x) {
        Ok(v) => v - mu,
        Err(_) => f64::NAN,
    };
    let mut out = Vec::with_capacity(brackets.len());
    for b in brackets {
        out.push(find_root(g, b, crate::numerics::DEFAULT_ROOT_TOL)?);
    }
    Ok(out)
}

/// Classifies the distribution by the sign pattern of `e(x) - μ`.
///
/// The horizon precondition (survival below 1e-9) is enforced by automatic
/// extension; pass 0 or a non-finite value to use the default horizon.
pub fn classify_crossing(
    d: &LifeDistribution,
    horizon: f64,
    grid_n: usize,
    tol: f64,
) -> Result<ClassVerdict, AgeingError> {
    let horizon = effective_horizon(d, horizon);
    let grid = classification_grid(d, horizon, grid_n);
    let e = mrl_on_grid(d, &grid)?;
    let mu = d.mean();
    let g: Vec<f64> = e.iter().map(|v| v - mu).collect();
    let pattern = sign_pattern_of_samples(&grid, &g, tol);
    let crossings = locate_crossings(d, mu, pattern.crossings())?;

    let label = match pattern.nonzero_signs().as_slice() {
        [] => AgeingClass::Exponential,
        [Sign::Minus] => AgeingClass::Nbue,
        [Sign::Plus] => AgeingClass::Nwue,
        [Sign::Plus, Sign::Minus] => AgeingClass::Nwbue,
        [Sign::Minus, Sign::Plus] => AgeingClass::Nbwue,
        _ => AgeingClass::Other,
    };
    let change_point = match label {
        AgeingClass::Nwbue | AgeingClass::Nbwue => crossings.first().copied(),
        _ => None,
    };
    Ok(ClassVerdict {
        label,
        change_point,
        mu,
        horizon,
        crossings,
    })
}

/// Classifies the monotonicity shape of the MRL from a numerical derivative.
///
/// The turning point of an IDMRL/DIMRL verdict is the grid point between the
/// increasing and decreasing runs; when the runs meet at a knot the knot is
/// reported exactly.
pub fn classify_mrl_shape(
    d: &LifeDistribution,
    horizon: f64,
    grid_n: usize,
    tol: f64,
) -> Result<MrlShapeVerdict, AgeingError> {
    let horizon = effective_horizon(d, horizon);
    let grid = classification_grid(d, horizon, grid_n);
    let e = mrl_on_grid(d, &grid)?;

    let mut mids = Vec::with_capacity(grid.len() - 1);
    let mut slopes = Vec::with_capacity(grid.len() - 1);
    for i in 0..grid.len() - 1 {
        mids.push(0.5 * (grid[i] + grid[i + 1]));
        slopes.push((e[i + 1] - e[i]) / (grid[i + 1] - grid[i]));
    }
    let pattern = sign_pattern_of_samples(&mids, &slopes, tol);

    let (label, turning) = match pattern.nonzero_signs().as_slice() {
        [] => (MrlShape::Constant, None),
        [Sign::Plus] => (MrlShape::Increasing, None),
        [Sign::Minus] => (MrlShape::Decreasing, None),
        [Sign::Plus, Sign::Minus] => (
            MrlShape::Idmrl,
            Some(turning_point(d, &grid, &mids, &pattern, Sign::Plus)),
        ),
        [Sign::Minus, Sign::Plus] => (
            MrlShape::Dimrl,
            Some(turning_point(d, &grid, &mids, &pattern, Sign::Minus)),
        ),
        _ => (MrlShape::Other, None),
    };
    Ok(MrlShapeVerdict {
        label,
        turning_point: turning,
    })
}

/// Grid location where the first `first_sign` run hands over to its opposite.
fn turning_point(
    d: &LifeDistribution,
    grid: &[f64],
    mids: &[f64],
    pattern: &crate::numerics::SignPattern,
    first_sign: Sign,
) -> f64 {
    let runs = pattern.runs();
    let mut last_first = None;
    let mut first_second = None;
    for r in runs {
        if r.sign == first_sign && first_second.is_none() {
            last_first = Some(r.x_end);
        } else if r.sign != Sign::Zero && last_first.is_some() && first_second.is_none() {
            first_second = Some(r.x_start);
        }
    }
    let (m_left, m_right) = match (last_first, first_second) {
        (Some(a), Some(b)) => (a, b),
        _ => return mids[mids.len() / 2], // unreachable for the matched patterns
    };
    // Map midpoints back to their interval endpoints in the grid.
    let i_left = mids.partition_point(|&m| m < m_left);
    let i_right = mids.partition_point(|&m| m < m_right);
    let gap_lo = grid[i_left + 1];
    let gap_hi = grid[i_right];
    if gap_hi <= gap_lo {
        return gap_lo;
    }
    // Prefer an analytic knot inside the gap, else its midpoint.
    for &k in d.knots() {
        if k >= gap_lo && k <= gap_hi {
            return k;
        }
    }
    0.5 * (gap_lo + gap_hi)
}

/// Resolves an IDMRL (DIMRL) shape into its crossing class by searching
/// `(τ₀, horizon)` for a solution of `e(x) = μ`: found means NWBUE (NBWUE)
/// with that change point, not found means NWUE (NBUE).
pub fn resolve_idmrl(
    d: &LifeDistribution,
    shape: &MrlShapeVerdict,
) -> Result<ClassVerdict, AgeingError> {
    let dual = match shape.label {
        MrlShape::Idmrl => false,
        MrlShape::Dimrl => true,
        other => {
            return Err(AgeingError::InvalidArgument(format!(
                "resolve_idmrl requires an IDMRL or DIMRL shape verdict, got {other}"
            )))
        }
    };
    let tau = shape.turning_point.ok_or_else(|| {
        AgeingError::InvalidArgument("shape verdict carries no turning point".into())
    })?;

    let mu = d.mean();
    let horizon = default_horizon(d).max(tau + d.tail_rate());
    let mut anchors = vec![tau];
    for &k in d.knots() {
        if k > tau && k < horizon {
            anchors.push(k);
        }
    }
    anchors.push(horizon);
    anchors.sort_by(|a, b| a.partial_cmp(b).expect("finite anchors"));
    anchors.dedup();
    let mut grid = Vec::new();
    for w in anchors.windows(2) {
        let m = ((2048.0 * (w[1] - w[0]) / (horizon - tau)).ceil() as usize).max(1);
        for j in 0..m {
            grid.push(w[0] + (w[1] - w[0]) * j as f64 / m as f64);
        }
    }
    grid.push(horizon);

    let e = mrl_on_grid(d, &grid)?;
    let g: Vec<f64> = e.iter().map(|v| v - mu).collect();
    let pattern = sign_pattern_of_samples(&grid, &g, DEFAULT_CLASS_TOL);
    let crossings = locate_crossings(d, mu, pattern.crossings())?;

    let signs = pattern.nonzero_signs();
    let label = if !dual {
        match signs.as_slice() {
            [Sign::Plus, Sign::Minus] => AgeingClass::Nwbue,
            [Sign::Plus] | [] => AgeingClass::Nwue,
            [Sign::Minus] => AgeingClass::Nbue, // MRL sat on the mean up to τ and fell
            _ => AgeingClass::Other,
        }
    } else {
        match signs.as_slice() {
            [Sign::Minus, Sign::Plus] => AgeingClass::Nbwue,
            [Sign::Minus] | [] => AgeingClass::Nbue,
            [Sign::Plus] => AgeingClass::Nwue,
            _ => AgeingClass::Other,
        }
    };
    let change_point = match label {
        AgeingClass::Nwbue | AgeingClass::Nbwue => crossings.first().copied(),
        _ => None,
    };
    Ok(ClassVerdict {
        label,
        change_point,
        mu,
        horizon,
        crossings,
    })
}
