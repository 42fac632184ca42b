//! Piecewise-analytic MRL functions and the MRL-to-survival inversion
//!
//! ```text
//! F̄(x) = (e(0) / e(x)) exp[ -∫_0^x du / e(u) ]
//! ```
//!
//! Segment kinds are affine `a + b·x` and reciprocal `a + b/x`, which admit
//! closed forms for `∫ du / e(u)`:
//!
//! ```text
//! affine, b ≠ 0:      (1/b) ln((a + b t)/(a + b s))
//! affine, b = 0:      (t - s)/a
//! reciprocal, a ≠ 0:  (t - s)/a - (b/a²) ln((a t + b)/(a s + b))
//! reciprocal, a = 0:  (t² - s²)/(2 b)
//! ```
//!
//! The logarithms are evaluated through `ln_1p` so nearly-flat segments do
//! not lose precision.

use std::sync::Arc;

use super::{DistError, LifeDistribution, Origin};

/// Analytic form of one MRL segment.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SegmentKind {
    /// `e(x) = a + b·x`
    Affine { a: f64, b: f64 },
    /// `e(x) = a + b/x`
    Reciprocal { a: f64, b: f64 },
}

/// One piece of a piecewise MRL function on `[from, to)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Segment {
    pub from: f64,
    /// May be `f64::INFINITY` on the final segment.
    pub to: f64,
    pub kind: SegmentKind,
}

impl Segment {
    pub fn eval(&self, x: f64) -> f64 {
        match self.kind {
            SegmentKind::Affine { a, b } => a + b * x,
            SegmentKind::Reciprocal { a, b } => {
                if b == 0.0 {
                    a
                } else {
                    a + b / x
                }
            }
        }
    }

    pub fn derivative(&self, x: f64) -> f64 {
        match self.kind {
            SegmentKind::Affine { b, .. } => b,
            SegmentKind::Reciprocal { b, .. } => {
                if b == 0.0 {
                    0.0
                } else {
                    -b / (x * x)
                }
            }
        }
    }

    /// `∫_s^t du / e(u)` for `[s, t]` inside this segment.
    pub(crate) fn inv_mrl_integral(&self, s: f64, t: f64) -> f64 {
        match self.kind {
            SegmentKind::Affine { a, b } => {
                if b == 0.0 {
                    (t - s) / a
                } else {
                    (b * (t - s) / (a + b * s)).ln_1p() / b
                }
            }
            SegmentKind::Reciprocal { a, b } => {
                if b == 0.0 {
                    (t - s) / a
                } else if a == 0.0 {
                    (t * t - s * s) / (2.0 * b)
                } else {
                    (t - s) / a - (b / (a * a)) * (a * (t - s) / (a * s + b)).ln_1p()
                }
            }
        }
    }
}

/// A piecewise MRL function: contiguous segments starting at 0.
///
/// Construction checks structure only (ordering, contiguity, finiteness);
/// the mathematical validity conditions live in `ageing::validate_mrl`.
#[derive(Debug, Clone, PartialEq)]
pub struct MrlSpec {
    segments: Vec<Segment>,
}

impl MrlSpec {
    pub fn new(segments: Vec<Segment>) -> Result<Self, DistError> {
        if segments.is_empty() {
            return Err(DistError::InvalidSpec("no segments".into()));
        }
        let mut segs = segments;
        for (i, s) in segs.iter().enumerate() {
            let params_ok = match s.kind {
                SegmentKind::Affine { a, b } | SegmentKind::Reciprocal { a, b } => {
                    a.is_finite() && b.is_finite()
                }
            };
            if !params_ok {
                return Err(DistError::InvalidSpec(format!(
                    "segment {i}: coefficients must be finite"
                )));
            }
            if !s.from.is_finite() || s.from < -1e-12 {
                return Err(DistError::InvalidSpec(format!(
                    "segment {i}: `from` must be finite and nonnegative, got {}",
                    s.from
                )));
            }
            if s.to.is_nan() || s.to <= s.from {
                return Err(DistError::InvalidSpec(format!(
                    "segment {i}: need from < to, got [{}, {}]",
                    s.from, s.to
                )));
            }
            if s.to.is_infinite() && i + 1 != segs.len() {
                return Err(DistError::InvalidSpec(format!(
                    "segment {i}: only the final segment may be unbounded"
                )));
            }
        }
        if segs[0].from.abs() > 1e-12 {
            return Err(DistError::InvalidSpec(format!(
                "first segment must start at 0, got {}",
                segs[0].from
            )));
        }
        segs[0].from = 0.0;
        for i in 1..segs.len() {
            let prev_to = segs[i - 1].to;
            let gap = (segs[i].from - prev_to).abs();
            if gap > 1e-9 * prev_to.abs().max(1.0) {
                return Err(DistError::InvalidSpec(format!(
                    "segments {} and {} are not contiguous: {} vs {}",
                    i - 1,
                    i,
                    prev_to,
                    segs[i].from
                )));
            }
            segs[i].from = prev_to;
        }
        Ok(Self { segments: segs })
    }

    pub fn segments(&self) -> &[Segment] {
        &self.segments
    }

    /// `e(0)`, the mean of the distribution the MRL determines.
    pub fn mean(&self) -> f64 {
        self.segments[0].eval(0.0)
    }

    /// Right endpoint of the final segment (may be infinite).
    pub fn end(&self) -> f64 {
        self.segments.last().expect("nonempty").to
    }

    /// Finite right support endpoint, present when the final segment is
    /// bounded (validity then requires the MRL to reach 0 there).
    pub fn support_end(&self) -> Option<f64> {
        let to = self.end();
        to.is_finite().then_some(to)
    }

    /// Segment boundaries strictly inside the support.
    pub fn interior_knots(&self) -> Vec<f64> {
        self.segments[1..].iter().map(|s| s.from).collect()
    }

    /// Certified exponential tail scale: the supremum of the final segment
    /// (its left-knot value, and also the asymptote `a` for reciprocals).
    /// A bounded final MRL gives an exponentially dominated survival tail;
    /// for a growing affine final segment no such scale exists and this
    /// value is only a horizon heuristic (see [`MrlSpec::tail_is_bounded`]).
    pub fn tail_rate(&self) -> f64 {
        let last = self.segments.last().expect("nonempty");
        let at_knot = last.eval(last.from);
        let sup = match last.kind {
            SegmentKind::Reciprocal { a, .. } => at_knot.max(a),
            SegmentKind::Affine { .. } => at_knot,
        };
        if sup.is_finite() && sup > 0.0 {
            sup
        } else {
            self.mean()
        }
    }

    /// True unless the final segment is an unbounded affine piece with
    /// positive slope (an MRL growing without bound, so the survival tail
    /// decays slower than every exponential).
    pub fn tail_is_bounded(&self) -> bool {
        let last = self.segments.last().expect("nonempty");
        if last.to.is_finite() {
            return true;
        }
        match last.kind {
            SegmentKind::Affine { b, .. } => b <= 0.0,
            SegmentKind::Reciprocal { .. } => true,
        }
    }

    fn segment_index(&self, x: f64) -> usize {
        let mut idx = self
            .segments
            .partition_point(|s| s.from <= x)
            .saturating_sub(1);
        if idx >= self.segments.len() {
            idx = self.segments.len() - 1;
        }
        idx
    }

    /// Evaluates the MRL; 0 past a finite support end.
    pub fn eval(&self, x: f64) -> f64 {
        if x < 0.0 {
            return self.mean();
        }
        if let Some(end) = self.support_end() {
            if x >= end {
                return if x == end {
                    self.segments.last().expect("nonempty").eval(end).max(0.0)
                } else {
                    0.0
                };
            }
        }
        self.segments[self.segment_index(x)].eval(x)
    }

    /// Right-derivative of the MRL at `x` (the derivative of the segment
    /// whose half-open interval contains `x`).
    pub fn right_derivative(&self, x: f64) -> f64 {
        self.segments[self.segment_index(x)].derivative(x)
    }
}

/// Inverts a validated MRL function into its unique life distribution via
/// `F̄(x) = (e(0)/e(x)) exp[-∫_0^x du/e(u)]`.
///
/// `tol` is the tolerance used by the validity checks (continuity, drift,
/// terminal behavior). The returned distribution carries the segment
/// boundaries as knots and the final-segment value as its tail scale.
pub fn from_mrl(spec: &MrlSpec, tol: f64) -> Result<LifeDistribution, DistError> {
    let report = crate::ageing::validate_mrl_with_tol(spec, tol);
    if !report.is_valid() {
        return Err(DistError::InvalidMrl(report));
    }

    let mean = spec.mean();
    let segments = spec.segments().to_vec();
    let mut cumulative = vec![0.0; segments.len()];
    for i in 1..segments.len() {
        let prev = &segments[i - 1];
        cumulative[i] = cumulative[i - 1] + prev.inv_mrl_integral(prev.from, prev.to);
    }

    let support_end = spec.support_end();
    let spec_for_closure = spec.clone();
    let survival = move |x: f64| -> f64 {
        if x <= 0.0 {
            return 1.0;
        }
        let idx = spec_for_closure.segment_index(x);
        let seg = &spec_for_closure.segments()[idx];
        if x >= seg.to && idx + 1 == spec_for_closure.segments().len() {
            return 0.0; // past a finite support end
        }
        let e_x = seg.eval(x);
        if !(e_x > 0.0) {
            return 0.0;
        }
        let exponent = cumulative[idx] + seg.inv_mrl_integral(seg.from, x);
        (mean / e_x) * (-exponent).exp()
    };

    let mut knots = spec.interior_knots();
    if let Some(end) = support_end {
        knots.push(end);
    }
    LifeDistribution::build(
        Arc::new(survival),
        knots,
        mean,
        spec.tail_rate(),
        support_end,
        spec.tail_is_bounded(),
        Origin::FromMrl(spec.clone()),
    )
}
