//! Sign-pattern scanning: classify a function on a grid into runs of
//! {+, 0, -} and produce root brackets at each +/- transition.

use super::{Bracket, NumericsError};

/// Sign class of a sample relative to the scaled zero tolerance.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Sign {
    Minus,
    Zero,
    Plus,
}

/// A maximal run of consecutive grid samples sharing one sign class.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SignRun {
    pub sign: Sign,
    /// Grid coordinate of the first sample in the run.
    pub x_start: f64,
    /// Grid coordinate of the last sample in the run.
    pub x_end: f64,
    /// Number of samples in the run.
    pub len: usize,
}

/// Compressed sign pattern of a sampled function.
#[derive(Debug, Clone, PartialEq)]
pub struct SignPattern {
    runs: Vec<SignRun>,
    crossings: Vec<Bracket>,
    scale: f64,
}

impl SignPattern {
    pub fn runs(&self) -> &[SignRun] {
        &self.runs
    }

    /// Brackets at each transition between strict `+` and strict `-` runs
    /// (zero runs in between are spanned).
    pub fn crossings(&self) -> &[Bracket] {
        &self.crossings
    }

    /// The scale `max(1, sup|f|)` that multiplied the zero tolerance.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    pub fn is_all_zero(&self) -> bool {
        self.runs.iter().all(|r| r.sign == Sign::Zero)
    }

    /// Sequence of strict signs with zero runs dropped and adjacent equal
    /// signs merged. `[Plus, Minus]` means "positive then negative".
    pub fn nonzero_signs(&self) -> Vec<Sign> {
        let mut out: Vec<Sign> = Vec::new();
        for r in &self.runs {
            if r.sign == Sign::Zero {
                continue;
            }
            if out.last() != Some(&r.sign) {
                out.push(r.sign);
            }
        }
        out
    }
}

/// Evaluates `f` on a uniform grid over `[a, b]` and classifies the signs.
///
/// Samples with `|f| <= tol * max(1, sup|f|)` count as zero. `grid_n` is
/// clamped to at least 2. A degenerate all-zero pattern is a valid output.
pub fn scan_sign_pattern(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    grid_n: usize,
    tol: f64,
) -> Result<SignPattern, NumericsError> {
    let n = grid_n.max(2);
    let mut xs = Vec::with_capacity(n);
    let mut ys = Vec::with_capacity(n);
    for i in 0..n {
        let x = a + (b - a) * i as f64 / (n - 1) as f64;
        let y = f(x);
        if !y.is_finite() {
            return Err(NumericsError::NonFinite { x });
        }
        xs.push(x);
        ys.push(y);
    }
    Ok(sign_pattern_of_samples(&xs, &ys, tol))
}

/// Classifies pre-computed samples; `xs` must be sorted ascending.
pub fn sign_pattern_of_samples(xs: &[f64], ys: &[f64], tol: f64) -> SignPattern {
    assert_eq!(xs.len(), ys.len(), "sample arrays must have equal length");
    let sup = ys.iter().fold(0.0_f64, |m, y| m.max(y.abs()));
    let scale = sup.max(1.0);
    let cutoff = tol * scale;

    let mut runs: Vec<SignRun> = Vec::new();
    for (&x, &y) in xs.iter().zip(ys) {
        let s = if y.abs() <= cutoff {
            Sign::Zero
        } else if y > 0.0 {
            Sign::Plus
        } else {
            Sign::Minus
        };
        match runs.last_mut() {
            Some(r) if r.sign == s => {
                r.x_end = x;
                r.len += 1;
            }
            _ => runs.push(SignRun {
                sign: s,
                x_start: x,
                x_end: x,
                len: 1,
            }),
        }
    }

    // Each transition between opposite strict signs yields a bracket from the
    // last sample of the earlier run to the first sample of the later run;
    // both have strict opposite signs, so f(lo) * f(hi) < 0.
    let mut crossings = Vec::new();
    let mut last_strict: Option<&SignRun> = None;
    for r in &runs {
        if r.sign == Sign::Zero {
            continue;
        }
        if let Some(prev) = last_strict {
            if prev.sign != r.sign {
                if let Ok(b) = Bracket::new(prev.x_end, r.x_start) {
                    crossings.push(b);
                }
            }
        }
        last_strict = Some(r);
    }

    SignPattern {
        runs,
        crossings,
        scale,
    }
}
