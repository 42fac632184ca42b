//! Bracketed root finding: bisection with secant acceleration.

use super::NumericsError;

/// An interval `[lo, hi]` expected to bracket a sign change.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    /// Requires `lo < hi`; the sign-change condition is checked by `find_root`.
    pub fn new(lo: f64, hi: f64) -> Result<Self, NumericsError> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(NumericsError::InvalidArgument(format!(
                "bracket requires finite lo < hi, got [{lo}, {hi}]"
            )));
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }
}

/// Finds `x` in the bracket with `|f(x)| <= tol` or bracket width `<= tol`.
///
/// A secant step is tried each iteration, falling back to bisection whenever
/// the step leaves the bracket; every other iteration bisects regardless, so
/// convergence is guaranteed. Deterministic.
pub fn find_root(
    f: impl Fn(f64) -> f64,
    bracket: &Bracket,
    tol: f64,
) -> Result<f64, NumericsError> {
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let eval = |x: f64| -> Result<f64, NumericsError> {
        let y = f(x);
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x })
        }
    };

    let (mut lo, mut hi) = (bracket.lo(), bracket.hi());
    let mut f_lo = eval(lo)?;
    let mut f_hi = eval(hi)?;
    if f_lo == 0.0 {
        return Ok(lo);
    }
    if f_hi == 0.0 {
        return Ok(hi);
    }
    if f_lo * f_hi > 0.0 {
        return Err(NumericsError::NoSignChange { lo, hi, f_lo, f_hi });
    }

    for iter in 0..200 {
        let mid = 0.5 * (lo + hi);
        let mut x = if f_hi != f_lo {
            hi - f_hi * (hi - lo) / (f_hi - f_lo)
        } else {
            mid
        };
        // Forced bisection on odd iterations keeps the width shrinking.
        if iter % 2 == 1 || !(x > lo && x < hi) {
            x = mid;
        }
        let fx = eval(x)?;
        if fx.abs() <= tol {
            return Ok(x);
        }
        if f_lo * fx <= 0.0 {
            hi = x;
            f_hi = fx;
        } else {
            lo = x;
            f_lo = fx;
        }
        if hi - lo <= tol {
            return Ok(0.5 * (lo + hi));
        }
    }
    Ok(0.5 * (lo + hi))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn linear_crossing_on_wide_bracket() {
        // (55 - x)/9 - 5 vanishes at x = 10
        let b = Bracket::new(1.0, 28.0).unwrap();
        let x = find_root(|x| (55.0 - x) / 9.0 - 5.0, &b, 1e-10).unwrap();
        assert!((x - 10.0).abs() < 1e-8, "got {x}");
    }

    #[test]
    fn trivial_linear() {
        let b = Bracket::new(0.0, 2.0).unwrap();
        let x = find_root(|x| x - 1.0, &b, 1e-10).unwrap();
        assert!((x - 1.0).abs() < 1e-9);
    }

    #[test]
    fn piecewise_mrl_crossing() {
        // (7 - x)/2 - 2 vanishes at x = 3
        let b = Bracket::new(1.0, 3.0).unwrap();
        let x = find_root(|x| (7.0 - x) / 2.0 - 2.0, &b, 1e-10).unwrap();
        assert!((x - 3.0).abs() < 1e-8, "got {x}");
    }

    #[test]
    fn no_sign_change_is_an_error() {
        let b = Bracket::new(2.0, 3.0).unwrap();
        let err = find_root(|x| x * x + 1.0, &b, 1e-10).unwrap_err();
        assert!(matches!(err, NumericsError::NoSignChange { .. }));
    }

    #[test]
    fn endpoint_roots_are_returned_directly() {
        let b = Bracket::new(1.0, 4.0).unwrap();
        assert_eq!(find_root(|x| x - 1.0, &b, 1e-10).unwrap(), 1.0);
        assert_eq!(find_root(|x| x - 4.0, &b, 1e-10).unwrap(), 4.0);
    }

    #[test]
    fn result_stays_inside_bracket() {
        let b = Bracket::new(-1.0, 8.0).unwrap();
        let x = find_root(|x| (x - 2.5).tanh(), &b, 1e-12).unwrap();
        assert!((-1.0..=8.0).contains(&x));
        assert!((x - 2.5).abs() < 1e-9);
    }

    #[test]
    fn invalid_bracket_rejected() {
        assert!(Bracket::new(3.0, 3.0).is_err());
        assert!(Bracket::new(5.0, 2.0).is_err());
        assert!(Bracket::new(f64::NAN, 2.0).is_err());
    }
}
