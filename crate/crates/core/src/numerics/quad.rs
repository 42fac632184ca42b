//! Adaptive Simpson quadrature with breakpoint pre-splitting and a truncated
//! semi-infinite variant for exponentially dominated integrands.

use super::NumericsError;

/// Outcome of a quadrature call.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadResult {
    /// Estimate of the integral.
    pub value: f64,
    /// Estimated absolute error (Richardson term plus any truncated tail).
    pub abs_error_estimate: f64,
    /// Number of integrand evaluations performed.
    pub evaluations: usize,
}

/// Hard cap on adaptive interval splits before giving up.
const MAX_SPLITS: usize = 200_000;

/// Semi-infinite integrals are never truncated beyond `a + 400 * tail_rate`.
const HORIZON_CAP_RATES: f64 = 400.0;

struct Panel {
    a: f64,
    b: f64,
    fa: f64,
    fm: f64,
    fb: f64,
    simpson: f64,
    tol: f64,
}

struct Evaluator<'f> {
    f: &'f dyn Fn(f64) -> f64,
    count: usize,
}

impl<'f> Evaluator<'f> {
    fn eval(&mut self, x: f64) -> Result<f64, NumericsError> {
        let y = (self.f)(x);
        self.count += 1;
        if y.is_finite() {
            Ok(y)
        } else {
            Err(NumericsError::NonFinite { x })
        }
    }
}

/// Computes `∫_a^b f(x) dx` with adaptive Simpson subdivision.
///
/// The absolute error is bounded by `max(tol, abs_error_estimate)` for
/// piecewise-smooth integrands. Known interior kinks should be passed via
/// [`integrate_with_breakpoints`] instead so the subdivision never straddles
/// them.
pub fn integrate(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    tol: f64,
) -> Result<QuadResult, NumericsError> {
    integrate_with_breakpoints(f, a, b, &[], tol)
}

/// [`integrate`], pre-split at the given interior breakpoints.
pub fn integrate_with_breakpoints(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadResult, NumericsError> {
    if !a.is_finite() || !b.is_finite() {
        return Err(NumericsError::InvalidArgument(format!(
            "integration limits must be finite, got [{a}, {b}]"
        )));
    }
    if a > b {
        return Err(NumericsError::InvalidArgument(format!(
            "integration limits out of order: {a} > {b}"
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    let mut ev = Evaluator { f: &f, count: 0 };
    if a == b {
        ev.eval(a)?;
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: ev.count,
        });
    }

    let mut cuts = vec![a];
    for &k in breakpoints {
        if k > a && k < b && k.is_finite() {
            cuts.push(k);
        }
    }
    cuts.push(b);
    cuts.sort_by(|x, y| x.partial_cmp(y).expect("finite cut points"));
    cuts.dedup();

    let total_width = b - a;
    let mut value = 0.0;
    let mut err = 0.0;
    let mut splits_left = MAX_SPLITS;
    for pair in cuts.windows(2) {
        let (lo, hi) = (pair[0], pair[1]);
        let panel_tol = tol * (hi - lo) / total_width;
        let part = simpson_panel(&mut ev, lo, hi, panel_tol.max(f64::MIN_POSITIVE), &mut splits_left)?;
        value += part.0;
        err += part.1;
    }

    Ok(QuadResult {
        value,
        abs_error_estimate: err,
        evaluations: ev.count,
    })
}

/// Adaptive Simpson on a single smooth panel, with an explicit stack.
fn simpson_panel(
    ev: &mut Evaluator,
    a: f64,
    b: f64,
    tol: f64,
    splits_left: &mut usize,
) -> Result<(f64, f64), NumericsError> {
    let fa = ev.eval(a)?;
    let m0 = 0.5 * (a + b);
    let fm = ev.eval(m0)?;
    let fb = ev.eval(b)?;
    let s0 = (b - a) / 6.0 * (fa + 4.0 * fm + fb);

    let mut stack = vec![Panel {
        a,
        b,
        fa,
        fm,
        fb,
        simpson: s0,
        tol,
    }];
    let mut value = 0.0;
    let mut err = 0.0;

    while let Some(p) = stack.pop() {
        let m = 0.5 * (p.a + p.b);
        let lm = 0.5 * (p.a + m);
        let rm = 0.5 * (m + p.b);
        let flm = ev.eval(lm)?;
        let frm = ev.eval(rm)?;
        let s_left = (m - p.a) / 6.0 * (p.fa + 4.0 * flm + p.fm);
        let s_right = (p.b - m) / 6.0 * (p.fm + 4.0 * frm + p.fb);
        let s2 = s_left + s_right;
        let delta = s2 - p.simpson;

        // Width floor: below this the interval is at floating-point resolution.
        let min_width = 1e-14 * (p.a.abs().max(p.b.abs()).max(1.0));

        if delta.abs() <= 15.0 * p.tol || (p.b - p.a) <= min_width {
            value += s2 + delta / 15.0;
            err += delta.abs() / 15.0;
        } else {
            if *splits_left == 0 {
                // Best estimate: what we have plus unrefined panels.
                let mut best = value + s2;
                let mut rem_err = err + delta.abs();
                for q in &stack {
                    best += q.simpson;
                    rem_err += q.tol;
                }
                return Err(NumericsError::NonConvergence {
                    best,
                    abs_error_estimate: rem_err,
                });
            }
            *splits_left -= 1;
            let half_tol = 0.5 * p.tol;
            stack.push(Panel {
                a: p.a,
                b: m,
                fa: p.fa,
                fm: flm,
                fb: p.fm,
                simpson: s_left,
                tol: half_tol,
            });
            stack.push(Panel {
                a: m,
                b: p.b,
                fa: p.fm,
                fm: frm,
                fb: p.fb,
                simpson: s_right,
                tol: half_tol,
            });
        }
    }

    Ok((value, err))
}

/// Computes `∫_a^∞ f(x) dx` for a nonnegative integrand eventually dominated
/// by `C e^(-x/tail_rate)`.
///
/// The dominating constant is estimated from deterministic samples, the
/// integral is truncated where the exponential majorant falls below `tol/10`
/// (never beyond `a + 400 tail_rate`), and the finite part is delegated to
/// [`integrate`]. The truncated tail bound is folded into the error estimate.
pub fn integrate_semi_infinite(
    f: impl Fn(f64) -> f64,
    a: f64,
    tail_rate: f64,
    tol: f64,
) -> Result<QuadResult, NumericsError> {
    integrate_semi_infinite_with_breakpoints(f, a, tail_rate, &[], tol)
}

/// [`integrate_semi_infinite`], pre-split at the given breakpoints.
pub fn integrate_semi_infinite_with_breakpoints(
    f: impl Fn(f64) -> f64,
    a: f64,
    tail_rate: f64,
    breakpoints: &[f64],
    tol: f64,
) -> Result<QuadResult, NumericsError> {
    if !(tail_rate > 0.0) || !tail_rate.is_finite() {
        return Err(NumericsError::InvalidArgument(format!(
            "tail_rate must be positive and finite, got {tail_rate}"
        )));
    }
    if !a.is_finite() {
        return Err(NumericsError::InvalidArgument(format!(
            "lower limit must be finite, got {a}"
        )));
    }
    if !(tol > 0.0) {
        return Err(NumericsError::InvalidArgument(format!(
            "tolerance must be positive, got {tol}"
        )));
    }

    // Estimate the domination constant C on a deterministic sample sweep.
    let mut c_est: f64 = 0.0;
    let mut extra_evals = 0usize;
    for j in 0..=64 {
        let x = a + tail_rate * 0.75 * j as f64;
        let y = f(x);
        extra_evals += 1;
        if y.is_finite() {
            let c = y.abs() * ((x - a) / tail_rate).exp();
            c_est = c_est.max(c);
        }
    }
    let c = c_est.max(1e-12);

    // C * tail_rate * exp(-(T - a)/tail_rate) < tol / 10, plus safety margin.
    let span = tail_rate * ((c * tail_rate * 10.0 / tol).ln().max(2.0) + 5.0);
    let horizon = a + span.min(HORIZON_CAP_RATES * tail_rate);
    let tail_bound = c * tail_rate * (-(horizon - a) / tail_rate).exp();

    // Pre-split at tail-scale spacing so a localized integrand cannot fall
    // between the first Simpson samples of a long panel.
    let mut cuts: Vec<f64> = breakpoints.to_vec();
    let mut x = a + 0.75 * tail_rate;
    while x < horizon {
        cuts.push(x);
        x += 0.75 * tail_rate;
    }

    let mut result = integrate_with_breakpoints(f, a, horizon, &cuts, tol)?;
    result.abs_error_estimate += tail_bound;
    result.evaluations += extra_evals;
    Ok(result)
}

/// Integrates with an absolute tolerance scaled to the integrand magnitude,
/// so the result carries roughly `rel_tol` relative accuracy. Used by the
/// distribution layer when summing many small positive pieces whose relative
/// accuracy must be uniform.
pub(crate) fn integrate_rel(
    f: impl Fn(f64) -> f64,
    a: f64,
    b: f64,
    rel_tol: f64,
) -> Result<QuadResult, NumericsError> {
    if a == b {
        return Ok(QuadResult {
            value: 0.0,
            abs_error_estimate: 0.0,
            evaluations: 1,
        });
    }
    let mut m: f64 = 0.0;
    for j in 0..=6 {
        let x = a + (b - a) * j as f64 / 6.0;
        let y = f(x).abs();
        if y.is_finite() {
            m = m.max(y);
        }
    }
    let tol_abs = (m * (b - a).abs() * rel_tol).max(1e-300);
    integrate(f, a, b, tol_abs)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn exponential_over_long_interval() {
        let r = integrate(|x| (-x).exp(), 0.0, 50.0, 1e-10).unwrap();
        assert!((r.value - 1.0).abs() < 1e-9, "got {}", r.value);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn constant_is_exact() {
        let r = integrate(|_| 1.0, 2.0, 5.0, 1e-10).unwrap();
        assert_eq!(r.value, 3.0);
    }

    #[test]
    fn scaled_exponential_tail_piece() {
        // closed form: mu e^(-T/mu) (T + mu) - mu e^(-B/mu) (B + mu), mu = 5
        let r = integrate(|x| x * (-x / 5.0).exp(), 10.0, 200.0, 1e-8).unwrap();
        let expect = 10.150146242745952 - 5.0 * (-40.0f64).exp() * 205.0;
        assert!((r.value - expect).abs() < 1e-7, "got {}", r.value);
    }

    #[test]
    fn breakpoints_pre_split_kinked_integrand() {
        // |x - 1| on [0, 3]: exact area 0.5 + 2.0
        let f = |x: f64| (x - 1.0).abs();
        let r = integrate_with_breakpoints(f, 0.0, 3.0, &[1.0], 1e-12).unwrap();
        assert!((r.value - 2.5).abs() < 1e-12);
    }

    #[test]
    fn empty_interval() {
        let r = integrate(|x| x, 4.0, 4.0, 1e-10).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.evaluations >= 1);
    }

    #[test]
    fn rejects_bad_arguments() {
        assert!(matches!(
            integrate(|x| x, 1.0, 0.0, 1e-10),
            Err(NumericsError::InvalidArgument(_))
        ));
        assert!(matches!(
            integrate(|x| x, 0.0, 1.0, 0.0),
            Err(NumericsError::InvalidArgument(_))
        ));
    }

    #[test]
    fn non_finite_integrand_is_reported() {
        let err = integrate(|x| 1.0 / x, 0.0, 1.0, 1e-10).unwrap_err();
        assert!(matches!(err, NumericsError::NonFinite { .. }));
    }

    #[test]
    fn semi_infinite_exponential() {
        let r = integrate_semi_infinite(|x| (-x).exp(), 0.0, 1.0, 1e-8).unwrap();
        assert!((r.value - 1.0).abs() < 1e-8, "got {}", r.value);
    }

    #[test]
    fn semi_infinite_weibull_tail_moment() {
        // ∫_0^∞ x e^(-x^2) dx = 1/2
        let r = integrate_semi_infinite(|x| x * (-x * x).exp(), 0.0, 1.0, 1e-10).unwrap();
        assert!((r.value - 0.5).abs() < 1e-9, "got {}", r.value);
    }

    #[test]
    fn semi_infinite_mean_of_piecewise_survival() {
        // the caller certifies the generous rate 5 (the distribution mean);
        // the integral of the survival function is the mean
        let d = crate::distributions::catalog::example_3_1();
        let r = integrate_semi_infinite_with_breakpoints(
            |x| d.survival(x),
            0.0,
            5.0,
            &[1.0, 28.0],
            1e-8,
        )
        .unwrap();
        assert!((r.value - 5.0).abs() < 1e-6, "got {}", r.value);
    }

    #[test]
    fn pathological_oscillation_reports_non_convergence() {
        // sin(1/x) oscillates infinitely fast toward 0; the split budget
        // runs out and the error carries a finite best estimate
        let err = integrate(|x: f64| (1.0 / x.max(1e-306)).sin(), 1e-9, 1.0, 1e-14).unwrap_err();
        match err {
            NumericsError::NonConvergence {
                best,
                abs_error_estimate,
            } => {
                assert!(best.is_finite());
                assert!(abs_error_estimate >= 0.0);
            }
            other => panic!("expected non-convergence, got {other:?}"),
        }
    }

    #[test]
    fn semi_infinite_rejects_bad_tail_rate() {
        assert!(matches!(
            integrate_semi_infinite(|x| (-x).exp(), 0.0, 0.0, 1e-8),
            Err(NumericsError::InvalidArgument(_))
        ));
        assert!(matches!(
            integrate_semi_infinite(|x| (-x).exp(), 0.0, -1.0, 1e-8),
            Err(NumericsError::InvalidArgument(_))
        ));
    }

    #[test]
    fn nonnegative_integrand_gives_nonnegative_value() {
        for (a, b) in [(0.0, 1.0), (0.5, 7.0), (2.0, 2.5)] {
            let r = integrate(|x: f64| x.sin().powi(2), a, b, 1e-10).unwrap();
            assert!(r.value >= 0.0);
        }
    }

    #[test]
    fn additivity_over_subintervals() {
        let f = |x: f64| (1.0 + x).ln() * (-0.3 * x).exp();
        let tol = 1e-10;
        for (a, b, c) in [(0.0, 1.0, 4.0), (0.25, 2.0, 9.0), (1.0, 1.5, 2.0)] {
            let whole = integrate(f, a, c, tol).unwrap().value;
            let left = integrate(f, a, b, tol).unwrap().value;
            let right = integrate(f, b, c, tol).unwrap().value;
            assert!(
                (whole - (left + right)).abs() <= 2.0 * tol + 1e-12,
                "additivity broken on ({a},{b},{c})"
            );
        }
    }
}
