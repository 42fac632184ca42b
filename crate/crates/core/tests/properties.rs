//! Property tests for the numerical kernel and distribution invariants.

use proptest::prelude::*;

use ageclass::distributions::{catalog, mean_of, moment, LifeDistribution};
use ageclass::numerics::{
    find_root, gamma_fn, integrate, scan_sign_pattern, Bracket, Sign,
};

fn smooth(x: f64) -> f64 {
    (1.0 + x).ln() * (-0.3 * x).exp() + 0.1 * (0.5 * x).sin()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn integrate_is_additive(a in 0.0..4.0f64, gap1 in 0.1..3.0f64, gap2 in 0.1..3.0f64) {
        let b = a + gap1;
        let c = b + gap2;
        let tol = 1e-10;
        let whole = integrate(smooth, a, c, tol).unwrap().value;
        let split = integrate(smooth, a, b, tol).unwrap().value
            + integrate(smooth, b, c, tol).unwrap().value;
        prop_assert!((whole - split).abs() <= 2.0 * tol + 1e-12);
    }

    #[test]
    fn integrate_of_nonnegative_is_nonnegative(a in 0.0..5.0f64, w in 0.01..10.0f64) {
        let f = |x: f64| x.sin().powi(2) + 0.5 * (-x).exp();
        let r = integrate(f, a, a + w, 1e-9).unwrap();
        prop_assert!(r.value >= 0.0);
    }

    #[test]
    fn root_stays_in_bracket(shift in -5.0..5.0f64, scale in 0.2..4.0f64) {
        // strictly increasing cubic with a root at `shift`
        let f = move |x: f64| scale * (x - shift) + (x - shift).powi(3);
        let b = Bracket::new(shift - 3.0, shift + 4.0).unwrap();
        let x = find_root(f, &b, 1e-11).unwrap();
        prop_assert!(x >= b.lo() && x <= b.hi());
        prop_assert!((x - shift).abs() < 1e-6);
    }

    #[test]
    fn gamma_recurrence(x in 0.5..20.0f64) {
        let lhs = gamma_fn(x + 1.0).unwrap();
        let rhs = x * gamma_fn(x).unwrap();
        prop_assert!(((lhs - rhs) / rhs).abs() < 1e-11);
    }

    #[test]
    fn sign_scan_negation_flips(freq in 0.3..2.0f64, phase in 0.0..3.0f64) {
        let f = move |x: f64| (freq * x + phase).sin();
        let p = scan_sign_pattern(f, 0.0, 12.0, 600, 1e-9).unwrap();
        let q = scan_sign_pattern(move |x| -f(x), 0.0, 12.0, 600, 1e-9).unwrap();
        let flip = |s: Sign| match s {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
            Sign::Zero => Sign::Zero,
        };
        let flipped: Vec<Sign> = p.nonzero_signs().into_iter().map(flip).collect();
        prop_assert_eq!(flipped, q.nonzero_signs());
        prop_assert_eq!(p.crossings().len(), q.crossings().len());
    }

    #[test]
    fn survival_nonincreasing(pair in (0.0..30.0f64, 0.0..30.0f64), pick in 0usize..4) {
        let d: LifeDistribution = match pick {
            0 => catalog::example_3_1(),
            1 => catalog::example_3_3(),
            2 => catalog::example_3_4(),
            _ => catalog::weibull(2.0, 1.0).unwrap(),
        };
        let (x, y) = if pair.0 <= pair.1 { pair } else { (pair.1, pair.0) };
        prop_assert!(d.survival(x) >= d.survival(y) - 1e-12);
    }
}

#[test]
fn first_moment_equals_mean() {
    for d in [
        catalog::exponential(1.0).unwrap(),
        catalog::weibull(2.0, 1.0).unwrap(),
        catalog::example_3_1(),
        catalog::example_3_3(),
        catalog::example_3_4(),
    ] {
        let m1 = moment(&d, 1.0).unwrap();
        let mean = mean_of(&d).unwrap();
        assert!(
            ((m1 - mean) / mean).abs() <= 1e-8,
            "moment(1) = {m1} vs mean {mean}"
        );
    }
}
