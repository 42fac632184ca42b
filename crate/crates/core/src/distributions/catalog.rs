//! Built-in distributions.
//!
//! The three piecewise samples (`example_3_1`, `example_3_3`, `example_3_4`)
//! are constructed from their closed-form survival functions, not by MRL
//! inversion, so inversion round-trip tests compare two independent routes.
//! Their MRL displays are available as [`MrlSpec`] values alongside.

use std::collections::BTreeMap;
use std::sync::Arc;

use super::{DistError, LifeDistribution, MrlSpec, Origin, Segment, SegmentKind};
use crate::numerics::gamma_fn;

/// Names accepted by [`by_name`].
pub const CATALOG_NAMES: &[&str] = &[
    "exponential",
    "weibull",
    "example_3_1",
    "example_3_3",
    "example_3_4",
];

/// Exponential distribution with the given mean: `F̄(x) = e^(-x/mean)`.
pub fn exponential(mean: f64) -> Result<LifeDistribution, DistError> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(DistError::InvalidParameter(format!(
            "exponential mean must be positive, got {mean}"
        )));
    }
    LifeDistribution::build(
        Arc::new(move |x: f64| (-x / mean).exp()),
        vec![],
        mean,
        mean,
        None,
        true,
        Origin::Builtin {
            name: "exponential".into(),
            params: vec![("mean".into(), mean)],
        },
    )
}

/// Weibull distribution, `F̄(x) = exp(-(x/scale)^shape)`, `shape >= 1`.
///
/// Shapes below 1 have subexponential tails with no certified exponential
/// rate, so they are rejected.
pub fn weibull(shape: f64, scale: f64) -> Result<LifeDistribution, DistError> {
    if !(shape >= 1.0) || !shape.is_finite() {
        return Err(DistError::InvalidParameter(format!(
            "weibull shape must be >= 1 (subexponential tails unsupported), got {shape}"
        )));
    }
    if !(scale > 0.0) || !scale.is_finite() {
        return Err(DistError::InvalidParameter(format!(
            "weibull scale must be positive, got {scale}"
        )));
    }
    let mean = scale * gamma_fn(1.0 + 1.0 / shape)?;
    LifeDistribution::build(
        Arc::new(move |x: f64| (-(x / scale).powf(shape)).exp()),
        vec![],
        mean,
        // (x/s)^k >= x/s - 1 for k >= 1, so F̄ <= e · e^(-x/scale)
        scale,
        None,
        true,
        Origin::Builtin {
            name: "weibull".into(),
            params: vec![("shape".into(), shape), ("scale".into(), scale)],
        },
    )
}

/// Piecewise sample with mean 5: MRL rises as `5 + x`, falls as `(55 - x)/9`,
/// then stays at 3. Survival:
///
/// ```text
/// 25/(5+x)^2                     0 <= x <= 1
/// 75/(2 · 54^9) (55-x)^8         1 <= x <= 28
/// 25/(9 · 2^10) e^((28-x)/3)     x >= 28
/// ```
pub fn example_3_1() -> LifeDistribution {
    let mid_coef = 75.0 / (2.0 * 54f64.powi(9));
    let tail_coef = 25.0 / (9.0 * 1024.0);
    LifeDistribution::build(
        Arc::new(move |x: f64| {
            if x <= 1.0 {
                25.0 / ((5.0 + x) * (5.0 + x))
            } else if x <= 28.0 {
                mid_coef * (55.0 - x).powi(8)
            } else {
                tail_coef * ((28.0 - x) / 3.0).exp()
            }
        }),
        vec![1.0, 28.0],
        5.0,
        3.0,
        None,
        true,
        Origin::Builtin {
            name: "example_3_1".into(),
            params: vec![],
        },
    )
    .expect("static catalog entry")
}

/// MRL display of [`example_3_1`]: `5 + x`, `(55 - x)/9`, then constant 3.
pub fn example_3_1_mrl() -> MrlSpec {
    MrlSpec::new(vec![
        Segment {
            from: 0.0,
            to: 1.0,
            kind: SegmentKind::Affine { a: 5.0, b: 1.0 },
        },
        Segment {
            from: 1.0,
            to: 28.0,
            kind: SegmentKind::Affine {
                a: 55.0 / 9.0,
                b: -1.0 / 9.0,
            },
        },
        Segment {
            from: 28.0,
            to: f64::INFINITY,
            kind: SegmentKind::Affine { a: 3.0, b: 0.0 },
        },
    ])
    .expect("static MRL spec")
}

/// Piecewise sample with mean 2 whose MRL stays above the mean everywhere.
/// Survival:
///
/// ```text
/// 4/(x+2)^2              0 <= x <= 2
/// (10-x)/32              2 <= x <= 4
/// (3/16) e^((4-x)/3)     x >= 4
/// ```
pub fn example_3_3() -> LifeDistribution {
    LifeDistribution::build(
        Arc::new(|x: f64| {
            if x <= 2.0 {
                4.0 / ((x + 2.0) * (x + 2.0))
            } else if x <= 4.0 {
                (10.0 - x) / 32.0
            } else {
                (3.0 / 16.0) * ((4.0 - x) / 3.0).exp()
            }
        }),
        vec![2.0, 4.0],
        2.0,
        3.0,
        None,
        true,
        Origin::Builtin {
            name: "example_3_3".into(),
            params: vec![],
        },
    )
    .expect("static catalog entry")
}

/// MRL display of [`example_3_3`]: `x + 2`, `(10 - x)/2`, then constant 3.
pub fn example_3_3_mrl() -> MrlSpec {
    MrlSpec::new(vec![
        Segment {
            from: 0.0,
            to: 2.0,
            kind: SegmentKind::Affine { a: 2.0, b: 1.0 },
        },
        Segment {
            from: 2.0,
            to: 4.0,
            kind: SegmentKind::Affine { a: 5.0, b: -0.5 },
        },
        Segment {
            from: 4.0,
            to: f64::INFINITY,
            kind: SegmentKind::Affine { a: 3.0, b: 0.0 },
        },
    ])
    .expect("static MRL spec")
}

/// Piecewise sample with mean 2 whose MRL crosses the mean once at `x = 3`.
/// Survival:
///
/// ```text
/// 4/(2+x)^2                        0 <= x < 1
/// (2/27)(7-x)                      1 <= x < 3
/// (2x(3+x)^2 / 729) e^(3-x)        x >= 3
/// ```
pub fn example_3_4() -> LifeDistribution {
    LifeDistribution::build(
        Arc::new(|x: f64| {
            if x < 1.0 {
                4.0 / ((2.0 + x) * (2.0 + x))
            } else if x < 3.0 {
                (2.0 / 27.0) * (7.0 - x)
            } else {
                (2.0 * x * (3.0 + x) * (3.0 + x) / 729.0) * (3.0 - x).exp()
            }
        }),
        vec![1.0, 3.0],
        2.0,
        2.0,
        None,
        true,
        Origin::Builtin {
            name: "example_3_4".into(),
            params: vec![],
        },
    )
    .expect("static catalog entry")
}

/// MRL display of [`example_3_4`]: `2 + x`, `(7 - x)/2`, then `1 + 3/x`.
pub fn example_3_4_mrl() -> MrlSpec {
    MrlSpec::new(vec![
        Segment {
            from: 0.0,
            to: 1.0,
            kind: SegmentKind::Affine { a: 2.0, b: 1.0 },
        },
        Segment {
            from: 1.0,
            to: 3.0,
            kind: SegmentKind::Affine { a: 3.5, b: -0.5 },
        },
        Segment {
            from: 3.0,
            to: f64::INFINITY,
            kind: SegmentKind::Reciprocal { a: 1.0, b: 3.0 },
        },
    ])
    .expect("static MRL spec")
}

/// Constant MRL `e(x) = mean`, the specification of the exponential.
pub fn constant_mrl(mean: f64) -> Result<MrlSpec, DistError> {
    if !(mean > 0.0) || !mean.is_finite() {
        return Err(DistError::InvalidParameter(format!(
            "constant MRL level must be positive, got {mean}"
        )));
    }
    MrlSpec::new(vec![Segment {
        from: 0.0,
        to: f64::INFINITY,
        kind: SegmentKind::Affine { a: mean, b: 0.0 },
    }])
}

/// Looks up a catalog distribution by name with keyword parameters.
///
/// `exponential` takes `mean` (default 1); `weibull` takes `shape`
/// (required) and `scale` (default 1); the piecewise samples take none.
pub fn by_name(
    name: &str,
    params: &BTreeMap<String, f64>,
) -> Result<LifeDistribution, DistError> {
    let reject_unknown = |allowed: &[&str]| -> Result<(), DistError> {
        for key in params.keys() {
            if !allowed.contains(&key.as_str()) {
                return Err(DistError::InvalidParameter(format!(
                    "unknown parameter `{key}` for `{name}`"
                )));
            }
        }
        Ok(())
    };
    match name {
        "exponential" => {
            reject_unknown(&["mean"])?;
            exponential(params.get("mean").copied().unwrap_or(1.0))
        }
        "weibull" => {
            reject_unknown(&["shape", "scale"])?;
            let shape = params.get("shape").copied().ok_or_else(|| {
                DistError::InvalidParameter("weibull requires a `shape` parameter".into())
            })?;
            weibull(shape, params.get("scale").copied().unwrap_or(1.0))
        }
        "example_3_1" => {
            reject_unknown(&[])?;
            Ok(example_3_1())
        }
        "example_3_3" => {
            reject_unknown(&[])?;
            Ok(example_3_3())
        }
        "example_3_4" => {
            reject_unknown(&[])?;
            Ok(example_3_4())
        }
        _ => Err(DistError::UnknownCatalog {
            name: name.into(),
            available: CATALOG_NAMES.join(", "),
        }),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn closed_form_spot_values() {
        assert!((example_3_1().survival(28.0) - 25.0 / 9216.0).abs() < 1e-15);
        assert!((example_3_3().survival(4.0) - 3.0 / 16.0).abs() < 1e-15);
        assert!((example_3_4().survival(2.0) - 10.0 / 27.0).abs() < 1e-15);
        assert_eq!(exponential(1.0).unwrap().survival(0.0), 1.0);
    }

    #[test]
    fn survival_is_continuous_at_knots() {
        for d in [example_3_1(), example_3_3(), example_3_4()] {
            for &k in d.knots() {
                let below = d.survival(k - 1e-9);
                let above = d.survival(k + 1e-9);
                assert!((below - above).abs() < 1e-7, "jump at {k}: {below} vs {above}");
            }
        }
    }

    #[test]
    fn by_name_dispatch_and_errors() {
        let mut p = BTreeMap::new();
        p.insert("mean".to_string(), 2.0);
        assert_eq!(by_name("exponential", &p).unwrap().mean(), 2.0);

        let mut w = BTreeMap::new();
        w.insert("shape".to_string(), 2.0);
        let d = by_name("weibull", &w).unwrap();
        assert!((d.mean() - 0.886226925452758).abs() < 1e-12);

        let err = by_name("pareto", &BTreeMap::new()).unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains("exponential") && msg.contains("example_3_4"));

        let mut bad = BTreeMap::new();
        bad.insert("rate".to_string(), 1.0);
        assert!(by_name("exponential", &bad).is_err());
    }

    #[test]
    fn weibull_rejects_subexponential_shape() {
        assert!(weibull(0.5, 1.0).is_err());
        assert!(weibull(1.0, 1.0).is_ok());
    }

    #[test]
    fn mrl_specs_evaluate_their_displays() {
        let m = example_3_1_mrl();
        assert_eq!(m.eval(0.0), 5.0);
        assert!((m.eval(10.0) - 5.0).abs() < 1e-12);
        assert_eq!(m.eval(30.0), 3.0);
        let m4 = example_3_4_mrl();
        assert!((m4.eval(4.0) - 1.75).abs() < 1e-15);
        assert!((m4.eval(2.0) - 2.5).abs() < 1e-15);
    }
}
