//! Distribution spec files.
//!
//! A spec file is a flat TOML document naming either a catalog distribution
//! or a piecewise MRL function:
//!
//! ```toml
//! kind = "builtin"
//! name = "weibull"
//! declared_mean = 0.886226925452758
//!
//! [params]
//! shape = 2.0
//! scale = 1.0
//! ```
//!
//! ```toml
//! kind = "mrl_piecewise"
//! declared_mean = 2.0
//!
//! [[segments]]
//! from = 0.0
//! to = 1.0
//! kind = "affine"
//! a = 2.0
//! b = 1.0
//!
//! [[segments]]
//! from = 1.0
//! to = inf          # "inf" as a string is accepted too
//! kind = "reciprocal"
//! a = 1.0
//! b = 3.0
//! ```
//!
//! `declared_mean`, when present, must match the computed mean to 1e-6
//! relative.

use std::collections::BTreeMap;
use std::path::Path;

use serde::Deserialize;

use super::{report, CliError};
use crate::distributions::{
    catalog, from_mrl, mean_of, LifeDistribution, MrlSpec, Segment, SegmentKind,
};

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSpecFile {
    kind: String,
    name: Option<String>,
    #[serde(default)]
    params: BTreeMap<String, f64>,
    declared_mean: Option<f64>,
    #[serde(default)]
    segments: Vec<RawSegment>,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
struct RawSegment {
    from: f64,
    to: Boundary,
    kind: String,
    a: f64,
    b: f64,
}

/// Segment upper boundary: a number, TOML `inf`, or the string "inf".
#[derive(Debug, Deserialize)]
#[serde(untagged)]
enum Boundary {
    Num(f64),
    Text(String),
}

impl Boundary {
    fn value(&self) -> Result<f64, CliError> {
        match self {
            Boundary::Num(v) => Ok(*v),
            Boundary::Text(s) if s.trim().eq_ignore_ascii_case("inf") => Ok(f64::INFINITY),
            Boundary::Text(s) => Err(CliError::Parse(format!(
                "segment `to` must be a number or \"inf\", got {s:?}"
            ))),
        }
    }
}

/// A parsed spec file, not yet turned into a distribution.
#[derive(Debug, Clone)]
pub enum DistSpecFile {
    Builtin {
        name: String,
        params: BTreeMap<String, f64>,
        declared_mean: Option<f64>,
    },
    MrlPiecewise {
        spec: MrlSpec,
        declared_mean: Option<f64>,
    },
}

impl DistSpecFile {
    pub fn parse_str(text: &str) -> Result<Self, CliError> {
        let raw: RawSpecFile =
            toml::from_str(text).map_err(|e| CliError::Parse(format!("{e}")))?;
        match raw.kind.as_str() {
            "builtin" => {
                let name = raw.name.ok_or_else(|| {
                    CliError::Parse("builtin spec requires a `name` field".into())
                })?;
                if !raw.segments.is_empty() {
                    return Err(CliError::Parse(
                        "builtin spec must not carry segments".into(),
                    ));
                }
                Ok(DistSpecFile::Builtin {
                    name,
                    params: raw.params,
                    declared_mean: raw.declared_mean,
                })
            }
            "mrl_piecewise" => {
                if raw.name.is_some() || !raw.params.is_empty() {
                    return Err(CliError::Parse(
                        "mrl_piecewise spec takes segments, not name/params".into(),
                    ));
                }
                let mut segments = Vec::with_capacity(raw.segments.len());
                for (i, s) in raw.segments.iter().enumerate() {
                    let kind = match s.kind.as_str() {
                        "affine" => SegmentKind::Affine { a: s.a, b: s.b },
                        "reciprocal" => SegmentKind::Reciprocal { a: s.a, b: s.b },
                        other => {
                            return Err(CliError::Parse(format!(
                                "segment {i}: unknown kind {other:?} (expected \"affine\" or \"reciprocal\")"
                            )))
                        }
                    };
                    segments.push(Segment {
                        from: s.from,
                        to: s.to.value()?,
                        kind,
                    });
                }
                let spec = MrlSpec::new(segments)
                    .map_err(|e| CliError::Parse(format!("{e}")))?;
                Ok(DistSpecFile::MrlPiecewise {
                    spec,
                    declared_mean: raw.declared_mean,
                })
            }
            other => Err(CliError::Parse(format!(
                "unknown spec kind {other:?} (expected \"builtin\" or \"mrl_piecewise\")"
            ))),
        }
    }

    /// The piecewise MRL, for commands that operate on the MRL itself.
    pub fn mrl_spec(&self) -> Option<&MrlSpec> {
        match self {
            DistSpecFile::MrlPiecewise { spec, .. } => Some(spec),
            DistSpecFile::Builtin { .. } => None,
        }
    }

    pub fn describe(&self) -> String {
        match self {
            DistSpecFile::Builtin { name, params, .. } => {
                if params.is_empty() {
                    format!("builtin {name}")
                } else {
                    let ps: Vec<String> = params
                        .iter()
                        .map(|(k, v)| format!("{k}={}", report::fmt6(*v)))
                        .collect();
                    format!("builtin {name} ({})", ps.join(", "))
                }
            }
            DistSpecFile::MrlPiecewise { spec, .. } => {
                format!("mrl_piecewise ({} segments)", spec.segments().len())
            }
        }
    }

    /// Builds the distribution: catalog lookup for builtins, validation then
    /// inversion for piecewise MRL files, plus the declared-mean cross-check.
    pub fn build(&self) -> Result<LifeDistribution, CliError> {
        let (d, declared) = match self {
            DistSpecFile::Builtin {
                name,
                params,
                declared_mean,
            } => {
                let d = catalog::by_name(name, params)
                    .map_err(|e| CliError::Validation(format!("{e}")))?;
                (d, *declared_mean)
            }
            DistSpecFile::MrlPiecewise {
                spec,
                declared_mean,
            } => {
                let d = from_mrl(spec, crate::ageing::DEFAULT_CLASS_TOL)
                    .map_err(|e| CliError::Validation(format!("{e}")))?;
                (d, *declared_mean)
            }
        };
        if let Some(m) = declared {
            let computed = mean_of(&d)
                .map_err(|e| CliError::Compute(format!("mean computation failed: {e}")))?;
            if (computed - m).abs() > 1e-6 * m.abs().max(1e-12) {
                return Err(CliError::Validation(format!(
                    "declared_mean {} disagrees with computed mean {}",
                    m, computed
                )));
            }
        }
        Ok(d)
    }
}

/// Reads and parses a spec file, returning it with the input digest.
pub fn load_spec_file(path: &Path) -> Result<(DistSpecFile, String), CliError> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let digest = report::sha256_hex(&bytes);
    let text = String::from_utf8(bytes)
        .map_err(|_| CliError::Parse(format!("{} is not UTF-8", path.display())))?;
    Ok((DistSpecFile::parse_str(&text)?, digest))
}
