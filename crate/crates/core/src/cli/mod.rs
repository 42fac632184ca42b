//! Command-line surface.
//!
//! Commands: `classify`, `bounds`, `moments`, `verify-mrl`, `invert-mrl`,
//! `reproduce`, `converge`. Exit codes: 0 ok, 1 check failure, 2 usage or
//! parse error. Every error prints one machine-parsable line to stderr with
//! an `error[<kind>]:` prefix. Output is byte-deterministic for identical
//! inputs.

pub mod report;
pub mod reproduce;
pub mod spec_file;

use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};

use crate::ageing::{
    classify_crossing, classify_mrl_shape, resolve_idmrl, validate_mrl, AgeingClass,
    ClassVerdict, MrlShape, MrlShapeVerdict, DEFAULT_CLASS_TOL, DEFAULT_GRID_N,
};
use crate::bounds::{deficiency, moment_bound_report, nwbue_bound_b_literal};
use crate::convergence::{doubling_indices, run_convergence, SequenceSpec};
use crate::distributions::{mean_of, moment, LifeDistribution};
use report::{fmt6, fmt_sig15, write_csv, Report};
use spec_file::{load_spec_file, DistSpecFile};

/// CLI error with its exit-code class.
#[derive(Debug, Clone, thiserror::Error)]
pub enum CliError {
    #[error("error[usage]: {0}")]
    Usage(String),
    #[error("error[parse]: {0}")]
    Parse(String),
    #[error("error[validate]: {0}")]
    Validation(String),
    #[error("error[check]: {0}")]
    Check(String),
    #[error("error[compute]: {0}")]
    Compute(String),
    #[error("error[io]: {0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Parse(_) | CliError::Validation(_) | CliError::Io(_) => 2,
            CliError::Check(_) | CliError::Compute(_) => 1,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "ageclass",
    version,
    about = "Ageing-class analysis of lifetime distributions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify the ageing class and locate change points
    Classify {
        /// Distribution spec file (TOML)
        spec: PathBuf,
        /// Classification horizon (defaults to survival < 1e-9)
        #[arg(long)]
        horizon: Option<f64>,
        /// Grid resolution
        #[arg(long)]
        grid: Option<usize>,
        /// Sign-classification tolerance
        #[arg(long)]
        tol: Option<f64>,
    },
    /// Compute a moment and verify every applicable bound on it
    Bounds {
        spec: PathBuf,
        /// Moment order r
        #[arg(long)]
        order: f64,
        /// Change point for the NWBUE bounds
        #[arg(long)]
        x0: Option<f64>,
    },
    /// Compute raw moments
    Moments {
        spec: PathBuf,
        /// Comma-separated moment orders
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<f64>,
    },
    /// Check the necessary validity conditions of a piecewise MRL file
    VerifyMrl { spec: PathBuf },
    /// Invert a piecewise MRL into a survival grid written as CSV
    InvertMrl {
        spec: PathBuf,
        /// Output CSV path
        #[arg(long)]
        out: PathBuf,
        /// Number of grid points (default 200)
        #[arg(long)]
        points: Option<usize>,
    },
    /// Re-run the built-in verification checks
    Reproduce {
        /// Emit machine-readable JSON instead of text
        #[arg(long)]
        json: bool,
    },
    /// Convergence demonstration along an NBUE sequence family
    Converge {
        /// Sequence family: weibull-shape or exp-mean
        #[arg(long)]
        family: String,
        /// Largest index (the set is the doublings 1, 2, 4, ... up to n-max)
        #[arg(long = "n-max")]
        n_max: u32,
        /// Comma-separated moment orders
        #[arg(long, value_delimiter = ',', required = true)]
        orders: Vec<f64>,
        /// Optional CSV output path for the per-n rows
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

/// Entry point used by the binary; returns the process exit code.
pub fn run() -> i32 {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return 0;
            }
            eprintln!("error[usage]: {}", first_line(&e.to_string()));
            return 2;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("{e}");
            e.exit_code()
        }
    }
}

fn first_line(s: &str) -> String {
    let line = s.lines().next().unwrap_or("invalid arguments");
    line.strip_prefix("error: ").unwrap_or(line).to_string()
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Classify {
            spec,
            horizon,
            grid,
            tol,
        } => cmd_classify(&spec, horizon, grid, tol),
        Command::Bounds { spec, order, x0 } => cmd_bounds(&spec, order, x0),
        Command::Moments { spec, orders } => cmd_moments(&spec, &orders),
        Command::VerifyMrl { spec } => cmd_verify_mrl(&spec),
        Command::InvertMrl { spec, out, points } => cmd_invert_mrl(&spec, &out, points),
        Command::Reproduce { json } => cmd_reproduce(json),
        Command::Converge {
            family,
            n_max,
            orders,
            out,
        } => cmd_converge(&family, n_max, &orders, out.as_deref()),
    }
}

fn load_distribution(path: &Path) -> Result<(DistSpecFile, LifeDistribution, String), CliError> {
    let (file, digest) = load_spec_file(path)?;
    let d = file.build()?;
    Ok((file, d, digest))
}

fn fmt_opt(v: Option<f64>) -> String {
    v.map(fmt6).unwrap_or_else(|| "none".to_string())
}

fn crossing_list(verdict: &ClassVerdict) -> String {
    if verdict.crossings.is_empty() {
        "none".to_string()
    } else {
        verdict
            .crossings
            .iter()
            .map(|c| fmt6(*c))
            .collect::<Vec<_>>()
            .join(", ")
    }
}

fn summary_line(crossing: &ClassVerdict, shape: &MrlShapeVerdict) -> String {
    let base = match crossing.label {
        AgeingClass::Nwbue => format!("NWBUE, x0 = {}", fmt_opt(crossing.change_point)),
        AgeingClass::Nbwue => format!("NBWUE, x0 = {}", fmt_opt(crossing.change_point)),
        other => other.to_string(),
    };
    match shape.label {
        MrlShape::Idmrl => {
            let mut s = format!(
                "IDMRL (tau0 = {}) and {base}",
                fmt_opt(shape.turning_point)
            );
            if crossing.label != AgeingClass::Nwbue {
                s.push_str(", not NWBUE");
            }
            s
        }
        MrlShape::Dimrl => {
            let mut s = format!(
                "DIMRL (tau0 = {}) and {base}",
                fmt_opt(shape.turning_point)
            );
            if crossing.label != AgeingClass::Nbwue {
                s.push_str(", not NBWUE");
            }
            s
        }
        _ => base,
    }
}

fn cmd_classify(
    path: &Path,
    horizon: Option<f64>,
    grid: Option<usize>,
    tol: Option<f64>,
) -> Result<i32, CliError> {
    let (file, d, digest) = load_distribution(path)?;
    let horizon = horizon.unwrap_or(0.0);
    let grid_n = grid.unwrap_or(DEFAULT_GRID_N);
    let tol = tol.unwrap_or(DEFAULT_CLASS_TOL);

    let crossing = classify_crossing(&d, horizon, grid_n, tol)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let shape = classify_mrl_shape(&d, horizon, grid_n, tol)
        .map_err(|e| CliError::Compute(e.to_string()))?;

    let resolved = if matches!(shape.label, MrlShape::Idmrl | MrlShape::Dimrl) {
        Some(resolve_idmrl(&d, &shape).map_err(|e| CliError::Compute(e.to_string()))?)
    } else {
        None
    };

    let consistency = match &resolved {
        None => "n/a".to_string(),
        Some(r) => {
            let labels_match = r.label == crossing.label;
            let points_match = match (r.change_point, crossing.change_point) {
                (Some(a), Some(b)) => (a - b).abs() <= 1e-6,
                (None, None) => true,
                _ => false,
            };
            if labels_match && points_match {
                "OK".to_string()
            } else {
                "MISMATCH".to_string()
            }
        }
    };

    let mut rep = Report::new(&format!("classify {}", path.display()), Some(&digest));
    rep.kv("input", path.display());
    rep.kv("distribution", file.describe());
    rep.kv("mean", fmt6(d.mean()));
    rep.kv("horizon", fmt6(crossing.horizon));
    rep.kv("crossing-class", crossing.label);
    rep.kv("change-point", fmt_opt(crossing.change_point));
    rep.kv("crossings", crossing_list(&crossing));
    rep.kv("mrl-shape", shape.label);
    rep.kv("turning-point", fmt_opt(shape.turning_point));
    if let Some(r) = &resolved {
        rep.kv("resolved-class", r.label);
        rep.kv("resolved-change-point", fmt_opt(r.change_point));
    }
    rep.kv("consistency", &consistency);
    rep.kv("summary", summary_line(&crossing, &shape));
    print!("{}", rep.render());

    if consistency == "MISMATCH" {
        return Err(CliError::Check(
            "shape-resolved class disagrees with the crossing classification".into(),
        ));
    }
    Ok(0)
}

fn cmd_bounds(path: &Path, order: f64, x0: Option<f64>) -> Result<i32, CliError> {
    let (file, d, digest) = load_distribution(path)?;
    let bounds = moment_bound_report(&d, order, x0)
        .map_err(|e| CliError::Compute(e.to_string()))?;
    let def = deficiency(&d, order).map_err(|e| CliError::Compute(e.to_string()))?;

    let mut rep = Report::new(
        &format!(
            "bounds {} --order {}{}",
            path.display(),
            order,
            x0.map(|v| format!(" --x0 {v}")).unwrap_or_default()
        ),
        Some(&digest),
    );
    rep.kv("input", path.display());
    rep.kv("distribution", file.describe());
    rep.kv("mean", fmt6(d.mean()));
    rep.kv("order", fmt6(order));
    rep.kv("x0", fmt_opt(x0));
    rep.kv("moment", fmt6(bounds.quantity));
    rep.line(format!(
        "{:<12} {:<4} {:>16} {:<10} {:>16}",
        "bound", "dir", "value", "satisfied", "margin"
    ));
    for c in &bounds.checks {
        rep.line(format!(
            "{:<12} {:<4} {:>16} {:<10} {:>16}",
            c.id.to_string(),
            c.direction.to_string(),
            fmt6(c.value),
            if c.satisfied { "yes" } else { "no" },
            fmt6(c.margin)
        ));
    }
    if let Some(x0v) = x0 {
        let ri = order.round();
        if order >= 1.0 && (order - ri).abs() <= 1e-9 {
            let literal = nwbue_bound_b_literal(d.mean(), x0v, ri as u32)
                .map_err(|e| CliError::Compute(e.to_string()))?;
            rep.kv("note", format!("literal-form bound (b) variant = {}", fmt6(literal)));
        }
    }
    rep.kv(&format!("deficiency D({})", fmt6(order)), fmt6(def.value));
    print!("{}", rep.render());
    Ok(0)
}

fn cmd_moments(path: &Path, orders: &[f64]) -> Result<i32, CliError> {
    let (file, d, digest) = load_distribution(path)?;
    let mut rep = Report::new(
        &format!(
            "moments {} --orders {}",
            path.display(),
            orders
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        Some(&digest),
    );
    rep.kv("input", path.display());
    rep.kv("distribution", file.describe());
    rep.kv("mean", fmt6(d.mean()));
    rep.kv(
        "computed-mean",
        fmt6(mean_of(&d).map_err(|e| CliError::Compute(e.to_string()))?),
    );
    rep.line(format!("{:<10} {:>16}", "order", "moment"));
    for &r in orders {
        let mu_r = moment(&d, r).map_err(|e| CliError::Compute(e.to_string()))?;
        rep.line(format!("{:<10} {:>16}", fmt6(r), fmt6(mu_r)));
    }
    print!("{}", rep.render());
    Ok(0)
}

fn cmd_verify_mrl(path: &Path) -> Result<i32, CliError> {
    let (file, digest) = load_spec_file(path)?;
    let spec = file.mrl_spec().ok_or_else(|| {
        CliError::Usage("verify-mrl requires an mrl_piecewise spec file".into())
    })?;
    let report = validate_mrl(spec);

    let mut rep = Report::new(&format!("verify-mrl {}", path.display()), Some(&digest));
    rep.kv("input", path.display());
    rep.kv("segments", spec.segments().len());
    rep.kv("mean", fmt6(spec.mean()));
    rep.kv("valid", if report.is_valid() { "yes" } else { "no" });
    for v in &report.violations {
        rep.line(format!(
            "violation: {} at x = {}: {}",
            v.condition,
            fmt6(v.location),
            v.detail
        ));
    }
    print!("{}", rep.render());

    if report.is_valid() {
        Ok(0)
    } else {
        Err(CliError::Check(format!(
            "MRL fails {} validity condition(s)",
            report.violations.len()
        )))
    }
}

fn cmd_invert_mrl(path: &Path, out: &Path, points: Option<usize>) -> Result<i32, CliError> {
    let (file, digest) = load_spec_file(path)?;
    let spec = file
        .mrl_spec()
        .ok_or_else(|| CliError::Usage("invert-mrl requires an mrl_piecewise spec file".into()))?
        .clone();
    let d = file.build()?;
    let n = points.unwrap_or(200).max(2);

    let end = match d.support_end() {
        Some(s) => s,
        None => crate::ageing::default_horizon(&d),
    };
    let mut rows = Vec::with_capacity(n);
    for i in 0..n {
        let x = end * i as f64 / (n - 1) as f64;
        rows.push(vec![fmt_sig15(x), fmt_sig15(d.survival(x))]);
    }
    write_csv(out, &["x", "survival"], &rows)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", out.display())))?;

    let mut rep = Report::new(
        &format!("invert-mrl {} --out {}", path.display(), out.display()),
        Some(&digest),
    );
    rep.kv("input", path.display());
    rep.kv("segments", spec.segments().len());
    rep.kv("mean", fmt6(d.mean()));
    rep.kv("grid-end", fmt6(end));
    rep.kv("points", n);
    rep.kv("wrote", out.display());
    print!("{}", rep.render());
    Ok(0)
}

fn cmd_reproduce(json: bool) -> Result<i32, CliError> {
    let out = reproduce::output();
    if json {
        print!("{}", reproduce::render_json(&out));
    } else {
        print!("{}", reproduce::render_text(&out));
    }
    if out.all_pass {
        Ok(0)
    } else {
        let failed: Vec<String> = out
            .checks
            .iter()
            .filter(|c| !c.pass)
            .map(|c| format!("{:02}", c.id))
            .collect();
        Err(CliError::Check(format!(
            "reproduce checks failed: {}",
            failed.join(", ")
        )))
    }
}

fn cmd_converge(
    family: &str,
    n_max: u32,
    orders: &[f64],
    out: Option<&Path>,
) -> Result<i32, CliError> {
    if n_max == 0 {
        return Err(CliError::Usage("--n-max must be at least 1".into()));
    }
    let indices = doubling_indices(n_max);
    let spec = match family {
        "weibull-shape" => SequenceSpec::weibull_shape(indices),
        "exp-mean" => SequenceSpec::exponential_mean(indices),
        other => {
            return Err(CliError::Usage(format!(
                "unknown family {other:?} (expected weibull-shape or exp-mean)"
            )))
        }
    }
    .map_err(|e| CliError::Usage(e.to_string()))?;

    let report =
        run_convergence(&spec, orders).map_err(|e| CliError::Compute(e.to_string()))?;

    let order_names: Vec<String> = orders.iter().map(|r| format!("err_r{r}")).collect();
    let mut rep = Report::new(
        &format!(
            "converge --family {family} --n-max {n_max} --orders {}",
            orders
                .iter()
                .map(|r| r.to_string())
                .collect::<Vec<_>>()
                .join(",")
        ),
        None,
    );
    rep.kv("family", family);
    rep.kv("limit-mean", fmt6(report.limit_mean));
    rep.kv("limit-class", report.limit_verdict.label);
    let mut header = vec!["n".to_string(), "mu_n".to_string(), "sup_dist".to_string()];
    header.extend(order_names.iter().cloned());
    rep.line(header.join(" | "));
    let mut csv_rows = Vec::new();
    for row in &report.rows {
        let mut cells = vec![
            row.n.to_string(),
            fmt6(row.mu_n),
            fmt6(row.cdf_sup_distance),
        ];
        let mut csv_cells = vec![
            row.n.to_string(),
            fmt_sig15(row.mu_n),
            fmt_sig15(row.cdf_sup_distance),
        ];
        for (_, err) in &row.moment_errors {
            cells.push(fmt6(*err));
            csv_cells.push(fmt_sig15(*err));
        }
        rep.line(cells.join(" | "));
        csv_rows.push(csv_cells);
    }
    if let Some(path) = out {
        let mut header_refs: Vec<&str> = vec!["n", "mu_n", "cdf_sup_distance"];
        header_refs.extend(order_names.iter().map(|s| s.as_str()));
        write_csv(path, &header_refs, &csv_rows)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        rep.kv("wrote", path.display());
    }
    print!("{}", rep.render());
    Ok(0)
}
