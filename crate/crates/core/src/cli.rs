//! Command-line front end: `versal <command> --input FILE [options]`.
//!
//! Exit codes: 0 success, 1 unreadable input or internal failure, 2 invalid
//! input (twists, `I^2`, JSON schema, Laufer requirements, bad flags),
//! 3 integrability failure, 4 superpotential on a non-Calabi-Yau input,
//! 5 expression parse error. Failures print one JSON line on stderr.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Parser, ValueEnum};
use serde::Serialize;

use crate::critical::{eval_potential, multi_start, CriticalPoint, NewtonOptions, NumericSystem};
use crate::gluing::GluingData;
use crate::laufer::{deformation_equations_laufer, family_charts, FamilyCharts};
use crate::superpotential::{coeff_symmetry_lemma_check, cy_check, integrate_potential, LemmaReport};
use crate::{cech, DeformationResult, Error, GluingInput, Method};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Command {
    /// Validate the input and report its invariants.
    Check,
    /// Print the deformation equations k_1 .. k_{n-1}.
    Equations,
    /// Print the equations and the superpotential W (requires m - n = -2).
    Superpotential,
    /// Print the universal family over the versal space (Laufer curves only).
    Family,
    /// Search for real points of the versal space with Newton's method.
    Critical,
    /// Check the coefficient symmetry of f(x, Σ a_j x^j).
    Lemma,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum MethodChoice {
    Auto,
    Laufer,
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

/// One invocation.
#[derive(Clone, Debug, Parser)]
#[command(name = "versal", version, about = "Versal deformations of rational curves in threefolds")]
pub struct JobConfig {
    #[arg(value_enum)]
    pub command: Command,
    /// JSON file {"m": int, "n": int, "f": str, "g": str, "h": str}.
    #[arg(long)]
    pub input: PathBuf,
    /// Truncation degree for the general method.
    #[arg(long, default_value_t = 6, value_parser = clap::value_parser!(u32).range(1..))]
    pub degree: u32,
    #[arg(long, value_enum, default_value_t = MethodChoice::Auto)]
    pub method: MethodChoice,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Number of Newton starts.
    #[arg(long, default_value_t = 20)]
    pub starts: usize,
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Residual tolerance ‖k‖ for Newton.
    #[arg(long, default_value_t = 1e-10)]
    pub tol: f64,
    /// Radius of the ball the starts are drawn from.
    #[arg(long = "box", default_value_t = 1.0)]
    pub box_radius: f64,
}

/// What the process should emit.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

/// Failure of a job, with its exit code.
#[derive(Clone, Debug, PartialEq)]
pub enum CliError {
    Io(String),
    Usage(String),
    Lib(Error),
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Lib(e)
    }
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Io(_) => 1,
            CliError::Usage(_) => 2,
            CliError::Lib(e) => match e {
                Error::Parse { .. } => 5,
                Error::NotInIdealSquare { .. }
                | Error::InvalidTwist(_)
                | Error::InvalidInput(_)
                | Error::NotLaufer(_) => 2,
                Error::Integrability { .. } => 3,
                Error::NotCalabiYau(_) => 4,
                _ => 1,
            },
        }
    }

    fn kind(&self) -> &'static str {
        match self.code() {
            2 => "validation",
            3 => "integrability",
            4 => "not_calabi_yau",
            5 => "parse",
            _ => match self {
                CliError::Io(_) => "io",
                _ => "internal",
            },
        }
    }

    /// Single-line JSON reason.
    pub fn reason(&self) -> String {
        let message = match self {
            CliError::Io(m) | CliError::Usage(m) => m.clone(),
            CliError::Lib(e) => e.to_string(),
        };
        serde_json::json!({ "error": self.kind(), "message": message }).to_string()
    }
}

/// Parses `args` (including the program name) and runs the job.
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    match JobConfig::try_parse_from(args) {
        Ok(cfg) => run_config(&cfg),
        Err(e) if !e.use_stderr() => Outcome {
            code: 0,
            stdout: e.to_string(),
            stderr: String::new(),
        },
        Err(e) => {
            let text = e.to_string();
            let body = text
                .split("\n\nUsage:")
                .next()
                .and_then(|t| t.split("\n\nFor more information").next())
                .unwrap_or_default();
            let message = body.split_whitespace().collect::<Vec<_>>().join(" ");
            let err = CliError::Usage(message.trim_start_matches("error: ").to_string());
            Outcome {
                code: err.code(),
                stdout: String::new(),
                stderr: err.reason() + "\n",
            }
        }
    }
}

pub fn run_config(cfg: &JobConfig) -> Outcome {
    match execute(cfg) {
        Ok(stdout) => Outcome {
            code: 0,
            stdout,
            stderr: String::new(),
        },
        Err(e) => Outcome {
            code: e.code(),
            stdout: String::new(),
            stderr: e.reason() + "\n",
        },
    }
}

/// Reads and validates the input file.
pub fn load(cfg: &JobConfig) -> Result<GluingData, CliError> {
    let text = std::fs::read_to_string(&cfg.input)
        .map_err(|e| CliError::Io(format!("{}: {e}", cfg.input.display())))?;
    Ok(GluingInput::from_json(&text)?.build()?)
}

/// Runs the job and returns standard output.
pub fn execute(cfg: &JobConfig) -> Result<String, CliError> {
    let d = load(cfg)?;
    match cfg.command {
        Command::Check => Ok(render_check(&d, cfg.format)),
        Command::Equations => {
            let eqs = equations(&d, cfg)?;
            Ok(render(&Report::from_equations(&eqs), cfg.format))
        }
        Command::Superpotential => {
            if !cy_check(&d) {
                return Err(Error::NotCalabiYau(d.m() as i64 - d.n() as i64).into());
            }
            let eqs = equations(&d, cfg)?;
            let w = integrate_potential(&eqs)?;
            let mut report = Report::from_equations(&eqs);
            report.w = Some(w.w.to_string());
            Ok(render(&report, cfg.format))
        }
        Command::Family => {
            if cfg.method == MethodChoice::General {
                return Err(CliError::Usage("family is only available with the laufer method".into()));
            }
            let fam = family_charts(&d)?;
            let eqs = deformation_equations_laufer(&d)?;
            let mut report = Report::from_equations(&eqs);
            report.family = Some(FamilyReport::new(&fam));
            Ok(render(&report, cfg.format))
        }
        Command::Critical => {
            let eqs = equations(&d, cfg)?;
            let sys = NumericSystem::<f64>::new(&eqs)?;
            let opts = NewtonOptions {
                tol: cfg.tol,
                box_radius: cfg.box_radius,
                ..NewtonOptions::default()
            };
            if !(cfg.tol > 0.0 && cfg.box_radius > 0.0) {
                return Err(CliError::Usage("--tol and --box must be positive".into()));
            }
            let points = multi_start(&sys, cfg.starts, cfg.seed, &opts)?;
            let mut report = Report::from_equations(&eqs);
            if eqs.is_square() {
                let w = integrate_potential(&eqs)?;
                report.w = Some(w.w.to_string());
                report.critical_values = Some(
                    points
                        .iter()
                        .map(|p| eval_potential(&w, &p.point))
                        .collect::<crate::Result<_>>()?,
                );
            }
            report.critical_points = Some(points);
            Ok(render(&report, cfg.format))
        }
        Command::Lemma => {
            let lemma = coeff_symmetry_lemma_check(d.f(), d.m() as usize, None)?;
            let failed = !lemma.holds();
            let report = Report {
                lemma: Some(LemmaSummary::new(&lemma)),
                ..Report::header(&d)
            };
            let out = render(&report, cfg.format);
            if failed {
                return Err(CliError::Lib(Error::Integrability {
                    i: lemma.failures[0].0,
                    j: lemma.failures[0].1,
                    difference: format!("coefficient symmetry fails at {:?}", lemma.failures[0]),
                }));
            }
            Ok(out)
        }
    }
}

/// Equations by the requested method; `auto` takes the Laufer path when it applies.
pub fn equations(d: &GluingData, cfg: &JobConfig) -> Result<DeformationResult, CliError> {
    let use_laufer = match cfg.method {
        MethodChoice::Auto => d.is_laufer(),
        MethodChoice::Laufer => true,
        MethodChoice::General => false,
    };
    Ok(if use_laufer {
        deformation_equations_laufer(d)?
    } else {
        cech::deformation_equations_general(d, cfg.degree)?
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
#[serde(untagged)]
enum Degree {
    Bound(u32),
    Exact(&'static str),
}

#[derive(Clone, Debug, Serialize)]
struct FamilyReport {
    y1: String,
    y2: String,
    z1: String,
    z2: String,
}

impl FamilyReport {
    fn new(f: &FamilyCharts) -> Self {
        FamilyReport {
            y1: f.y1.to_string(),
            y2: f.y2.to_string(),
            z1: f.z1.to_string(),
            z2: f.z2.to_string(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct LemmaSummary {
    checked: usize,
    holds: bool,
    failures: Vec<(usize, usize, usize)>,
}

impl LemmaSummary {
    fn new(r: &LemmaReport) -> Self {
        LemmaSummary {
            checked: r.checked,
            holds: r.holds(),
            failures: r.failures.clone(),
        }
    }
}

#[derive(Clone, Debug, Serialize)]
struct Report {
    m: u32,
    n: u32,
    #[serde(skip_serializing_if = "Option::is_none")]
    method: Option<Method>,
    #[serde(skip_serializing_if = "Option::is_none")]
    degree: Option<Degree>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    k0: Option<String>,
    #[serde(rename = "W", skip_serializing_if = "Option::is_none")]
    w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    family: Option<FamilyReport>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_points: Option<Vec<CriticalPoint<f64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    critical_values: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    lemma: Option<LemmaSummary>,
}

impl Report {
    fn header(d: &GluingData) -> Self {
        Report {
            m: d.m(),
            n: d.n(),
            method: None,
            degree: None,
            k: None,
            k0: None,
            w: None,
            family: None,
            critical_points: None,
            critical_values: None,
            lemma: None,
        }
    }

    fn from_equations(eqs: &DeformationResult) -> Self {
        Report {
            m: eqs.m,
            n: eqs.n,
            method: Some(eqs.method),
            degree: Some(match eqs.degree_bound {
                Some(b) => Degree::Bound(b),
                None => Degree::Exact("exact"),
            }),
            k: Some(eqs.equations.iter().map(|k| k.to_string()).collect()),
            k0: Some(eqs.k0.to_string()),
            w: None,
            family: None,
            critical_points: None,
            critical_values: None,
            lemma: None,
        }
    }
}

fn render(r: &Report, format: Format) -> String {
    match format {
        Format::Json => serde_json::to_string(r).expect("report serializes") + "\n",
        Format::Text => render_text(r),
    }
}

fn render_text(r: &Report) -> String {
    let mut out = String::new();
    if let Some(ks) = &r.k {
        for (i, k) in ks.iter().enumerate() {
            let _ = writeln!(out, "k{} = {k}", i + 1);
        }
    }
    if let Some(w) = &r.w {
        let _ = writeln!(out, "W = {w}");
    }
    if let Some(f) = &r.family {
        let _ = writeln!(out, "U0: y1 = {}", f.y1);
        let _ = writeln!(out, "U0: y2 = {}", f.y2);
        let _ = writeln!(out, "U1: z1 = {}", f.z1);
        let _ = writeln!(out, "U1: z2 = {}", f.z2);
    }
    if let Some(points) = &r.critical_points {
        for (idx, p) in points.iter().enumerate() {
            let coords: Vec<String> = p.point.iter().map(|v| format!("{v:.6e}")).collect();
            let _ = write!(
                out,
                "point {idx}: a = [{}] |k| = {:.3e} smin = {:.3e} iterations = {} converged = {} singular = {}",
                coords.join(", "),
                p.gradient_norm,
                p.hessian_min_singular_value,
                p.iterations,
                p.converged,
                p.singular
            );
            if let Some(values) = &r.critical_values {
                let _ = write!(out, " W = {:.6e}", values[idx]);
            }
            out.push('\n');
        }
    }
    if let Some(l) = &r.lemma {
        let _ = writeln!(
            out,
            "lemma: {} ({} triples checked)",
            if l.holds { "holds" } else { "fails" },
            l.checked
        );
    }
    out
}

#[derive(Serialize)]
struct CheckReport {
    m: u32,
    n: u32,
    laufer: bool,
    calabi_yau: bool,
    h0: usize,
    h1: usize,
}

fn render_check(d: &GluingData, format: Format) -> String {
    let r = CheckReport {
        m: d.m(),
        n: d.n(),
        laufer: d.is_laufer(),
        calabi_yau: cy_check(d),
        h0: d.arity(),
        h1: d.h1_dim(),
    };
    match format {
        Format::Json => serde_json::to_string(&r).expect("report serializes") + "\n",
        Format::Text => format!(
            "m = {}\nn = {}\nlaufer = {}\ncalabi_yau = {}\nh0 = {}\nh1 = {}\n",
            r.m, r.n, r.laufer, r.calabi_yau, r.h0, r.h1
        ),
    }
}
